#pragma once

#include <filesystem>

#include "litnet/pipeline.hpp"
#include "planted.hpp"

namespace litnet::testing {

inline pipeline::PipelineConfig config_for(const std::filesystem::path& corpus_dir) {
  pipeline::PipelineConfig c;
  c.corpus_dir = corpus_dir;
  c.sample_seed = 7;
  c.cluster_seed = 3;
  c.threads = 2;
  return c;
}

}  // namespace litnet::testing
