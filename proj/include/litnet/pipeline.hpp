#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "litnet/corpus.hpp"
#include "litnet/findnet.hpp"
#include "litnet/nlp.hpp"
#include "litnet/relex.hpp"
#include "litnet/verblex.hpp"

namespace litnet::pipeline {

namespace fs = std::filesystem;

inline constexpr std::string_view kToolVersion = "litnet 0.1.0";

struct TaggerConfig {
  std::string kind = "builtin";  // builtin | external
  std::string command;
};

struct RenderConfig {
  std::string mode = "cluster";  // cluster | sign_nodes
  std::optional<std::string> ego;
  std::size_t article_sample = 0;  // 0 = all articles
  std::size_t top_clusters = 0;    // 0 = all clusters
};

/// Every path is absolute after loading; relative paths in a config file are
/// resolved against the file's directory.
struct PipelineConfig {
  fs::path corpus_dir;
  std::optional<fs::path> metadata_file;
  corpus::ColumnMap column_map;
  std::vector<std::string> keywords;
  std::set<corpus::KeywordField> keyword_fields{corpus::KeywordField::title, corpus::KeywordField::abstract};
  std::optional<fs::path> cleaning_rules_file;
  std::optional<fs::path> heading_lexicon_file;
  TaggerConfig tagger;
  fs::path verbs_file;  // empty = <corpus_dir>/verbs.tsv
  verblex::CueLexicon cues;
  relex::DependFallback depend_fallback = relex::DependFallback::neutral;
  relex::PhraseRule phrase_rule;
  bool negation = false;
  std::optional<fs::path> aliases_file;
  int rings = 4;
  std::optional<std::uint64_t> sample_seed;
  std::optional<std::uint64_t> cluster_seed;
  findnet::SignBasis sign_basis = findnet::SignBasis::eq3;
  unsigned threads = 0;
  RenderConfig render;

  /// Throws Error(ConfigError) on unknown keys, bad types or bad values.
  static PipelineConfig from_json(const nlohmann::json& j, const fs::path& base_dir);
  static PipelineConfig load(const fs::path& path);
  nlohmann::json to_json() const;

  fs::path resolved_verbs_file() const;
  std::uint64_t require_sample_seed() const;
  std::uint64_t require_cluster_seed() const;
  /// Seeds present, referenced files exist, parameters in range.
  void validate() const;
};

enum class Stage { ingest, normalize, sectionize, tagsents, harvest, extract, graph, render };
std::string_view to_string(Stage s);
std::optional<Stage> stage_from_string(std::string_view s);
const std::vector<Stage>& all_stages();

struct StageResult {
  Stage stage = Stage::ingest;
  bool skipped = false;
  std::vector<std::string> failures;  // "<doc_id>: <reason>"
  std::vector<std::string> outputs;
};

/// manifest.json in the corpus directory.
struct RunManifest {
  struct Entry {
    std::string input_digest;
    std::map<std::string, std::string> output_digests;  // file name -> sha256
    std::string timestamp;
  };
  std::string tool_version{kToolVersion};
  std::string config_digest;
  std::map<std::string, Entry> stages;

  static RunManifest load(const fs::path& corpus_dir);
  void save(const fs::path& corpus_dir) const;
};

/// Exclusive per-corpus lock held for the lifetime of the object. A lock left
/// by a dead process is taken over.
class CorpusLock {
 public:
  explicit CorpusLock(const fs::path& corpus_dir);
  ~CorpusLock();
  CorpusLock(const CorpusLock&) = delete;
  CorpusLock& operator=(const CorpusLock&) = delete;

 private:
  fs::path path_;
};

class Pipeline {
 public:
  explicit Pipeline(PipelineConfig config);

  /// Runs one stage, or skips it when its inputs are unchanged and its
  /// outputs exist. Throws Error(MissingPriorStage) when an upstream stage has
  /// not completed.
  StageResult run(Stage stage, bool force = false);
  std::vector<StageResult> run_all(bool force = false);

  const PipelineConfig& config() const { return config_; }

  // Artifact paths.
  fs::path corpus_path() const { return config_.corpus_dir / "corpus.jsonl"; }
  fs::path sentences_path() const { return config_.corpus_dir / "sentences.jsonl"; }
  fs::path frequencies_path() const { return config_.corpus_dir / "verb_frequencies.tsv"; }
  fs::path relations_path() const { return config_.corpus_dir / "relations.jsonl"; }
  fs::path graph_json_path() const { return config_.corpus_dir / "graph.json"; }
  fs::path graphml_path() const { return config_.corpus_dir / "graph.graphml"; }
  fs::path dot_path() const { return config_.corpus_dir / "graph.dot"; }
  fs::path wordcloud_path() const { return config_.corpus_dir / "wordcloud.tsv"; }
  fs::path svg_path() const { return config_.corpus_dir / "graph.svg"; }

  relex::RelexOptions relex_options() const;
  findnet::BuildOptions build_options() const;

 private:
  std::string input_digest(Stage stage) const;
  std::vector<fs::path> outputs_of(Stage stage) const;
  void require_upstream(Stage stage, const RunManifest& m) const;

  StageResult do_ingest();
  StageResult do_normalize();
  StageResult do_sectionize();
  StageResult do_tagsents();
  StageResult do_harvest();
  StageResult do_extract();
  StageResult do_graph();
  StageResult do_render();

  PipelineConfig config_;
};

std::vector<nlp::SentenceRecord> load_sentences(const fs::path& path);
void save_sentences(const fs::path& path, const std::vector<nlp::SentenceRecord>& sentences);
std::vector<verblex::Frequency> load_frequencies(const fs::path& path);

/// Builds the graph the `graph` stage would write from the current artifacts.
findnet::FindingsGraph build_graph_from_artifacts(const Pipeline& p);

struct AnnotateSummary {
  std::size_t classified = 0;
  std::size_t skipped = 0;
  bool completed = false;  // no unclassified verb left
};

/// Terminal loop over unclassified verbs by descending frequency. Each verb
/// shows up to `n` seeded sample sentences with the verb marked, then reads
/// one of p, n, u, d, x, skip, quit. Every classification is persisted before
/// the next prompt.
AnnotateSummary annotate_loop(verblex::VerbStore& store, const std::vector<verblex::Frequency>& frequencies,
                              const std::vector<nlp::SentenceRecord>& sentences, std::uint64_t seed, std::istream& in,
                              std::ostream& out, const std::string& annotator = "cli", std::size_t n = 10);

}  // namespace litnet::pipeline
