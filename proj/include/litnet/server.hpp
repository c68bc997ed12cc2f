#pragma once

#include <atomic>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "litnet/pipeline.hpp"

namespace litnet::server {

namespace fs = std::filesystem;

struct Response {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

using Params = std::map<std::string, std::string>;

/// The HTTP API without the transport. Reads take a snapshot pointer and never
/// block on a rebuild; a rebuild builds aside and swaps on success.
class ApiService {
 public:
  explicit ApiService(pipeline::PipelineConfig config, std::optional<fs::path> webui_dir = std::nullopt);

  Response index() const;
  Response status() const;
  /// Query keys: ego_in, ego_out, targets (comma separated), clusters,
  /// sample_n, sample_seed.
  Response graph(const Params& query) const;
  /// Query keys: source, target.
  Response provenance(const Params& query) const;
  Response pending_verbs() const;
  /// Query keys: n (default 10), seed (default: the configured sample seed).
  Response verb_sample(const std::string& lemma, const Params& query) const;
  /// Body: {"category": "..."}.
  Response classify_verb(const std::string& lemma, const std::string& body);
  Response rebuild();

  bool dirty() const { return dirty_; }
  /// Called inside rebuild() before the new snapshot is swapped in.
  void set_rebuild_hook(std::function<void()> hook) { rebuild_hook_ = std::move(hook); }

 private:
  struct Snapshot {
    std::optional<findnet::FindingsGraph> graph;
    std::vector<relex::RelationTriple> relations;
    std::map<std::string, std::pair<std::string, int>> articles;  // doc_id -> (title, year)
  };

  std::shared_ptr<const Snapshot> current() const;
  std::shared_ptr<const Snapshot> load_snapshot() const;

  pipeline::Pipeline pipeline_;
  std::optional<fs::path> webui_dir_;
  std::unique_ptr<verblex::VerbStore> verbs_;

  mutable std::mutex snap_mu_;
  std::shared_ptr<const Snapshot> snapshot_;

  std::atomic<bool> dirty_{false};
  std::atomic<bool> rebuilding_{false};
  std::function<void()> rebuild_hook_;
};

/// httplib binding for ApiService. Binds 127.0.0.1 unless told otherwise.
class HttpServer {
 public:
  explicit HttpServer(ApiService& api);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Returns the bound port, or -1. Port 0 picks a free port.
  int bind(const std::string& host = "127.0.0.1", int port = 0);
  /// Blocks until stop().
  bool listen_after_bind();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace litnet::server
