#include "litnet/server.hpp"

#include <httplib.h>

#include <nlohmann/json.hpp>

#include "litnet/error.hpp"
#include "litnet/export.hpp"
#include "litnet/util.hpp"

namespace litnet::server {

using json = nlohmann::json;

namespace {

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownWord:
    case ErrorCode::UnknownPair:
    case ErrorCode::UnknownVerb: return 404;
    case ErrorCode::InvalidCategory:
    case ErrorCode::ParseError:
    case ErrorCode::ConfigError: return 400;
    case ErrorCode::MissingPriorStage: return 409;
    default: return 500;
  }
}

Response error_response(int status, std::string_view code, const std::string& message) {
  return {status, "application/json", json{{"error", code}, {"message", message}}.dump() + "\n"};
}

Response error_response(const Error& e) {
  return error_response(http_status(e.code()), to_string(e.code()), e.what());
}

Response ok(const json& j) { return {200, "application/json", j.dump() + "\n"}; }

std::optional<std::string> param(const Params& q, const std::string& key) {
  auto it = q.find(key);
  if (it == q.end() || it->second.empty()) return std::nullopt;
  return it->second;
}

std::uint64_t parse_uint(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    if (!value.empty() && value[0] == '-') throw std::invalid_argument(value);
    v = std::stoull(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size()) {
    throw Error(ErrorCode::ParseError, key + " must be a non-negative integer, got '" + value + "'");
  }
  return v;
}

const char* kPlaceholder =
    "<!doctype html>\n<html><head><meta charset=\"utf-8\"><title>litnet</title></head>\n"
    "<body><p>The web UI bundle is not installed. The JSON API is under /api/.</p></body></html>\n";

}  // namespace

ApiService::ApiService(pipeline::PipelineConfig config, std::optional<fs::path> webui_dir)
    : pipeline_(std::move(config)),
      webui_dir_(std::move(webui_dir)),
      verbs_(std::make_unique<verblex::VerbStore>(pipeline_.config().resolved_verbs_file())) {
  snapshot_ = load_snapshot();
}

std::shared_ptr<const ApiService::Snapshot> ApiService::current() const {
  std::lock_guard g(snap_mu_);
  return snapshot_;
}

std::shared_ptr<const ApiService::Snapshot> ApiService::load_snapshot() const {
  auto s = std::make_shared<Snapshot>();
  const auto m = pipeline::RunManifest::load(pipeline_.config().corpus_dir);
  if (!m.stages.contains("graph") || !fs::exists(pipeline_.relations_path())) return s;
  s->graph = pipeline::build_graph_from_artifacts(pipeline_);
  s->relations = relex::load_relations(pipeline_.relations_path());
  for (const auto& rec : corpus::CorpusStore(pipeline_.config().corpus_dir).load()) {
    s->articles[rec.doc_id] = {rec.title, rec.year};
  }
  return s;
}

Response ApiService::index() const {
  if (webui_dir_ && fs::exists(*webui_dir_ / "index.html")) {
    return {200, "text/html; charset=utf-8", read_file(*webui_dir_ / "index.html")};
  }
  return {200, "text/html; charset=utf-8", kPlaceholder};
}

Response ApiService::status() const {
  const auto s = current();
  json j = {{"graph_built", s->graph.has_value()}, {"dirty", dirty_.load()}, {"rebuilding", rebuilding_.load()}};
  if (s->graph) {
    j["n_articles"] = s->graph->n_articles;
    j["n_nodes"] = s->graph->words.size();
    j["n_edges"] = s->graph->edges.size();
  }
  return ok(j);
}

Response ApiService::graph(const Params& query) const {
  const auto s = current();
  if (!s->graph) return error_response(409, "GraphNotBuilt", "run the graph stage first");
  try {
    findnet::FilterSpec spec;
    if (auto v = param(query, "ego_in")) spec.ego_in = to_lower(*v);
    if (auto v = param(query, "ego_out")) spec.ego_out = to_lower(*v);
    if (auto v = param(query, "targets")) {
      std::vector<std::string> words;
      for (const auto& w : split(*v, ',')) {
        if (!trim(w).empty()) words.push_back(to_lower(trim(w)));
      }
      spec.targets_any = words;
    }
    if (auto v = param(query, "clusters")) spec.top_clusters = parse_uint("clusters", *v);
    if (auto v = param(query, "sample_n")) {
      const auto n = parse_uint("sample_n", *v);
      std::uint64_t seed = 0;
      if (auto sv = param(query, "sample_seed")) seed = parse_uint("sample_seed", *sv);
      else seed = pipeline_.config().require_sample_seed();
      spec.article_sample = std::make_pair(static_cast<std::size_t>(n), seed);
    }
    if (spec.is_identity()) return {200, "application/json", findnet::export_json(*s->graph)};
    const auto g = findnet::filter_graph(*s->graph, spec, pipeline_.build_options());
    return {200, "application/json", findnet::export_json(g)};
  } catch (const Error& e) {
    return error_response(e);
  }
}

Response ApiService::provenance(const Params& query) const {
  const auto s = current();
  if (!s->graph) return error_response(409, "GraphNotBuilt", "run the graph stage first");
  const auto source = param(query, "source");
  const auto target = param(query, "target");
  if (!source || !target) return error_response(400, "ParseError", "source and target are required");
  json entries = json::array();
  for (const auto& t : s->relations) {
    if (t.source_label != *source || t.target_label != *target) continue;
    auto it = s->articles.find(t.doc_id);
    entries.push_back({{"doc_id", t.doc_id},
                       {"title", it == s->articles.end() ? "" : it->second.first},
                       {"year", it == s->articles.end() ? 0 : it->second.second},
                       {"sentence", t.sentence_text},
                       {"section", textprep::to_string(t.section_tag)},
                       {"sent_index", t.sent_index},
                       {"verb", t.verb_lemma},
                       {"sign", verblex::to_string(t.sign)}});
  }
  if (entries.empty()) {
    return error_response(404, "UnknownPair", "no relation " + *source + " -> " + *target);
  }
  return ok({{"source", *source}, {"target", *target}, {"entries", entries}});
}

Response ApiService::pending_verbs() const {
  try {
    const auto freq = pipeline::load_frequencies(pipeline_.frequencies_path());
    const auto dict = verbs_->snapshot();
    json out = json::array();
    for (const auto& [lemma, n] : freq) {
      if (dict.category(lemma) == verblex::Category::unclassified) out.push_back({{"lemma", lemma}, {"frequency", n}});
    }
    return ok({{"pending", out}});
  } catch (const Error& e) {
    return error_response(e);
  }
}

Response ApiService::verb_sample(const std::string& lemma, const Params& query) const {
  try {
    std::size_t n = 10;
    if (auto v = param(query, "n")) n = parse_uint("n", *v);
    std::uint64_t seed = 0;
    if (auto v = param(query, "seed")) seed = parse_uint("seed", *v);
    else seed = pipeline_.config().require_sample_seed();
    const auto sentences = pipeline::load_sentences(pipeline_.sentences_path());
    json out = json::array();
    for (const auto& s : verblex::sample_sentences(lemma, sentences, n, seed)) {
      json spans = json::array();
      for (const auto& t : s.tokens) {
        if (t.upos == nlp::Upos::VERB && t.lemma == lemma) spans.push_back({t.start, t.end});
      }
      out.push_back({{"doc_id", s.doc_id},
                     {"section", textprep::to_string(s.section_tag)},
                     {"sent_index", s.sent_index},
                     {"text", s.text},
                     {"verb_spans", spans}});
    }
    return ok({{"lemma", lemma}, {"category", verblex::to_string(verbs_->snapshot().category(lemma))},
               {"sentences", out}});
  } catch (const Error& e) {
    return error_response(e);
  }
}

Response ApiService::classify_verb(const std::string& lemma, const std::string& body) {
  try {
    json j;
    try {
      j = json::parse(body);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::ParseError, std::string("request body: ") + e.what());
    }
    if (!j.is_object() || !j.contains("category") || !j["category"].is_string()) {
      throw Error(ErrorCode::InvalidCategory, "body must be {\"category\": <string>}");
    }
    const auto category = verblex::category_from_string(j["category"].get<std::string>());
    const auto entry = verbs_->classify(lemma, category, j.value("annotator", std::string("webui")),
                                        j.value("note", std::string()));
    dirty_ = true;
    return ok({{"lemma", entry.lemma},
               {"category", verblex::to_string(entry.category)},
               {"annotator", entry.annotator},
               {"timestamp", entry.timestamp},
               {"dirty", true}});
  } catch (const Error& e) {
    return error_response(e);
  }
}

Response ApiService::rebuild() {
  if (rebuilding_.exchange(true)) return error_response(409, "RebuildInProgress", "a rebuild is already running");
  struct Reset {
    std::atomic<bool>& flag;
    ~Reset() { flag = false; }
  } reset{rebuilding_};
  try {
    pipeline_.run(pipeline::Stage::extract);
    pipeline_.run(pipeline::Stage::graph);
    auto fresh = load_snapshot();
    if (rebuild_hook_) rebuild_hook_();

    const auto old = current();
    std::size_t added = 0, removed = 0, changed = 0;
    if (fresh->graph) {
      for (const auto& e : fresh->graph->edges) {
        const auto* prev = old->graph ? old->graph->find_edge(e.source, e.target) : nullptr;
        if (!prev) ++added;
        else if (!(*prev == e)) ++changed;
      }
    }
    if (old->graph) {
      for (const auto& e : old->graph->edges) {
        if (!fresh->graph || !fresh->graph->find_edge(e.source, e.target)) ++removed;
      }
    }
    {
      std::lock_guard g(snap_mu_);
      snapshot_ = fresh;
    }
    dirty_ = false;
    return ok({{"edges_added", added},
               {"edges_removed", removed},
               {"edges_changed", changed},
               {"n_edges", fresh->graph ? fresh->graph->edges.size() : 0},
               {"n_nodes", fresh->graph ? fresh->graph->words.size() : 0}});
  } catch (const Error& e) {
    return error_response(e);
  }
}

// ---------------------------------------------------------------------------

struct HttpServer::Impl {
  ApiService& api;
  httplib::Server http;
  explicit Impl(ApiService& a) : api(a) {}
};

namespace {

Params to_params(const httplib::Request& req) {
  Params p;
  for (const auto& [k, v] : req.params) p.emplace(k, v);
  return p;
}

void send(httplib::Response& res, const Response& r) {
  res.status = r.status;
  res.set_content(r.body, r.content_type);
}

}  // namespace

HttpServer::HttpServer(ApiService& api) : impl_(std::make_unique<Impl>(api)) {
  auto& http = impl_->http;
  auto& a = impl_->api;
  http.Get("/", [&a](const httplib::Request&, httplib::Response& res) { send(res, a.index()); });
  http.Get("/api/status", [&a](const httplib::Request&, httplib::Response& res) { send(res, a.status()); });
  http.Get("/api/graph",
           [&a](const httplib::Request& req, httplib::Response& res) { send(res, a.graph(to_params(req))); });
  http.Get("/api/provenance",
           [&a](const httplib::Request& req, httplib::Response& res) { send(res, a.provenance(to_params(req))); });
  http.Get("/api/verbs/pending", [&a](const httplib::Request&, httplib::Response& res) { send(res, a.pending_verbs()); });
  http.Get(R"(/api/verbs/([^/]+)/sample)", [&a](const httplib::Request& req, httplib::Response& res) {
    send(res, a.verb_sample(req.matches[1], to_params(req)));
  });
  http.Post("/api/rebuild", [&a](const httplib::Request&, httplib::Response& res) { send(res, a.rebuild()); });
  http.Post(R"(/api/verbs/([^/]+))", [&a](const httplib::Request& req, httplib::Response& res) {
    send(res, a.classify_verb(req.matches[1], req.body));
  });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->http.bind_to_any_port(host);
  return impl_->http.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::listen_after_bind() { return impl_->http.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_) impl_->http.stop();
}

}  // namespace litnet::server
