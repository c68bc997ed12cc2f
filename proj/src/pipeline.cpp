#include "litnet/pipeline.hpp"

#include <fcntl.h>
#include <signal.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "litnet/error.hpp"
#include "litnet/export.hpp"
#include "litnet/textprep.hpp"
#include "litnet/util.hpp"

namespace litnet::pipeline {

using json = nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorCode::ConfigError, msg); }

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) config_error(where + " must be an object");
  for (const auto& [k, v] : j.items()) {
    if (!allowed.contains(k)) config_error("unknown key '" + k + "' in " + where);
  }
}

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return fs::absolute(path.is_absolute() ? path : base / path).lexically_normal();
}

std::set<nlp::Upos> upos_set(const json& j, const std::string& where) {
  std::set<nlp::Upos> out;
  for (const auto& v : j) {
    auto u = nlp::upos_from_string(v.get<std::string>());
    if (!u) config_error("unknown POS '" + v.get<std::string>() + "' in " + where);
    out.insert(*u);
  }
  return out;
}

json upos_json(const std::set<nlp::Upos>& s) {
  json a = json::array();
  for (auto u : s) a.push_back(std::string(nlp::to_string(u)));
  return a;
}

std::string file_digest_or(const std::optional<fs::path>& p, std::string_view fallback) {
  if (!p) return std::string(fallback);
  if (!fs::exists(*p)) return "missing";
  return sha256_file(*p);
}

std::size_t stage_pos(Stage s) { return static_cast<std::size_t>(s); }

}  // namespace

// ---------------------------------------------------------------------------
// Config

PipelineConfig PipelineConfig::from_json(const json& j, const fs::path& base_dir) {
  static const std::set<std::string> keys = {
      "corpus_dir",  "metadata_file", "column_map", "keywords",    "keyword_fields", "cleaning_rules_file",
      "heading_lexicon_file", "tagger", "verbs_file", "cues",       "depend_fallback", "phrase_rule",
      "negation",    "aliases_file",  "rings",      "seeds",       "sign_basis",     "threads",
      "render"};
  reject_unknown_keys(j, keys, "config");
  PipelineConfig c;
  try {
    if (j.contains("corpus_dir")) c.corpus_dir = resolve(base_dir, j["corpus_dir"].get<std::string>());
    if (j.contains("metadata_file") && !j["metadata_file"].is_null())
      c.metadata_file = resolve(base_dir, j["metadata_file"].get<std::string>());
    if (j.contains("column_map")) {
      const auto& m = j["column_map"];
      reject_unknown_keys(m, {"id", "title", "abstract", "year", "areas"}, "column_map");
      c.column_map.id = m.value("id", c.column_map.id);
      c.column_map.title = m.value("title", c.column_map.title);
      c.column_map.abstract = m.value("abstract", c.column_map.abstract);
      c.column_map.year = m.value("year", c.column_map.year);
      c.column_map.areas = m.value("areas", c.column_map.areas);
    }
    if (j.contains("keywords")) c.keywords = j["keywords"].get<std::vector<std::string>>();
    if (j.contains("keyword_fields")) {
      c.keyword_fields.clear();
      for (const auto& f : j["keyword_fields"]) {
        const auto s = f.get<std::string>();
        if (s == "title") c.keyword_fields.insert(corpus::KeywordField::title);
        else if (s == "abstract") c.keyword_fields.insert(corpus::KeywordField::abstract);
        else config_error("keyword_fields accepts title and abstract, got '" + s + "'");
      }
    }
    if (j.contains("cleaning_rules_file") && !j["cleaning_rules_file"].is_null())
      c.cleaning_rules_file = resolve(base_dir, j["cleaning_rules_file"].get<std::string>());
    if (j.contains("heading_lexicon_file") && !j["heading_lexicon_file"].is_null())
      c.heading_lexicon_file = resolve(base_dir, j["heading_lexicon_file"].get<std::string>());
    if (j.contains("tagger")) {
      const auto& t = j["tagger"];
      reject_unknown_keys(t, {"kind", "command"}, "tagger");
      c.tagger.kind = t.value("kind", c.tagger.kind);
      c.tagger.command = t.value("command", c.tagger.command);
    }
    if (j.contains("verbs_file")) c.verbs_file = resolve(base_dir, j["verbs_file"].get<std::string>());
    if (j.contains("cues")) {
      const auto& q = j["cues"];
      reject_unknown_keys(q, {"positive", "negative", "window", "check_preceding"}, "cues");
      if (q.contains("positive")) {
        c.cues.positive_cues.clear();
        for (const auto& v : q["positive"]) c.cues.positive_cues.insert(to_lower(v.get<std::string>()));
      }
      if (q.contains("negative")) {
        c.cues.negative_cues.clear();
        for (const auto& v : q["negative"]) c.cues.negative_cues.insert(to_lower(v.get<std::string>()));
      }
      const auto window = q.value("window", static_cast<std::int64_t>(c.cues.window));
      if (window < 1) config_error("cues.window must be >= 1");
      c.cues.window = static_cast<std::size_t>(window);
      c.cues.check_preceding = q.value("check_preceding", c.cues.check_preceding);
    }
    if (j.contains("depend_fallback")) {
      const auto s = j["depend_fallback"].get<std::string>();
      if (s == "neutral") c.depend_fallback = relex::DependFallback::neutral;
      else if (s == "drop") c.depend_fallback = relex::DependFallback::drop;
      else config_error("depend_fallback must be neutral or drop, got '" + s + "'");
    }
    if (j.contains("phrase_rule")) {
      const auto& r = j["phrase_rule"];
      reject_unknown_keys(r, {"content_pos", "skip_pos", "gap", "max_phrase_len", "skip_lemmas"}, "phrase_rule");
      if (r.contains("content_pos")) c.phrase_rule.content_pos = upos_set(r["content_pos"], "phrase_rule.content_pos");
      if (r.contains("skip_pos")) c.phrase_rule.skip_pos = upos_set(r["skip_pos"], "phrase_rule.skip_pos");
      const auto gap = r.value("gap", static_cast<std::int64_t>(c.phrase_rule.gap));
      const auto len = r.value("max_phrase_len", static_cast<std::int64_t>(c.phrase_rule.max_phrase_len));
      if (gap < 0) config_error("phrase_rule.gap must be >= 0");
      if (len < 1) config_error("phrase_rule.max_phrase_len must be >= 1");
      c.phrase_rule.gap = static_cast<std::size_t>(gap);
      c.phrase_rule.max_phrase_len = static_cast<std::size_t>(len);
      if (r.contains("skip_lemmas")) c.phrase_rule.skip_lemmas = r["skip_lemmas"].get<std::set<std::string>>();
    }
    c.negation = j.value("negation", c.negation);
    if (j.contains("aliases_file") && !j["aliases_file"].is_null())
      c.aliases_file = resolve(base_dir, j["aliases_file"].get<std::string>());
    c.rings = j.value("rings", c.rings);
    if (j.contains("seeds")) {
      const auto& s = j["seeds"];
      reject_unknown_keys(s, {"sample", "cluster"}, "seeds");
      if (s.contains("sample")) c.sample_seed = s["sample"].get<std::uint64_t>();
      if (s.contains("cluster")) c.cluster_seed = s["cluster"].get<std::uint64_t>();
    }
    if (j.contains("sign_basis")) c.sign_basis = findnet::sign_basis_from_string(j["sign_basis"].get<std::string>());
    c.threads = j.value("threads", c.threads);
    if (j.contains("render")) {
      const auto& r = j["render"];
      reject_unknown_keys(r, {"mode", "ego", "article_sample", "top_clusters"}, "render");
      c.render.mode = r.value("mode", c.render.mode);
      if (r.contains("ego") && !r["ego"].is_null()) c.render.ego = r["ego"].get<std::string>();
      c.render.article_sample = r.value("article_sample", c.render.article_sample);
      c.render.top_clusters = r.value("top_clusters", c.render.top_clusters);
    }
  } catch (const json::exception& e) {
    config_error(std::string("bad config value: ") + e.what());
  }
  return c;
}

PipelineConfig PipelineConfig::load(const fs::path& path) {
  if (!fs::exists(path)) config_error("config file " + path.string() + " not found");
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    config_error(path.string() + ": " + e.what());
  }
  return from_json(j, fs::absolute(path).parent_path());
}

json PipelineConfig::to_json() const {
  json j;
  j["corpus_dir"] = corpus_dir.string();
  j["metadata_file"] = metadata_file ? json(metadata_file->string()) : json(nullptr);
  j["column_map"] = {{"id", column_map.id},
                     {"title", column_map.title},
                     {"abstract", column_map.abstract},
                     {"year", column_map.year},
                     {"areas", column_map.areas}};
  j["keywords"] = keywords;
  json fields = json::array();
  if (keyword_fields.contains(corpus::KeywordField::title)) fields.push_back("title");
  if (keyword_fields.contains(corpus::KeywordField::abstract)) fields.push_back("abstract");
  j["keyword_fields"] = fields;
  j["cleaning_rules_file"] = cleaning_rules_file ? json(cleaning_rules_file->string()) : json(nullptr);
  j["heading_lexicon_file"] = heading_lexicon_file ? json(heading_lexicon_file->string()) : json(nullptr);
  j["tagger"] = {{"kind", tagger.kind}, {"command", tagger.command}};
  j["verbs_file"] = resolved_verbs_file().string();
  j["cues"] = {{"positive", cues.positive_cues},
               {"negative", cues.negative_cues},
               {"window", cues.window},
               {"check_preceding", cues.check_preceding}};
  j["depend_fallback"] = depend_fallback == relex::DependFallback::neutral ? "neutral" : "drop";
  j["phrase_rule"] = {{"content_pos", upos_json(phrase_rule.content_pos)},
                      {"skip_pos", upos_json(phrase_rule.skip_pos)},
                      {"gap", phrase_rule.gap},
                      {"max_phrase_len", phrase_rule.max_phrase_len},
                      {"skip_lemmas", phrase_rule.skip_lemmas}};
  j["negation"] = negation;
  j["aliases_file"] = aliases_file ? json(aliases_file->string()) : json(nullptr);
  j["rings"] = rings;
  json seeds = json::object();
  if (sample_seed) seeds["sample"] = *sample_seed;
  if (cluster_seed) seeds["cluster"] = *cluster_seed;
  j["seeds"] = seeds;
  j["sign_basis"] = findnet::to_string(sign_basis);
  j["threads"] = threads;
  j["render"] = {{"mode", render.mode},
                 {"ego", render.ego ? json(*render.ego) : json(nullptr)},
                 {"article_sample", render.article_sample},
                 {"top_clusters", render.top_clusters}};
  return j;
}

fs::path PipelineConfig::resolved_verbs_file() const {
  return verbs_file.empty() ? corpus_dir / "verbs.tsv" : verbs_file;
}

std::uint64_t PipelineConfig::require_sample_seed() const {
  if (!sample_seed) config_error("seeds.sample is required (config or --seed-sample)");
  return *sample_seed;
}

std::uint64_t PipelineConfig::require_cluster_seed() const {
  if (!cluster_seed) config_error("seeds.cluster is required (config or --seed-cluster)");
  return *cluster_seed;
}

void PipelineConfig::validate() const {
  if (corpus_dir.empty()) config_error("corpus_dir is required (config or --corpus)");
  if (!fs::is_directory(corpus_dir)) config_error("corpus_dir " + corpus_dir.string() + " is not a directory");
  require_sample_seed();
  require_cluster_seed();
  for (const auto* p : {&metadata_file, &cleaning_rules_file, &heading_lexicon_file, &aliases_file}) {
    if (*p && !fs::exists(**p)) config_error("file " + (*p)->string() + " not found");
  }
  if (tagger.kind != "builtin" && tagger.kind != "external") config_error("tagger.kind must be builtin or external");
  if (tagger.kind == "external" && tagger.command.empty()) config_error("tagger.command is required for external");
  if (rings < 1) config_error("rings must be >= 1");
  cues.validate();
  phrase_rule.validate();
  if (render.mode != "cluster" && render.mode != "sign_nodes") config_error("render.mode must be cluster or sign_nodes");
}

// ---------------------------------------------------------------------------
// Stages and manifest

std::string_view to_string(Stage s) {
  static constexpr std::string_view names[] = {"ingest",   "normalize", "sectionize", "tagsents",
                                               "harvest",  "extract",   "graph",      "render"};
  return names[stage_pos(s)];
}

std::optional<Stage> stage_from_string(std::string_view s) {
  for (Stage st : all_stages()) {
    if (to_string(st) == s) return st;
  }
  return std::nullopt;
}

const std::vector<Stage>& all_stages() {
  static const std::vector<Stage> v = {Stage::ingest,  Stage::normalize, Stage::sectionize, Stage::tagsents,
                                       Stage::harvest, Stage::extract,   Stage::graph,      Stage::render};
  return v;
}

RunManifest RunManifest::load(const fs::path& corpus_dir) {
  RunManifest m;
  const fs::path p = corpus_dir / "manifest.json";
  if (!fs::exists(p)) return m;
  try {
    const json j = json::parse(read_file(p));
    m.tool_version = j.value("tool_version", m.tool_version);
    m.config_digest = j.value("config_digest", "");
    for (const auto& [name, e] : j.at("stages").items()) {
      Entry en;
      en.input_digest = e.at("input_digest").get<std::string>();
      en.output_digests = e.at("output_digests").get<std::map<std::string, std::string>>();
      en.timestamp = e.value("timestamp", "");
      m.stages[name] = std::move(en);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, p.string() + ": " + e.what());
  }
  return m;
}

void RunManifest::save(const fs::path& corpus_dir) const {
  json stages_j = json::object();
  for (const auto& [name, e] : stages) {
    stages_j[name] = {{"input_digest", e.input_digest}, {"output_digests", e.output_digests}, {"timestamp", e.timestamp}};
  }
  json j = {{"tool_version", tool_version}, {"config_digest", config_digest}, {"stages", stages_j}};
  write_file_atomic(corpus_dir / "manifest.json", j.dump(2) + "\n");
}

CorpusLock::CorpusLock(const fs::path& corpus_dir) : path_(corpus_dir / ".litnet.lock") {
  for (int attempt = 0; attempt < 2; ++attempt) {
    const int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
    if (fd >= 0) {
      const std::string pid = std::to_string(::getpid()) + "\n";
      (void)!::write(fd, pid.data(), pid.size());
      ::close(fd);
      return;
    }
    if (errno != EEXIST) throw Error(ErrorCode::IoError, "cannot create " + path_.string());
    // Take over a lock whose owner is gone.
    long owner = 0;
    {
      std::ifstream in(path_);
      in >> owner;
    }
    if (owner > 0 && (::kill(static_cast<pid_t>(owner), 0) == 0 || errno == EPERM)) break;
    std::error_code ec;
    fs::remove(path_, ec);
  }
  throw Error(ErrorCode::IoError, "corpus is locked by another run (" + path_.string() + ")");
}

CorpusLock::~CorpusLock() {
  std::error_code ec;
  fs::remove(path_, ec);
}

// ---------------------------------------------------------------------------
// Artifact IO

std::vector<nlp::SentenceRecord> load_sentences(const fs::path& path) {
  if (!fs::exists(path)) throw Error(ErrorCode::MissingPriorStage, path.string() + " not found; run tagsents");
  std::vector<nlp::SentenceRecord> out;
  std::istringstream in(read_file(path));
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (trim(line).empty()) continue;
    try {
      out.push_back(json::parse(line).get<nlp::SentenceRecord>());
    } catch (const json::exception& e) {
      throw Error(ErrorCode::ParseError, path.string() + ":" + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

void save_sentences(const fs::path& path, const std::vector<nlp::SentenceRecord>& sentences) {
  std::string out;
  for (const auto& s : sentences) out += json(s).dump() + "\n";
  write_file_atomic(path, out);
}

std::vector<verblex::Frequency> load_frequencies(const fs::path& path) {
  if (!fs::exists(path)) throw Error(ErrorCode::MissingPriorStage, path.string() + " not found; run harvest");
  std::vector<verblex::Frequency> out;
  std::istringstream in(read_file(path));
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (header) {
      header = false;
      continue;
    }
    if (line.empty()) continue;
    auto cols = split(line, '\t');
    if (cols.size() != 2) throw Error(ErrorCode::ParseError, path.string() + ": bad row '" + line + "'");
    out.emplace_back(cols[0], static_cast<std::size_t>(std::stoull(cols[1])));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Pipeline

Pipeline::Pipeline(PipelineConfig config) : config_(std::move(config)) { config_.validate(); }

relex::RelexOptions Pipeline::relex_options() const {
  relex::RelexOptions o;
  o.rule = config_.phrase_rule;
  o.cues = config_.cues;
  o.depend_fallback = config_.depend_fallback;
  o.negation = config_.negation;
  if (config_.aliases_file) o.aliases = relex::load_alias_table(*config_.aliases_file);
  return o;
}

findnet::BuildOptions Pipeline::build_options() const {
  return findnet::BuildOptions{config_.rings, config_.require_cluster_seed(), config_.sign_basis};
}

std::vector<fs::path> Pipeline::outputs_of(Stage stage) const {
  switch (stage) {
    case Stage::ingest:
    case Stage::normalize:
    case Stage::sectionize: return {corpus_path()};
    case Stage::tagsents: return {sentences_path()};
    case Stage::harvest: return {frequencies_path(), config_.resolved_verbs_file()};
    case Stage::extract: return {relations_path()};
    case Stage::graph: return {graph_json_path(), graphml_path(), dot_path(), wordcloud_path()};
    case Stage::render: return {svg_path()};
  }
  return {};
}

namespace {

std::optional<Stage> upstream_of(Stage s) {
  switch (s) {
    case Stage::ingest: return std::nullopt;
    case Stage::normalize: return Stage::ingest;
    case Stage::sectionize: return Stage::normalize;
    case Stage::tagsents: return Stage::sectionize;
    case Stage::harvest: return Stage::tagsents;
    case Stage::extract: return Stage::tagsents;
    case Stage::graph: return Stage::extract;
    case Stage::render: return Stage::graph;
  }
  return std::nullopt;
}

std::string upstream_output_digest(const RunManifest& m, Stage s) {
  auto up = upstream_of(s);
  if (!up) return "";
  auto it = m.stages.find(std::string(to_string(*up)));
  if (it == m.stages.end()) return "";
  std::string acc;
  for (const auto& [f, d] : it->second.output_digests) acc += f + "=" + d + ";";
  return acc;
}

}  // namespace

std::string Pipeline::input_digest(Stage stage) const {
  const RunManifest m = RunManifest::load(config_.corpus_dir);
  const json cfg = config_.to_json();
  json d = {{"tool", kToolVersion}, {"stage", to_string(stage)}, {"upstream", upstream_output_digest(m, stage)}};
  switch (stage) {
    case Stage::ingest: {
      json files = json::array();
      const fs::path dir = config_.corpus_dir / "pdfs";
      std::vector<fs::path> pdfs;
      if (fs::is_directory(dir)) {
        for (const auto& e : fs::directory_iterator(dir)) {
          if (e.is_regular_file() && to_lower(e.path().extension().string()) == ".pdf") pdfs.push_back(e.path());
        }
      }
      std::sort(pdfs.begin(), pdfs.end());
      for (const auto& p : pdfs) files.push_back({p.filename().string(), sha256_file(p)});
      d["pdfs"] = files;
      d["metadata"] = file_digest_or(config_.metadata_file, "none");
      d["config"] = {cfg["column_map"], cfg["keywords"], cfg["keyword_fields"]};
      break;
    }
    case Stage::normalize: d["rules"] = file_digest_or(config_.cleaning_rules_file, "default"); break;
    case Stage::sectionize: d["lexicon"] = file_digest_or(config_.heading_lexicon_file, "default"); break;
    case Stage::tagsents: d["config"] = cfg["tagger"]; break;
    case Stage::harvest: break;
    case Stage::extract: {
      const fs::path vf = config_.resolved_verbs_file();
      d["verbs"] = fs::exists(vf) ? sha256_file(vf) : "seed";
      d["aliases"] = file_digest_or(config_.aliases_file, "none");
      d["config"] = {cfg["cues"], cfg["phrase_rule"], cfg["negation"], cfg["depend_fallback"]};
      break;
    }
    case Stage::graph: {
      auto it = m.stages.find("sectionize");
      d["corpus"] = it == m.stages.end() ? json("") : json(it->second.output_digests);
      d["config"] = {cfg["rings"], cfg["seeds"]["cluster"], cfg["sign_basis"]};
      break;
    }
    case Stage::render: d["config"] = {cfg["render"], cfg["seeds"]["sample"], cfg["rings"], cfg["seeds"]["cluster"],
                                       cfg["sign_basis"]};
      break;
  }
  return sha256_hex(d.dump());
}

void Pipeline::require_upstream(Stage stage, const RunManifest& m) const {
  auto up = upstream_of(stage);
  if (!up) return;
  auto it = m.stages.find(std::string(to_string(*up)));
  bool ok = it != m.stages.end();
  for (const auto& p : outputs_of(*up)) ok = ok && fs::exists(p);
  if (!ok) {
    throw Error(ErrorCode::MissingPriorStage,
                "stage '" + std::string(to_string(stage)) + "' needs '" + std::string(to_string(*up)) + "' first");
  }
}

StageResult Pipeline::run(Stage stage, bool force) {
  std::optional<CorpusLock> lock;
  lock.emplace(config_.corpus_dir);

  RunManifest m = RunManifest::load(config_.corpus_dir);
  require_upstream(stage, m);
  const std::string digest = input_digest(stage);
  const std::string name(to_string(stage));

  if (!force) {
    auto it = m.stages.find(name);
    bool fresh = it != m.stages.end() && it->second.input_digest == digest;
    for (const auto& p : outputs_of(stage)) fresh = fresh && fs::exists(p);
    if (fresh) {
      StageResult r;
      r.stage = stage;
      r.skipped = true;
      for (const auto& p : outputs_of(stage)) r.outputs.push_back(p.string());
      return r;
    }
  }

  StageResult r;
  switch (stage) {
    case Stage::ingest: r = do_ingest(); break;
    case Stage::normalize: r = do_normalize(); break;
    case Stage::sectionize: r = do_sectionize(); break;
    case Stage::tagsents: r = do_tagsents(); break;
    case Stage::harvest: r = do_harvest(); break;
    case Stage::extract: r = do_extract(); break;
    case Stage::graph: r = do_graph(); break;
    case Stage::render: r = do_render(); break;
  }
  r.stage = stage;

  m = RunManifest::load(config_.corpus_dir);
  // Everything downstream is stale now.
  for (Stage s : all_stages()) {
    if (stage_pos(s) > stage_pos(stage)) m.stages.erase(std::string(to_string(s)));
  }
  RunManifest::Entry e;
  e.input_digest = digest;
  e.timestamp = utc_timestamp_now();
  for (const auto& p : outputs_of(stage)) {
    e.output_digests[p.filename().string()] = sha256_file(p);
    r.outputs.push_back(p.string());
  }
  m.stages[name] = std::move(e);
  m.tool_version = std::string(kToolVersion);
  m.config_digest = sha256_hex(config_.to_json().dump());
  m.save(config_.corpus_dir);
  return r;
}

std::vector<StageResult> Pipeline::run_all(bool force) {
  std::vector<StageResult> out;
  for (Stage s : all_stages()) out.push_back(run(s, force));
  return out;
}

StageResult Pipeline::do_ingest() {
  StageResult r;
  auto recs = corpus::ingest_pdfs(config_.corpus_dir / "pdfs", config_.threads);
  for (auto& rec : recs) {
    rec.pdf_path = fs::path(rec.pdf_path).lexically_relative(config_.corpus_dir).string();
  }
  if (config_.metadata_file) {
    recs = corpus::merge_metadata(std::move(recs), corpus::MetadataTable::load(*config_.metadata_file, config_.column_map));
  }
  if (!config_.keywords.empty()) recs = corpus::filter_by_keywords(recs, config_.keywords, config_.keyword_fields);
  for (const auto& rec : recs) {
    if (rec.status == corpus::DocStatus::failed) r.failures.push_back(rec.doc_id + ": " + rec.error);
  }
  corpus::CorpusStore(config_.corpus_dir).save(recs);
  return r;
}

StageResult Pipeline::do_normalize() {
  StageResult r;
  corpus::CorpusStore store(config_.corpus_dir);
  auto recs = store.load();
  const textprep::TextNormalizer normalizer(config_.cleaning_rules_file
                                                ? textprep::load_cleaning_rules(*config_.cleaning_rules_file)
                                                : textprep::default_cleaning_rules());
  for (auto& rec : recs) {
    if (rec.status == corpus::DocStatus::failed) continue;
    rec.clean_text = normalizer(rec.raw_text);
    if (trim(rec.clean_text).empty()) {
      rec.error = "EmptyDocument: no text left after cleaning";
      corpus::advance_status(rec, corpus::DocStatus::failed);
      r.failures.push_back(rec.doc_id + ": " + rec.error);
      continue;
    }
    if (rec.status == corpus::DocStatus::ingested) corpus::advance_status(rec, corpus::DocStatus::normalized);
  }
  store.save(recs);
  return r;
}

StageResult Pipeline::do_sectionize() {
  StageResult r;
  corpus::CorpusStore store(config_.corpus_dir);
  auto recs = store.load();
  const auto lexicon = config_.heading_lexicon_file ? textprep::HeadingLexicon::load(*config_.heading_lexicon_file)
                                                    : textprep::HeadingLexicon::defaults();
  for (auto& rec : recs) {
    if (rec.status == corpus::DocStatus::failed || rec.status == corpus::DocStatus::ingested) continue;
    auto doc = textprep::detect_imrad(rec.clean_text, lexicon, rec.doc_id);
    rec.sections = std::move(doc.sections);
    rec.heading_spans = std::move(doc.heading_spans);
    for (auto& w : doc.warnings) {
      if (std::find(rec.warnings.begin(), rec.warnings.end(), w) == rec.warnings.end()) rec.warnings.push_back(w);
    }
    if (rec.status == corpus::DocStatus::normalized) corpus::advance_status(rec, corpus::DocStatus::sectioned);
  }
  store.save(recs);
  return r;
}

StageResult Pipeline::do_tagsents() {
  StageResult r;
  const auto recs = corpus::CorpusStore(config_.corpus_dir).load();
  std::vector<const corpus::DocumentRecord*> docs;
  for (const auto& rec : recs) {
    if (rec.status == corpus::DocStatus::sectioned) docs.push_back(&rec);
  }

  std::vector<std::vector<nlp::SentenceRecord>> per_doc(docs.size());
  std::vector<std::string> errors(docs.size());
  unsigned threads = config_.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : config_.threads;
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, docs.size())));

  std::atomic<std::size_t> next{0};
  std::exception_ptr fatal;
  std::mutex fatal_mu;
  auto worker = [&] {
    try {
      auto tagger = nlp::make_tagger(config_.tagger.kind, config_.tagger.command);
      for (std::size_t i = next++; i < docs.size(); i = next++) {
        textprep::SectionedDocument sd;
        sd.doc_id = docs[i]->doc_id;
        sd.sections = docs[i]->sections;
        try {
          for (const auto& [sec, text] : textprep::select_finding_sections(sd)) {
            auto sents = nlp::tag_section(sd.doc_id, sec, text, *tagger);
            per_doc[i].insert(per_doc[i].end(), sents.begin(), sents.end());
          }
        } catch (const Error& e) {
          if (e.code() != ErrorCode::NoFindingsText) throw;
          errors[i] = e.what();
        }
      }
    } catch (...) {
      std::lock_guard g(fatal_mu);
      if (!fatal) fatal = std::current_exception();
      next = docs.size();
    }
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (fatal) std::rethrow_exception(fatal);

  std::vector<nlp::SentenceRecord> all;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    if (!errors[i].empty()) r.failures.push_back(docs[i]->doc_id + ": " + errors[i]);
    all.insert(all.end(), per_doc[i].begin(), per_doc[i].end());
  }
  save_sentences(sentences_path(), all);
  return r;
}

StageResult Pipeline::do_harvest() {
  StageResult r;
  const auto sentences = load_sentences(sentences_path());
  const auto freq = verblex::harvest_verbs(sentences);
  std::string out = "lemma\tfrequency\n";
  std::vector<std::string> lemmas;
  for (const auto& [lemma, n] : freq) {
    out += lemma + "\t" + std::to_string(n) + "\n";
    lemmas.push_back(lemma);
  }
  write_file_atomic(frequencies_path(), out);
  verblex::VerbStore store(config_.resolved_verbs_file());
  store.add_unclassified(lemmas);
  return r;
}

StageResult Pipeline::do_extract() {
  StageResult r;
  const auto sentences = load_sentences(sentences_path());
  const auto dict = verblex::VerbStore(config_.resolved_verbs_file()).snapshot();
  const auto options = relex_options();
  std::vector<relex::RelationTriple> triples;
  for (const auto& s : sentences) {
    auto t = relex::extract_relations(s, dict, options);
    triples.insert(triples.end(), t.begin(), t.end());
  }
  relex::save_relations(relations_path(), relex::dedup_relations(triples));
  return r;
}

findnet::FindingsGraph build_graph_from_artifacts(const Pipeline& p) {
  const auto triples = relex::load_relations(p.relations_path());
  std::vector<std::string> universe;
  for (const auto& rec : corpus::CorpusStore(p.config().corpus_dir).load()) {
    if (rec.status == corpus::DocStatus::sectioned) universe.push_back(rec.doc_id);
  }
  return findnet::build_graph(triples, p.build_options(), universe);
}

StageResult Pipeline::do_graph() {
  StageResult r;
  const auto g = build_graph_from_artifacts(*this);
  write_file_atomic(graph_json_path(), findnet::export_json(g));
  write_file_atomic(graphml_path(), findnet::export_graphml(g));
  write_file_atomic(dot_path(), findnet::export_dot(g));
  write_file_atomic(wordcloud_path(), findnet::export_wordcloud(g));
  return r;
}

StageResult Pipeline::do_render() {
  StageResult r;
  auto g = build_graph_from_artifacts(*this);
  findnet::FilterSpec spec;
  if (config_.render.article_sample > 0) {
    spec.article_sample = std::make_pair(config_.render.article_sample, config_.require_sample_seed());
  }
  if (config_.render.top_clusters > 0) spec.top_clusters = config_.render.top_clusters;
  if (config_.render.ego) spec.ego_in = config_.render.ego;
  g = findnet::filter_graph(g, spec, build_options());
  write_file_atomic(svg_path(), findnet::render_svg(g, findnet::render_mode_from_string(config_.render.mode),
                                                    config_.render.ego));
  return r;
}

// ---------------------------------------------------------------------------
// Annotation loop

namespace {

std::string highlight(const nlp::SentenceRecord& s, const std::string& lemma) {
  std::string out;
  std::size_t pos = 0;
  for (const auto& t : s.tokens) {
    if (t.upos != nlp::Upos::VERB || t.lemma != lemma) continue;
    out += s.text.substr(pos, t.start - pos) + "[[" + s.text.substr(t.start, t.end - t.start) + "]]";
    pos = t.end;
  }
  return out + s.text.substr(pos);
}

}  // namespace

AnnotateSummary annotate_loop(verblex::VerbStore& store, const std::vector<verblex::Frequency>& frequencies,
                              const std::vector<nlp::SentenceRecord>& sentences, std::uint64_t seed, std::istream& in,
                              std::ostream& out, const std::string& annotator, std::size_t n) {
  AnnotateSummary summary;
  std::vector<verblex::Frequency> pending;
  {
    const auto dict = store.snapshot();
    for (const auto& f : frequencies) {
      if (dict.category(f.first) == verblex::Category::unclassified) pending.push_back(f);
    }
  }
  if (pending.empty()) {
    out << "All verbs classified.\n";
    summary.completed = true;
    return summary;
  }

  for (std::size_t k = 0; k < pending.size(); ++k) {
    const auto& [lemma, freq] = pending[k];
    out << "\n[" << (k + 1) << "/" << pending.size() << "] verb '" << lemma << "' (" << freq << " occurrences)\n";
    try {
      const auto sample = verblex::sample_sentences(lemma, sentences, n, seed);
      for (std::size_t i = 0; i < sample.size(); ++i) {
        out << "  " << (i + 1) << ". " << highlight(sample[i], lemma) << "\n";
      }
    } catch (const Error&) {
      out << "  (no sample sentences)\n";
    }

    while (true) {
      out << "[p]ositive [n]egative ne[u]tral [d]epend [x] none, skip, quit > " << std::flush;
      std::string line;
      if (!std::getline(in, line)) return summary;
      const std::string choice = to_lower(trim(line));
      if (choice == "quit" || choice == "q") return summary;
      if (choice == "skip" || choice == "s") {
        ++summary.skipped;
        break;
      }
      std::optional<verblex::Category> cat;
      if (choice == "p") cat = verblex::Category::positive;
      else if (choice == "n") cat = verblex::Category::negative;
      else if (choice == "u") cat = verblex::Category::neutral;
      else if (choice == "d") cat = verblex::Category::depend;
      else if (choice == "x") cat = verblex::Category::none;
      if (!cat) {
        out << "unrecognized choice '" << choice << "'\n";
        continue;
      }
      store.classify(lemma, *cat, annotator);
      ++summary.classified;
      out << "  -> " << verblex::to_string(*cat) << "\n";
      break;
    }
  }
  summary.completed = summary.skipped == 0;
  if (summary.completed) out << "All verbs classified.\n";
  return summary;
}

}  // namespace litnet::pipeline
