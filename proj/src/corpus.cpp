#include "litnet/corpus.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_set>

#include "litnet/error.hpp"
#include "litnet/pdf.hpp"
#include "litnet/util.hpp"

namespace litnet::corpus {

using json = nlohmann::json;

std::string_view to_string(DocStatus s) {
  switch (s) {
    case DocStatus::ingested: return "ingested";
    case DocStatus::normalized: return "normalized";
    case DocStatus::sectioned: return "sectioned";
    case DocStatus::failed: return "failed";
  }
  return "failed";
}

DocStatus status_from_string(std::string_view s) {
  for (auto st : {DocStatus::ingested, DocStatus::normalized, DocStatus::sectioned, DocStatus::failed})
    if (to_string(st) == s) return st;
  throw Error(ErrorCode::ParseError, "unknown document status '" + std::string(s) + "'");
}

void advance_status(DocumentRecord& rec, DocStatus next) {
  if (rec.status == DocStatus::failed) throw std::logic_error("document " + rec.doc_id + " already failed");
  if (next != DocStatus::failed && static_cast<int>(next) < static_cast<int>(rec.status))
    throw std::logic_error("status of " + rec.doc_id + " cannot move back to " + std::string(to_string(next)));
  rec.status = next;
}

void to_json(json& j, const DocumentRecord& r) {
  json sections = json::object();
  for (const auto& [sec, text] : r.sections) sections[std::string(textprep::to_string(sec))] = text;
  json spans = json::array();
  for (const auto& h : r.heading_spans) {
    json secs = json::array();
    for (auto s : h.sections) secs.push_back(std::string(textprep::to_string(s)));
    spans.push_back({{"heading", h.heading}, {"offset", h.offset}, {"sections", secs}});
  }
  j = json{{"doc_id", r.doc_id},
           {"title", r.title},
           {"abstract", r.abstract},
           {"year", r.year},
           {"areas", r.areas},
           {"pdf_path", r.pdf_path},
           {"raw_text", r.raw_text},
           {"status", std::string(to_string(r.status))},
           {"clean_text", r.clean_text},
           {"sections", sections},
           {"heading_spans", spans},
           {"metadata_matched", r.metadata_matched},
           {"error", r.error},
           {"warnings", r.warnings}};
}

void from_json(const json& j, DocumentRecord& r) {
  r = DocumentRecord{};
  r.doc_id = j.at("doc_id").get<std::string>();
  r.title = j.value("title", "");
  r.abstract = j.value("abstract", "");
  r.year = j.value("year", 0);
  r.areas = j.value("areas", std::set<std::string>{});
  r.pdf_path = j.value("pdf_path", "");
  r.raw_text = j.value("raw_text", "");
  r.status = status_from_string(j.value("status", "ingested"));
  r.clean_text = j.value("clean_text", "");
  if (j.contains("sections")) {
    for (const auto& [k, v] : j.at("sections").items()) {
      auto sec = textprep::section_from_string(k);
      if (!sec) throw Error(ErrorCode::ParseError, "unknown section '" + k + "'");
      r.sections[*sec] = v.get<std::string>();
    }
  }
  if (j.contains("heading_spans")) {
    for (const auto& h : j.at("heading_spans")) {
      textprep::HeadingSpan span{h.at("heading").get<std::string>(), h.at("offset").get<std::size_t>(), {}};
      for (const auto& s : h.at("sections"))
        if (auto sec = textprep::section_from_string(s.get<std::string>())) span.sections.push_back(*sec);
      r.heading_spans.push_back(std::move(span));
    }
  }
  r.metadata_matched = j.value("metadata_matched", false);
  r.error = j.value("error", "");
  r.warnings = j.value("warnings", std::vector<std::string>{});
}

// ---------------------------------------------------------------------------
// Metadata

namespace {

std::vector<std::vector<std::string>> parse_delimited(std::string_view text, char delim) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == '"' && field.empty()) {
      quoted = true;
      any = true;
    } else if (c == delim) {
      row.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
      }
      row.clear();
      field.clear();
      any = false;
    } else {
      field.push_back(c);
      any = true;
    }
  }
  if (any || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

char detect_delimiter(std::string_view text) {
  auto header = text.substr(0, text.find('\n'));
  std::size_t tabs = 0, commas = 0;
  bool quoted = false;
  for (char c : header) {
    if (c == '"') quoted = !quoted;
    if (quoted) continue;
    if (c == '\t') ++tabs;
    if (c == ',') ++commas;
  }
  return tabs > commas ? '\t' : ',';
}

int parse_year(const std::string& s) {
  std::string t = trim(s);
  if (t.size() >= 4 && std::all_of(t.begin(), t.begin() + 4, [](unsigned char c) { return std::isdigit(c); }))
    return std::stoi(t.substr(0, 4));
  return 0;
}

std::set<std::string> parse_areas(const std::string& s) {
  std::set<std::string> out;
  std::string cur;
  for (char c : s + ";") {
    if (c == ';' || c == '|' || c == ',') {
      auto t = trim(cur);
      if (!t.empty()) out.insert(t);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  return out;
}

}  // namespace

MetadataTable MetadataTable::parse(std::string_view text, const ColumnMap& column_map) {
  if (column_map.title.empty() || column_map.year.empty())
    throw Error(ErrorCode::ConfigError, "column map must cover at least title and year");
  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  auto rows = parse_delimited(text, detect_delimiter(text));
  if (rows.empty()) throw Error(ErrorCode::ConfigError, "metadata table has no header row");

  const auto& header = rows.front();
  auto column = [&](const std::string& name) -> std::optional<std::size_t> {
    if (name.empty()) return std::nullopt;
    for (std::size_t i = 0; i < header.size(); ++i)
      if (trim(header[i]) == name) return i;
    throw Error(ErrorCode::ConfigError, "metadata column '" + name + "' not in header");
  };
  auto c_id = column(column_map.id);
  auto c_title = column(column_map.title);
  auto c_abs = column(column_map.abstract);
  auto c_year = column(column_map.year);
  auto c_areas = column(column_map.areas);

  MetadataTable table;
  table.column_map = column_map;
  auto cell = [](const std::vector<std::string>& r, std::optional<std::size_t> c) {
    return (c && *c < r.size()) ? trim(r[*c]) : std::string{};
  };
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    MetadataRow row;
    row.id = cell(r, c_id);
    row.title = cell(r, c_title);
    row.abstract = cell(r, c_abs);
    row.year = parse_year(cell(r, c_year));
    row.areas = parse_areas(cell(r, c_areas));
    table.rows.push_back(std::move(row));
  }
  return table;
}

MetadataTable MetadataTable::load(const std::filesystem::path& path, const ColumnMap& column_map) {
  if (!std::filesystem::exists(path)) throw Error(ErrorCode::ConfigError, "metadata file not found: " + path.string());
  return parse(read_file(path), column_map);
}

std::string match_key(std::string_view s) { return collapse_whitespace(to_lower(s)); }

std::vector<DocumentRecord> merge_metadata(std::vector<DocumentRecord> records, const MetadataTable& meta) {
  for (auto& rec : records) {
    std::vector<const MetadataRow*> hits;
    if (!meta.column_map.id.empty()) {
      for (const auto& row : meta.rows) {
        if (row.id.empty()) continue;
        if (match_key(row.id) == match_key(rec.doc_id) || slugify(row.id) == rec.doc_id) hits.push_back(&row);
      }
    }
    if (hits.empty()) {
      const std::string title_key = match_key(rec.title);
      for (const auto& row : meta.rows) {
        if (row.title.empty()) continue;
        bool by_title = !title_key.empty() && match_key(row.title) == title_key;
        bool by_slug = slugify(row.title) == rec.doc_id;
        if (by_title || by_slug) hits.push_back(&row);
      }
    }
    if (hits.size() > 1)
      throw Error(ErrorCode::AmbiguousMatch,
                  std::to_string(hits.size()) + " metadata rows match document '" + rec.doc_id + "'");
    if (hits.empty()) {
      if (std::find(rec.warnings.begin(), rec.warnings.end(), "NoMetadataMatch") == rec.warnings.end())
        rec.warnings.emplace_back("NoMetadataMatch");
      continue;
    }
    const MetadataRow& row = *hits.front();
    rec.title = row.title;
    if (!row.abstract.empty()) rec.abstract = row.abstract;
    if (row.year) rec.year = row.year;
    if (!row.areas.empty()) rec.areas = row.areas;
    rec.metadata_matched = true;
    std::erase(rec.warnings, std::string("NoMetadataMatch"));
  }
  return records;
}

namespace {

std::vector<std::string> lowercase_words(std::string_view s) {
  std::vector<std::string> words;
  std::string cur;
  auto flush = [&] {
    while (!cur.empty() && (cur.back() == '-' || cur.back() == '\'')) cur.pop_back();
    if (!cur.empty()) words.push_back(cur);
    cur.clear();
  };
  for (char ch : s) {
    auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c) || c >= 0x80 || ((ch == '-' || ch == '\'') && !cur.empty())) {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else {
      flush();
    }
  }
  flush();
  return words;
}

bool contains_sequence(const std::vector<std::string>& words, const std::vector<std::string>& seq) {
  if (seq.empty() || seq.size() > words.size()) return false;
  return std::search(words.begin(), words.end(), seq.begin(), seq.end()) != words.end();
}

}  // namespace

std::vector<DocumentRecord> filter_by_keywords(const std::vector<DocumentRecord>& records,
                                               const std::vector<std::string>& keywords,
                                               const std::set<KeywordField>& fields) {
  if (keywords.empty()) throw std::invalid_argument("filter_by_keywords needs at least one keyword");
  std::vector<std::vector<std::string>> needles;
  for (const auto& k : keywords) needles.push_back(lowercase_words(k));
  std::vector<DocumentRecord> out;
  for (const auto& rec : records) {
    bool keep = false;
    for (auto f : fields) {
      auto words = lowercase_words(f == KeywordField::title ? rec.title : rec.abstract);
      keep = std::any_of(needles.begin(), needles.end(), [&](const auto& n) { return contains_sequence(words, n); });
      if (keep) break;
    }
    if (keep) out.push_back(rec);
  }
  return out;
}

std::vector<DocumentRecord> ingest_pdfs(const std::filesystem::path& pdf_dir, unsigned threads) {
  std::vector<std::filesystem::path> files;
  if (std::filesystem::is_directory(pdf_dir)) {
    for (const auto& e : std::filesystem::directory_iterator(pdf_dir)) {
      if (!e.is_regular_file()) continue;
      if (to_lower(e.path().extension().string()) == ".pdf") files.push_back(e.path());
    }
  }
  std::sort(files.begin(), files.end());

  std::vector<DocumentRecord> out(files.size());
  std::unordered_set<std::string> used;
  for (std::size_t i = 0; i < files.size(); ++i) {
    std::string base = slugify(files[i].stem().string());
    if (base.empty()) base = "doc";
    std::string id = base;
    for (int n = 2; !used.insert(id).second; ++n) id = base + "-" + std::to_string(n);
    out[i].doc_id = id;
    out[i].pdf_path = files[i].string();
  }

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, files.size())));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < files.size(); i = next++) {
      DocumentRecord& rec = out[i];
      try {
        auto text = pdf::extract(read_file(files[i]));
        rec.raw_text = std::move(text.text);
        rec.title = text.title == "untitled" ? std::string{} : text.title;
        rec.status = DocStatus::ingested;
      } catch (const Error& e) {
        rec.status = DocStatus::failed;
        rec.error = e.what();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Store

CorpusStore::CorpusStore(std::filesystem::path dir) : dir_(std::move(dir)) {}

bool CorpusStore::exists() const { return std::filesystem::exists(records_path()); }

std::vector<DocumentRecord> CorpusStore::load() const {
  std::ifstream in(records_path());
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + records_path().string());
  std::vector<DocumentRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    try {
      out.push_back(json::parse(line).get<DocumentRecord>());
    } catch (const json::exception& e) {
      throw Error(ErrorCode::ParseError, records_path().string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

void CorpusStore::save(const std::vector<DocumentRecord>& records) const {
  std::unordered_set<std::string> ids;
  std::string body;
  for (const auto& r : records) {
    if (!ids.insert(r.doc_id).second) throw std::invalid_argument("duplicate doc_id " + r.doc_id);
    body += json(r).dump();
    body += '\n';
  }
  std::filesystem::create_directories(dir_);
  write_file_atomic(records_path(), body);
}

}  // namespace litnet::corpus
