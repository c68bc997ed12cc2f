#pragma once

#include <nlohmann/json_fwd.hpp>

#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "litnet/textprep.hpp"

namespace litnet::corpus {

enum class DocStatus { ingested, normalized, sectioned, failed };

std::string_view to_string(DocStatus s);
DocStatus status_from_string(std::string_view s);

struct DocumentRecord {
  std::string doc_id;
  std::string title;
  std::string abstract;
  int year = 0;  // 0 = unknown
  std::set<std::string> areas;
  std::string pdf_path;
  std::string raw_text;
  DocStatus status = DocStatus::ingested;

  // Filled by later stages.
  std::string clean_text;
  std::map<textprep::Section, std::string> sections;
  std::vector<textprep::HeadingSpan> heading_spans;

  bool metadata_matched = false;
  std::string error;                  // reason for status=failed
  std::vector<std::string> warnings;  // e.g. "NoMetadataMatch", "NoSectionsFound"

  bool operator==(const DocumentRecord&) const = default;
};

/// Moves `rec` forward to `next`. Status only advances
/// ingested -> normalized -> sectioned; failed is terminal and reachable from any
/// non-failed state. Throws std::logic_error on a backward or out-of-failed move.
void advance_status(DocumentRecord& rec, DocStatus next);

void to_json(nlohmann::json& j, const DocumentRecord& r);
void from_json(const nlohmann::json& j, DocumentRecord& r);

/// Logical field -> source column name. Empty string = not mapped.
struct ColumnMap {
  std::string id;
  std::string title = "Title";
  std::string abstract = "Abstract";
  std::string year = "Year";
  std::string areas;
};

struct MetadataRow {
  std::string id;
  std::string title;
  std::string abstract;
  int year = 0;
  std::set<std::string> areas;
};

struct MetadataTable {
  std::vector<MetadataRow> rows;
  ColumnMap column_map;

  /// Parses a delimited table (comma or tab, picked from the header row).
  /// Quoted fields follow RFC 4180. Throws Error(ConfigError) when the column
  /// map misses title/year or names a column absent from the header.
  static MetadataTable parse(std::string_view text, const ColumnMap& column_map);
  static MetadataTable load(const std::filesystem::path& path, const ColumnMap& column_map);
};

/// Lowercases and collapses whitespace; the join key for titles and ids.
std::string match_key(std::string_view s);

/// Resolves each record against `meta` by id, then by title (either the record
/// title or its doc_id as a title slug). Matched records get title, abstract,
/// year, and areas; unmatched ones are returned unchanged except for a
/// "NoMetadataMatch" warning. Throws Error(AmbiguousMatch) when two rows map to
/// one record.
std::vector<DocumentRecord> merge_metadata(std::vector<DocumentRecord> records, const MetadataTable& meta);

enum class KeywordField { title, abstract };

/// Keeps records where any keyword occurs as a case-insensitive whole word (or
/// whole word sequence) in any of `fields`.
std::vector<DocumentRecord> filter_by_keywords(const std::vector<DocumentRecord>& records,
                                               const std::vector<std::string>& keywords,
                                               const std::set<KeywordField>& fields = {KeywordField::title,
                                                                                      KeywordField::abstract});

/// Builds ingested (or failed) records for every *.pdf directly under
/// `pdf_dir`, in filename order. Extraction runs on up to `threads` workers
/// (0 = hardware concurrency).
std::vector<DocumentRecord> ingest_pdfs(const std::filesystem::path& pdf_dir, unsigned threads = 0);

/// `corpus.jsonl` inside a corpus directory; one DocumentRecord per line.
class CorpusStore {
 public:
  explicit CorpusStore(std::filesystem::path dir);

  const std::filesystem::path& dir() const { return dir_; }
  std::filesystem::path records_path() const { return dir_ / "corpus.jsonl"; }
  std::filesystem::path pdf_dir() const { return dir_ / "pdfs"; }

  bool exists() const;
  std::vector<DocumentRecord> load() const;
  /// Rewrites the whole file atomically. Throws std::invalid_argument on a
  /// duplicate doc_id.
  void save(const std::vector<DocumentRecord>& records) const;

 private:
  std::filesystem::path dir_;
};

}  // namespace litnet::corpus
