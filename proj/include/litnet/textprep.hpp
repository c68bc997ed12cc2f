#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

namespace litnet::textprep {

/// One ordered cleaning step. `pattern` uses the ECMAScript regular-expression
/// dialect of std::regex, matched over UTF-8 bytes; `replacement` may reference
/// groups as $1, $2, ... Patterns have no multiline mode: anchor line-scoped
/// rules with `(^|\n)` and keep the group in the replacement.
struct CleaningRule {
  std::string name;
  std::string pattern;
  std::string replacement;
  bool icase = false;
};

std::vector<CleaningRule> default_cleaning_rules();
std::vector<CleaningRule> load_cleaning_rules(const std::filesystem::path& json_file);

/// Compiled form of a rule list. Construction throws Error(RuleCompileError).
class TextNormalizer {
 public:
  explicit TextNormalizer(std::vector<CleaningRule> rules = default_cleaning_rules());

  /// Applies the rules in order, folds to ASCII, and collapses whitespace.
  /// Single newlines and blank-line paragraph breaks survive; everything else
  /// becomes one space. Repeats until the text is stable so the result is
  /// idempotent.
  std::string operator()(std::string_view raw) const;

  const std::vector<CleaningRule>& rules() const { return rules_; }

 private:
  std::string apply_once(std::string_view text) const;

  std::vector<CleaningRule> rules_;
  std::vector<std::regex> compiled_;
};

std::string normalize_text(std::string_view raw_text,
                           const std::vector<CleaningRule>& rules = default_cleaning_rules());

/// Compatibility-decomposes common Latin, typographic, and ligature code points
/// to ASCII and drops every remaining non-ASCII code point.
std::string fold_to_ascii(std::string_view utf8);

enum class Section { introduction, methods, results, discussion, conclusions, other };

std::string_view to_string(Section s);
std::optional<Section> section_from_string(std::string_view s);

struct HeadingSpan {
  std::string heading;
  std::size_t offset = 0;  // byte offset of the heading line in the clean text
  std::vector<Section> sections;

  bool operator==(const HeadingSpan&) const = default;
};

/// Heading phrase (lowercase, single-spaced) -> canonical sections.
struct HeadingLexicon {
  std::map<std::string, std::vector<Section>> entries;

  static HeadingLexicon defaults();
  static HeadingLexicon load(const std::filesystem::path& json_file);
};

struct SectionedDocument {
  std::string doc_id;
  std::map<Section, std::string> sections;
  std::vector<HeadingSpan> heading_spans;
  std::vector<std::string> warnings;

  std::string text(Section s) const;
};

SectionedDocument detect_imrad(std::string_view clean_text,
                               const HeadingLexicon& lexicon = HeadingLexicon::defaults(),
                               std::string doc_id = {});

/// Non-empty results, discussion, and conclusions texts, in that order.
/// Throws Error(NoFindingsText) when all three are empty.
std::vector<std::pair<Section, std::string>> select_finding_sections(const SectionedDocument& doc);

}  // namespace litnet::textprep
