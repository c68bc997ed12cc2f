#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "litnet/nlp.hpp"
#include "litnet/verblex.hpp"

namespace litnet::relex {

struct PhraseRule {
  std::set<nlp::Upos> content_pos{nlp::Upos::ADJ, nlp::Upos::NOUN, nlp::Upos::PROPN};
  std::set<nlp::Upos> skip_pos{nlp::Upos::DET, nlp::Upos::ADP, nlp::Upos::AUX,
                               nlp::Upos::ADV, nlp::Upos::PART, nlp::Upos::NUM};
  std::size_t gap = 5;
  std::size_t max_phrase_len = 4;
  /// Coordinators crossed like skip_pos tokens, so the second verb of
  /// "A reduces B and improves C" still finds B.
  std::set<std::string> skip_lemmas{"and", "or", "but"};

  /// Throws Error(ConfigError) when the POS sets overlap or max_phrase_len is 0.
  void validate() const;
};

/// Token index ranges are half-open.
struct PhraseMatch {
  std::string source_label;
  std::string target_label;
  std::size_t source_begin = 0, source_end = 0;
  std::size_t target_begin = 0, target_end = 0;

  bool operator==(const PhraseMatch&) const = default;
};

/// Nearest content run on each side of `verb_index`. When `cues` is given and
/// the first target run contains a cue lemma ("a positive correlation with
/// adaptation"), the target search restarts after that run.
std::optional<PhraseMatch> extract_phrases(const std::vector<nlp::Token>& tokens, std::size_t verb_index,
                                           const PhraseRule& rule, const verblex::CueLexicon* cues = nullptr);

enum class DependFallback { neutral, drop };

/// Label -> canonical label. Empty by default: labels are never merged.
using AliasTable = std::map<std::string, std::string>;
/// Two tab-separated columns per line: alias, canonical. '#' starts a comment.
AliasTable load_alias_table(const std::filesystem::path& path);

struct RelexOptions {
  PhraseRule rule;
  verblex::CueLexicon cues;
  DependFallback depend_fallback = DependFallback::neutral;
  /// Flip positive/negative when not, n't, no or never sits within two tokens
  /// before the verb.
  bool negation = false;
  AliasTable aliases;
};

struct RelationTriple {
  std::string doc_id;
  textprep::Section section_tag = textprep::Section::results;
  std::size_t sent_index = 0;
  std::string sentence_text;
  std::string source_label;
  std::string target_label;
  std::string verb_lemma;
  verblex::Sign sign = verblex::Sign::neutral;
  std::size_t span_start = 0;  // char offsets into sentence_text
  std::size_t span_end = 0;

  bool operator==(const RelationTriple&) const = default;
};

void to_json(nlohmann::json& j, const RelationTriple& t);
void from_json(const nlohmann::json& j, RelationTriple& t);

std::vector<RelationTriple> extract_relations(const nlp::SentenceRecord& sentence,
                                              const verblex::VerbDictionary& dictionary,
                                              const RelexOptions& options = {});

/// Drops repeats of (doc_id, normalized sentence, source, verb, target),
/// keeping the first.
std::vector<RelationTriple> dedup_relations(const std::vector<RelationTriple>& triples);

std::vector<RelationTriple> load_relations(const std::filesystem::path& path);
void save_relations(const std::filesystem::path& path, const std::vector<RelationTriple>& triples);

}  // namespace litnet::relex
