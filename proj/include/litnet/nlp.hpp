#pragma once

#include <nlohmann/json_fwd.hpp>

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "litnet/textprep.hpp"

namespace litnet::nlp {

/// Universal POS subset. PRON, CCONJ, SCONJ, INTJ, SYM and X collapse to OTHER.
enum class Upos { NOUN, PROPN, ADJ, VERB, AUX, DET, ADP, ADV, PART, NUM, PUNCT, OTHER };

std::string_view to_string(Upos u);
/// Accepts the twelve tags above plus the remaining universal tags (mapped to
/// OTHER). Returns nullopt for anything else.
std::optional<Upos> upos_from_string(std::string_view s);

struct TokenSpan {
  std::string surface;
  std::size_t start = 0;
  std::size_t end = 0;

  bool operator==(const TokenSpan&) const = default;
};

struct Token {
  std::string surface;
  std::string lemma;
  Upos upos = Upos::OTHER;
  std::size_t start = 0;
  std::size_t end = 0;

  bool operator==(const Token&) const = default;
};

struct SentenceRecord {
  std::string doc_id;
  textprep::Section section_tag = textprep::Section::results;
  std::size_t sent_index = 0;
  std::string text;
  std::vector<Token> tokens;

  bool operator==(const SentenceRecord&) const = default;
};

void to_json(nlohmann::json& j, const Token& t);
void from_json(const nlohmann::json& j, Token& t);
void to_json(nlohmann::json& j, const SentenceRecord& s);
void from_json(const nlohmann::json& j, SentenceRecord& s);

/// Splits on . ! ? followed by whitespace and an uppercase letter or digit.
/// Abbreviations ("et al.", "Fig.", "e.g.", ...), initials and decimals do not
/// end a sentence; a blank line always does. Sentences come back trimmed with
/// internal whitespace collapsed.
std::vector<std::string> split_sentences(std::string_view text);

/// Whitespace and punctuation boundaries; hyphenated words and decimals stay
/// whole; clitics 's and n't are split off.
std::vector<TokenSpan> tokenize(std::string_view sentence);

/// Rule lemmatizer used by the builtin tagger. Hyphenated words keep their
/// leading segments and lemmatize only the last one.
std::string lemmatize(std::string_view word, Upos upos);

class Tagger {
 public:
  virtual ~Tagger() = default;
  /// Returns one Token per span, offsets preserved.
  virtual std::vector<Token> tag(const std::vector<TokenSpan>& spans) = 0;
};

/// Closed-class word lists, suffix rules, a verb lexicon with left-context
/// disambiguation, and a noun default. Stateless.
class BuiltinTagger final : public Tagger {
 public:
  std::vector<Token> tag(const std::vector<TokenSpan>& spans) override;
};

/// Talks to a child process over stdin/stdout, one JSON line each way per
/// sentence. Request: a JSON array of token surfaces. Response: a JSON array of
/// {"surface", "lemma", "upos"} objects, one per request token.
///
/// Throws Error(TaggerUnavailable) when the process cannot start, exits, or
/// answers outside that schema.
class ExternalTagger final : public Tagger {
 public:
  explicit ExternalTagger(std::string command);
  ~ExternalTagger() override;
  ExternalTagger(const ExternalTagger&) = delete;
  ExternalTagger& operator=(const ExternalTagger&) = delete;

  std::vector<Token> tag(const std::vector<TokenSpan>& spans) override;

 private:
  struct Process;
  std::unique_ptr<Process> proc_;
  std::string command_;
};

std::unique_ptr<Tagger> make_tagger(std::string_view kind, const std::string& command);

/// Tokenizes and tags every sentence of `text`.
std::vector<SentenceRecord> tag_section(const std::string& doc_id, textprep::Section section, std::string_view text,
                                        Tagger& tagger);

}  // namespace litnet::nlp
