#include "litnet/relex.hpp"

#include <nlohmann/json.hpp>

#include <set>
#include <sstream>
#include <tuple>

#include "litnet/error.hpp"
#include "litnet/util.hpp"

namespace litnet::relex {

namespace {

using nlp::Token;

bool skippable(const Token& t, const PhraseRule& rule) {
  return rule.skip_pos.contains(t.upos) || rule.skip_lemmas.contains(t.lemma);
}

std::string label_of(const std::vector<Token>& tokens, std::size_t b, std::size_t e) {
  std::string out;
  for (std::size_t i = b; i < e; ++i) {
    if (!out.empty()) out += ' ';
    out += to_lower(tokens[i].lemma);
  }
  return out;
}

// Leftward: skip up to `gap` tokens, then take the contiguous content run.
std::optional<std::pair<std::size_t, std::size_t>> source_run(const std::vector<Token>& tokens, std::size_t verb,
                                                              const PhraseRule& rule) {
  std::size_t i = verb;
  std::size_t skipped = 0;
  while (i > 0) {
    const Token& t = tokens[i - 1];
    if (rule.content_pos.contains(t.upos)) break;
    if (!skippable(t, rule) || skipped == rule.gap) return std::nullopt;
    ++skipped;
    --i;
  }
  if (i == 0) return std::nullopt;
  const std::size_t end = i;
  while (i > 0 && rule.content_pos.contains(tokens[i - 1].upos)) --i;
  std::size_t begin = i;
  if (end - begin > rule.max_phrase_len) begin = end - rule.max_phrase_len;
  return std::make_pair(begin, end);
}

// Rightward mirror of source_run starting at `from`.
std::optional<std::pair<std::size_t, std::size_t>> target_run(const std::vector<Token>& tokens, std::size_t from,
                                                              const PhraseRule& rule) {
  std::size_t i = from;
  std::size_t skipped = 0;
  while (i < tokens.size()) {
    const Token& t = tokens[i];
    if (rule.content_pos.contains(t.upos)) break;
    if (!skippable(t, rule) || skipped == rule.gap) return std::nullopt;
    ++skipped;
    ++i;
  }
  if (i == tokens.size()) return std::nullopt;
  const std::size_t begin = i;
  while (i < tokens.size() && rule.content_pos.contains(tokens[i].upos)) ++i;
  std::size_t end = i;
  if (end - begin > rule.max_phrase_len) end = begin + rule.max_phrase_len;
  return std::make_pair(begin, end);
}

verblex::Sign flip(verblex::Sign s) {
  switch (s) {
    case verblex::Sign::positive: return verblex::Sign::negative;
    case verblex::Sign::negative: return verblex::Sign::positive;
    case verblex::Sign::neutral: return verblex::Sign::neutral;
  }
  return s;
}

bool negated(const std::vector<Token>& tokens, std::size_t verb) {
  for (std::size_t k = 1; k <= 2 && k <= verb; ++k) {
    const std::string w = to_lower(tokens[verb - k].surface);
    const std::string& l = tokens[verb - k].lemma;
    if (w == "not" || w == "n't" || w == "no" || w == "never" || l == "not" || l == "never") return true;
  }
  return false;
}

std::string canonical(const AliasTable& aliases, const std::string& label) {
  auto it = aliases.find(label);
  return it == aliases.end() ? label : it->second;
}

}  // namespace

void PhraseRule::validate() const {
  for (auto u : content_pos) {
    if (skip_pos.contains(u)) {
      throw Error(ErrorCode::ConfigError, "POS " + std::string(nlp::to_string(u)) + " is both content and skip");
    }
  }
  if (max_phrase_len == 0) throw Error(ErrorCode::ConfigError, "max_phrase_len must be >= 1");
}

std::optional<PhraseMatch> extract_phrases(const std::vector<Token>& tokens, std::size_t verb_index,
                                           const PhraseRule& rule, const verblex::CueLexicon* cues) {
  if (verb_index >= tokens.size()) return std::nullopt;
  auto src = source_run(tokens, verb_index, rule);
  if (!src) return std::nullopt;
  auto tgt = target_run(tokens, verb_index + 1, rule);
  if (!tgt) return std::nullopt;
  if (cues) {
    bool has_cue = false;
    for (std::size_t i = tgt->first; i < tgt->second; ++i) has_cue = has_cue || cues->cue_sign(tokens[i].lemma);
    if (has_cue) {
      // Content may continue past a truncated run; restart after all of it.
      std::size_t after = tgt->second;
      while (after < tokens.size() && rule.content_pos.contains(tokens[after].upos)) ++after;
      if (auto next = target_run(tokens, after, rule)) tgt = next;
    }
  }
  PhraseMatch m;
  m.source_begin = src->first;
  m.source_end = src->second;
  m.target_begin = tgt->first;
  m.target_end = tgt->second;
  m.source_label = label_of(tokens, m.source_begin, m.source_end);
  m.target_label = label_of(tokens, m.target_begin, m.target_end);
  if (m.source_label.empty() || m.target_label.empty()) return std::nullopt;
  return m;
}

AliasTable load_alias_table(const std::filesystem::path& path) {
  AliasTable out;
  std::istringstream in(read_file(path));
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || trim(line)[0] == '#') continue;
    auto cols = split(line, '\t');
    if (cols.size() != 2) throw Error(ErrorCode::ParseError, path.string() + ":" + std::to_string(n) + ": expected alias<TAB>canonical");
    out[collapse_whitespace(to_lower(cols[0]))] = collapse_whitespace(to_lower(cols[1]));
  }
  return out;
}

void to_json(nlohmann::json& j, const RelationTriple& t) {
  j = nlohmann::json{{"doc_id", t.doc_id},
                     {"sentence_key", {{"section_tag", textprep::to_string(t.section_tag)}, {"sent_index", t.sent_index}}},
                     {"sentence_text", t.sentence_text},
                     {"source_label", t.source_label},
                     {"target_label", t.target_label},
                     {"verb_lemma", t.verb_lemma},
                     {"sign", verblex::to_string(t.sign)},
                     {"span", {t.span_start, t.span_end}}};
}

void from_json(const nlohmann::json& j, RelationTriple& t) {
  t.doc_id = j.at("doc_id").get<std::string>();
  const auto& key = j.at("sentence_key");
  auto sec = textprep::section_from_string(key.at("section_tag").get<std::string>());
  if (!sec) throw Error(ErrorCode::ParseError, "bad section_tag in relation");
  t.section_tag = *sec;
  t.sent_index = key.at("sent_index").get<std::size_t>();
  t.sentence_text = j.at("sentence_text").get<std::string>();
  t.source_label = j.at("source_label").get<std::string>();
  t.target_label = j.at("target_label").get<std::string>();
  t.verb_lemma = j.at("verb_lemma").get<std::string>();
  t.sign = verblex::sign_from_string(j.at("sign").get<std::string>());
  t.span_start = j.at("span").at(0).get<std::size_t>();
  t.span_end = j.at("span").at(1).get<std::size_t>();
}

std::vector<RelationTriple> extract_relations(const nlp::SentenceRecord& sentence,
                                              const verblex::VerbDictionary& dictionary, const RelexOptions& options) {
  using verblex::Category;
  std::vector<RelationTriple> out;
  const auto& tokens = sentence.tokens;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i].upos != nlp::Upos::VERB) continue;
    const Category cat = dictionary.category(tokens[i].lemma);
    if (cat == Category::none || cat == Category::unclassified) continue;

    const bool depend = cat == Category::depend;
    auto m = extract_phrases(tokens, i, options.rule, depend ? &options.cues : nullptr);
    if (!m) continue;

    verblex::Sign sign;
    if (depend) {
      auto cue = verblex::find_cue(i, tokens, options.cues, &dictionary);
      if (!cue && options.depend_fallback == DependFallback::drop) continue;
      sign = cue.value_or(verblex::Sign::neutral);
    } else {
      sign = cat == Category::positive   ? verblex::Sign::positive
             : cat == Category::negative ? verblex::Sign::negative
                                         : verblex::Sign::neutral;
    }
    if (options.negation && negated(tokens, i)) sign = flip(sign);

    RelationTriple t;
    t.doc_id = sentence.doc_id;
    t.section_tag = sentence.section_tag;
    t.sent_index = sentence.sent_index;
    t.sentence_text = sentence.text;
    t.source_label = canonical(options.aliases, m->source_label);
    t.target_label = canonical(options.aliases, m->target_label);
    t.verb_lemma = tokens[i].lemma;
    t.sign = sign;
    t.span_start = tokens[m->source_begin].start;
    t.span_end = tokens[m->target_end - 1].end;
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<RelationTriple> dedup_relations(const std::vector<RelationTriple>& triples) {
  using Key = std::tuple<std::string, std::string, std::string, std::string, std::string>;
  std::set<Key> seen;
  std::vector<RelationTriple> out;
  for (const auto& t : triples) {
    Key k{t.doc_id, collapse_whitespace(to_lower(t.sentence_text)), t.source_label, t.verb_lemma, t.target_label};
    if (seen.insert(std::move(k)).second) out.push_back(t);
  }
  return out;
}

std::vector<RelationTriple> load_relations(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw Error(ErrorCode::MissingPriorStage, path.string() + " not found");
  std::vector<RelationTriple> out;
  std::istringstream in(read_file(path));
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (trim(line).empty()) continue;
    try {
      out.push_back(nlohmann::json::parse(line).get<RelationTriple>());
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::ParseError, path.string() + ":" + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

void save_relations(const std::filesystem::path& path, const std::vector<RelationTriple>& triples) {
  std::string out;
  for (const auto& t : triples) out += nlohmann::json(t).dump() + "\n";
  write_file_atomic(path, out);
}

}  // namespace litnet::relex
