#include "litnet/verblex.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

#include "litnet/error.hpp"
#include "litnet/util.hpp"

namespace litnet::verblex {

namespace {

constexpr std::string_view kHeader = "lemma\tcategory\tannotator\ttimestamp\tnote";
constexpr std::string_view kSeedTimestamp = "1970-01-01T00:00:00Z";

std::string escape_field(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  return out;
}

std::string unescape_field(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '\\' || i + 1 == s.size()) {
      out += s[i];
      continue;
    }
    switch (s[++i]) {
      case 't': out += '\t'; break;
      case 'n': out += '\n'; break;
      case 'r': out += '\r'; break;
      default: out += s[i];
    }
  }
  return out;
}

}  // namespace

std::string_view to_string(Category c) {
  switch (c) {
    case Category::positive: return "positive";
    case Category::negative: return "negative";
    case Category::neutral: return "neutral";
    case Category::depend: return "depend";
    case Category::none: return "none";
    case Category::unclassified: return "unclassified";
  }
  return "unclassified";
}

std::string_view to_string(Sign s) {
  switch (s) {
    case Sign::positive: return "positive";
    case Sign::negative: return "negative";
    case Sign::neutral: return "neutral";
  }
  return "neutral";
}

Category category_from_string(std::string_view s) {
  for (Category c : {Category::positive, Category::negative, Category::neutral, Category::depend, Category::none,
                     Category::unclassified}) {
    if (to_string(c) == s) return c;
  }
  throw Error(ErrorCode::InvalidCategory, "'" + std::string(s) + "'");
}

Sign sign_from_string(std::string_view s) {
  for (Sign g : {Sign::positive, Sign::negative, Sign::neutral}) {
    if (to_string(g) == s) return g;
  }
  throw Error(ErrorCode::ParseError, "bad sign '" + std::string(s) + "'");
}

std::string_view sign_glyph(Sign s) {
  switch (s) {
    case Sign::positive: return "+";
    case Sign::negative: return "-";
    case Sign::neutral: return "+/-";
  }
  return "+/-";
}

// ---------------------------------------------------------------------------

VerbDictionary VerbDictionary::seed() {
  VerbDictionary d;
  const std::pair<Category, std::vector<std::string>> groups[] = {
      {Category::positive, {"increase", "improve", "enhance"}},
      {Category::negative, {"reduce", "prevent", "constrain"}},
      {Category::neutral, {"relate", "link", "associate"}},
      {Category::depend, {"have", "affect", "influence", "show"}},
      {Category::none, {"adopt", "cope", "implement"}},
  };
  for (const auto& [cat, lemmas] : groups) {
    for (const auto& l : lemmas) d.entries_[l] = VerbEntry{l, cat, "seed", std::string(kSeedTimestamp), ""};
  }
  return d;
}

VerbDictionary VerbDictionary::parse(std::string_view tsv) {
  VerbDictionary d;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::size_t pos = 0;
  while (pos < tsv.size()) {
    std::size_t nl = tsv.find('\n', pos);
    if (nl == std::string_view::npos) nl = tsv.size();
    std::string_view line = tsv.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (!header_seen) {
      header_seen = true;
      if (line.starts_with("lemma\t")) continue;
    }
    auto cols = split(line, '\t');
    if (cols.size() < 2 || cols.size() > 5) {
      throw Error(ErrorCode::ParseError, "verbs.tsv line " + std::to_string(line_no) + ": expected 5 columns");
    }
    cols.resize(5);
    VerbEntry e{unescape_field(cols[0]), category_from_string(cols[1]), unescape_field(cols[2]),
                unescape_field(cols[3]), unescape_field(cols[4])};
    if (e.lemma.empty()) throw Error(ErrorCode::ParseError, "verbs.tsv line " + std::to_string(line_no) + ": empty lemma");
    d.entries_[e.lemma] = std::move(e);
  }
  return d;
}

std::string VerbDictionary::serialize() const {
  std::string out(kHeader);
  out += '\n';
  for (const auto& [lemma, e] : entries_) {
    out += escape_field(e.lemma) + '\t' + std::string(to_string(e.category)) + '\t' + escape_field(e.annotator) + '\t' +
           escape_field(e.timestamp) + '\t' + escape_field(e.note) + '\n';
  }
  return out;
}

VerbDictionary VerbDictionary::load(const std::filesystem::path& path) { return parse(read_file(path)); }

void VerbDictionary::save(const std::filesystem::path& path) const { write_file_atomic(path, serialize()); }

const VerbEntry* VerbDictionary::find(std::string_view lemma) const {
  auto it = entries_.find(lemma);
  return it == entries_.end() ? nullptr : &it->second;
}

Category VerbDictionary::category(std::string_view lemma) const {
  const VerbEntry* e = find(lemma);
  return e ? e->category : Category::unclassified;
}

bool VerbDictionary::add_unclassified(const std::string& lemma, const std::string& timestamp) {
  if (contains(lemma)) return false;
  entries_[lemma] = VerbEntry{lemma, Category::unclassified, "", timestamp, ""};
  return true;
}

const VerbEntry& VerbDictionary::classify(const std::string& lemma, Category category, const std::string& annotator,
                                          const std::string& timestamp, const std::string& note) {
  if (category == Category::unclassified) throw Error(ErrorCode::InvalidCategory, "cannot classify as unclassified");
  auto it = entries_.find(lemma);
  if (it == entries_.end()) throw Error(ErrorCode::UnknownVerb, "'" + lemma + "' is not in the dictionary");
  it->second = VerbEntry{lemma, category, annotator, timestamp, note};
  return it->second;
}

// ---------------------------------------------------------------------------

VerbStore::VerbStore(std::filesystem::path path) : path_(std::move(path)) { reload(); }

void VerbStore::reload() {
  std::unique_lock lock(mu_);
  dict_ = std::filesystem::exists(path_) ? VerbDictionary::load(path_) : VerbDictionary::seed();
}

VerbDictionary VerbStore::snapshot() const {
  std::shared_lock lock(mu_);
  return dict_;
}

VerbEntry VerbStore::classify(const std::string& lemma, Category category, const std::string& annotator,
                              const std::string& note) {
  std::unique_lock lock(mu_);
  VerbDictionary next = dict_;
  VerbEntry e = next.classify(lemma, category, annotator, utc_timestamp_now(), note);
  next.save(path_);
  dict_ = std::move(next);
  return e;
}

std::size_t VerbStore::add_unclassified(const std::vector<std::string>& lemmas) {
  std::unique_lock lock(mu_);
  VerbDictionary next = dict_;
  const std::string now = utc_timestamp_now();
  std::size_t added = 0;
  for (const auto& l : lemmas) added += next.add_unclassified(l, now) ? 1 : 0;
  if (added > 0 || !std::filesystem::exists(path_)) next.save(path_);
  dict_ = std::move(next);
  return added;
}

// ---------------------------------------------------------------------------

std::vector<Frequency> harvest_verbs(const std::vector<nlp::SentenceRecord>& sentences) {
  std::unordered_map<std::string, std::size_t> counts;
  for (const auto& s : sentences) {
    for (const auto& t : s.tokens) {
      if (t.upos == nlp::Upos::VERB) ++counts[t.lemma];
    }
  }
  std::vector<Frequency> out(counts.begin(), counts.end());
  std::sort(out.begin(), out.end(), [](const Frequency& a, const Frequency& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  return out;
}

std::vector<nlp::SentenceRecord> sample_sentences(std::string_view lemma,
                                                  const std::vector<nlp::SentenceRecord>& sentences, std::size_t n,
                                                  std::uint64_t seed) {
  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    const auto& toks = sentences[i].tokens;
    if (std::any_of(toks.begin(), toks.end(),
                    [&](const nlp::Token& t) { return t.upos == nlp::Upos::VERB && t.lemma == lemma; })) {
      pool.push_back(i);
    }
  }
  if (pool.empty()) throw Error(ErrorCode::UnknownVerb, "no sentence uses '" + std::string(lemma) + "' as a verb");
  std::vector<nlp::SentenceRecord> out;
  for (std::size_t k : sample_indices(pool.size(), n, seed)) out.push_back(sentences[pool[k]]);
  return out;
}

// ---------------------------------------------------------------------------

void CueLexicon::validate() const {
  if (window == 0) throw Error(ErrorCode::ConfigError, "cue window must be >= 1");
  for (const auto& p : positive_cues) {
    if (negative_cues.contains(p)) throw Error(ErrorCode::ConfigError, "cue '" + p + "' is both positive and negative");
  }
}

std::optional<Sign> CueLexicon::cue_sign(std::string_view lemma) const {
  if (positive_cues.contains(lemma)) return Sign::positive;
  if (negative_cues.contains(lemma)) return Sign::negative;
  return std::nullopt;
}

std::optional<Sign> find_cue(std::size_t verb_index, const std::vector<nlp::Token>& tokens, const CueLexicon& cues,
                             const VerbDictionary* dictionary) {
  if (verb_index >= tokens.size()) return std::nullopt;
  if (cues.check_preceding && verb_index > 0) {
    if (auto s = cues.cue_sign(tokens[verb_index - 1].lemma)) return s;
  }
  const std::size_t end = std::min(tokens.size(), verb_index + 1 + cues.window);
  for (std::size_t i = verb_index + 1; i < end; ++i) {
    const auto& t = tokens[i];
    if (dictionary && t.upos == nlp::Upos::VERB && dictionary->contains(t.lemma)) break;
    if (auto s = cues.cue_sign(t.lemma)) return s;
  }
  return std::nullopt;
}

Sign resolve_depend(std::size_t verb_index, const std::vector<nlp::Token>& tokens, const CueLexicon& cues,
                    const VerbDictionary* dictionary) {
  return find_cue(verb_index, tokens, cues, dictionary).value_or(Sign::neutral);
}

}  // namespace litnet::verblex
