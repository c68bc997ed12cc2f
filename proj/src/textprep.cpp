#include "litnet/textprep.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>

#include "litnet/error.hpp"
#include "litnet/util.hpp"

namespace litnet::textprep {

using json = nlohmann::json;

std::vector<CleaningRule> default_cleaning_rules() {
  return {
      {"urls", R"((?:https?://|ftp://|www\.)[^\s<>"]*[^\s<>".,;:!?)\]])", "", false},
      // (Smith, 2019) (Smith et al., 2019; Lee 2020a) (see Smith and Jones, 2019-2020)
      {"parenthetical_citations",
       R"([ \t]*\((?:[Ss]ee |e\.g\.,? |cf\. )?[A-Z][A-Za-z'\-]+[^()\n]*?\b(?:19|20)\d{2}[a-z]?[^()\n]*\))", "",
       false},
      // Smith et al. (2019) / Smith and Jones (2019)
      {"narrative_citations",
       R"(\b[A-Z][A-Za-z'\-]+(?:\s+et\s+al\.?|\s+(?:and|&)\s+[A-Z][A-Za-z'\-]+)\s*\(\s*(?:19|20)\d{2}[a-z]?\s*\)[ \t]*)",
       "", false},
      {"copyright_lines",
       R"((^|\n)[^\n]*(?:©|\bcopyright\b|all rights reserved|\(c\) (?:19|20)\d{2})[^\n]*)", "$1", true},
      {"journal_lines", R"((^|\n)[^\n]*(?:journal homepage|contents lists available at)[^\n]*)", "$1", true},
      {"doi_lines", R"((^|\n)[ \t]*(?:https?://)?(?:dx\.)?doi(?:\.org)?[:/][ \t]*10\.[^\n]*)", "$1", true},
      {"history_lines",
       R"((^|\n)[ \t]*(?:received|accepted|available online|published online)\b[^\n]*(?:19|20)\d{2}[^\n]*)",
       "$1", true},
  };
}

std::vector<CleaningRule> load_cleaning_rules(const std::filesystem::path& json_file) {
  json j;
  try {
    j = json::parse(read_file(json_file));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigError, json_file.string() + ": " + e.what());
  }
  std::vector<CleaningRule> rules;
  for (const auto& r : j.at("rules")) {
    rules.push_back({r.value("name", ""), r.at("pattern").get<std::string>(), r.value("replacement", ""),
                     r.value("icase", false)});
  }
  return rules;
}

TextNormalizer::TextNormalizer(std::vector<CleaningRule> rules) : rules_(std::move(rules)) {
  compiled_.reserve(rules_.size());
  for (const auto& r : rules_) {
    try {
      auto flags = std::regex::ECMAScript | std::regex::optimize;
      if (r.icase) flags |= std::regex::icase;
      compiled_.emplace_back(r.pattern, flags);
    } catch (const std::regex_error& e) {
      throw Error(ErrorCode::RuleCompileError, "rule '" + r.name + "': " + e.what());
    }
  }
}

namespace {

std::string collapse_layout_whitespace(std::string_view s) {
  // Per line: drop control characters, collapse blanks, trim. Then keep at most
  // one blank line between non-empty lines.
  std::vector<std::string> lines;
  std::string cur;
  bool pending_space = false;
  auto flush = [&] {
    lines.push_back(cur);
    cur.clear();
    pending_space = false;
  };
  for (char ch : s) {
    auto c = static_cast<unsigned char>(ch);
    if (c == '\n' || c == '\f' || c == '\v') {
      flush();
    } else if (c == ' ' || c == '\t' || c == '\r') {
      pending_space = !cur.empty();
    } else if (c < 32 || c == 127) {
      continue;
    } else {
      if (pending_space) cur.push_back(' ');
      pending_space = false;
      cur.push_back(ch);
    }
  }
  flush();
  std::string out;
  int blank_run = 0;
  for (const auto& l : lines) {
    if (l.empty()) {
      ++blank_run;
      continue;
    }
    if (!out.empty()) out += blank_run > 0 ? "\n\n" : "\n";
    blank_run = 0;
    out += l;
  }
  return out;
}

}  // namespace

std::string TextNormalizer::apply_once(std::string_view text) const {
  std::string cur(text);
  for (std::size_t i = 0; i < compiled_.size(); ++i)
    cur = std::regex_replace(cur, compiled_[i], rules_[i].replacement);
  return collapse_layout_whitespace(fold_to_ascii(cur));
}

std::string TextNormalizer::operator()(std::string_view raw) const {
  std::string cur = apply_once(raw);
  for (int round = 0; round < 8; ++round) {
    std::string next = apply_once(cur);
    if (next == cur) break;
    cur = std::move(next);
  }
  return cur;
}

std::string normalize_text(std::string_view raw_text, const std::vector<CleaningRule>& rules) {
  return TextNormalizer(rules)(raw_text);
}

namespace {

const char* fold_code_point(char32_t cp) {
  if (cp >= 0xC0 && cp <= 0xFF) {
    static const char* const latin1[64] = {
        "A", "A", "A", "A", "A", "A", "",  "C", "E", "E", "E", "E", "I", "I", "I", "I",
        "",  "N", "O", "O", "O", "O", "O", "",  "",  "U", "U", "U", "U", "Y", "",  "",
        "a", "a", "a", "a", "a", "a", "",  "c", "e", "e", "e", "e", "i", "i", "i", "i",
        "",  "n", "o", "o", "o", "o", "o", "",  "",  "u", "u", "u", "u", "y", "",  "y"};
    return latin1[cp - 0xC0];
  }
  if (cp >= 0x100 && cp <= 0x17F) {
    // Latin Extended-A: decomposable letters alternate upper/lower case.
    struct Range {
      char32_t lo, hi;
      char upper;
    };
    static const Range ranges[] = {
        {0x100, 0x105, 'A'}, {0x106, 0x10D, 'C'}, {0x10E, 0x10F, 'D'}, {0x112, 0x11B, 'E'},
        {0x11C, 0x123, 'G'}, {0x124, 0x125, 'H'}, {0x128, 0x130, 'I'}, {0x134, 0x135, 'J'},
        {0x136, 0x137, 'K'}, {0x139, 0x13E, 'L'}, {0x143, 0x148, 'N'}, {0x14C, 0x151, 'O'},
        {0x154, 0x159, 'R'}, {0x15A, 0x161, 'S'}, {0x162, 0x165, 'T'}, {0x168, 0x173, 'U'},
        {0x174, 0x175, 'W'}, {0x176, 0x177, 'Y'}, {0x179, 0x17E, 'Z'}};
    static const char* const upper[] = {"A", "B", "C", "D", "E", "F", "G", "H", "I", "J", "K", "L", "M",
                                        "N", "O", "P", "Q", "R", "S", "T", "U", "V", "W", "X", "Y", "Z"};
    static const char* const lower[] = {"a", "b", "c", "d", "e", "f", "g", "h", "i", "j", "k", "l", "m",
                                        "n", "o", "p", "q", "r", "s", "t", "u", "v", "w", "x", "y", "z"};
    if (cp == 0x130) return "I";
    if (cp == 0x132) return "IJ";
    if (cp == 0x133) return "ij";
    if (cp == 0x178) return "Y";
    if (cp == 0x17F) return "s";
    for (const auto& r : ranges) {
      if (cp >= r.lo && cp <= r.hi) {
        int idx = r.upper - 'A';
        return ((cp - r.lo) % 2 == 0) ? upper[idx] : lower[idx];
      }
    }
    return "";
  }
  switch (cp) {
    case 0xA0: return " ";
    case 0xFB00: return "ff";
    case 0xFB01: return "fi";
    case 0xFB02: return "fl";
    case 0xFB03: return "ffi";
    case 0xFB04: return "ffl";
    case 0xFB05:
    case 0xFB06: return "st";
    case 0x2026: return "...";
    case 0x2010: case 0x2011: case 0x2012: case 0x2013: case 0x2014: case 0x2015: case 0x2212:
      return "-";
    case 0x2018: case 0x2019: case 0x201A: case 0x201B: case 0x2032: return "'";
    case 0x201C: case 0x201D: case 0x201E: case 0x201F: case 0x2033: return "\"";
    case 0x2024: return ".";
    case 0x2044: return "/";
    default: break;
  }
  if (cp >= 0x2000 && cp <= 0x200A) return " ";
  if (cp == 0x202F || cp == 0x205F || cp == 0x3000) return " ";
  if (cp >= 0xFF01 && cp <= 0xFF5E) {
    // Fullwidth ASCII forms.
    static thread_local char buf[2];
    buf[0] = static_cast<char>(cp - 0xFF01 + 0x21);
    buf[1] = 0;
    return buf;
  }
  return "";
}

}  // namespace

std::string fold_to_ascii(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    auto c = static_cast<unsigned char>(s[i]);
    if (c < 0x80) {
      out.push_back(static_cast<char>(c));
      ++i;
      continue;
    }
    int len = (c >= 0xF0) ? 4 : (c >= 0xE0) ? 3 : (c >= 0xC0) ? 2 : 0;
    if (len == 0 || i + static_cast<std::size_t>(len) > s.size()) {
      ++i;  // stray continuation or truncated sequence
      continue;
    }
    char32_t cp = c & (0x7F >> len);
    bool ok = true;
    for (int k = 1; k < len; ++k) {
      auto cc = static_cast<unsigned char>(s[i + static_cast<std::size_t>(k)]);
      if ((cc & 0xC0) != 0x80) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (cc & 0x3F);
    }
    if (!ok) {
      ++i;
      continue;
    }
    i += static_cast<std::size_t>(len);
    out += fold_code_point(cp);
  }
  return out;
}

std::string_view to_string(Section s) {
  switch (s) {
    case Section::introduction: return "introduction";
    case Section::methods: return "methods";
    case Section::results: return "results";
    case Section::discussion: return "discussion";
    case Section::conclusions: return "conclusions";
    case Section::other: return "other";
  }
  return "other";
}

std::optional<Section> section_from_string(std::string_view s) {
  for (auto sec : {Section::introduction, Section::methods, Section::results, Section::discussion,
                   Section::conclusions, Section::other})
    if (to_string(sec) == s) return sec;
  return std::nullopt;
}

HeadingLexicon HeadingLexicon::defaults() {
  using S = Section;
  HeadingLexicon lex;
  auto add = [&](std::string phrase, std::vector<Section> secs) { lex.entries[std::move(phrase)] = std::move(secs); };
  add("introduction", {S::introduction});
  add("background", {S::introduction});
  add("methods", {S::methods});
  add("methodology", {S::methods});
  add("materials and methods", {S::methods});
  add("data and methods", {S::methods});
  add("results", {S::results});
  add("findings", {S::results});
  add("results and discussion", {S::results, S::discussion});
  add("discussion", {S::discussion});
  add("conclusion", {S::conclusions});
  add("conclusions", {S::conclusions});
  add("concluding remarks", {S::conclusions});
  // Back matter closes the preceding section instead of extending it.
  for (const char* back : {"abstract", "references", "bibliography", "acknowledgements", "acknowledgments",
                           "acknowledgement", "acknowledgment", "appendix", "funding", "author contributions",
                           "data availability", "conflict of interest", "declaration of competing interest",
                           "supplementary material", "literature cited"})
    add(back, {S::other});
  return lex;
}

HeadingLexicon HeadingLexicon::load(const std::filesystem::path& json_file) {
  json j;
  try {
    j = json::parse(read_file(json_file));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigError, json_file.string() + ": " + e.what());
  }
  HeadingLexicon lex;
  for (const auto& [section_name, phrases] : j.items()) {
    auto sec = section_from_string(section_name);
    if (!sec) throw Error(ErrorCode::ConfigError, "unknown section '" + section_name + "' in " + json_file.string());
    for (const auto& p : phrases) {
      auto key = collapse_whitespace(to_lower(p.get<std::string>()));
      auto& v = lex.entries[key];
      if (std::find(v.begin(), v.end(), *sec) == v.end()) v.push_back(*sec);
    }
  }
  return lex;
}

std::string SectionedDocument::text(Section s) const {
  auto it = sections.find(s);
  return it == sections.end() ? std::string{} : it->second;
}

namespace {

// Strips "1.", "2.3", "IV.", "A." style numbering; returns the heading phrase
// lowercased and single-spaced, or nullopt when the line is too long.
std::optional<std::string> heading_key(std::string_view line) {
  static const std::regex numbering(R"(^\s*(?:\d+(?:\.\d+)*\.?|[IVXLC]+\.|[A-Z]\.|\d+\))\s*)");
  std::string l = trim(line);
  std::smatch m;
  if (std::regex_search(l, m, numbering)) l = l.substr(static_cast<std::size_t>(m.length(0)));
  while (!l.empty() && (l.back() == ':' || l.back() == '.')) l.pop_back();
  l = collapse_whitespace(to_lower(l));
  if (l.empty()) return std::nullopt;
  if (std::count(l.begin(), l.end(), ' ') + 1 > 8) return std::nullopt;
  return l;
}

}  // namespace

SectionedDocument detect_imrad(std::string_view clean_text, const HeadingLexicon& lexicon, std::string doc_id) {
  SectionedDocument doc;
  doc.doc_id = std::move(doc_id);

  struct Boundary {
    std::size_t heading_start, body_start;
    std::vector<Section> sections;
    std::string heading;
  };
  std::vector<Boundary> bounds;
  std::vector<bool> taken(6, false);

  std::size_t pos = 0;
  while (pos <= clean_text.size()) {
    auto nl = clean_text.find('\n', pos);
    std::size_t end = nl == std::string_view::npos ? clean_text.size() : nl;
    std::string_view line = clean_text.substr(pos, end - pos);
    if (auto key = heading_key(line)) {
      if (auto it = lexicon.entries.find(*key); it != lexicon.entries.end()) {
        std::vector<Section> fresh;
        for (auto s : it->second) {
          if (s == Section::other || !taken[static_cast<std::size_t>(s)]) fresh.push_back(s);
        }
        if (!fresh.empty()) {
          for (auto s : fresh) taken[static_cast<std::size_t>(s)] = true;
          bounds.push_back({pos, nl == std::string_view::npos ? clean_text.size() : nl + 1, fresh, trim(line)});
        }
      }
    }
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }

  auto append = [&](Section s, std::string_view text) {
    std::string t = trim(text);
    if (t.empty()) return;
    auto& dst = doc.sections[s];
    if (!dst.empty()) dst += "\n\n";
    dst += t;
  };

  std::size_t first = bounds.empty() ? clean_text.size() : bounds.front().heading_start;
  append(Section::other, clean_text.substr(0, first));
  for (std::size_t i = 0; i < bounds.size(); ++i) {
    std::size_t stop = (i + 1 < bounds.size()) ? bounds[i + 1].heading_start : clean_text.size();
    std::size_t start = std::min(bounds[i].body_start, stop);
    for (auto s : bounds[i].sections) append(s, clean_text.substr(start, stop - start));
    doc.heading_spans.push_back({bounds[i].heading, bounds[i].heading_start, bounds[i].sections});
  }

  bool any_canonical = std::any_of(bounds.begin(), bounds.end(), [](const Boundary& b) {
    return std::any_of(b.sections.begin(), b.sections.end(), [](Section s) { return s != Section::other; });
  });
  if (!any_canonical) doc.warnings.emplace_back("NoSectionsFound");
  return doc;
}

std::vector<std::pair<Section, std::string>> select_finding_sections(const SectionedDocument& doc) {
  std::vector<std::pair<Section, std::string>> out;
  for (auto s : {Section::results, Section::discussion, Section::conclusions}) {
    std::string t = doc.text(s);
    if (!t.empty()) out.emplace_back(s, std::move(t));
  }
  if (out.empty()) throw Error(ErrorCode::NoFindingsText, "document '" + doc.doc_id + "' has no findings sections");
  return out;
}

}  // namespace litnet::textprep
