#include "litnet/nlp.hpp"

#include <nlohmann/json.hpp>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cctype>
#include <cerrno>
#include <cstdio>
#include <cstring>
#include <unordered_map>
#include <unordered_set>

#include "litnet/error.hpp"
#include "litnet/util.hpp"

namespace litnet::nlp {

namespace {

constexpr std::array<std::string_view, 12> kUposNames = {"NOUN", "PROPN", "ADJ", "VERB", "AUX",  "DET",
                                                         "ADP",  "ADV",   "PART", "NUM", "PUNCT", "OTHER"};

bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }
bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }
bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_upper(char c) { return std::isupper(static_cast<unsigned char>(c)) != 0; }
bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

bool ends_with(std::string_view s, std::string_view suf) {
  return s.size() >= suf.size() && s.substr(s.size() - suf.size()) == suf;
}

using WordSet = std::unordered_set<std::string_view>;

// ---------------------------------------------------------------------------
// Sentence splitting

const WordSet& abbreviations() {
  static const WordSet s = {"al",   "fig",   "figs",   "e.g",  "i.e",  "vs",  "cf",  "eq",   "eqs",  "tab",  "no",
                            "nos",  "vol",   "pp",     "p",    "approx", "ca", "dr",  "mr",   "mrs",  "ms",   "prof",
                            "st",   "jr",    "sr",     "inc",  "ltd",  "co",  "resp", "sect", "sec",  "ch",   "chap",
                            "ed",   "eds",   "u.s",    "u.k",  "e.u",  "viz", "est", "dept", "univ", "et al", "approx"};
  return s;
}

// The word ending right before the period at `dot` (letters and inner dots).
std::string word_before(std::string_view text, std::size_t dot) {
  std::size_t b = dot;
  while (b > 0 && (is_alpha(text[b - 1]) || text[b - 1] == '.')) --b;
  return to_lower(text.substr(b, dot - b));
}

bool guarded_period(std::string_view text, std::size_t dot) {
  const std::string w = word_before(text, dot);
  if (w.empty()) return false;
  if (abbreviations().contains(w)) return true;
  // Single capital initial: "J. Smith".
  if (w.size() == 1 && is_upper(text[dot - 1])) {
    return dot < 2 || !is_alpha(text[dot - 2]);
  }
  return false;
}

bool blank_line_at(std::string_view text, std::size_t i, std::size_t& after) {
  if (text[i] != '\n') return false;
  std::size_t j = i + 1;
  while (j < text.size() && (text[j] == ' ' || text[j] == '\t' || text[j] == '\r')) ++j;
  if (j < text.size() && text[j] == '\n') {
    after = j + 1;
    return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Lexicons for the builtin tagger

const WordSet& determiners() {
  // Possessive determiners are tagged DET so phrase search can skip them.
  static const WordSet s = {"a",     "an",    "the",  "this",   "these", "those",   "each",    "every",
                            "some",  "any",   "no",   "all",    "both",  "either",  "neither", "another",
                            "such",  "its",   "their", "our",   "his",   "her",     "my",      "your",
                            "whose", "much",  "many", "few",    "several", "various", "most",  "more"};
  return s;
}

const WordSet& pronouns() {
  static const WordSet s = {"i",       "me",        "we",        "us",       "you",     "he",      "him",
                            "she",     "it",        "they",      "them",     "itself",  "themselves", "ourselves",
                            "himself", "herself",   "one",       "something", "anything", "nothing", "everything",
                            "someone", "anyone",    "everyone",  "who",      "whom",    "which",   "what",
                            "that",    "there",     "ones",      "mine",     "ours",    "theirs",  "whoever"};
  return s;
}

const WordSet& conjunctions() {
  static const WordSet s = {"and",     "or",    "but",   "nor",     "because", "although", "though", "while",
                            "whereas", "if",    "whether", "unless", "so",      "when",     "where",  "whenever",
                            "once",    "since", "until", "than"};
  return s;
}

const WordSet& adpositions() {
  static const WordSet s = {"of",      "in",       "on",      "at",     "by",      "for",     "with",    "without",
                            "from",    "into",     "onto",    "upon",   "about",   "above",   "below",   "across",
                            "after",   "against",  "along",   "among",  "amongst", "around",  "before",  "behind",
                            "beneath", "beside",   "besides", "between", "beyond", "despite", "during",  "except",
                            "inside",  "near",     "off",     "outside", "over",   "per",     "regarding", "through",
                            "throughout", "toward", "towards", "under", "unlike",  "via",     "within",  "versus",
                            "like",    "as",       "amid",    "concerning", "including", "following"};
  return s;
}

const WordSet& adverbs() {
  static const WordSet s = {"also",     "very",      "however",  "thus",     "therefore", "moreover", "furthermore",
                            "further",  "still",     "yet",      "already",  "only",      "even",     "well",
                            "rather",   "quite",     "too",      "here",     "then",      "now",      "never",
                            "always",   "again",     "just",     "almost",   "hence",     "indeed",   "instead",
                            "perhaps",  "otherwise", "likewise", "together", "else",      "ever",     "sometimes",
                            "often",    "less",      "least",    "not",      "nevertheless", "nonetheless", "meanwhile",
                            "overall",  "respectively", "consequently", "additionally", "similarly", "accordingly",
                            "conversely", "alternatively", "notably", "primarily", "mostly", "mainly", "largely",
                            "seldom",   "rarely",    "soon",     "later",    "somewhat",  "away",     "back"};
  return s;
}

const WordSet& modals() {
  static const WordSet s = {"can", "could", "may", "might", "must", "shall", "should", "will", "would", "ought"};
  return s;
}

const WordSet& be_forms() {
  static const WordSet s = {"be", "am", "is", "are", "was", "were", "been", "being", "'s"};
  return s;
}

const WordSet& have_forms() {
  static const WordSet s = {"have", "has", "had", "having"};
  return s;
}

const WordSet& do_forms() {
  static const WordSet s = {"do", "does", "did"};
  return s;
}

const WordSet& number_words() {
  static const WordSet s = {"zero",   "two",     "three",   "four",    "five",    "six",    "seven",  "eight",
                            "nine",   "ten",     "eleven",  "twelve",  "twenty",  "thirty", "forty",  "fifty",
                            "hundred", "thousand", "million", "billion", "dozen"};
  return s;
}

const WordSet& adjectives() {
  static const WordSet s = {
      "positive", "negative",  "significant", "new",      "high",     "low",      "large",    "small",   "good",
      "bad",      "strong",    "weak",        "important", "local",   "key",      "main",     "major",   "minor",
      "greater",  "higher",    "lower",       "larger",   "smaller",  "better",   "worse",    "best",    "worst",
      "other",    "same",      "different",   "certain",  "rural",    "urban",    "own",      "able",    "likely",
      "unlikely", "due",       "similar",     "specific", "recent",   "current",  "possible", "poor",    "rich",
      "young",    "old",       "older",       "younger",  "female",   "male",     "long",     "short",   "early",
      "late",     "whole",     "full",        "direct",   "indirect", "private",  "public",   "human",   "average",
      "total",    "available", "great",       "little",   "wide",     "broad",    "free",     "open",    "clear",
      "hard",     "easy",      "true",        "false",    "real",     "low-income", "high-income", "aware",
      "unaware",  "extreme",   "severe",      "mild",     "moderate", "complex",  "simple",   "diverse",  "adequate",
      "inadequate", "sufficient", "insufficient", "willing", "unwilling", "prone", "vulnerable", "resilient",
      "dry",      "wet",       "warm",        "cold",     "hot",      "safe",     "unsafe",   "secure",  "insecure",
      "common",   "rare",      "frequent",    "infrequent", "higher-income", "lower-income", "first", "second",
      "third",    "last",      "next",        "previous", "further",  "fewer",    "greatest", "highest", "lowest",
      "largest",  "smallest",  "stronger",    "weaker",   "strongest", "weakest", "efficient", "inefficient",
      "relevant", "irrelevant", "consistent", "inconsistent", "evident", "apparent", "prevalent", "dependent",
      "independent", "present", "absent",     "urgent",   "recurrent", "persistent", "resistant", "abundant",
      "scarce",   "vulnerable", "sensitive",  "intensive", "extensive", "alternative"};
  return s;
}

// Nouns that an adjective suffix rule would otherwise catch.
const WordSet& suffix_exception_nouns() {
  static const WordSet s = {"capital",  "approval",  "rental",   "animal",    "journal",
                            "material", "arrival",    "proposal",   "trial",     "signal",   "interval",  "festival",
                            "hospital", "terminal",   "criminal",   "manual",    "rival",    "removal",   "survival",
                            "renewal",  "withdrawal", "referral",   "disposal",  "incentive", "objective", "initiative",
                            "native",   "executive",  "relative",   "representative", "directive", "perspective",
                            "detective", "archive",   "variable",   "vegetable", "table",    "cable",     "topic",
                            "clinic",   "logic",      "music",      "traffic",   "republic", "panic",     "graphic",
                            "summary",  "library",    "boundary",   "salary",    "dictionary", "beneficiary",
                            "secretary", "territory", "itinerary",  "anniversary", "glossary", "estuary",  "sanctuary",
                            "tributary", "mortality", "fatality",   "rationale", "epidemic", "pandemic",  "mechanic",
                            "characteristic", "statistic", "fabric", "metric", "rubric", "arithmetic",  "critic",
                            "tutorial", "deal", "appeal", "goal", "meal", "canal"};
  return s;
}

// Base forms that can head a verb phrase. Membership only makes a token
// verb-capable; context decides.
const WordSet& verb_lexicon() {
  static const WordSet s = {
      "increase",  "improve",    "enhance",   "reduce",     "prevent",   "constrain",  "relate",    "link",
      "associate", "have",       "affect",    "influence",  "show",      "adopt",      "cope",      "implement",
      "decrease",  "raise",      "lower",     "limit",      "hinder",    "promote",    "support",   "boost",
      "strengthen", "weaken",    "drive",     "determine",  "shape",     "predict",    "explain",   "cause",
      "lead",      "result",     "contribute", "facilitate", "encourage", "discourage", "enable",   "inhibit",
      "impede",    "restrict",   "foster",    "diminish",   "lessen",    "mitigate",   "exacerbate", "worsen",
      "amplify",   "correlate",  "depend",    "vary",       "differ",    "find",       "observe",   "suggest",
      "indicate",  "reveal",     "demonstrate", "confirm",  "report",    "use",        "make",      "take",
      "give",      "provide",    "need",      "require",    "allow",     "help",       "motivate",  "undermine",
      "threaten",  "stimulate",  "accelerate", "slow",      "block",     "hamper",     "obstruct",  "benefit",
      "harm",      "damage",     "protect",   "ensure",     "secure",    "shift",      "change",    "alter",
      "modify",    "adapt",      "respond",   "perceive",   "believe",   "know",       "consider",  "include",
      "involve",   "depend",     "rely",      "lack",       "face",      "experience", "reach",     "remain",
      "become",    "seem",       "appear",    "tend",       "continue",  "begin",      "start",     "stop",
      "impact",    "trigger",    "induce",    "generate",   "produce",   "create",     "build",     "develop",
      "expand",    "extend",     "spread",    "grow",       "decline",   "fall",       "rise",      "drop",
      "exceed",    "outweigh",   "offset",    "counteract", "moderate",  "mediate",    "buffer",    "condition",
      "control",   "regulate",   "govern",    "manage",     "maintain",  "sustain",    "preserve",  "conserve",
      "invest",    "spend",      "save",      "earn",       "pay",       "buy",        "sell",      "receive",
      "obtain",    "gain",       "lose",      "miss",       "choose",    "prefer",     "decide",    "plan",
      "intend",    "want",       "try",       "seek",       "access",    "apply",      "practice",  "practise",
      "diversify", "migrate",    "move",      "live",       "work",      "farm",       "plant",     "irrigate",
      "harvest",   "store",      "sell",      "share",      "learn",     "teach",      "inform",    "communicate",
      "participate", "engage",   "join",      "form",       "organize",  "organise",   "mobilize",  "empower",
      "compare",   "examine",    "analyze",   "analyse",    "estimate",  "measure",    "assess",    "evaluate",
      "test",      "identify",   "detect",    "collect",    "survey",    "interview",  "select",    "sample",
      "hypothesize", "propose",  "argue",     "note",       "highlight", "emphasize",  "underline", "stress",
      "explore",   "investigate", "describe", "present",    "discuss",   "conclude",   "recommend", "address",
      "say",       "get",        "go",        "come",       "see",       "think",      "feel",      "keep",
      "let",       "put",        "set",       "run",        "turn",      "bring",      "hold",      "stand",
      "pose",      "exert",      "yield",     "deliver",    "lift",      "cut",        "curb",      "ease",
      "compound",  "aggravate",  "intensify", "heighten",   "elevate",   "deter",      "prohibit",  "favor",
      "favour",    "hamper",     "jeopardize", "compromise", "outperform", "attenuate", "dampen",   "suppress",
      "counter",   "oppose",     "resist",    "reinforce",  "bolster",   "augment",    "magnify",   "deepen",
      "shorten",   "prolong",    "delay",     "postpone",   "hasten",    "speed",      "broaden",   "narrow",
      "widen",     "lengthen",   "predispose", "cause",     "affect",    "enhance",    "relate"};
  return s;
}

// Base-form verbs that are also ordinary nouns ("the increase", "an impact").
// Only these may be read as nouns after a determiner.
const std::unordered_map<std::string_view, std::string_view>& irregular_verbs() {
  static const std::unordered_map<std::string_view, std::string_view> m = {
      {"is", "be"},          {"am", "be"},           {"are", "be"},        {"was", "be"},       {"were", "be"},
      {"been", "be"},        {"being", "be"},        {"'s", "be"},         {"has", "have"},     {"had", "have"},
      {"having", "have"},    {"does", "do"},         {"did", "do"},        {"done", "do"},      {"doing", "do"},
      {"made", "make"},      {"took", "take"},       {"taken", "take"},    {"gave", "give"},    {"given", "give"},
      {"led", "lead"},       {"found", "find"},      {"shown", "show"},    {"showed", "show"},  {"grew", "grow"},
      {"grown", "grow"},     {"fell", "fall"},       {"fallen", "fall"},   {"rose", "rise"},    {"risen", "rise"},
      {"drove", "drive"},    {"driven", "drive"},    {"saw", "see"},       {"seen", "see"},     {"knew", "know"},
      {"known", "know"},     {"thought", "think"},   {"felt", "feel"},     {"kept", "keep"},    {"brought", "bring"},
      {"held", "hold"},      {"stood", "stand"},     {"got", "get"},       {"gotten", "get"},   {"went", "go"},
      {"gone", "go"},        {"came", "come"},       {"became", "become"}, {"began", "begin"},  {"begun", "begin"},
      {"chose", "choose"},   {"chosen", "choose"},   {"lost", "lose"},     {"spent", "spend"},  {"paid", "pay"},
      {"bought", "buy"},     {"sold", "sell"},       {"built", "build"},   {"said", "say"},     {"taught", "teach"},
      {"learnt", "learn"},   {"sought", "seek"},     {"spread", "spread"}, {"set", "set"},      {"put", "put"},
      {"cut", "cut"},        {"let", "let"},         {"ran", "run"},       {"meant", "mean"},   {"dealt", "deal"},
      {"understood", "understand"}, {"undertook", "undertake"}, {"undertaken", "undertake"}, {"wrote", "write"},
      {"written", "write"},  {"left", "leave"},      {"lay", "lie"},       {"lain", "lie"},     {"told", "tell"},
      {"won", "win"},        {"broke", "break"},     {"broken", "break"},  {"arose", "arise"},  {"arisen", "arise"},
      {"outweighed", "outweigh"}, {"offset", "offset"}};
  return m;
}

const std::unordered_map<std::string_view, std::string_view>& irregular_nouns() {
  static const std::unordered_map<std::string_view, std::string_view> m = {
      {"children", "child"}, {"men", "man"},         {"women", "woman"},   {"people", "people"},  {"feet", "foot"},
      {"teeth", "tooth"},    {"mice", "mouse"},      {"geese", "goose"},   {"data", "data"},      {"criteria", "criterion"},
      {"phenomena", "phenomenon"}, {"analyses", "analysis"}, {"hypotheses", "hypothesis"}, {"theses", "thesis"},
      {"crises", "crisis"},  {"bases", "basis"},     {"syntheses", "synthesis"}, {"diagnoses", "diagnosis"},
      {"species", "species"}, {"series", "series"},  {"news", "news"},     {"means", "means"},    {"livestock", "livestock"},
      {"lives", "life"},     {"wives", "wife"},      {"knives", "knife"},  {"leaves", "leaf"},    {"halves", "half"},
      {"selves", "self"},    {"indices", "index"},   {"matrices", "matrix"}, {"appendices", "appendix"},
      {"media", "media"},    {"economics", "economics"}, {"statistics", "statistics"}, {"politics", "politics"},
      {"mathematics", "mathematics"}, {"physics", "physics"}, {"ethics", "ethics"}, {"dynamics", "dynamics"},
      {"logistics", "logistics"}, {"genetics", "genetics"}, {"demographics", "demographics"},
      {"characteristics", "characteristic"}, {"lens", "lens"}, {"gas", "gas"}, {"bias", "bias"}};
  return m;
}

// ---------------------------------------------------------------------------
// Lemmatizer

bool is_consonant(char c) { return is_alpha(c) && !is_vowel(c); }

std::string lemma_noun(const std::string& w) {
  if (auto it = irregular_nouns().find(w); it != irregular_nouns().end()) return std::string(it->second);
  if (w.size() <= 3) return w;
  if (ends_with(w, "ss") || ends_with(w, "us") || ends_with(w, "is") || ends_with(w, "ous")) return w;
  if (ends_with(w, "ies") && w.size() > 4) return w.substr(0, w.size() - 3) + "y";
  if (ends_with(w, "sses") || ends_with(w, "shes") || ends_with(w, "ches") || ends_with(w, "xes") ||
      ends_with(w, "zes")) {
    return w.substr(0, w.size() - 2);
  }
  if (ends_with(w, "oes") && w.size() > 5) return w.substr(0, w.size() - 2);
  if (ends_with(w, "s")) return w.substr(0, w.size() - 1);
  return w;
}

// Whether a bare stem left by stripping -ed/-ing lost a silent final 'e'.
bool needs_final_e(const std::string& stem) {
  if (stem.size() < 2) return false;
  const char last = stem.back();
  const char prev = stem[stem.size() - 2];
  if (last == 'c' || last == 'v' || last == 'z' || last == 'u') return true;
  if (last == 's') return is_vowel(prev) && !ends_with(stem, "ous") && !ends_with(stem, "ss");
  if (last == 'l') return is_consonant(prev) && prev != 'l' && prev != 'r';
  if (ends_with(stem, "eat") || ends_with(stem, "oat") || ends_with(stem, "ait")) return false;
  if (ends_with(stem, "at") || ends_with(stem, "ut") || ends_with(stem, "ot") || ends_with(stem, "it")) {
    // "related", "contributed", "promoted", "united"; not "limited", "visited", "benefited"
    if (ends_with(stem, "it")) return ends_with(stem, "uit") || ends_with(stem, "nit");
    return true;
  }
  if (ends_with(stem, "ag") || ends_with(stem, "rg") || ends_with(stem, "dg") || ends_with(stem, "ng")) {
    return !ends_with(stem, "ing") && !ends_with(stem, "ong") && !ends_with(stem, "ang");
  }
  if (ends_with(stem, "ir") || ends_with(stem, "ur")) return !ends_with(stem, "air") && !ends_with(stem, "our");
  if (ends_with(stem, "ar")) return !ends_with(stem, "ear");
  if (ends_with(stem, "in")) return is_consonant(stem.size() >= 3 ? stem[stem.size() - 3] : 'a') && !ends_with(stem, "ain");
  if (ends_with(stem, "id")) return !ends_with(stem, "oid") && !ends_with(stem, "aid");
  if (ends_with(stem, "ud") || ends_with(stem, "od") || ends_with(stem, "ok") || ends_with(stem, "ib")) {
    return !ends_with(stem, "ook") && !ends_with(stem, "ood");
  }
  return false;
}

// Candidate base forms for an -ed / -ing stem, most likely first.
std::string pick_verb_stem(const std::string& stem) {
  const auto& lex = verb_lexicon();
  if (stem.empty()) return stem;
  if (lex.contains(stem + "e")) return stem + "e";
  if (lex.contains(stem)) return stem;
  if (stem.size() >= 3 && stem.back() == stem[stem.size() - 2] && is_consonant(stem.back())) {
    std::string single = stem.substr(0, stem.size() - 1);
    if (lex.contains(single)) return single;
    const char c = stem.back();
    if (c != 's' && c != 'l' && c != 'f' && c != 'z' && c != 'd') return single;
    if (c == 'l' && stem.size() >= 5) return single;  // controlled, labelled
    return stem;
  }
  if (needs_final_e(stem)) return stem + "e";
  return stem;
}

std::string lemma_verb(const std::string& w) {
  if (auto it = irregular_verbs().find(w); it != irregular_verbs().end()) return std::string(it->second);
  if (w == "n't") return "not";
  if (w.size() <= 3) return w;
  const auto& lex = verb_lexicon();
  if (lex.contains(w)) return w;
  if (ends_with(w, "ied") && w.size() > 4) return w.substr(0, w.size() - 3) + "y";
  if (ends_with(w, "ed")) return pick_verb_stem(w.substr(0, w.size() - 2));
  if (ends_with(w, "ying") && w.size() > 5) return w.substr(0, w.size() - 3);
  if (ends_with(w, "ing") && w.size() > 4) return pick_verb_stem(w.substr(0, w.size() - 3));
  if (ends_with(w, "ies") && w.size() > 4) return w.substr(0, w.size() - 3) + "y";
  if (ends_with(w, "es")) {
    std::string s1 = w.substr(0, w.size() - 1);
    std::string s2 = w.substr(0, w.size() - 2);
    if (lex.contains(s1)) return s1;
    if (lex.contains(s2)) return s2;
    if (ends_with(s2, "ss") || ends_with(s2, "sh") || ends_with(s2, "ch") || ends_with(s2, "x") || ends_with(s2, "zz") ||
        ends_with(s2, "o")) {
      return s2;
    }
    return s1;
  }
  if (ends_with(w, "s") && !ends_with(w, "ss")) return w.substr(0, w.size() - 1);
  return w;
}

std::string lemma_single(const std::string& w, Upos upos) {
  switch (upos) {
    case Upos::NOUN:
    case Upos::PROPN:
      return lemma_noun(w);
    case Upos::VERB:
    case Upos::AUX:
      return lemma_verb(w);
    case Upos::PART:
      return w == "n't" ? "not" : w;
    default:
      return w;
  }
}

// ---------------------------------------------------------------------------
// Tagging helpers

bool is_punct_token(std::string_view s) {
  for (char c : s) {
    if (is_alnum(c)) return false;
  }
  return !s.empty();
}

bool is_number_token(std::string_view s) {
  bool digit = false;
  for (char c : s) {
    if (is_digit(c)) {
      digit = true;
    } else if (c != '.' && c != ',' && c != '%') {
      return false;
    }
  }
  return digit;
}

bool adjective_by_suffix(const std::string& w) {
  if (suffix_exception_nouns().contains(w) || verb_lexicon().contains(w)) return false;
  const std::size_t n = w.size();
  if (n >= 6 && (ends_with(w, "al") || ends_with(w, "ous") || ends_with(w, "ful") || ends_with(w, "less") ||
                 ends_with(w, "able") || ends_with(w, "ible") || ends_with(w, "ary") || ends_with(w, "ish"))) {
    return true;
  }
  if (n >= 6 && ends_with(w, "ive")) return true;
  if (n >= 5 && ends_with(w, "ic")) return true;
  return false;
}

bool looks_past_participle(const std::string& w) {
  if (ends_with(w, "ed") && w.size() > 3) return true;
  static const WordSet participles = {"been",  "done",  "made",   "taken",  "given", "shown", "grown",  "fallen",
                                      "risen", "driven", "seen",  "known",  "found", "led",   "kept",   "brought",
                                      "held",  "got",   "gotten", "gone",   "come",  "become", "begun", "chosen",
                                      "lost",  "spent", "paid",   "bought", "sold",  "built", "said",   "taught",
                                      "sought", "spread", "set",  "put",    "cut",   "written", "left", "told",
                                      "won",   "broken", "arisen", "undertaken", "understood", "thought", "felt"};
  return participles.contains(w);
}

enum class VerbForm { none, base, third, past, gerund };

// Classifies `w` as a form of a lexicon verb.
VerbForm verb_form(const std::string& w) {
  const auto& lex = verb_lexicon();
  if (auto it = irregular_verbs().find(w); it != irregular_verbs().end()) {
    if (be_forms().contains(w) || have_forms().contains(w) || do_forms().contains(w)) return VerbForm::none;
    if (w == it->second) return VerbForm::base;
    return VerbForm::past;
  }
  if (lex.contains(w)) return VerbForm::base;
  if (w.size() <= 3) return VerbForm::none;
  const std::string lemma = lemma_verb(w);
  if (!lex.contains(lemma)) return VerbForm::none;
  if (ends_with(w, "ing")) return VerbForm::gerund;
  if (ends_with(w, "ed")) return VerbForm::past;
  if (ends_with(w, "s")) return VerbForm::third;
  return VerbForm::none;
}

// Open-class words outside the lexicon with productive verb suffixes.
bool verbish_suffix(const std::string& w) {
  return w.size() >= 6 && (ends_with(w, "ize") || ends_with(w, "ise") || ends_with(w, "ify") || ends_with(w, "ate"));
}

bool plural_like(const Token& t) {
  if (t.upos == Upos::OTHER) {
    static const WordSet plural_pronouns = {"we", "they", "i", "you", "who", "which", "that"};
    return plural_pronouns.contains(to_lower(t.surface));
  }
  if (t.upos != Upos::NOUN && t.upos != Upos::PROPN) return false;
  const std::string w = to_lower(t.surface);
  if (w == "people" || w == "children" || w == "women" || w == "men" || w == "livestock") return true;
  return ends_with(w, "s") && !ends_with(w, "ss") && !ends_with(w, "us") && !ends_with(w, "is") && w.size() > 3;
}

bool nominal(Upos u) { return u == Upos::NOUN || u == Upos::PROPN; }

// Pass-one tag: closed classes, numbers, punctuation, suffixes, noun default.
Upos lexical_tag(const std::string& w, const std::string& surface, bool sentence_initial) {
  if (is_punct_token(surface)) return Upos::PUNCT;
  if (is_number_token(surface) || number_words().contains(w)) return Upos::NUM;
  if (w == "n't" || w == "not") return Upos::PART;
  if (w == "to") return Upos::PART;
  if (w == "'s") return Upos::PART;
  if (determiners().contains(w)) return Upos::DET;
  if (pronouns().contains(w) || conjunctions().contains(w)) return Upos::OTHER;
  if (adpositions().contains(w)) return Upos::ADP;
  if (modals().contains(w) || be_forms().contains(w)) return Upos::AUX;
  if (do_forms().contains(w)) return Upos::AUX;
  if (have_forms().contains(w)) return Upos::VERB;
  if (adverbs().contains(w)) return Upos::ADV;
  if (adjectives().contains(w)) return Upos::ADJ;
  if (w.find('-') != std::string::npos) {
    const std::string last = w.substr(w.rfind('-') + 1);
    if (adjectives().contains(last) || adjective_by_suffix(last) || ends_with(last, "ed") || ends_with(last, "ing")) {
      return Upos::ADJ;
    }
    return (!sentence_initial && is_upper(surface[0])) ? Upos::PROPN : Upos::NOUN;
  }
  if (ends_with(w, "ly") && w.size() > 4 && !ends_with(w, "ily") && w != "family" && w != "supply" && w != "apply" &&
      w != "reply" && w != "rely" && w != "italy") {
    return Upos::ADV;
  }
  if (w == "family" || w == "supply") return Upos::NOUN;
  if (ends_with(w, "ily") && w.size() > 5 && w != "family") return Upos::ADV;
  if (adjective_by_suffix(w)) return Upos::ADJ;
  if (!sentence_initial && is_upper(surface[0])) return Upos::PROPN;
  bool all_caps = surface.size() >= 2;
  for (char c : surface) {
    if (is_alpha(c) && !is_upper(c)) all_caps = false;
  }
  if (all_caps) return Upos::PROPN;
  return Upos::NOUN;
}

bool is_negation(const Token& t) {
  const std::string w = to_lower(t.surface);
  return t.upos == Upos::PART && (w == "not" || w == "n't");
}

// The nearest left token that is not an adverb or negation, or nullptr.
const Token* left_context(const std::vector<Token>& out, std::size_t i) {
  for (std::size_t k = i; k-- > 0;) {
    if (out[k].upos != Upos::ADV && !is_negation(out[k])) return &out[k];
  }
  return nullptr;
}

// True when a main verb already occurs earlier in the clause containing token
// i, i.e. before any punctuation, pronoun or conjunction. Nouns in an object
// phrase ("affects crop yields") then stay nouns.
bool clause_has_verb(const std::vector<Token>& out, std::size_t i) {
  for (std::size_t k = i; k-- > 0;) {
    const Upos u = out[k].upos;
    if (u == Upos::VERB) return true;
    if (u == Upos::PUNCT || u == Upos::OTHER) return false;
  }
  return false;
}

bool is_be_or_have(const Token& t) {
  const std::string w = to_lower(t.surface);
  return be_forms().contains(w) || have_forms().contains(w);
}

}  // namespace

// ---------------------------------------------------------------------------

std::string_view to_string(Upos u) { return kUposNames[static_cast<std::size_t>(u)]; }

std::optional<Upos> upos_from_string(std::string_view s) {
  for (std::size_t i = 0; i < kUposNames.size(); ++i) {
    if (kUposNames[i] == s) return static_cast<Upos>(i);
  }
  if (s == "PRON" || s == "CCONJ" || s == "SCONJ" || s == "INTJ" || s == "SYM" || s == "X" || s == "CONJ") {
    return Upos::OTHER;
  }
  return std::nullopt;
}

void to_json(nlohmann::json& j, const Token& t) {
  j = nlohmann::json{{"surface", t.surface}, {"lemma", t.lemma}, {"upos", to_string(t.upos)},
                     {"start", t.start},     {"end", t.end}};
}

void from_json(const nlohmann::json& j, Token& t) {
  t.surface = j.at("surface").get<std::string>();
  t.lemma = j.at("lemma").get<std::string>();
  auto u = upos_from_string(j.at("upos").get<std::string>());
  if (!u) throw Error(ErrorCode::ParseError, "bad upos " + j.at("upos").dump());
  t.upos = *u;
  t.start = j.at("start").get<std::size_t>();
  t.end = j.at("end").get<std::size_t>();
}

void to_json(nlohmann::json& j, const SentenceRecord& s) {
  j = nlohmann::json{{"doc_id", s.doc_id},
                     {"section_tag", textprep::to_string(s.section_tag)},
                     {"sent_index", s.sent_index},
                     {"text", s.text},
                     {"tokens", s.tokens}};
}

void from_json(const nlohmann::json& j, SentenceRecord& s) {
  s.doc_id = j.at("doc_id").get<std::string>();
  auto sec = textprep::section_from_string(j.at("section_tag").get<std::string>());
  if (!sec) throw Error(ErrorCode::ParseError, "bad section_tag " + j.at("section_tag").dump());
  s.section_tag = *sec;
  s.sent_index = j.at("sent_index").get<std::size_t>();
  s.text = j.at("text").get<std::string>();
  s.tokens = j.at("tokens").get<std::vector<Token>>();
}

// ---------------------------------------------------------------------------

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> out;
  auto emit = [&](std::size_t b, std::size_t e) {
    std::string s = collapse_whitespace(text.substr(b, e - b));
    if (!s.empty()) out.push_back(std::move(s));
  };

  std::size_t start = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t after = 0;
    if (blank_line_at(text, i, after)) {
      emit(start, i);
      start = i = after;
      continue;
    }
    const char c = text[i];
    if (c != '.' && c != '!' && c != '?') {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j < text.size() && (text[j] == ')' || text[j] == ']' || text[j] == '"' || text[j] == '\'')) ++j;
    if (j >= text.size()) break;
    if (!is_space(text[j])) {
      i = j;
      continue;
    }
    std::size_t k = j;
    while (k < text.size() && is_space(text[k])) ++k;
    if (k >= text.size()) break;
    std::size_t probe = k;
    while (probe < text.size() && (text[probe] == '(' || text[probe] == '"' || text[probe] == '[' ||
                                   text[probe] == '\'')) {
      ++probe;
    }
    const bool next_ok = probe < text.size() && (is_upper(text[probe]) || is_digit(text[probe]));
    if (next_ok && !(c == '.' && guarded_period(text, i))) {
      emit(start, j);
      start = k;
      i = k;
      continue;
    }
    i = j;
  }
  if (start < text.size()) emit(start, text.size());
  return out;
}

std::vector<TokenSpan> tokenize(std::string_view s) {
  std::vector<TokenSpan> out;
  std::size_t i = 0;
  const std::size_t n = s.size();
  auto push = [&](std::size_t b, std::size_t e) { out.push_back({std::string(s.substr(b, e - b)), b, e}); };

  while (i < n) {
    if (is_space(s[i])) {
      ++i;
      continue;
    }
    const unsigned char uc = static_cast<unsigned char>(s[i]);
    if (is_alnum(s[i]) || uc >= 0x80) {
      std::size_t b = i;
      while (i < n) {
        const unsigned char ch = static_cast<unsigned char>(s[i]);
        if (is_alnum(s[i]) || ch >= 0x80) {
          ++i;
          continue;
        }
        const bool next_alnum = i + 1 < n && is_alnum(s[i + 1]);
        if (s[i] == '-' && next_alnum && i > b) {
          ++i;
          continue;
        }
        if ((s[i] == '.' || s[i] == ',') && i > b && is_digit(s[i - 1]) && i + 1 < n && is_digit(s[i + 1])) {
          ++i;
          continue;
        }
        if (s[i] == '\'' && i + 1 < n && is_alpha(s[i + 1])) {
          const bool clitic_s = (s[i + 1] == 's' || s[i + 1] == 'S') && (i + 2 >= n || !is_alnum(s[i + 2]));
          const bool clitic_nt = (s[i + 1] == 't' || s[i + 1] == 'T') && i - b >= 2 &&
                                 (s[i - 1] == 'n' || s[i - 1] == 'N') && (i + 2 >= n || !is_alnum(s[i + 2]));
          if (clitic_s) break;
          if (clitic_nt) {
            --i;  // "don't" -> "do" "n't"
            break;
          }
          ++i;
          continue;
        }
        break;
      }
      push(b, i);
      if (i + 2 <= n && s[i] == '\'' && (s[i + 1] == 's' || s[i + 1] == 'S')) {
        push(i, i + 2);
        i += 2;
      } else if (i + 3 <= n && (s[i] == 'n' || s[i] == 'N') && s[i + 1] == '\'' && (s[i + 2] == 't' || s[i + 2] == 'T')) {
        push(i, i + 3);
        i += 3;
      }
      continue;
    }
    push(i, i + 1);
    ++i;
  }
  return out;
}

std::string lemmatize(std::string_view word, Upos upos) {
  const std::string w = to_lower(word);
  if (upos == Upos::PUNCT || upos == Upos::NUM) return w;
  const auto dash = w.rfind('-');
  if (dash != std::string::npos && dash + 1 < w.size() && dash > 0) {
    return w.substr(0, dash + 1) + lemma_single(w.substr(dash + 1), upos);
  }
  return lemma_single(w, upos);
}

// ---------------------------------------------------------------------------

std::vector<Token> BuiltinTagger::tag(const std::vector<TokenSpan>& spans) {
  std::vector<Token> out;
  out.reserve(spans.size());
  for (std::size_t i = 0; i < spans.size(); ++i) {
    const std::string w = to_lower(spans[i].surface);
    Token t;
    t.surface = spans[i].surface;
    t.start = spans[i].start;
    t.end = spans[i].end;
    t.upos = lexical_tag(w, spans[i].surface, i == 0);
    out.push_back(std::move(t));
  }

  // Pass two, left to right: resolve verb-capable words, "to", have/do, and 's
  // from context already settled on the left and pass-one tags on the right.
  for (std::size_t i = 0; i < out.size(); ++i) {
    Token& t = out[i];
    const std::string w = to_lower(t.surface);
    const Token* prev = left_context(out, i);
    const Token* next = i + 1 < out.size() ? &out[i + 1] : nullptr;
    const std::string prev_w = prev ? to_lower(prev->surface) : std::string();

    if (w == "to") {
      t.upos = (next && (verb_form(to_lower(next->surface)) == VerbForm::base || next->upos == Upos::AUX))
                   ? Upos::PART
                   : Upos::ADP;
      continue;
    }
    if (w == "'s") {
      t.upos = (prev && nominal(prev->upos)) ? Upos::PART : Upos::AUX;
      continue;
    }
    if (have_forms().contains(w) || do_forms().contains(w)) {
      std::size_t k = i + 1;
      while (k < out.size() && (out[k].upos == Upos::ADV || out[k].upos == Upos::PART)) ++k;
      const std::string nw = k < out.size() ? to_lower(out[k].surface) : std::string();
      if (have_forms().contains(w)) {
        t.upos = (!nw.empty() && looks_past_participle(nw)) ? Upos::AUX : Upos::VERB;
      } else {
        t.upos = (!nw.empty() && verb_form(nw) == VerbForm::base) ? Upos::AUX : Upos::VERB;
      }
      continue;
    }
    if (t.upos != Upos::NOUN && t.upos != Upos::ADJ && t.upos != Upos::PROPN) continue;
    if (t.upos == Upos::PROPN) continue;

    VerbForm form = verb_form(w);
    const bool unknown = form == VerbForm::none;
    if (unknown) {
      if (t.upos == Upos::ADJ) continue;
      if (verbish_suffix(w)) form = VerbForm::base;
      else if (ends_with(w, "izes") || ends_with(w, "ises") || ends_with(w, "ifies") || ends_with(w, "ates"))
        form = VerbForm::third;
      else if (ends_with(w, "ed") && w.size() > 4) form = VerbForm::past;
      else if (ends_with(w, "ing") && w.size() > 5) form = VerbForm::gerund;
      else continue;
    }
    if (t.upos == Upos::ADJ && form != VerbForm::past && form != VerbForm::gerund) continue;

    const Upos pu = prev ? prev->upos : Upos::PUNCT;
    const bool after_nominal_head = prev && (nominal(pu) || pu == Upos::OTHER || pu == Upos::NUM);
    const bool after_modifier = prev && (pu == Upos::DET || pu == Upos::ADJ || pu == Upos::ADP);
    const bool next_content = next && (nominal(next->upos) || next->upos == Upos::DET || next->upos == Upos::ADJ ||
                                       next->upos == Upos::NUM || next->upos == Upos::ADV);

    const bool in_object = clause_has_verb(out, i) && pu != Upos::OTHER;

    switch (form) {
      case VerbForm::third:
        if (in_object) break;
        if (after_nominal_head && (!unknown || next_content)) t.upos = Upos::VERB;
        else if (pu == Upos::PUNCT && prev && next_content && !unknown) t.upos = Upos::VERB;
        break;
      case VerbForm::base:
        if (prev && (pu == Upos::AUX || (pu == Upos::PART && prev_w == "to"))) {
          t.upos = Upos::VERB;
        } else if (in_object) {
          break;
        } else if (prev && plural_like(*prev) && (!unknown || next_content)) {
          t.upos = Upos::VERB;
        } else if (prev && pu == Upos::OTHER && (!unknown || next_content)) {
          t.upos = Upos::VERB;
        }
        break;
      case VerbForm::past:
        if (prev && (pu == Upos::AUX || is_be_or_have(*prev))) t.upos = Upos::VERB;
        else if (after_nominal_head && (!unknown || next_content || (next && next->upos == Upos::ADP)))
          t.upos = Upos::VERB;
        else if (after_modifier || !prev) t.upos = Upos::ADJ;
        break;
      case VerbForm::gerund:
        if (prev && (pu == Upos::AUX || pu == Upos::ADP || nominal(pu) || pu == Upos::OTHER)) t.upos = Upos::VERB;
        else if (!prev) t.upos = Upos::VERB;
        else if (after_modifier && next && nominal(next->upos)) t.upos = Upos::ADJ;
        break;
      case VerbForm::none:
        break;
    }
  }

  for (Token& t : out) t.lemma = lemmatize(t.surface, t.upos);
  return out;
}

// ---------------------------------------------------------------------------

struct ExternalTagger::Process {
  pid_t pid = -1;
  int to_child = -1;
  FILE* from_child = nullptr;

  ~Process() {
    if (to_child >= 0) ::close(to_child);
    if (from_child) std::fclose(from_child);
    if (pid > 0) {
      int status = 0;
      ::waitpid(pid, &status, 0);
    }
  }
};

ExternalTagger::ExternalTagger(std::string command) : command_(std::move(command)) {
  if (command_.empty()) throw Error(ErrorCode::TaggerUnavailable, "empty tagger command");
  // A dead child must surface as an error on write, not a fatal signal.
  ::signal(SIGPIPE, SIG_IGN);

  int in_pipe[2];
  int out_pipe[2];
  if (::pipe(in_pipe) != 0) throw Error(ErrorCode::TaggerUnavailable, std::strerror(errno));
  if (::pipe(out_pipe) != 0) {
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    throw Error(ErrorCode::TaggerUnavailable, std::strerror(errno));
  }
  const pid_t pid = ::fork();
  if (pid < 0) {
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) ::close(fd);
    throw Error(ErrorCode::TaggerUnavailable, std::strerror(errno));
  }
  if (pid == 0) {
    ::dup2(in_pipe[0], STDIN_FILENO);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) ::close(fd);
    ::execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  proc_ = std::make_unique<Process>();
  proc_->pid = pid;
  proc_->to_child = in_pipe[1];
  proc_->from_child = ::fdopen(out_pipe[0], "r");
  if (!proc_->from_child) {
    ::close(out_pipe[0]);
    throw Error(ErrorCode::TaggerUnavailable, "fdopen failed");
  }
}

ExternalTagger::~ExternalTagger() = default;

std::vector<Token> ExternalTagger::tag(const std::vector<TokenSpan>& spans) {
  if (!proc_) throw Error(ErrorCode::TaggerUnavailable, "tagger process not running");
  nlohmann::json req = nlohmann::json::array();
  for (const auto& s : spans) req.push_back(s.surface);
  std::string line = req.dump() + "\n";

  std::size_t off = 0;
  while (off < line.size()) {
    const ssize_t n = ::write(proc_->to_child, line.data() + off, line.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      proc_.reset();
      throw Error(ErrorCode::TaggerUnavailable, "tagger '" + command_ + "' closed its input");
    }
    off += static_cast<std::size_t>(n);
  }

  std::string reply;
  char buf[4096];
  bool got_newline = false;
  while (std::fgets(buf, sizeof buf, proc_->from_child)) {
    reply += buf;
    if (!reply.empty() && reply.back() == '\n') {
      got_newline = true;
      break;
    }
  }
  if (!got_newline && reply.empty()) {
    proc_.reset();
    throw Error(ErrorCode::TaggerUnavailable, "tagger '" + command_ + "' produced no response");
  }

  auto violation = [&](const std::string& why) {
    return Error(ErrorCode::TaggerUnavailable, "tagger schema violation: " + why);
  };
  nlohmann::json resp;
  try {
    resp = nlohmann::json::parse(reply);
  } catch (const nlohmann::json::exception&) {
    throw violation("response is not JSON");
  }
  if (!resp.is_array() || resp.size() != spans.size()) throw violation("expected an array of " + std::to_string(spans.size()));
  std::vector<Token> out;
  out.reserve(spans.size());
  for (std::size_t i = 0; i < spans.size(); ++i) {
    const auto& o = resp[i];
    if (!o.is_object() || !o.contains("surface") || !o.contains("lemma") || !o.contains("upos") ||
        !o["surface"].is_string() || !o["lemma"].is_string() || !o["upos"].is_string()) {
      throw violation("element " + std::to_string(i) + " lacks surface/lemma/upos");
    }
    if (o["surface"].get<std::string>() != spans[i].surface) throw violation("surface mismatch at " + std::to_string(i));
    auto u = upos_from_string(o["upos"].get<std::string>());
    if (!u) throw violation("unknown upos " + o["upos"].dump());
    std::string lemma = to_lower(o["lemma"].get<std::string>());
    if (lemma.empty()) throw violation("empty lemma at " + std::to_string(i));
    out.push_back(Token{spans[i].surface, std::move(lemma), *u, spans[i].start, spans[i].end});
  }
  return out;
}

std::unique_ptr<Tagger> make_tagger(std::string_view kind, const std::string& command) {
  if (kind.empty() || kind == "builtin") return std::make_unique<BuiltinTagger>();
  if (kind == "external") return std::make_unique<ExternalTagger>(command);
  throw Error(ErrorCode::ConfigError, "unknown tagger kind '" + std::string(kind) + "'");
}

std::vector<SentenceRecord> tag_section(const std::string& doc_id, textprep::Section section, std::string_view text,
                                        Tagger& tagger) {
  std::vector<SentenceRecord> out;
  for (auto& s : split_sentences(text)) {
    SentenceRecord rec;
    rec.doc_id = doc_id;
    rec.section_tag = section;
    rec.sent_index = out.size();
    rec.tokens = tagger.tag(tokenize(s));
    rec.text = std::move(s);
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace litnet::nlp
