#include <doctest.h>
#include <nlohmann/json.hpp>

#include <sstream>

#include "litnet/error.hpp"
#include "litnet/nlp.hpp"
#include "litnet/util.hpp"

using namespace litnet;
using namespace litnet::nlp;

namespace {

const std::filesystem::path kFixtures = LITNET_FIXTURES;
const std::string kTagger = std::string(LITNET_FIXTURES) + "/../support/lookup_tagger.py";

struct GoldSentence {
  std::string text;
  std::vector<std::string> surfaces;
  std::vector<std::string> tags;
};

std::vector<GoldSentence> load_gold() {
  std::vector<GoldSentence> out;
  GoldSentence cur;
  auto flush = [&] {
    if (!cur.surfaces.empty()) out.push_back(cur);
    cur = {};
  };
  std::istringstream in(read_file(kFixtures / "gold_pos.tsv"));
  std::string line;
  while (std::getline(in, line)) {
    if (line.starts_with("#")) continue;
    if (line.empty()) {
      flush();
      continue;
    }
    const auto cols = split(line, '\t');
    const std::string& s = cols.at(0);
    const bool attach = s == "." || s == "," || s == "'s" || s == "n't";
    if (!cur.text.empty() && !attach) cur.text += ' ';
    cur.text += s;
    cur.surfaces.push_back(s);
    cur.tags.push_back(cols.at(1));
  }
  flush();
  return out;
}

std::vector<std::string> surfaces(const std::vector<TokenSpan>& spans) {
  std::vector<std::string> out;
  for (const auto& s : spans) out.push_back(s.surface);
  return out;
}

std::string gold_to_tagset(const std::string& ud) {
  auto u = upos_from_string(ud);
  REQUIRE(u.has_value());
  return std::string(to_string(*u));
}

std::vector<Token> tag_text(Tagger& t, const std::string& s) { return t.tag(tokenize(s)); }

}  // namespace

TEST_SUITE("nlp") {
  TEST_CASE("sentence splitting") {
    CHECK(split_sentences("A rises. B falls.") == std::vector<std::string>{"A rises.", "B falls."});
    CHECK(split_sentences("See Fig. 2 for details.") == std::vector<std::string>{"See Fig. 2 for details."});
    CHECK(split_sentences("p = 0.05 was used. Next.") == std::vector<std::string>{"p = 0.05 was used.", "Next."});
    CHECK(split_sentences("Smith et al. found it. Then J. Doe agreed.") ==
          std::vector<std::string>{"Smith et al. found it.", "Then J. Doe agreed."});
    CHECK(split_sentences("Heading\n\nBody text") == std::vector<std::string>{"Heading", "Body text"});
    CHECK(split_sentences("It rose (see below). Then it fell.") ==
          std::vector<std::string>{"It rose (see below).", "Then it fell."});
    CHECK(split_sentences("").empty());
  }

  TEST_CASE("tokenization") {
    CHECK(surfaces(tokenize("climate-change adaptation")) == std::vector<std::string>{"climate-change", "adaptation"});
    CHECK(surfaces(tokenize("rises.")) == std::vector<std::string>{"rises", "."});
    CHECK(tokenize("").empty());
    CHECK(surfaces(tokenize("Yields fell 3.5% in 2,019 plots")) ==
          std::vector<std::string>{"Yields", "fell", "3.5", "%", "in", "2,019", "plots"});
    CHECK(surfaces(tokenize("Farmers don't use women's land")) ==
          std::vector<std::string>{"Farmers", "do", "n't", "use", "women", "'s", "land"});
    const auto spans = tokenize("Information increases awareness.");
    CHECK(spans[1].start == 12);
    CHECK(spans[1].end == 21);
  }

  TEST_CASE("lemmas") {
    CHECK(lemmatize("farmers", Upos::NOUN) == "farmer");
    CHECK(lemmatize("increases", Upos::VERB) == "increase");
    CHECK(lemmatize("summarizes", Upos::VERB) == "summarize");
    CHECK(lemmatize("studies", Upos::NOUN) == "study");
    CHECK(lemmatize("women", Upos::NOUN) == "woman");
    CHECK(lemmatize("associated", Upos::VERB) == "associate");
    CHECK(lemmatize("reducing", Upos::VERB) == "reduce");
    CHECK(lemmatize("constrained", Upos::VERB) == "constrain");
    CHECK(lemmatize("was", Upos::AUX) == "be");
    CHECK(lemmatize("climate-change", Upos::NOUN) == "climate-change");
    CHECK(lemmatize("Climate", Upos::NOUN) == "climate");
  }

  TEST_CASE("single-word tags") {
    BuiltinTagger t;
    const auto farmers = t.tag(tokenize("farmers"));
    CHECK(farmers[0].lemma == "farmer");
    CHECK(farmers[0].upos == Upos::NOUN);
    const auto inc = tag_text(t, "Information increases");
    CHECK(inc[1].lemma == "increase");
    CHECK(inc[1].upos == Upos::VERB);
  }

  TEST_CASE("builtin tagger against the gold fixture") {
    BuiltinTagger t;
    const auto gold = load_gold();
    REQUIRE(gold.size() >= 20);
    std::size_t total = 0, correct = 0;
    for (const auto& g : gold) {
      const auto spans = tokenize(g.text);
      REQUIRE(surfaces(spans) == g.surfaces);
      const auto tags = t.tag(spans);
      for (std::size_t i = 0; i < tags.size(); ++i) {
        ++total;
        if (std::string(to_string(tags[i].upos)) == gold_to_tagset(g.tags[i])) ++correct;
      }
    }
    const double accuracy = static_cast<double>(correct) / static_cast<double>(total);
    MESSAGE("builtin tagger accuracy on gold: " << correct << "/" << total);
    CHECK(accuracy >= 0.93);

    const auto first = t.tag(tokenize(gold[0].text));
    std::vector<std::string> got;
    for (const auto& tok : first) got.push_back(std::string(to_string(tok.upos)));
    CHECK(got == std::vector<std::string>{"NOUN", "VERB", "NOUN", "PUNCT"});
  }

  TEST_CASE("verbs in context") {
    BuiltinTagger t;
    auto check_verb = [&](const std::string& text, std::size_t i, Upos want, const std::string& lemma) {
      const auto toks = tag_text(t, text);
      REQUIRE(toks.size() > i);
      CHECK_MESSAGE(toks[i].upos == want, text << " token " << toks[i].surface);
      CHECK(toks[i].lemma == lemma);
    };
    check_verb("Climate change affects crop yields.", 4, Upos::NOUN, "yield");
    check_verb("Farmers don't use credit.", 3, Upos::VERB, "use");
    check_verb("Yield is positively associated with rainfall.", 3, Upos::VERB, "associate");
    check_verb("Access to credit strongly reduces vulnerability.", 4, Upos::VERB, "reduce");
    check_verb("Households were more likely to adopt irrigation.", 5, Upos::VERB, "adopt");
  }

  TEST_CASE("tag_section numbers sentences and keeps offsets") {
    BuiltinTagger t;
    const auto s = tag_section("d1", textprep::Section::results, "A rises. Information increases awareness.", t);
    REQUIRE(s.size() == 2);
    CHECK(s[1].sent_index == 1);
    CHECK(s[1].doc_id == "d1");
    CHECK(s[1].text == "Information increases awareness.");
    for (const auto& tok : s[1].tokens) CHECK(s[1].text.substr(tok.start, tok.end - tok.start) == tok.surface);
    const nlohmann::json j = s[1];
    CHECK(j.get<SentenceRecord>().tokens == s[1].tokens);
  }

  TEST_CASE("external tagger adapter") {
    const std::string gold = (kFixtures / "gold_pos.tsv").string();
    auto tagger = make_tagger("external", "python3 " + kTagger + " " + gold);
    const auto toks = tag_text(*tagger, "Information increases awareness.");
    REQUIRE(toks.size() == 4);
    CHECK(toks[1].upos == Upos::VERB);
    CHECK(toks[1].lemma == "increases");
    CHECK(toks[1].start == 12);
    // The same process serves further sentences.
    CHECK(tag_text(*tagger, "Age reduces uptake.").size() == 4);
  }

  TEST_CASE("external tagger failures") {
    const std::string gold = (kFixtures / "gold_pos.tsv").string();
    auto expect_unavailable = [](const std::string& cmd) {
      try {
        auto t = make_tagger("external", cmd);
        t->tag(tokenize("Information increases awareness."));
        FAIL("expected TaggerUnavailable");
      } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::TaggerUnavailable);
      }
    };
    expect_unavailable("python3 " + kTagger + " " + gold + " --short");
    expect_unavailable("python3 " + kTagger + " " + gold + " --exit");
    expect_unavailable("/nonexistent/tagger-binary");
    CHECK_THROWS_AS(make_tagger("spacy", ""), Error);
  }
}
