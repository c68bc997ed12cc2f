#include <doctest.h>
#include <nlohmann/json.hpp>

#include <random>

#include "litnet/error.hpp"
#include "litnet/nlp.hpp"
#include "litnet/relex.hpp"
#include "litnet/util.hpp"
#include "tempdir.hpp"

using namespace litnet;
using namespace litnet::relex;
using verblex::Sign;

namespace {

nlp::SentenceRecord sentence(const std::string& text, const std::string& doc = "d1", std::size_t idx = 0) {
  nlp::BuiltinTagger t;
  auto s = nlp::tag_section(doc, textprep::Section::results, text, t).at(0);
  s.sent_index = idx;
  return s;
}

using Triple = std::tuple<std::string, Sign, std::string>;

std::vector<Triple> triples(const std::string& text, const RelexOptions& opts = {},
                            const verblex::VerbDictionary& dict = verblex::VerbDictionary::seed()) {
  std::vector<Triple> out;
  for (const auto& t : extract_relations(sentence(text), dict, opts)) out.emplace_back(t.source_label, t.sign, t.target_label);
  return out;
}

}  // namespace

TEST_SUITE("relex") {
  TEST_CASE("phrases around the verb") {
    const PhraseRule rule;
    auto s = sentence("Information increases awareness.");
    auto m = extract_phrases(s.tokens, 1, rule);
    REQUIRE(m);
    CHECK(m->source_label == "information");
    CHECK(m->target_label == "awareness");

    s = sentence("Access to credit strongly reduces vulnerability.");
    m = extract_phrases(s.tokens, 4, rule);
    REQUIRE(m);
    CHECK(m->source_label == "credit");
    CHECK(m->target_label == "vulnerability");

    s = sentence("It increases.");
    CHECK_FALSE(extract_phrases(s.tokens, 1, rule).has_value());
  }

  TEST_CASE("phrase length and gap limits") {
    PhraseRule rule;
    rule.max_phrase_len = 2;
    auto s = sentence("Rural household farm income increases local food market prices.");
    auto m = extract_phrases(s.tokens, 4, rule);
    REQUIRE(m);
    CHECK(m->source_label == "farm income");
    CHECK(m->target_label == "local food");

    PhraseRule tight;
    tight.gap = 0;
    s = sentence("Access to credit strongly reduces vulnerability.");
    CHECK_FALSE(extract_phrases(s.tokens, 4, tight).has_value());
  }

  TEST_CASE("source precedes and target follows the verb") {
    const std::vector<nlp::Upos> pos = {nlp::Upos::NOUN, nlp::Upos::ADJ, nlp::Upos::PROPN, nlp::Upos::DET,
                                        nlp::Upos::ADP,  nlp::Upos::ADV, nlp::Upos::VERB,  nlp::Upos::OTHER,
                                        nlp::Upos::PUNCT};
    std::mt19937_64 rng(5);
    const PhraseRule rule;
    for (int round = 0; round < 2000; ++round) {
      std::vector<nlp::Token> toks;
      const std::size_t n = 2 + rng() % 12;
      for (std::size_t i = 0; i < n; ++i) {
        const auto u = pos[rng() % pos.size()];
        const std::string w = "w" + std::to_string(rng() % 5);
        toks.push_back({w, w, u, i * 3, i * 3 + 2});
      }
      const std::size_t v = rng() % n;
      toks[v].upos = nlp::Upos::VERB;
      if (auto m = extract_phrases(toks, v, rule)) {
        CHECK(m->source_end <= v);
        CHECK(m->target_begin > v);
        CHECK(m->source_begin < m->source_end);
        CHECK(m->target_begin < m->target_end);
        CHECK(m->source_end - m->source_begin <= rule.max_phrase_len);
        CHECK(!m->source_label.empty());
        CHECK(!m->target_label.empty());
      }
    }
  }

  TEST_CASE("signed triples from classified verbs") {
    CHECK(triples("Information increases awareness.") == std::vector<Triple>{{"information", Sign::positive, "awareness"}});
    CHECK(triples("Education has a positive correlation with adaptation.") ==
          std::vector<Triple>{{"education", Sign::positive, "adaptation"}});
    CHECK(triples("Farmers adopt new practices.").empty());
    CHECK(triples("Age reduces uptake and improves caution.") ==
          std::vector<Triple>{{"age", Sign::negative, "uptake"}, {"uptake", Sign::positive, "caution"}});
    CHECK(triples("Social capital is associated with collective action.") ==
          std::vector<Triple>{{"social capital", Sign::neutral, "collective action"}});
    CHECK(triples("Policies have implications for welfare.") ==
          std::vector<Triple>{{"policy", Sign::neutral, "implication"}});
  }

  TEST_CASE("unclassified verbs and drop fallback") {
    auto dict = verblex::VerbDictionary::seed();
    dict.add_unclassified("summarize", "t");
    CHECK(triples("Table 2 summarizes the estimates.", {}, dict).empty());
    RelexOptions drop;
    drop.depend_fallback = DependFallback::drop;
    CHECK(triples("Policies have implications for welfare.", drop).empty());
    CHECK(triples("Education has a positive correlation with adaptation.", drop).size() == 1);
  }

  TEST_CASE("negation flag") {
    CHECK(triples("Irrigation does not increase yields.") ==
          std::vector<Triple>{{"irrigation", Sign::positive, "yield"}});
    RelexOptions neg;
    neg.negation = true;
    CHECK(triples("Irrigation does not increase yields.", neg) ==
          std::vector<Triple>{{"irrigation", Sign::negative, "yield"}});
  }

  TEST_CASE("aliases merge labels") {
    testing::TempDir dir;
    write_file_atomic(dir / "aliases.tsv", "# alias\tcanonical\nadaptation climate change\tclimate change adaptation\n");
    RelexOptions opts;
    opts.aliases = load_alias_table(dir / "aliases.tsv");
    CHECK(opts.aliases.at("adaptation climate change") == "climate change adaptation");
    opts.aliases["information"] = "info";
    CHECK(triples("Information increases awareness.", opts) == std::vector<Triple>{{"info", Sign::positive, "awareness"}});
  }

  TEST_CASE("provenance fields") {
    const auto t = extract_relations(sentence("Clearly, information increases awareness.", "doc9", 4),
                                     verblex::VerbDictionary::seed());
    REQUIRE(t.size() == 1);
    CHECK(t[0].doc_id == "doc9");
    CHECK(t[0].sent_index == 4);
    CHECK(t[0].section_tag == textprep::Section::results);
    CHECK(t[0].verb_lemma == "increase");
    CHECK(t[0].sentence_text.substr(t[0].span_start, t[0].span_end - t[0].span_start) ==
          "information increases awareness");
    const nlohmann::json j = t[0];
    CHECK(j.get<RelationTriple>() == t[0]);
  }

  TEST_CASE("dedup") {
    auto a = extract_relations(sentence("Information increases awareness.", "d1", 0), verblex::VerbDictionary::seed());
    auto b = extract_relations(sentence("Information  increases awareness.", "d1", 7), verblex::VerbDictionary::seed());
    auto c = extract_relations(sentence("Information increases awareness strongly.", "d1", 8),
                               verblex::VerbDictionary::seed());
    std::vector<RelationTriple> all = a;
    all.insert(all.end(), b.begin(), b.end());
    all.insert(all.end(), c.begin(), c.end());
    const auto d = dedup_relations(all);
    REQUIRE(d.size() == 2);
    CHECK(d[0].sent_index == 0);
    CHECK(d[1].sent_index == 8);
    CHECK(dedup_relations({}).empty());
  }

  TEST_CASE("relations file round trip") {
    testing::TempDir dir;
    const auto t = extract_relations(sentence("Age reduces uptake and improves caution."), verblex::VerbDictionary::seed());
    save_relations(dir / "relations.jsonl", t);
    CHECK(load_relations(dir / "relations.jsonl") == t);
    try {
      load_relations(dir / "missing.jsonl");
      FAIL("expected MissingPriorStage");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::MissingPriorStage);
    }
    write_file_atomic(dir / "bad.jsonl", "{not json}\n");
    CHECK_THROWS_AS(load_relations(dir / "bad.jsonl"), Error);
  }

  TEST_CASE("phrase rule validation") {
    PhraseRule r;
    r.skip_pos.insert(nlp::Upos::NOUN);
    CHECK_THROWS_AS(r.validate(), Error);
    PhraseRule z;
    z.max_phrase_len = 0;
    CHECK_THROWS_AS(z.validate(), Error);
  }
}
