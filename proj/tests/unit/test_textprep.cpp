#include <doctest.h>
#include <nlohmann/json.hpp>

#include <random>

#include "litnet/error.hpp"
#include "litnet/textprep.hpp"
#include "litnet/util.hpp"
#include "tempdir.hpp"

using namespace litnet;
using namespace litnet::textprep;

TEST_SUITE("textprep") {
  TEST_CASE("citations are removed") {
    CHECK(normalize_text("Climate risk (Smith, 2019) rises") == "Climate risk rises");
    CHECK(normalize_text("Smith et al. (2005) found X") == "found X");
    CHECK(normalize_text("Yields fall (Smith et al., 2019) in drought") == "Yields fall in drought");
    CHECK(normalize_text("Risk (Smith, 2019–2020) rises") == "Risk rises");
  }

  TEST_CASE("URLs go first, then non-ASCII is folded") {
    CHECK(normalize_text("café http://x.y z") == "cafe z");
    CHECK(normalize_text("see www.example.org/page now") == "see now");
    CHECK(fold_to_ascii("São Paulo – ﬁeld") == "Sao Paulo - field");
  }

  TEST_CASE("whitespace collapses but paragraph breaks survive") {
    CHECK(normalize_text("a  b\t c\n\n\n d") == "a b c\n\nd");
  }

  TEST_CASE("normalization is idempotent and ASCII-only") {
    const std::vector<std::string> pieces = {"Climate", " ", "\n", "\n\n", "(Smith, 2019)", "Smith et al. (2005)",
                                             "http://a.b/c", "café", "–", "ü", "risk", ".", "  ",
                                             "(Lee et al., 2020)", "ﬂow", "\t", "Doe (2001)", "中"};
    std::mt19937_64 rng(11);
    for (int i = 0; i < 300; ++i) {
      std::string s;
      const int n = 1 + static_cast<int>(rng() % 12);
      for (int k = 0; k < n; ++k) s += pieces[rng() % pieces.size()];
      const auto once = normalize_text(s);
      CHECK(normalize_text(once) == once);
      for (unsigned char c : once) CHECK(c < 128);
    }
  }

  TEST_CASE("bad user pattern fails to compile") {
    try {
      TextNormalizer({{"broken", "([a-z", "", false}});
      FAIL("expected RuleCompileError");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::RuleCompileError);
    }
  }

  TEST_CASE("rules load from a JSON file") {
    testing::TempDir dir;
    write_file_atomic(dir / "rules.json", R"({"rules":[{"name":"x","pattern":"foo","replacement":"bar"}]})");
    const auto rules = load_cleaning_rules(dir / "rules.json");
    REQUIRE(rules.size() == 1);
    CHECK(TextNormalizer(rules)("a foo b") == "a bar b");
  }

  TEST_CASE("numbered IMRAD headings slice the text") {
    const std::string text =
        "Title line\n\n1. Introduction\n\nIntro text.\n\n2. Methods\n\nMethod text.\n\n3. Results\n\n"
        "Result text.\n\n4. Discussion\n\nDiscussion text.";
    const auto d = detect_imrad(text);
    CHECK(d.text(Section::introduction) == "Intro text.");
    CHECK(d.text(Section::methods) == "Method text.");
    CHECK(d.text(Section::results) == "Result text.");
    CHECK(d.text(Section::discussion) == "Discussion text.");
    CHECK(d.text(Section::other) == "Title line");
    REQUIRE(d.heading_spans.size() == 4);
    for (std::size_t i = 1; i < d.heading_spans.size(); ++i) {
      CHECK(d.heading_spans[i - 1].offset < d.heading_spans[i].offset);
    }
    CHECK(text.substr(d.heading_spans[2].offset, 10) == "3. Results");
    CHECK(d.warnings.empty());
  }

  TEST_CASE("Findings is a results heading") {
    const auto d = detect_imrad("Findings\n\nA rises.");
    CHECK(d.text(Section::results) == "A rises.");
  }

  TEST_CASE("Results and Discussion feeds both sections") {
    const auto d = detect_imrad("Results and Discussion\n\nA rises.");
    CHECK(d.text(Section::results) == "A rises.");
    CHECK(d.text(Section::discussion) == "A rises.");
  }

  TEST_CASE("no headings leaves everything in other with a warning") {
    const auto d = detect_imrad("Just some text.\n\nMore text.");
    CHECK(d.text(Section::results).empty());
    CHECK(d.text(Section::other) == "Just some text.\n\nMore text.");
    CHECK(d.warnings == std::vector<std::string>{"NoSectionsFound"});
  }

  TEST_CASE("first occurrence of a heading wins") {
    const auto d = detect_imrad("Results\n\nFirst.\n\nDiscussion\n\nTalk.\n\nResults\n\nRunning head.");
    CHECK(d.text(Section::results) == "First.");
  }

  TEST_CASE("back matter closes the previous section") {
    const auto d = detect_imrad("Conclusions\n\nDone.\n\nReferences\n\nSmith J. Tenure increases investment.");
    CHECK(d.text(Section::conclusions) == "Done.");
  }

  TEST_CASE("long lines are not headings") {
    const auto d = detect_imrad("Results of the survey were collected over many months in the field\n\nText.");
    CHECK(d.text(Section::results).empty());
  }

  TEST_CASE("custom heading lexicon") {
    testing::TempDir dir;
    write_file_atomic(dir / "lex.json", R"({"results": ["outcomes"], "introduction": ["overview"]})");
    const auto lex = HeadingLexicon::load(dir / "lex.json");
    const auto d = detect_imrad("Overview\n\nIntro.\n\nOutcomes\n\nA rises.", lex);
    CHECK(d.text(Section::results) == "A rises.");
    write_file_atomic(dir / "bad.json", R"({"appendix": ["x"]})");
    CHECK_THROWS_AS(HeadingLexicon::load(dir / "bad.json"), Error);
  }

  TEST_CASE("finding sections are results, discussion, conclusions") {
    SectionedDocument all;
    for (auto s : {Section::introduction, Section::methods, Section::results, Section::discussion,
                   Section::conclusions, Section::other})
      all.sections[s] = "x";
    const auto three = select_finding_sections(all);
    REQUIRE(three.size() == 3);
    CHECK(three[0].first == Section::results);
    CHECK(three[1].first == Section::discussion);
    CHECK(three[2].first == Section::conclusions);

    SectionedDocument only_results;
    only_results.sections[Section::results] = "x";
    CHECK(select_finding_sections(only_results).size() == 1);

    SectionedDocument only_intro;
    only_intro.sections[Section::introduction] = "x";
    try {
      select_finding_sections(only_intro);
      FAIL("expected NoFindingsText");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NoFindingsText);
    }
  }
}
