#include <doctest.h>

#include <nlohmann/json.hpp>

#include "litnet/error.hpp"
#include "litnet/export.hpp"
#include "litnet/nlp.hpp"
#include "oracle.hpp"

using namespace litnet;
using namespace litnet::findnet;

namespace {

FindingsGraph from_text(const std::string& text) {
  nlp::BuiltinTagger t;
  std::vector<relex::RelationTriple> triples;
  for (const auto& s : nlp::tag_section("d1", textprep::Section::results, text, t)) {
    auto r = relex::extract_relations(s, verblex::VerbDictionary::seed());
    triples.insert(triples.end(), r.begin(), r.end());
  }
  return build_graph(triples);
}

bool contains(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

}  // namespace

TEST_SUITE("export") {
  TEST_CASE("DOT for one positive relation") {
    const auto g = from_text("Information increases awareness.");
    const auto dot = export_dot(g);
    CHECK(dot.starts_with("digraph"));
    CHECK(contains(dot, "\"information\" -> \"awareness\""));
    CHECK(contains(dot, "weight=1"));
    CHECK(contains(dot, "sign=\"+\""));
  }

  TEST_CASE("JSON round trip is exact") {
    std::mt19937_64 rng(8);
    for (int i = 0; i < 20; ++i) {
      const auto c = testing::random_corpus(rng);
      const auto g = build_graph(testing::to_relations(c.triples), {}, c.docs);
      const auto back = graph_from_json(nlohmann::json::parse(export_json(g)));
      CHECK(back == g);
      CHECK(export_json(back) == export_json(g));
    }
  }

  TEST_CASE("JSON schema") {
    const auto j = nlohmann::json::parse(export_json(from_text("Information increases awareness.")));
    CHECK(j["n_articles"] == 1);
    CHECK(j["sign_basis"] == "eq3");
    REQUIRE(j["edges"].size() == 1);
    const auto& e = j["edges"][0];
    CHECK(e["source"] == "information");
    CHECK(e["weight"].get<double>() == 1.0);
    CHECK(e["dominant_sign"] == "positive");
    CHECK(e["sign_weights"]["pos"].get<double>() == 1.0);
    for (const auto& n : j["nodes"]) {
      for (const char* k : {"label", "degree", "ring", "cluster", "x", "y"}) CHECK(n.contains(k));
    }
    CHECK_THROWS_AS(graph_from_json(nlohmann::json::parse(R"({"nodes": 3})")), Error);
  }

  TEST_CASE("GraphML carries node and edge attributes") {
    const auto xml = export_graphml(from_text("Age reduces uptake and improves caution."));
    CHECK(contains(xml, "<graphml"));
    CHECK(contains(xml, "edgedefault=\"directed\""));
    CHECK(contains(xml, "<node id=\"age\">"));
    CHECK(contains(xml, "source=\"age\" target=\"uptake\""));
    CHECK(contains(xml, ">negative<"));
  }

  TEST_CASE("SVG for a depend sentence draws a + arrow with legend") {
    const auto svg = render_svg(from_text("Education has a positive correlation with adaptation."));
    CHECK(svg.starts_with("<?xml"));
    CHECK(contains(svg, "data-source=\"education\" data-target=\"adaptation\" data-sign=\"positive\""));
    CHECK(contains(svg, "marker-end=\"url(#arrow-positive)\""));
    CHECK(contains(svg, ">+</text>"));
    CHECK(contains(svg, "+: positively associated"));
  }

  TEST_CASE("sign_nodes mode colors nodes and draws no edges") {
    const auto g = from_text("Information increases awareness. Trust reduces awareness. Awareness improves uptake.");
    const auto svg = render_svg(g, RenderMode::sign_nodes, std::string("awareness"));
    CHECK_FALSE(contains(svg, "class=\"edge\""));
    CHECK(contains(svg, "data-label=\"information\""));
    CHECK(contains(svg, std::string(sign_color(Sign::positive))));
    CHECK(contains(svg, std::string(sign_color(Sign::negative))));
  }

  TEST_CASE("SVG needs a layout") {
    FindingsGraph g;
    g.laid_out = false;
    try {
      render_svg(g);
      FAIL("expected LayoutMissing");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::LayoutMissing);
    }
    CHECK_THROWS_AS(render_mode_from_string("force"), Error);
  }

  TEST_CASE("word cloud is sorted by degree then label") {
    const auto g = from_text("Information increases awareness. Trust reduces awareness.");
    CHECK(export_wordcloud(g) == "label\tdegree\nawareness\t1\ninformation\t1\ntrust\t1\n");
  }
}
