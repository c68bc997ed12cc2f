#include <doctest.h>

#include <cmath>
#include <random>

#include "litnet/error.hpp"
#include "litnet/findnet.hpp"
#include "oracle.hpp"

using namespace litnet;
using namespace litnet::findnet;
using testing::RawTriple;

namespace {

std::vector<relex::RelationTriple> rel(const std::vector<RawTriple>& raw) { return testing::to_relations(raw); }

bool same(const Fraction& f, const testing::Rational& r) { return f.num == r.numerator() && f.den == r.denominator(); }

Sign sign_of(int s) { return s == 0 ? Sign::positive : s == 1 ? Sign::negative : Sign::neutral; }

}  // namespace

TEST_SUITE("findnet") {
  TEST_CASE("fractions stay reduced") {
    CHECK(Fraction(2, 4) == Fraction(1, 2));
    CHECK(Fraction(0, 0) == Fraction(0, 1));
    CHECK(Fraction(1, 3) < Fraction(1, 2));
    CHECK_THROWS_AS(Fraction(-1, 2), std::invalid_argument);
  }

  TEST_CASE("indicators are binary per article and directed") {
    const auto inc = build_incidence(rel({{"1", "a", "b", 0}, {"1", "a", "b", 0}, {"1", "a", "c", 0}, {"1", "a", "d", 0},
                                          {"1", "a", "e", 0}, {"1", "a", "f", 0}, {"1", "a", "g", 0}}));
    CHECK(node_degree(inc, "a") == 1);
    const std::size_t i = 0;
    CHECK(inc.pair_in_article(i, {"a", "b"}));
    CHECK_FALSE(inc.pair_in_article(i, {"b", "a"}));
    CHECK(inc.signed_pair_in_article(i, Sign::positive, {"a", "b"}));
    CHECK_FALSE(inc.signed_pair_in_article(i, Sign::negative, {"a", "b"}));
  }

  TEST_CASE("empty triples give an all-zero incidence") {
    const auto inc = build_incidence({});
    CHECK(inc.pair_total() == 0);
    CHECK(inc.word_articles.empty());
    CHECK_THROWS_AS(edge_weight(inc, {"a", "b"}), Error);
    CHECK(build_graph(std::vector<relex::RelationTriple>{}).empty());
  }

  TEST_CASE("degree counts articles") {
    const auto inc = build_incidence(rel({{"1", "w", "x", 0}, {"2", "y", "w", 1}, {"3", "w", "z", 2}, {"4", "y", "z", 0}}),
                                     std::vector<std::string>{"1", "2", "3", "4", "5"});
    CHECK(inc.articles.size() == 5);
    CHECK(node_degree(inc, "w") == 3);
    const auto all = build_incidence(rel({{"1", "w", "x", 0}, {"2", "w", "x", 0}, {"3", "x", "w", 0}, {"4", "w", "y", 0}}));
    CHECK(node_degree(all, "w") == 4);
    CHECK_THROWS_AS(node_degree(all, "zzz"), Error);
  }

  TEST_CASE("edge weights") {
    CHECK(edge_weight(build_incidence(rel({{"1", "a", "b", 0}})), {"a", "b"}) == Fraction(1, 1));
    const auto two = build_incidence(rel({{"1", "a", "b", 0}, {"2", "c", "d", 1}}));
    CHECK(edge_weight(two, {"a", "b"}) == Fraction(1, 2));
    CHECK(edge_weight(two, {"c", "d"}) == Fraction(1, 2));
    CHECK(edge_weight(two, {"a", "d"}) == Fraction(0, 1));
  }

  TEST_CASE("verb sign weights normalise per sign") {
    const auto only = build_incidence(rel({{"1", "a", "b", 0}, {"2", "c", "d", 1}}));
    CHECK(verb_sign_weight(only, Sign::positive, {"a", "b"}) == Fraction(1, 1));
    CHECK(verb_sign_weight(only, Sign::neutral, {"a", "b"}) == Fraction(0, 1));
    const auto g1 = build_graph(rel({{"1", "a", "b", 0}, {"2", "c", "d", 1}}));
    CHECK(g1.find_edge("a", "b")->dominant_sign == Sign::positive);

    // (a,b): one positive of two positives, one neutral of four neutrals.
    const auto raw = rel({{"1", "a", "b", 0}, {"2", "a", "b", 2}, {"3", "c", "d", 0}, {"4", "e", "f", 2},
                          {"5", "e", "f", 2}, {"6", "e", "f", 2}});
    const auto inc = build_incidence(raw);
    CHECK(verb_sign_weight(inc, Sign::positive, {"a", "b"}) == Fraction(1, 2));
    CHECK(verb_sign_weight(inc, Sign::neutral, {"a", "b"}) == Fraction(1, 4));
    const auto g = build_graph(raw);
    const auto* e = g.find_edge("a", "b");
    REQUIRE(e);
    CHECK(e->sign_counts[sign_index(Sign::positive)] == e->sign_counts[sign_index(Sign::neutral)]);
    CHECK(e->dominant_sign == Sign::positive);
    // Raw counts tie, so the raw basis falls back to neutral.
    CHECK(build_graph(raw, {4, 0, SignBasis::raw}).find_edge("a", "b")->dominant_sign == Sign::neutral);
  }

  TEST_CASE("tied sign weights are neutral") {
    const auto g = build_graph(rel({{"1", "a", "b", 0}, {"2", "a", "b", 1}}));
    const auto* e = g.find_edge("a", "b");
    CHECK(e->sign_weights[sign_index(Sign::positive)] == e->sign_weights[sign_index(Sign::negative)]);
    CHECK(e->dominant_sign == Sign::neutral);
    CHECK(dominant_sign(std::array<std::int64_t, 3>{2, 1, 0}) == Sign::positive);
    CHECK(dominant_sign(std::array<std::int64_t, 3>{1, 1, 1}) == Sign::neutral);
  }

  TEST_CASE("randomized corpora match the brute-force oracle") {
    std::mt19937_64 rng(20240611);
    for (int round = 0; round < 60; ++round) {
      const auto c = testing::random_corpus(rng);
      const testing::Oracle o{c};
      const auto raw = rel(c.triples);
      const auto inc = build_incidence(raw, c.docs);
      const auto g = build_graph(raw, {}, c.docs);
      CHECK(g.n_articles == static_cast<std::int64_t>(c.docs.size()));
      for (const auto& w : g.words) CHECK(w.degree == o.degree(w.label));
      for (const auto& [k, l] : o.pairs()) {
        CHECK(same(edge_weight(inc, {k, l}), o.edge_weight(k, l)));
        for (int s = 0; s < 3; ++s) CHECK(same(verb_sign_weight(inc, sign_of(s), {k, l}), o.sign_weight(s, k, l)));
        const auto* e = g.find_edge(k, l);
        REQUIRE(e);
        CHECK(same(e->weight, o.edge_weight(k, l)));
        CHECK(e->dominant_sign == sign_of(o.dominant(k, l)));
      }
      CHECK(g.edges.size() == o.pairs().size());
    }
  }

  TEST_CASE("two triangles form two clusters") {
    const auto g = build_graph(rel({{"1", "a", "b", 0}, {"1", "b", "c", 0}, {"1", "c", "a", 0},
                                    {"2", "x", "y", 1}, {"2", "y", "z", 1}, {"2", "z", "x", 1}}));
    auto cl = [&](const std::string& w) { return g.find_word(w)->cluster; };
    CHECK(cl("a") == cl("b"));
    CHECK(cl("b") == cl("c"));
    CHECK(cl("x") == cl("y"));
    CHECK(cl("y") == cl("z"));
    CHECK(cl("a") != cl("x"));
    // Equal sizes: the cluster holding the smallest label comes first.
    CHECK(cl("a") == 0);
  }

  TEST_CASE("a single edge is one cluster") {
    const auto g = build_graph(rel({{"1", "a", "b", 0}}));
    CHECK(g.find_word("a")->cluster == g.find_word("b")->cluster);
  }

  TEST_CASE("clustering is deterministic") {
    std::mt19937_64 rng(3);
    std::vector<RawTriple> raw;
    for (int i = 0; i < 45; ++i) {
      raw.push_back({"d" + std::to_string(rng() % 6), "n" + std::to_string(rng() % 20), "n" + std::to_string(rng() % 20),
                     static_cast<int>(rng() % 3)});
    }
    const auto g = build_graph(rel(raw));
    CHECK(cluster_modularity(g, 1) == cluster_modularity(g, 1));
    CHECK(cluster_modularity(g, 1) == cluster_modularity(g, 99));
    CHECK(build_graph(rel(raw)) == g);
  }

  TEST_CASE("rings follow degree rank") {
    // Degrees: a 4, b 3, c 2, d 1.
    const auto g = build_graph(rel({{"1", "a", "b", 0}, {"2", "a", "b", 0}, {"3", "a", "b", 0}, {"4", "a", "c", 0},
                                    {"5", "c", "d", 0}}));
    std::vector<double> radius;
    for (const char* w : {"a", "b", "c", "d"}) {
      const auto* n = g.find_word(w);
      radius.push_back(std::hypot(n->x, n->y));
    }
    CHECK(g.find_word("a")->degree == 4);
    CHECK(g.find_word("d")->degree == 1);
    for (std::size_t i = 1; i < radius.size(); ++i) CHECK(radius[i - 1] < radius[i]);
    CHECK(radius[0] == doctest::Approx(kRingUnit));
  }

  TEST_CASE("equal degrees share one ring") {
    const auto g = build_graph(rel({{"1", "a", "b", 0}, {"1", "c", "d", 0}}));
    for (const auto& w : g.words) {
      CHECK(w.ring == 0);
      CHECK(std::hypot(w.x, w.y) == doctest::Approx(kRingUnit));
    }
    const auto again = build_graph(rel({{"1", "a", "b", 0}, {"1", "c", "d", 0}}));
    CHECK(again.words == g.words);
  }

  TEST_CASE("filters") {
    const auto g = build_graph(rel({{"1", "a", "information", 0}, {"2", "information", "b", 1}, {"2", "c", "d", 2}}));
    FilterSpec in;
    in.ego_in = "information";
    const auto f = filter_graph(g, in);
    REQUIRE(f.words.size() == 2);
    CHECK(f.find_word("a"));
    CHECK(f.find_word("information"));
    REQUIRE(f.edges.size() == 1);
    CHECK(f.edges[0].source == "a");

    FilterSpec out;
    out.ego_out = "information";
    const auto o = filter_graph(g, out);
    CHECK(o.find_edge("information", "b"));
    CHECK(o.edges.size() == 1);

    FilterSpec t;
    t.targets_any = std::vector<std::string>{"a"};
    const auto only = filter_graph(g, t);
    CHECK(only.words.size() == 1);
    CHECK(only.edges.empty());

    FilterSpec sample;
    sample.article_sample = std::make_pair(std::size_t{2}, std::uint64_t{5});
    CHECK(filter_graph(g, sample) == g);
    CHECK(filter_graph(g, FilterSpec{}) == g);

    FilterSpec bad;
    bad.ego_in = "zzz";
    try {
      filter_graph(g, bad);
      FAIL("expected UnknownWord");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::UnknownWord);
    }
  }

  TEST_CASE("ego and cluster filters commute on their shared support") {
    const auto g = build_graph(rel({{"1", "a", "b", 0}, {"1", "b", "c", 0}, {"1", "c", "a", 0}, {"2", "x", "y", 1},
                                    {"2", "y", "z", 1}, {"2", "z", "x", 1}, {"3", "c", "b", 2}}));
    FilterSpec both;
    both.top_clusters = 1;
    both.ego_in = "b";
    FilterSpec clusters_only;
    clusters_only.top_clusters = 1;
    FilterSpec ego_only;
    ego_only.ego_in = "b";
    const auto a = filter_graph(g, both);
    const auto b = filter_graph(filter_graph(g, ego_only), clusters_only);
    std::vector<std::string> la, lb;
    for (const auto& w : a.words) la.push_back(w.label);
    for (const auto& w : b.words) lb.push_back(w.label);
    CHECK(la == lb);
  }
}
