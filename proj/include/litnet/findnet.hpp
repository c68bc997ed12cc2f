#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "litnet/relex.hpp"
#include "litnet/verblex.hpp"

namespace litnet::findnet {

using verblex::Sign;
inline constexpr std::array<Sign, 3> kSigns = {Sign::positive, Sign::negative, Sign::neutral};
inline std::size_t sign_index(Sign s) { return static_cast<std::size_t>(s); }

/// Exact non-negative ratio kept in lowest terms; 0/0 is stored as 0/1.
struct Fraction {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Fraction() = default;
  Fraction(std::int64_t n, std::int64_t d);

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool operator==(const Fraction&) const = default;
  std::strong_ordering operator<=>(const Fraction& o) const;
};

using Pair = std::pair<std::string, std::string>;
using ArticleSet = std::set<std::size_t>;

/// Per-article indicators, stored as the set of article indices where each
/// indicator is 1. Pairs are ordered (source, target).
struct ArticleIncidence {
  std::vector<std::string> articles;  // sorted doc_ids; index = article i
  std::map<std::string, ArticleSet> word_articles;
  std::map<Pair, ArticleSet> pair_articles;
  std::array<std::map<Pair, ArticleSet>, 3> signed_pair_articles;  // indexed by sign_index

  bool word_in_article(std::size_t i, const std::string& w) const;
  bool pair_in_article(std::size_t i, const Pair& p) const;
  bool signed_pair_in_article(std::size_t i, Sign s, const Pair& p) const;

  /// Σ_i Σ_pairs A_i(pair).
  std::int64_t pair_total() const;
  /// Σ_i Σ_pairs A_i(s, pair).
  std::int64_t sign_total(Sign s) const;

  bool operator==(const ArticleIncidence&) const = default;
};

/// `universe` lists every article counted in n; it defaults to the doc_ids of
/// `triples`. Triples whose doc_id is outside a given universe are ignored.
ArticleIncidence build_incidence(const std::vector<relex::RelationTriple>& triples,
                                 const std::optional<std::vector<std::string>>& universe = std::nullopt);

/// Number of articles whose findings mention `word`. Throws Error(UnknownWord).
std::int64_t node_degree(const ArticleIncidence& inc, const std::string& word);
/// Articles with the ordered pair over all pair indicators. Throws Error(EmptyGraph).
Fraction edge_weight(const ArticleIncidence& inc, const Pair& pair);
/// Articles with the pair under sign s over all sign-s pair indicators; 0 when
/// sign s never occurs.
Fraction verb_sign_weight(const ArticleIncidence& inc, Sign s, const Pair& pair);

enum class SignBasis { eq3, raw };
std::string_view to_string(SignBasis b);
/// Throws Error(ConfigError).
SignBasis sign_basis_from_string(std::string_view s);

/// argmax over signs; a shared maximum gives neutral.
Sign dominant_sign(const std::array<Fraction, 3>& sign_weights);
Sign dominant_sign(const std::array<std::int64_t, 3>& sign_counts);

struct WordNode {
  std::string label;
  std::int64_t degree = 0;
  int ring = 0;
  int cluster = 0;
  double x = 0.0;
  double y = 0.0;

  bool operator==(const WordNode&) const = default;
};

struct SignedEdge {
  std::string source;
  std::string target;
  std::array<std::int64_t, 3> sign_counts{};  // articles per sign
  std::int64_t article_count = 0;
  Fraction weight;
  std::array<Fraction, 3> sign_weights{};
  Sign dominant_sign = Sign::neutral;

  bool operator==(const SignedEdge&) const = default;
};

struct FindingsGraph {
  std::int64_t n_articles = 0;
  std::vector<WordNode> words;     // sorted by label
  std::vector<SignedEdge> edges;   // sorted by (source, target)
  std::int64_t pair_total = 0;
  std::array<std::int64_t, 3> sign_totals{};
  SignBasis sign_basis = SignBasis::eq3;
  bool laid_out = false;
  /// Present for graphs built from triples; absent after a JSON reload.
  std::optional<ArticleIncidence> incidence;

  const WordNode* find_word(const std::string& label) const;
  const SignedEdge* find_edge(const std::string& source, const std::string& target) const;
  bool empty() const { return words.empty(); }

  /// Compares everything but the incidence.
  bool operator==(const FindingsGraph& o) const;
};

struct BuildOptions {
  int rings = 4;
  /// Recorded for reproducibility; greedy merging is deterministic without it.
  std::uint64_t cluster_seed = 0;
  SignBasis sign_basis = SignBasis::eq3;
};

/// Nodes, edges, weights, clusters and layout from an incidence.
FindingsGraph build_graph(ArticleIncidence incidence, const BuildOptions& options = {});
FindingsGraph build_graph(const std::vector<relex::RelationTriple>& triples, const BuildOptions& options = {},
                          const std::optional<std::vector<std::string>>& universe = std::nullopt);

/// Greedy agglomerative modularity on the undirected projection (self-loops
/// dropped, antiparallel article counts summed). Returns a cluster id per node
/// of `g.words`; cluster 0 is the largest.
std::vector<int> cluster_modularity(const FindingsGraph& g, std::uint64_t seed = 0);

/// Writes ring, x and y. Ring k holds nodes whose count of strictly
/// higher-degree nodes h satisfies floor(h * rings / p) == k; radius is
/// (ring + 1) * 100.
void concentric_layout(FindingsGraph& g, int rings = 4);

inline constexpr double kRingUnit = 100.0;

/// Subgraph selection. Set fields combine as a conjunction applied in the
/// order article_sample, top_clusters, ego_in, ego_out, targets_any.
struct FilterSpec {
  std::optional<std::string> ego_in;
  std::optional<std::string> ego_out;
  std::optional<std::vector<std::string>> targets_any;
  std::optional<std::size_t> top_clusters;
  std::optional<std::pair<std::size_t, std::uint64_t>> article_sample;  // (n, seed)

  bool is_identity() const;
};

/// Degrees, weights, signs, clusters and layout are recomputed on the
/// filtered incidence. Throws Error(UnknownWord) for an absent ego word, or
/// when no targets_any word exists. Requires g.incidence.
FindingsGraph filter_graph(const FindingsGraph& g, const FilterSpec& spec, const BuildOptions& options = {});

}  // namespace litnet::findnet
