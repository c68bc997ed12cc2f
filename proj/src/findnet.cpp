#include "litnet/findnet.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <unordered_map>

#include "litnet/error.hpp"
#include "litnet/util.hpp"

namespace litnet::findnet {

namespace {

using i128 = __int128;

std::int64_t set_size(const std::map<Pair, ArticleSet>& m, const Pair& k) {
  auto it = m.find(k);
  return it == m.end() ? 0 : static_cast<std::int64_t>(it->second.size());
}

std::int64_t total_of(const std::map<Pair, ArticleSet>& m) {
  std::int64_t t = 0;
  for (const auto& [p, s] : m) t += static_cast<std::int64_t>(s.size());
  return t;
}

bool contains(const std::map<std::string, ArticleSet>& m, const std::string& k, std::size_t i) {
  auto it = m.find(k);
  return it != m.end() && it->second.contains(i);
}

bool contains(const std::map<Pair, ArticleSet>& m, const Pair& k, std::size_t i) {
  auto it = m.find(k);
  return it != m.end() && it->second.contains(i);
}

// Keeps only the listed articles and renumbers them densely.
ArticleIncidence restrict_articles(const ArticleIncidence& inc, const std::vector<std::size_t>& keep) {
  std::unordered_map<std::size_t, std::size_t> remap;
  ArticleIncidence out;
  for (std::size_t k : keep) {
    remap[k] = out.articles.size();
    out.articles.push_back(inc.articles[k]);
  }
  auto mapset = [&](const ArticleSet& s) {
    ArticleSet r;
    for (std::size_t i : s) {
      if (auto it = remap.find(i); it != remap.end()) r.insert(it->second);
    }
    return r;
  };
  for (const auto& [w, s] : inc.word_articles) {
    if (auto r = mapset(s); !r.empty()) out.word_articles[w] = std::move(r);
  }
  for (const auto& [p, s] : inc.pair_articles) {
    if (auto r = mapset(s); !r.empty()) out.pair_articles[p] = std::move(r);
  }
  for (std::size_t k = 0; k < 3; ++k) {
    for (const auto& [p, s] : inc.signed_pair_articles[k]) {
      if (auto r = mapset(s); !r.empty()) out.signed_pair_articles[k][p] = std::move(r);
    }
  }
  return out;
}

// Keeps the listed words with their original article sets and only the listed
// pairs.
ArticleIncidence restrict_structure(const ArticleIncidence& inc, const std::set<std::string>& words,
                                    const std::set<Pair>& pairs) {
  ArticleIncidence out;
  out.articles = inc.articles;
  for (const auto& w : words) {
    if (auto it = inc.word_articles.find(w); it != inc.word_articles.end()) out.word_articles[w] = it->second;
  }
  for (const auto& p : pairs) {
    if (auto it = inc.pair_articles.find(p); it != inc.pair_articles.end()) out.pair_articles[p] = it->second;
    for (std::size_t k = 0; k < 3; ++k) {
      const auto& m = inc.signed_pair_articles[k];
      if (auto it = m.find(p); it != m.end()) out.signed_pair_articles[k][p] = it->second;
    }
  }
  return out;
}

double round3(double v) {
  const double r = std::round(v * 1000.0) / 1000.0;
  return r == 0.0 ? 0.0 : r;  // no negative zero in exports
}

}  // namespace

// ---------------------------------------------------------------------------

Fraction::Fraction(std::int64_t n, std::int64_t d) {
  if (n < 0 || d < 0) throw std::invalid_argument("Fraction expects non-negative terms");
  if (d == 0 || n == 0) {
    num = 0;
    den = 1;
    return;
  }
  const std::int64_t g = std::gcd(n, d);
  num = n / g;
  den = d / g;
}

std::strong_ordering Fraction::operator<=>(const Fraction& o) const {
  const i128 l = static_cast<i128>(num) * o.den;
  const i128 r = static_cast<i128>(o.num) * den;
  return l < r ? std::strong_ordering::less : l > r ? std::strong_ordering::greater : std::strong_ordering::equal;
}

bool ArticleIncidence::word_in_article(std::size_t i, const std::string& w) const {
  return contains(word_articles, w, i);
}

bool ArticleIncidence::pair_in_article(std::size_t i, const Pair& p) const { return contains(pair_articles, p, i); }

bool ArticleIncidence::signed_pair_in_article(std::size_t i, Sign s, const Pair& p) const {
  return contains(signed_pair_articles[sign_index(s)], p, i);
}

std::int64_t ArticleIncidence::pair_total() const { return total_of(pair_articles); }

std::int64_t ArticleIncidence::sign_total(Sign s) const { return total_of(signed_pair_articles[sign_index(s)]); }

ArticleIncidence build_incidence(const std::vector<relex::RelationTriple>& triples,
                                 const std::optional<std::vector<std::string>>& universe) {
  ArticleIncidence inc;
  std::set<std::string> ids;
  if (universe) {
    ids.insert(universe->begin(), universe->end());
  } else {
    for (const auto& t : triples) ids.insert(t.doc_id);
  }
  inc.articles.assign(ids.begin(), ids.end());
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < inc.articles.size(); ++i) index[inc.articles[i]] = i;

  for (const auto& t : triples) {
    auto it = index.find(t.doc_id);
    if (it == index.end()) continue;
    const std::size_t i = it->second;
    inc.word_articles[t.source_label].insert(i);
    inc.word_articles[t.target_label].insert(i);
    const Pair p{t.source_label, t.target_label};
    inc.pair_articles[p].insert(i);
    inc.signed_pair_articles[sign_index(t.sign)][p].insert(i);
  }
  return inc;
}

std::int64_t node_degree(const ArticleIncidence& inc, const std::string& word) {
  auto it = inc.word_articles.find(word);
  if (it == inc.word_articles.end()) throw Error(ErrorCode::UnknownWord, "'" + word + "'");
  return static_cast<std::int64_t>(it->second.size());
}

Fraction edge_weight(const ArticleIncidence& inc, const Pair& pair) {
  const std::int64_t total = inc.pair_total();
  if (total == 0) throw Error(ErrorCode::EmptyGraph, "no relation in any article");
  return Fraction(set_size(inc.pair_articles, pair), total);
}

Fraction verb_sign_weight(const ArticleIncidence& inc, Sign s, const Pair& pair) {
  const auto& m = inc.signed_pair_articles[sign_index(s)];
  return Fraction(set_size(m, pair), total_of(m));
}

std::string_view to_string(SignBasis b) { return b == SignBasis::eq3 ? "eq3" : "raw"; }

SignBasis sign_basis_from_string(std::string_view s) {
  if (s == "eq3") return SignBasis::eq3;
  if (s == "raw") return SignBasis::raw;
  throw Error(ErrorCode::ConfigError, "sign_basis must be raw or eq3, got '" + std::string(s) + "'");
}

namespace {

template <typename T>
Sign argmax_sign(const std::array<T, 3>& v) {
  std::size_t best = 0;
  bool tie = false;
  for (std::size_t k = 1; k < 3; ++k) {
    if (v[k] > v[best]) {
      best = k;
      tie = false;
    } else if (v[k] == v[best]) {
      tie = true;
    }
  }
  return tie ? Sign::neutral : kSigns[best];
}

}  // namespace

Sign dominant_sign(const std::array<Fraction, 3>& sign_weights) { return argmax_sign(sign_weights); }
Sign dominant_sign(const std::array<std::int64_t, 3>& sign_counts) { return argmax_sign(sign_counts); }

// ---------------------------------------------------------------------------

const WordNode* FindingsGraph::find_word(const std::string& label) const {
  auto it = std::lower_bound(words.begin(), words.end(), label,
                             [](const WordNode& n, const std::string& l) { return n.label < l; });
  return it != words.end() && it->label == label ? &*it : nullptr;
}

const SignedEdge* FindingsGraph::find_edge(const std::string& source, const std::string& target) const {
  const Pair key{source, target};
  auto it = std::lower_bound(edges.begin(), edges.end(), key, [](const SignedEdge& e, const Pair& k) {
    return std::tie(e.source, e.target) < std::tie(k.first, k.second);
  });
  return it != edges.end() && it->source == source && it->target == target ? &*it : nullptr;
}

bool FindingsGraph::operator==(const FindingsGraph& o) const {
  return n_articles == o.n_articles && words == o.words && edges == o.edges && pair_total == o.pair_total &&
         sign_totals == o.sign_totals && sign_basis == o.sign_basis && laid_out == o.laid_out;
}

FindingsGraph build_graph(ArticleIncidence incidence, const BuildOptions& options) {
  FindingsGraph g;
  g.sign_basis = options.sign_basis;
  g.n_articles = static_cast<std::int64_t>(incidence.articles.size());
  g.pair_total = incidence.pair_total();
  for (Sign s : kSigns) g.sign_totals[sign_index(s)] = incidence.sign_total(s);

  for (const auto& [w, arts] : incidence.word_articles) {
    if (arts.empty()) continue;
    WordNode n;
    n.label = w;
    n.degree = static_cast<std::int64_t>(arts.size());
    g.words.push_back(std::move(n));
  }
  for (const auto& [p, arts] : incidence.pair_articles) {
    if (arts.empty()) continue;
    SignedEdge e;
    e.source = p.first;
    e.target = p.second;
    e.article_count = static_cast<std::int64_t>(arts.size());
    e.weight = Fraction(e.article_count, g.pair_total);
    for (Sign s : kSigns) {
      const std::size_t k = sign_index(s);
      e.sign_counts[k] = set_size(incidence.signed_pair_articles[k], p);
      e.sign_weights[k] = Fraction(e.sign_counts[k], g.sign_totals[k]);
    }
    e.dominant_sign =
        options.sign_basis == SignBasis::eq3 ? dominant_sign(e.sign_weights) : dominant_sign(e.sign_counts);
    g.edges.push_back(std::move(e));
  }
  g.incidence = std::move(incidence);

  const auto clusters = cluster_modularity(g, options.cluster_seed);
  for (std::size_t i = 0; i < g.words.size(); ++i) g.words[i].cluster = clusters[i];
  concentric_layout(g, options.rings);
  return g;
}

FindingsGraph build_graph(const std::vector<relex::RelationTriple>& triples, const BuildOptions& options,
                          const std::optional<std::vector<std::string>>& universe) {
  return build_graph(build_incidence(triples, universe), options);
}

// ---------------------------------------------------------------------------

std::vector<int> cluster_modularity(const FindingsGraph& g, std::uint64_t /*seed*/) {
  const std::size_t p = g.words.size();
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < p; ++i) index[g.words[i].label] = i;

  // Community c is identified by its smallest member index, which is also its
  // label order since words are sorted.
  std::vector<std::map<std::size_t, std::int64_t>> adj(p);
  std::vector<std::int64_t> strength(p, 0);
  std::int64_t two_m = 0;
  for (const auto& e : g.edges) {
    const std::size_t u = index.at(e.source);
    const std::size_t v = index.at(e.target);
    if (u == v) continue;
    adj[u][v] += e.article_count;
    adj[v][u] += e.article_count;
    strength[u] += e.article_count;
    strength[v] += e.article_count;
    two_m += 2 * e.article_count;
  }

  std::vector<std::size_t> owner(p);
  std::iota(owner.begin(), owner.end(), 0);
  std::vector<bool> alive(p, true);

  while (two_m > 0) {
    // Gain of merging a and b, scaled by (2m)^2 / 2: W_ab * 2m - K_a * K_b,
    // where W_ab counts edge ends from a to b.
    bool found = false;
    i128 best = 0;
    std::size_t ba = 0, bb = 0;
    for (std::size_t a = 0; a < p; ++a) {
      if (!alive[a]) continue;
      for (const auto& [b, w] : adj[a]) {
        if (b <= a) continue;
        const i128 gain = static_cast<i128>(w) * two_m - static_cast<i128>(strength[a]) * strength[b];
        if (gain > 0 && (!found || gain > best)) {
          best = gain;
          ba = a;
          bb = b;
          found = true;
        }
      }
    }
    if (!found) break;
    // Merge bb into ba; ba < bb keeps the smaller label.
    for (const auto& [c, w] : adj[bb]) {
      if (c == ba) continue;
      adj[ba][c] += w;
      adj[c].erase(bb);
      adj[c][ba] += w;
    }
    adj[ba].erase(bb);
    adj[bb].clear();
    strength[ba] += strength[bb];
    strength[bb] = 0;
    alive[bb] = false;
    for (auto& o : owner) {
      if (o == bb) o = ba;
    }
  }

  // Number by descending size, ties by smallest member label.
  std::map<std::size_t, std::size_t> sizes;
  for (std::size_t o : owner) ++sizes[o];
  std::vector<std::pair<std::size_t, std::size_t>> order(sizes.begin(), sizes.end());
  std::stable_sort(order.begin(), order.end(), [](const auto& x, const auto& y) { return x.second > y.second; });
  std::unordered_map<std::size_t, int> id;
  for (std::size_t k = 0; k < order.size(); ++k) id[order[k].first] = static_cast<int>(k);
  std::vector<int> out(p);
  for (std::size_t i = 0; i < p; ++i) out[i] = id[owner[i]];
  return out;
}

void concentric_layout(FindingsGraph& g, int rings) {
  if (rings < 1) throw Error(ErrorCode::ConfigError, "rings must be >= 1");
  const std::size_t p = g.words.size();
  std::vector<std::int64_t> degrees;
  degrees.reserve(p);
  for (const auto& n : g.words) degrees.push_back(n.degree);
  std::sort(degrees.begin(), degrees.end(), std::greater<>());

  std::map<int, std::vector<std::size_t>> by_ring;
  for (std::size_t i = 0; i < p; ++i) {
    auto& n = g.words[i];
    const auto higher = static_cast<std::size_t>(
        std::lower_bound(degrees.begin(), degrees.end(), n.degree, std::greater<>()) - degrees.begin());
    n.ring = static_cast<int>(higher * static_cast<std::size_t>(rings) / p);
    by_ring[n.ring].push_back(i);
  }
  for (auto& [ring, members] : by_ring) {
    std::sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
      return std::tie(g.words[a].cluster, g.words[a].label) < std::tie(g.words[b].cluster, g.words[b].label);
    });
    const double radius = (ring + 1) * kRingUnit;
    for (std::size_t k = 0; k < members.size(); ++k) {
      const double angle = -std::numbers::pi / 2 + 2 * std::numbers::pi * static_cast<double>(k) /
                                                       static_cast<double>(members.size());
      g.words[members[k]].x = round3(radius * std::cos(angle));
      g.words[members[k]].y = round3(radius * std::sin(angle));
    }
  }
  g.laid_out = true;
}

// ---------------------------------------------------------------------------

bool FilterSpec::is_identity() const {
  return !ego_in && !ego_out && !targets_any && !top_clusters && !article_sample;
}

FindingsGraph filter_graph(const FindingsGraph& g, const FilterSpec& spec, const BuildOptions& options) {
  if (spec.is_identity()) return g;
  if (!g.incidence) throw Error(ErrorCode::MissingPriorStage, "graph has no article incidence to filter");

  ArticleIncidence inc = *g.incidence;
  FindingsGraph cur = g;

  if (spec.article_sample) {
    const auto [n, seed] = *spec.article_sample;
    inc = restrict_articles(inc, sample_indices(inc.articles.size(), n, seed));
    cur = build_graph(inc, options);
  }

  std::set<std::string> words;
  std::set<Pair> pairs;
  for (const auto& n : cur.words) words.insert(n.label);
  for (const auto& e : cur.edges) pairs.insert({e.source, e.target});

  auto keep_induced = [&]() {
    std::set<Pair> kept;
    for (const auto& p : pairs) {
      if (words.contains(p.first) && words.contains(p.second)) kept.insert(p);
    }
    pairs = std::move(kept);
  };

  if (spec.top_clusters) {
    std::set<std::string> kept;
    for (const auto& n : cur.words) {
      if (n.cluster >= 0 && static_cast<std::size_t>(n.cluster) < *spec.top_clusters) kept.insert(n.label);
    }
    words = std::move(kept);
    keep_induced();
  }

  auto ego = [&](const std::string& w, bool incoming) {
    if (!words.contains(w)) throw Error(ErrorCode::UnknownWord, "'" + w + "'");
    std::set<std::string> kept{w};
    std::set<Pair> kept_pairs;
    for (const auto& p : pairs) {
      if ((incoming ? p.second : p.first) == w) {
        kept.insert(incoming ? p.first : p.second);
        kept_pairs.insert(p);
      }
    }
    words = std::move(kept);
    pairs = std::move(kept_pairs);
  };
  if (spec.ego_in) ego(*spec.ego_in, true);
  if (spec.ego_out) ego(*spec.ego_out, false);

  if (spec.targets_any) {
    std::set<std::string> targets;
    for (const auto& t : *spec.targets_any) {
      if (words.contains(t)) targets.insert(t);
    }
    if (targets.empty()) throw Error(ErrorCode::UnknownWord, "none of the target words is in the graph");
    std::set<std::string> kept = targets;
    for (const auto& p : pairs) {
      if (targets.contains(p.second)) kept.insert(p.first);
    }
    words = std::move(kept);
    keep_induced();
  }

  return build_graph(restrict_structure(inc, words, pairs), options);
}

}  // namespace litnet::findnet
