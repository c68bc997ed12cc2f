#include "litnet/export.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "litnet/error.hpp"

namespace litnet::findnet {

namespace {

using nlohmann::json;

// Ten-color categorical palette; clusters past ten wrap around.
constexpr std::string_view kPalette[] = {"#1f77b4", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2",
                                         "#17becf", "#bcbd22", "#393b79", "#637939", "#843c39"};

std::string_view cluster_color(int c) { return kPalette[static_cast<std::size_t>(c) % std::size(kPalette)]; }

json sign_map(const std::array<Fraction, 3>& v) {
  return json{{"pos", v[sign_index(Sign::positive)].value()},
              {"neu", v[sign_index(Sign::neutral)].value()},
              {"neg", v[sign_index(Sign::negative)].value()}};
}

json count_map(const std::array<std::int64_t, 3>& v) {
  return json{{"pos", v[sign_index(Sign::positive)]},
              {"neu", v[sign_index(Sign::neutral)]},
              {"neg", v[sign_index(Sign::negative)]}};
}

std::array<std::int64_t, 3> counts_from(const json& j) {
  std::array<std::int64_t, 3> out{};
  out[sign_index(Sign::positive)] = j.at("pos").get<std::int64_t>();
  out[sign_index(Sign::neutral)] = j.at("neu").get<std::int64_t>();
  out[sign_index(Sign::negative)] = j.at("neg").get<std::int64_t>();
  return out;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string dot_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  std::string s = buf;
  if (s == "-0.000") s = "0.000";
  return s;
}

void require_layout(const FindingsGraph& g) {
  if (!g.laid_out) throw Error(ErrorCode::LayoutMissing, "graph has no coordinates");
}

}  // namespace

std::string_view sign_color(Sign s) {
  switch (s) {
    case Sign::positive: return "#2ca02c";
    case Sign::negative: return "#d62728";
    case Sign::neutral: return "#7f7f7f";
  }
  return "#7f7f7f";
}

json to_json(const FindingsGraph& g) {
  json nodes = json::array();
  for (const auto& n : g.words) {
    nodes.push_back(
        {{"label", n.label}, {"degree", n.degree}, {"ring", n.ring}, {"cluster", n.cluster}, {"x", n.x}, {"y", n.y}});
  }
  json edges = json::array();
  for (const auto& e : g.edges) {
    edges.push_back({{"source", e.source},
                     {"target", e.target},
                     {"weight", e.weight.value()},
                     {"sign_weights", sign_map(e.sign_weights)},
                     {"sign_counts", count_map(e.sign_counts)},
                     {"dominant_sign", verblex::to_string(e.dominant_sign)},
                     {"article_count", e.article_count}});
  }
  return json{{"n_articles", g.n_articles},
              {"pair_total", g.pair_total},
              {"sign_totals", count_map(g.sign_totals)},
              {"sign_basis", to_string(g.sign_basis)},
              {"laid_out", g.laid_out},
              {"nodes", std::move(nodes)},
              {"edges", std::move(edges)}};
}

std::string export_json(const FindingsGraph& g) { return to_json(g).dump(2) + "\n"; }

FindingsGraph graph_from_json(const json& j) {
  FindingsGraph g;
  try {
    g.n_articles = j.at("n_articles").get<std::int64_t>();
    g.pair_total = j.at("pair_total").get<std::int64_t>();
    g.sign_totals = counts_from(j.at("sign_totals"));
    g.sign_basis = sign_basis_from_string(j.at("sign_basis").get<std::string>());
    g.laid_out = j.value("laid_out", false);
    for (const auto& n : j.at("nodes")) {
      WordNode w;
      w.label = n.at("label").get<std::string>();
      w.degree = n.at("degree").get<std::int64_t>();
      w.ring = n.at("ring").get<int>();
      w.cluster = n.at("cluster").get<int>();
      w.x = n.value("x", 0.0);
      w.y = n.value("y", 0.0);
      g.words.push_back(std::move(w));
    }
    for (const auto& e : j.at("edges")) {
      SignedEdge s;
      s.source = e.at("source").get<std::string>();
      s.target = e.at("target").get<std::string>();
      s.article_count = e.at("article_count").get<std::int64_t>();
      s.sign_counts = counts_from(e.at("sign_counts"));
      s.weight = Fraction(s.article_count, g.pair_total);
      for (std::size_t k = 0; k < 3; ++k) s.sign_weights[k] = Fraction(s.sign_counts[k], g.sign_totals[k]);
      s.dominant_sign = verblex::sign_from_string(e.at("dominant_sign").get<std::string>());
      g.edges.push_back(std::move(s));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("graph.json: ") + e.what());
  }
  std::sort(g.words.begin(), g.words.end(), [](const WordNode& a, const WordNode& b) { return a.label < b.label; });
  std::sort(g.edges.begin(), g.edges.end(), [](const SignedEdge& a, const SignedEdge& b) {
    return std::tie(a.source, a.target) < std::tie(b.source, b.target);
  });
  return g;
}

std::string export_graphml(const FindingsGraph& g) {
  std::string o;
  o += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  o += "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n";
  o += "  <key id=\"n_articles\" for=\"graph\" attr.name=\"n_articles\" attr.type=\"int\"/>\n";
  o += "  <key id=\"label\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n";
  o += "  <key id=\"degree\" for=\"node\" attr.name=\"degree\" attr.type=\"int\"/>\n";
  o += "  <key id=\"ring\" for=\"node\" attr.name=\"ring\" attr.type=\"int\"/>\n";
  o += "  <key id=\"cluster\" for=\"node\" attr.name=\"cluster\" attr.type=\"int\"/>\n";
  o += "  <key id=\"x\" for=\"node\" attr.name=\"x\" attr.type=\"double\"/>\n";
  o += "  <key id=\"y\" for=\"node\" attr.name=\"y\" attr.type=\"double\"/>\n";
  o += "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"double\"/>\n";
  o += "  <key id=\"article_count\" for=\"edge\" attr.name=\"article_count\" attr.type=\"int\"/>\n";
  o += "  <key id=\"dominant_sign\" for=\"edge\" attr.name=\"dominant_sign\" attr.type=\"string\"/>\n";
  o += "  <key id=\"vs_pos\" for=\"edge\" attr.name=\"sign_weight_pos\" attr.type=\"double\"/>\n";
  o += "  <key id=\"vs_neu\" for=\"edge\" attr.name=\"sign_weight_neu\" attr.type=\"double\"/>\n";
  o += "  <key id=\"vs_neg\" for=\"edge\" attr.name=\"sign_weight_neg\" attr.type=\"double\"/>\n";
  o += "  <graph id=\"findings\" edgedefault=\"directed\">\n";
  o += "    <data key=\"n_articles\">" + std::to_string(g.n_articles) + "</data>\n";
  for (const auto& n : g.words) {
    const std::string id = xml_escape(n.label);
    o += "    <node id=\"" + id + "\">";
    o += "<data key=\"label\">" + id + "</data>";
    o += "<data key=\"degree\">" + std::to_string(n.degree) + "</data>";
    o += "<data key=\"ring\">" + std::to_string(n.ring) + "</data>";
    o += "<data key=\"cluster\">" + std::to_string(n.cluster) + "</data>";
    o += "<data key=\"x\">" + fixed(n.x) + "</data>";
    o += "<data key=\"y\">" + fixed(n.y) + "</data>";
    o += "</node>\n";
  }
  for (const auto& e : g.edges) {
    o += "    <edge source=\"" + xml_escape(e.source) + "\" target=\"" + xml_escape(e.target) + "\">";
    o += "<data key=\"weight\">" + num(e.weight.value()) + "</data>";
    o += "<data key=\"article_count\">" + std::to_string(e.article_count) + "</data>";
    o += "<data key=\"dominant_sign\">" + std::string(verblex::to_string(e.dominant_sign)) + "</data>";
    o += "<data key=\"vs_pos\">" + num(e.sign_weights[sign_index(Sign::positive)].value()) + "</data>";
    o += "<data key=\"vs_neu\">" + num(e.sign_weights[sign_index(Sign::neutral)].value()) + "</data>";
    o += "<data key=\"vs_neg\">" + num(e.sign_weights[sign_index(Sign::negative)].value()) + "</data>";
    o += "</edge>\n";
  }
  o += "  </graph>\n</graphml>\n";
  return o;
}

std::string export_dot(const FindingsGraph& g) {
  std::string o = "digraph findings {\n";
  o += "  graph [n_articles=" + std::to_string(g.n_articles) + "];\n";
  for (const auto& n : g.words) {
    o += "  \"" + dot_escape(n.label) + "\" [label=\"" + dot_escape(n.label) + "\", degree=" + std::to_string(n.degree) +
         ", ring=" + std::to_string(n.ring) + ", cluster=" + std::to_string(n.cluster) + ", pos=\"" + fixed(n.x) + "," +
         fixed(-n.y) + "!\"];\n";
  }
  for (const auto& e : g.edges) {
    o += "  \"" + dot_escape(e.source) + "\" -> \"" + dot_escape(e.target) + "\" [weight=" + num(e.weight.value()) +
         ", article_count=" + std::to_string(e.article_count) + ", sign=\"" +
         std::string(verblex::sign_glyph(e.dominant_sign)) + "\", dominant_sign=" +
         std::string(verblex::to_string(e.dominant_sign)) +
         ", sign_weight_pos=" + num(e.sign_weights[sign_index(Sign::positive)].value()) +
         ", sign_weight_neu=" + num(e.sign_weights[sign_index(Sign::neutral)].value()) +
         ", sign_weight_neg=" + num(e.sign_weights[sign_index(Sign::negative)].value()) + ", label=\"" +
         std::string(verblex::sign_glyph(e.dominant_sign)) + "\", color=\"" + std::string(sign_color(e.dominant_sign)) +
         "\"];\n";
  }
  o += "}\n";
  return o;
}

RenderMode render_mode_from_string(std::string_view s) {
  if (s == "cluster") return RenderMode::cluster;
  if (s == "sign_nodes") return RenderMode::sign_nodes;
  throw Error(ErrorCode::ConfigError, "render mode must be cluster or sign_nodes, got '" + std::string(s) + "'");
}

std::string render_svg(const FindingsGraph& g, RenderMode mode, const std::optional<std::string>& ego) {
  require_layout(g);
  int max_ring = 0;
  for (const auto& n : g.words) max_ring = std::max(max_ring, n.ring);
  const double margin = 120.0;
  const double half = (max_ring + 1) * kRingUnit + margin;
  const double legend_h = 80.0;
  const double size = 2 * half;

  auto X = [&](double x) { return fixed(x + half); };
  auto Y = [&](double y) { return fixed(y + half); };
  auto radius = [](std::int64_t degree) { return 4.0 + 3.0 * std::sqrt(static_cast<double>(degree)); };

  std::string o;
  o += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  o += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed(size) + "\" height=\"" + fixed(size + legend_h) +
       "\" viewBox=\"0 0 " + fixed(size) + " " + fixed(size + legend_h) + "\" font-family=\"sans-serif\">\n";
  o += "  <defs>\n";
  for (Sign s : kSigns) {
    o += "    <marker id=\"arrow-" + std::string(verblex::to_string(s)) +
         "\" viewBox=\"0 0 10 10\" refX=\"10\" refY=\"5\" markerWidth=\"8\" markerHeight=\"8\" orient=\"auto-start-reverse\">"
         "<path d=\"M 0 0 L 10 5 L 0 10 z\" fill=\"" +
         std::string(sign_color(s)) + "\"/></marker>\n";
  }
  o += "  </defs>\n";
  o += "  <rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";

  for (int r = 0; r <= max_ring; ++r) {
    o += "  <circle cx=\"" + X(0) + "\" cy=\"" + Y(0) + "\" r=\"" + fixed((r + 1) * kRingUnit) +
         "\" fill=\"none\" stroke=\"#eeeeee\"/>\n";
  }

  std::map<std::string, const WordNode*> by_label;
  for (const auto& n : g.words) by_label[n.label] = &n;

  if (mode == RenderMode::cluster) {
    o += "  <g class=\"edges\">\n";
    for (const auto& e : g.edges) {
      const WordNode* a = by_label.at(e.source);
      const WordNode* b = by_label.at(e.target);
      const std::string color(sign_color(e.dominant_sign));
      const std::string glyph(verblex::sign_glyph(e.dominant_sign));
      const double width = 1.0 + 4.0 * e.weight.value();
      if (a == b) {
        o += "    <circle cx=\"" + X(a->x) + "\" cy=\"" + Y(a->y - radius(a->degree) - 8) +
             "\" r=\"8\" fill=\"none\" stroke=\"" + color + "\" stroke-width=\"" + fixed(width) + "\"/>\n";
        continue;
      }
      // Shorten to the node rims so the arrow head stays visible.
      const double dx = b->x - a->x, dy = b->y - a->y;
      const double len = std::max(std::hypot(dx, dy), 1e-9);
      const double ra = radius(a->degree), rb = radius(b->degree) + 2;
      const double x1 = a->x + dx / len * ra, y1 = a->y + dy / len * ra;
      const double x2 = b->x - dx / len * rb, y2 = b->y - dy / len * rb;
      o += "    <g class=\"edge\" data-source=\"" + xml_escape(e.source) + "\" data-target=\"" + xml_escape(e.target) +
           "\" data-sign=\"" + std::string(verblex::to_string(e.dominant_sign)) + "\">";
      o += "<line x1=\"" + X(x1) + "\" y1=\"" + Y(y1) + "\" x2=\"" + X(x2) + "\" y2=\"" + Y(y2) + "\" stroke=\"" + color +
           "\" stroke-width=\"" + fixed(width) + "\" marker-end=\"url(#arrow-" +
           std::string(verblex::to_string(e.dominant_sign)) + ")\"/>";
      o += "<text x=\"" + X((x1 + x2) / 2) + "\" y=\"" + Y((y1 + y2) / 2 - 4) +
           "\" font-size=\"14\" text-anchor=\"middle\" fill=\"" + color + "\">" + xml_escape(glyph) + "</text>";
      o += "</g>\n";
    }
    o += "  </g>\n";
  }

  // Node fill for sign_nodes mode.
  auto node_sign = [&](const WordNode& n) -> std::optional<Sign> {
    const SignedEdge* best = nullptr;
    for (const auto& e : g.edges) {
      const bool touches = e.source == n.label || e.target == n.label;
      if (!touches) continue;
      if (ego) {
        if (n.label == *ego) continue;
        if (e.source != *ego && e.target != *ego) continue;
      }
      if (!best || e.article_count > best->article_count) best = &e;
    }
    if (!best) return std::nullopt;
    return best->dominant_sign;
  };

  o += "  <g class=\"nodes\">\n";
  for (const auto& n : g.words) {
    std::string fill;
    if (mode == RenderMode::cluster) {
      fill = std::string(cluster_color(n.cluster));
    } else if (ego && n.label == *ego) {
      fill = "#000000";
    } else {
      auto s = node_sign(n);
      fill = s ? std::string(sign_color(*s)) : "#cccccc";
    }
    o += "    <g class=\"node\" data-label=\"" + xml_escape(n.label) + "\" data-cluster=\"" + std::to_string(n.cluster) +
         "\"><circle cx=\"" + X(n.x) + "\" cy=\"" + Y(n.y) + "\" r=\"" + fixed(radius(n.degree)) + "\" fill=\"" + fill +
         "\" stroke=\"#333333\"/><text x=\"" + X(n.x) + "\" y=\"" + Y(n.y + radius(n.degree) + 12) +
         "\" font-size=\"11\" text-anchor=\"middle\">" + xml_escape(n.label) + "</text></g>\n";
  }
  o += "  </g>\n";

  o += "  <g class=\"legend\">\n";
  double ly = size + 18;
  const std::pair<Sign, std::string_view> legend[] = {{Sign::positive, "positively associated"},
                                                      {Sign::neutral, "neutrally associated"},
                                                      {Sign::negative, "negatively associated"}};
  for (const auto& [s, text] : legend) {
    o += "    <line x1=\"20\" y1=\"" + fixed(ly - 4) + "\" x2=\"50\" y2=\"" + fixed(ly - 4) + "\" stroke=\"" +
         std::string(sign_color(s)) + "\" stroke-width=\"3\"/>";
    o += "<text x=\"58\" y=\"" + fixed(ly) + "\" font-size=\"12\">" + xml_escape(verblex::sign_glyph(s)) + ": " +
         std::string(text) + "</text>\n";
    ly += 20;
  }
  o += "  </g>\n</svg>\n";
  return o;
}

std::string export_wordcloud(const FindingsGraph& g) {
  std::vector<const WordNode*> v;
  for (const auto& n : g.words) v.push_back(&n);
  std::sort(v.begin(), v.end(), [](const WordNode* a, const WordNode* b) {
    return a->degree != b->degree ? a->degree > b->degree : a->label < b->label;
  });
  std::string o = "label\tdegree\n";
  for (const auto* n : v) o += n->label + "\t" + std::to_string(n->degree) + "\n";
  return o;
}

}  // namespace litnet::findnet
