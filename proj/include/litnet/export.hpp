#pragma once

#include <nlohmann/json_fwd.hpp>

#include <optional>
#include <string>
#include <string_view>

#include "litnet/findnet.hpp"

namespace litnet::findnet {

/// graph.json: {n_articles, pair_total, sign_totals, sign_basis, laid_out,
/// nodes:[{label, degree, ring, cluster, x, y}], edges:[{source, target,
/// weight, sign_weights:{pos,neu,neg}, sign_counts:{pos,neu,neg},
/// dominant_sign, article_count}]}. Counts and totals make the reload exact.
nlohmann::json to_json(const FindingsGraph& g);
std::string export_json(const FindingsGraph& g);
/// Inverse of to_json; the result has no incidence.
FindingsGraph graph_from_json(const nlohmann::json& j);

std::string export_graphml(const FindingsGraph& g);
std::string export_dot(const FindingsGraph& g);

enum class RenderMode { cluster, sign_nodes };
/// Throws Error(ConfigError).
RenderMode render_mode_from_string(std::string_view s);

/// Self-contained SVG at the layout coordinates. cluster mode draws signed,
/// arrowed edges over cluster-colored nodes. sign_nodes mode draws no edges
/// and colors each node by the dominant sign of its edge with `ego` (or of its
/// heaviest edge when no ego is given). Throws Error(LayoutMissing).
std::string render_svg(const FindingsGraph& g, RenderMode mode = RenderMode::cluster,
                       const std::optional<std::string>& ego = std::nullopt);

/// "label\tdegree" rows under a header, by degree descending then label.
std::string export_wordcloud(const FindingsGraph& g);

std::string_view sign_color(Sign s);

}  // namespace litnet::findnet
