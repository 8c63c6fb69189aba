#include "pagenet/backbone.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

#include "pagenet/text.hpp"

namespace pagenet {

void BackboneConfig::validate() const {
  if (!(alpha > 0.0) || alpha > 1.0) {
    throw DomainError("alpha must lie in (0, 1]");
  }
}

double edge_significance(double p, std::int64_t k) {
  if (!(p > 0.0) || p > 1.0) throw DomainError("normalized weight p must lie in (0, 1]");
  if (k < 1) throw DomainError("endpoint degree must be >= 1");
  if (k == 1) return 1.0;
  if (p == 1.0) return 0.0;
  return std::exp(static_cast<double>(k - 1) * std::log1p(-p));
}

BackboneResult disparity_filter(const WeightedGraph& graph, const BackboneConfig& config) {
  config.validate();
  if (graph.edge_count() == 0) throw DomainError("disparity filter needs a non-empty graph");

  // Cache degree/strength per vertex once; scoring is then pure per edge.
  std::unordered_map<std::string, std::pair<std::int64_t, std::int64_t>> stats;
  stats.reserve(graph.vertex_count());
  for (const auto& vertex : graph.vertices()) {
    stats.emplace(vertex, std::make_pair(graph.degree(vertex), graph.strength(vertex)));
  }

  BackboneResult result;
  result.alpha = config.alpha;
  result.node_count = graph.vertex_count();
  result.total_weight = graph.total_weight();
  result.edges.reserve(graph.edge_count());

  std::unordered_set<std::string_view> retained_nodes;
  for (const auto& edge : graph.edges()) {
    const auto& [deg_s, str_s] = stats.at(edge.source);
    const auto& [deg_t, str_t] = stats.at(edge.target);
    ScoredEdge scored;
    scored.source = edge.source;
    scored.target = edge.target;
    scored.weight = edge.weight;
    scored.score_source = edge_significance(
        static_cast<double>(edge.weight) / static_cast<double>(str_s), deg_s);
    scored.score_target = edge_significance(
        static_cast<double>(edge.weight) / static_cast<double>(str_t), deg_t);
    scored.retained = std::min(scored.score_source, scored.score_target) < config.alpha;
    if (scored.retained) {
      result.retained_weight += edge.weight;
      retained_nodes.insert(edge.source);  // views into the input graph, which outlives us
      retained_nodes.insert(edge.target);
    }
    result.edges.push_back(std::move(scored));
  }
  result.retained_node_count = retained_nodes.size();

  std::size_t retained_edges = 0;
  for (const auto& edge : result.edges) {
    if (edge.retained) ++retained_edges;
  }
  result.weight_fraction_preserved =
      static_cast<double>(result.retained_weight) / static_cast<double>(result.total_weight);
  result.edge_fraction =
      static_cast<double>(retained_edges) / static_cast<double>(result.edges.size());
  result.node_fraction = result.node_count == 0
                             ? 0.0
                             : static_cast<double>(result.retained_node_count) /
                                   static_cast<double>(result.node_count);
  return result;
}

std::vector<const ScoredEdge*> BackboneResult::retained_edges() const {
  std::vector<const ScoredEdge*> retained;
  for (const auto& edge : edges) {
    if (edge.retained) retained.push_back(&edge);
  }
  return retained;
}

std::vector<BackboneRankRow> backbone_report(const BackboneResult& result,
                                             std::span<const PageRecord> pages) {
  std::unordered_map<std::string_view, const PageRecord*> registry;
  for (const auto& page : pages) registry.emplace(page.page_id, &page);

  std::unordered_map<std::string, BackboneRankRow> rows;
  for (const auto& edge : result.edges) {
    if (!edge.retained) continue;
    for (const std::string* id : {&edge.source, &edge.target}) {
      BackboneRankRow& row = rows[*id];
      row.page_id = *id;
      row.strength += edge.weight;
      ++row.degree;
      if (row.name.empty()) {
        if (auto it = registry.find(*id); it != registry.end()) {
          row.name = it->second->name;
        }
      }
    }
  }

  std::vector<BackboneRankRow> ranking;
  ranking.reserve(rows.size());
  for (auto& [id, row] : rows) ranking.push_back(std::move(row));
  std::sort(ranking.begin(), ranking.end(),
            [](const BackboneRankRow& a, const BackboneRankRow& b) {
              if (a.strength != b.strength) return a.strength > b.strength;
              if (a.degree != b.degree) return a.degree > b.degree;
              return a.page_id < b.page_id;
            });
  return ranking;
}

void write_backbone(std::ostream& out, const BackboneResult& result) {
  out << "# alpha=" << format_double(result.alpha)
      << " weight_fraction_preserved=" << format_double(result.weight_fraction_preserved)
      << " edge_fraction=" << format_double(result.edge_fraction)
      << " node_fraction=" << format_double(result.node_fraction) << '\n';
  out << "# conventions: degree-1 endpoints score 1; retained iff "
         "min(score_src,score_dst) < alpha (strict)\n";
  out << "source,target,weight,score_src,score_dst,retained_at_alpha\n";
  for (const auto& edge : result.edges) {
    out << csv_escape(edge.source) << ',' << csv_escape(edge.target) << ','
        << edge.weight << ',' << format_double(edge.score_source) << ','
        << format_double(edge.score_target) << ',' << (edge.retained ? 1 : 0) << '\n';
  }
}

}  // namespace pagenet
