#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pagenet/graph.hpp"
#include "pagenet/ingest.hpp"

namespace pagenet {

struct BackboneConfig {
  double alpha = 0.05;  // significance level in (0, 1]
  void validate() const;
};

// Probability that an edge carrying normalized weight p at a degree-k
// endpoint is at least this heterogeneous under the uniform null model:
// (1 - p)^(k-1). Degree-1 endpoints score 1 by convention -- their single
// edge trivially carries all their strength. Evaluated in log space so large
// degrees cannot underflow prematurely.
double edge_significance(double p, std::int64_t k);

struct ScoredEdge {
  std::string source;
  std::string target;
  std::int64_t weight = 0;
  double score_source = 1.0;
  double score_target = 1.0;
  bool retained = false;
};

struct BackboneResult {
  double alpha = 0.0;
  std::vector<ScoredEdge> edges;  // every input edge, scored, sorted

  std::int64_t total_weight = 0;
  std::int64_t retained_weight = 0;
  std::size_t node_count = 0;
  std::size_t retained_node_count = 0;  // nodes with >= 1 retained incident edge

  double weight_fraction_preserved = 0.0;
  double edge_fraction = 0.0;
  double node_fraction = 0.0;

  std::vector<const ScoredEdge*> retained_edges() const;
};

// Multiscale backbone: edge (i, j) survives iff min(score_i, score_j) < alpha
// (strict, two-sided OR rule). Throws DomainError on an empty graph.
BackboneResult disparity_filter(const WeightedGraph& graph, const BackboneConfig& config);

struct BackboneRankRow {
  std::string page_id;
  std::string name;  // empty when the vertex is not in the page registry
  std::int64_t strength = 0;  // over retained edges
  std::int64_t degree = 0;
};

// Pages ranked by retained strength desc, degree desc, page_id asc. Only
// vertices touching a retained edge appear.
std::vector<BackboneRankRow> backbone_report(const BackboneResult& result,
                                             std::span<const PageRecord> pages);

// CSV `source,target,weight,score_src,score_dst,retained_at_alpha` preceded
// by `#` summary lines carrying the retention fractions and the fixed
// degree-1 / strict-comparison conventions.
void write_backbone(std::ostream& out, const BackboneResult& result);

}  // namespace pagenet
