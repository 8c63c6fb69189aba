#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pagenet/classify.hpp"
#include "pagenet/ingest.hpp"

namespace pagenet {

// Equivalence class of posts sharing one object_id. The representative is the
// earliest-timestamp member, ties broken by lexicographic post_id; any member
// gives the same projection topology, this one keeps exports reproducible.
struct ReshareClass {
  std::string object_id;
  std::string representative;
  std::vector<std::string> members;  // post_ids, sorted
  std::vector<std::string> pages;    // distinct pages carrying a copy, sorted
};

// Classes partition the object_id-bearing posts; posts without an object_id
// are left out entirely (their reshare identity is unknowable).
std::vector<ReshareClass> reshare_classes(std::span<const PostRecord> posts);

// Two disjoint vertex sides with the edge set stored as adjacency lists both
// ways. Sides live in separate index spaces, so identifier collisions across
// sides are structurally impossible.
class BipartiteGraph {
 public:
  BipartiteGraph(std::vector<std::string> left_ids, std::vector<std::string> right_ids);

  // Deduplicates repeated edges; throws LookupError on unknown endpoints.
  void add_edge(std::string_view left_id, std::string_view right_id);
  void finalize();  // sorts adjacency; idempotent

  std::size_t left_count() const { return left_ids_.size(); }
  std::size_t right_count() const { return right_ids_.size(); }
  std::size_t edge_count() const;

  const std::string& left_id(std::size_t i) const { return left_ids_[i]; }
  const std::string& right_id(std::size_t j) const { return right_ids_[j]; }
  std::span<const std::uint32_t> left_neighbors(std::size_t i) const;
  std::span<const std::uint32_t> right_neighbors(std::size_t j) const;
  bool has_edge(std::string_view left_id, std::string_view right_id) const;

 private:
  std::vector<std::string> left_ids_;
  std::vector<std::string> right_ids_;
  std::unordered_map<std::string, std::uint32_t> left_index_;
  std::unordered_map<std::string, std::uint32_t> right_index_;
  std::vector<std::vector<std::uint32_t>> left_adj_;
  std::vector<std::vector<std::uint32_t>> right_adj_;
  bool finalized_ = false;
};

// Pages-posts network: pages on the left, class representatives on the right;
// an edge means some member of the class was posted on that page.
BipartiteGraph build_pages_posts(const ActivityDataset& dataset);

// Pages-polarized-users network: an edge means the polarized user liked at
// least one post on the page. Every polarized user gets at least the edge to
// their polarization page.
BipartiteGraph build_pages_polarized(const ActivityDataset& dataset,
                                     const UserClassification& classification);

struct WeightedEdge {
  std::string source;  // source < target lexicographically
  std::string target;
  std::int64_t weight = 0;
};

// Undirected co-occurrence network with positive integer weights.
class WeightedGraph {
 public:
  // Validates: no self-loops, weights >= 1, no duplicate pairs.
  static WeightedGraph from_edges(std::vector<WeightedEdge> edges);

  const std::vector<WeightedEdge>& edges() const { return edges_; }    // sorted
  const std::vector<std::string>& vertices() const { return vertices_; }  // sorted
  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  std::int64_t total_weight() const { return total_weight_; }

  std::int64_t degree(std::string_view vertex) const;
  std::int64_t strength(std::string_view vertex) const;  // sum of incident weights

 private:
  std::vector<WeightedEdge> edges_;
  std::vector<std::string> vertices_;
  std::unordered_map<std::string, std::size_t> vertex_index_;
  std::vector<std::int64_t> degrees_;
  std::vector<std::int64_t> strengths_;
  std::int64_t total_weight_ = 0;
};

enum class ProjectionSide { left, right };

// Co-occurrence projection: edge (u, v) with weight |N(u) ∩ N(v)| for every
// same-side pair sharing a neighbor. Computed by pair counting per opposite
// vertex; the dense MMᵀ product serves only as the test oracle.
WeightedGraph project(const BipartiteGraph& graph, ProjectionSide side);

// CSV `source_page,target_page,weight`, rows sorted, source < target.
void write_weighted_edges(std::ostream& out, const WeightedGraph& graph);
WeightedGraph read_weighted_edges(std::istream& in);  // throws ParseError

}  // namespace pagenet
