#include "pagenet/graph.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <set>

#include "pagenet/text.hpp"

namespace pagenet {

std::vector<ReshareClass> reshare_classes(std::span<const PostRecord> posts) {
  std::map<std::string, std::vector<const PostRecord*>> by_object;
  for (const auto& post : posts) {
    if (post.object_id) by_object[*post.object_id].push_back(&post);
  }
  std::vector<ReshareClass> classes;
  classes.reserve(by_object.size());
  for (auto& [object_id, members] : by_object) {
    ReshareClass cls;
    cls.object_id = object_id;
    const PostRecord* rep = members.front();
    std::set<std::string> pages;
    for (const PostRecord* post : members) {
      cls.members.push_back(post->post_id);
      pages.insert(post->page_id);
      if (post->timestamp < rep->timestamp ||
          (post->timestamp == rep->timestamp && post->post_id < rep->post_id)) {
        rep = post;
      }
    }
    cls.representative = rep->post_id;
    std::sort(cls.members.begin(), cls.members.end());
    cls.pages.assign(pages.begin(), pages.end());
    classes.push_back(std::move(cls));
  }
  return classes;
}

BipartiteGraph::BipartiteGraph(std::vector<std::string> left_ids,
                               std::vector<std::string> right_ids)
    : left_ids_(std::move(left_ids)), right_ids_(std::move(right_ids)) {
  for (std::size_t i = 0; i < left_ids_.size(); ++i) {
    if (!left_index_.emplace(left_ids_[i], static_cast<std::uint32_t>(i)).second) {
      throw IntegrityError("duplicate left vertex '" + left_ids_[i] + "'");
    }
  }
  for (std::size_t j = 0; j < right_ids_.size(); ++j) {
    if (!right_index_.emplace(right_ids_[j], static_cast<std::uint32_t>(j)).second) {
      throw IntegrityError("duplicate right vertex '" + right_ids_[j] + "'");
    }
  }
  left_adj_.assign(left_ids_.size(), {});
  right_adj_.assign(right_ids_.size(), {});
}

void BipartiteGraph::add_edge(std::string_view left_id, std::string_view right_id) {
  auto li = left_index_.find(std::string(left_id));
  if (li == left_index_.end()) {
    throw LookupError("unknown left vertex '" + std::string(left_id) + "'");
  }
  auto ri = right_index_.find(std::string(right_id));
  if (ri == right_index_.end()) {
    throw LookupError("unknown right vertex '" + std::string(right_id) + "'");
  }
  left_adj_[li->second].push_back(ri->second);
  right_adj_[ri->second].push_back(li->second);
  finalized_ = false;
}

void BipartiteGraph::finalize() {
  auto sort_unique = [](std::vector<std::uint32_t>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  };
  for (auto& adj : left_adj_) sort_unique(adj);
  for (auto& adj : right_adj_) sort_unique(adj);
  finalized_ = true;
}

std::size_t BipartiteGraph::edge_count() const {
  std::size_t count = 0;
  for (const auto& adj : left_adj_) count += adj.size();
  return count;
}

std::span<const std::uint32_t> BipartiteGraph::left_neighbors(std::size_t i) const {
  return left_adj_.at(i);
}

std::span<const std::uint32_t> BipartiteGraph::right_neighbors(std::size_t j) const {
  return right_adj_.at(j);
}

bool BipartiteGraph::has_edge(std::string_view left_id, std::string_view right_id) const {
  auto li = left_index_.find(std::string(left_id));
  auto ri = right_index_.find(std::string(right_id));
  if (li == left_index_.end() || ri == right_index_.end()) return false;
  const auto& adj = left_adj_[li->second];
  return std::binary_search(adj.begin(), adj.end(), ri->second);
}

BipartiteGraph build_pages_posts(const ActivityDataset& dataset) {
  std::vector<ReshareClass> classes = reshare_classes(dataset.posts());
  std::vector<std::string> left_ids;
  left_ids.reserve(dataset.pages().size());
  for (const auto& page : dataset.pages()) left_ids.push_back(page.page_id);
  std::vector<std::string> right_ids;
  right_ids.reserve(classes.size());
  for (const auto& cls : classes) right_ids.push_back(cls.representative);

  BipartiteGraph graph(std::move(left_ids), std::move(right_ids));
  for (const auto& cls : classes) {
    for (const auto& page_id : cls.pages) {
      graph.add_edge(page_id, cls.representative);
    }
  }
  graph.finalize();
  return graph;
}

BipartiteGraph build_pages_polarized(const ActivityDataset& dataset,
                                     const UserClassification& classification) {
  std::vector<std::string> left_ids;
  left_ids.reserve(dataset.pages().size());
  for (const auto& page : dataset.pages()) left_ids.push_back(page.page_id);
  std::vector<std::string> right_ids;
  for (const auto& [user_id, rec] : classification.users()) {
    if (rec.polarized_on) right_ids.push_back(user_id);
  }

  BipartiteGraph graph(std::move(left_ids), std::move(right_ids));
  for (const auto& [user_id, rec] : classification.users()) {
    if (!rec.polarized_on) continue;
    // "active on page" = liked at least one post there
    for (const auto& [page_id, count] : rec.likes_by_page) {
      if (count > 0) graph.add_edge(page_id, user_id);
    }
  }
  graph.finalize();
  return graph;
}

WeightedGraph WeightedGraph::from_edges(std::vector<WeightedEdge> edges) {
  WeightedGraph graph;
  std::set<std::string> vertex_set;
  std::set<std::pair<std::string, std::string>> seen;
  for (auto& edge : edges) {
    if (edge.source == edge.target) {
      throw DomainError("self-loop on '" + edge.source + "'");
    }
    if (edge.weight < 1) {
      throw DomainError("non-positive weight on (" + edge.source + ", " + edge.target + ")");
    }
    if (edge.source > edge.target) std::swap(edge.source, edge.target);
    if (!seen.insert({edge.source, edge.target}).second) {
      throw DomainError("duplicate edge (" + edge.source + ", " + edge.target + ")");
    }
    vertex_set.insert(edge.source);
    vertex_set.insert(edge.target);
  }
  std::sort(edges.begin(), edges.end(), [](const WeightedEdge& a, const WeightedEdge& b) {
    return std::tie(a.source, a.target) < std::tie(b.source, b.target);
  });
  graph.edges_ = std::move(edges);
  graph.vertices_.assign(vertex_set.begin(), vertex_set.end());
  for (std::size_t i = 0; i < graph.vertices_.size(); ++i) {
    graph.vertex_index_.emplace(graph.vertices_[i], i);
  }
  graph.degrees_.assign(graph.vertices_.size(), 0);
  graph.strengths_.assign(graph.vertices_.size(), 0);
  for (const auto& edge : graph.edges_) {
    std::size_t s = graph.vertex_index_.at(edge.source);
    std::size_t t = graph.vertex_index_.at(edge.target);
    ++graph.degrees_[s];
    ++graph.degrees_[t];
    graph.strengths_[s] += edge.weight;
    graph.strengths_[t] += edge.weight;
    graph.total_weight_ += edge.weight;
  }
  return graph;
}

std::int64_t WeightedGraph::degree(std::string_view vertex) const {
  auto it = vertex_index_.find(std::string(vertex));
  if (it == vertex_index_.end()) {
    throw LookupError("unknown vertex '" + std::string(vertex) + "'");
  }
  return degrees_[it->second];
}

std::int64_t WeightedGraph::strength(std::string_view vertex) const {
  auto it = vertex_index_.find(std::string(vertex));
  if (it == vertex_index_.end()) {
    throw LookupError("unknown vertex '" + std::string(vertex) + "'");
  }
  return strengths_[it->second];
}

WeightedGraph project(const BipartiteGraph& graph, ProjectionSide side) {
  std::size_t opposite = side == ProjectionSide::left ? graph.right_count()
                                                      : graph.left_count();
  // Common-neighbor counts accumulated sparsely, one opposite vertex at a time.
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::int64_t> pair_counts;
  for (std::size_t v = 0; v < opposite; ++v) {
    std::span<const std::uint32_t> members = side == ProjectionSide::left
                                                 ? graph.right_neighbors(v)
                                                 : graph.left_neighbors(v);
    for (std::size_t a = 0; a < members.size(); ++a) {
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        ++pair_counts[{members[a], members[b]}];
      }
    }
  }
  std::vector<WeightedEdge> edges;
  edges.reserve(pair_counts.size());
  for (const auto& [pair, weight] : pair_counts) {
    const std::string& u = side == ProjectionSide::left ? graph.left_id(pair.first)
                                                        : graph.right_id(pair.first);
    const std::string& v = side == ProjectionSide::left ? graph.left_id(pair.second)
                                                        : graph.right_id(pair.second);
    WeightedEdge edge;
    edge.source = std::min(u, v);
    edge.target = std::max(u, v);
    edge.weight = weight;
    edges.push_back(std::move(edge));
  }
  return WeightedGraph::from_edges(std::move(edges));
}

void write_weighted_edges(std::ostream& out, const WeightedGraph& graph) {
  out << "source_page,target_page,weight\n";
  for (const auto& edge : graph.edges()) {
    out << csv_escape(edge.source) << ',' << csv_escape(edge.target) << ','
        << edge.weight << '\n';
  }
}

WeightedGraph read_weighted_edges(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != "source_page,target_page,weight") {
    throw ParseError("edges:1: expected header 'source_page,target_page,weight'");
  }
  std::vector<WeightedEdge> edges;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view trimmed = trim(line);
    if (trimmed.empty()) continue;
    std::vector<std::string> fields = split_csv_line(trimmed);
    if (fields.size() != 3) {
      throw ParseError("edges:" + std::to_string(line_no) + ": expected 3 fields");
    }
    WeightedEdge edge;
    edge.source = fields[0];
    edge.target = fields[1];
    if (!parse_int64(trim(fields[2]), edge.weight)) {
      throw ParseError("edges:" + std::to_string(line_no) + ": bad weight '" +
                       fields[2] + "'");
    }
    edges.push_back(std::move(edge));
  }
  return WeightedGraph::from_edges(std::move(edges));
}

}  // namespace pagenet
