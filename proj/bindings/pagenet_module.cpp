// Python bindings for the analysis core. File-based loading, classification,
// distribution/correlation statistics, network construction, backbone
// extraction, and the staged pipeline are all reachable from Python; small
// result structs come back as plain dicts.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>
#include <sstream>

#include "pagenet/backbone.hpp"
#include "pagenet/classify.hpp"
#include "pagenet/graph.hpp"
#include "pagenet/pipeline.hpp"
#include "pagenet/stats.hpp"

namespace py = pybind11;
using namespace pagenet;

namespace {

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open '" + path + "'");
  return in;
}

ActivityDataset load_dataset_files(const std::string& pages, const std::string& posts,
                                   const std::string& likes, const std::string& comments) {
  auto pages_in = open_or_throw(pages);
  auto posts_in = open_or_throw(posts);
  auto likes_in = open_or_throw(likes);
  auto comments_in = open_or_throw(comments);
  return load_events(load_pages(pages_in), posts_in, likes_in, comments_in);
}

py::dict counts_to_dict(const CategoryCounts& counts) {
  py::dict out;
  out["active"] = counts.active;
  out["habitual"] = counts.habitual;
  out["occasional"] = counts.occasional;
  out["polarized"] = counts.polarized;
  out["polarized_likes"] = counts.polarized_likes;
  out["polarized_comments"] = counts.polarized_comments;
  out["polarized_like_share"] = counts.polarized_like_share
                                    ? py::object(py::float_(*counts.polarized_like_share))
                                    : py::object(py::none());
  out["polarized_comment_share"] =
      counts.polarized_comment_share
          ? py::object(py::float_(*counts.polarized_comment_share))
          : py::object(py::none());
  return out;
}

py::list metrics_rows(const PageMetricsTable& table) {
  py::list rows;
  for (const auto& row : table.rows()) {
    py::dict item;
    item["page_id"] = row.page_id;
    item["users"] = row.users;
    item["posts"] = row.posts;
    item["likes"] = row.likes;
    item["comments"] = row.comments;
    item["shares"] = row.shares;
    item["polarized"] = row.polarized;
    rows.append(std::move(item));
  }
  return rows;
}

}  // namespace

PYBIND11_MODULE(pagenet, m) {
  m.doc() = "Geolocated page-activity analytics: user classification, activity "
            "statistics, co-occurrence networks, and disparity-filter backbones.";

  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<IntegrityError>(m, "IntegrityError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<LookupError>(m, "IdLookupError", PyExc_KeyError);

  py::class_<ActivityDataset>(m, "Dataset")
      .def_property_readonly("page_count",
                             [](const ActivityDataset& ds) { return ds.pages().size(); })
      .def_property_readonly("post_count",
                             [](const ActivityDataset& ds) { return ds.posts().size(); })
      .def_property_readonly("like_count",
                             [](const ActivityDataset& ds) { return ds.likes().size(); })
      .def_property_readonly("comment_count",
                             [](const ActivityDataset& ds) { return ds.comments().size(); })
      .def("page_ids", [](const ActivityDataset& ds) {
        std::vector<std::string> ids;
        for (const auto& page : ds.pages()) ids.push_back(page.page_id);
        return ids;
      });

  m.def("load_dataset", &load_dataset_files, py::arg("pages"), py::arg("posts"),
        py::arg("likes"), py::arg("comments"),
        "Load and validate the four input files into an indexed dataset.");

  m.def("validate", [](const ActivityDataset& ds) {
    ValidationReport report = validate(ds);
    py::dict out;
    out["pages"] = report.page_count;
    out["posts"] = report.post_count;
    out["likes"] = report.like_count;
    out["comments"] = report.comment_count;
    out["posts_with_object_id"] = report.posts_with_object_id;
    out["admin_posts"] = report.admin_posts;
    out["object_id_coverage"] = report.object_id_coverage()
                                    ? py::object(py::float_(*report.object_id_coverage()))
                                    : py::object(py::none());
    out["admin_post_share"] = report.admin_post_share()
                                  ? py::object(py::float_(*report.admin_post_share()))
                                  : py::object(py::none());
    out["errors"] = report.errors;
    return out;
  });

  py::class_<UserClassification>(m, "Classification")
      .def_property_readonly("user_count",
                             [](const UserClassification& c) { return c.users().size(); })
      .def("is_polarized", &UserClassification::is_polarized, py::arg("user_id"))
      .def("polarized_count_by_page", &UserClassification::polarized_count_by_page)
      .def("user",
           [](const UserClassification& c, const std::string& user_id) {
             auto it = c.users().find(user_id);
             if (it == c.users().end()) {
               throw LookupError("unknown user '" + user_id + "'");
             }
             py::dict out;
             out["total_likes"] = it->second.total_likes;
             out["category"] = std::string(to_string(it->second.category));
             out["polarized_on"] = it->second.polarized_on
                                       ? py::object(py::str(*it->second.polarized_on))
                                       : py::object(py::none());
             out["likes_by_page"] = it->second.likes_by_page;
             return out;
           },
           py::arg("user_id"));

  m.def("classify_users",
        [](const ActivityDataset& ds, std::int64_t habitual_min_likes,
           double polarization_fraction) {
          return classify_users(ds, ClassifyConfig{habitual_min_likes,
                                                   polarization_fraction});
        },
        py::arg("dataset"), py::arg("habitual_min_likes") = 5,
        py::arg("polarization_fraction") = 0.95);

  m.def("category_counts", [](const UserClassification& cls, const ActivityDataset& ds) {
    return counts_to_dict(category_counts(cls, ds));
  });

  m.def("page_audience",
        [](const std::string& page_id, const UserClassification& cls,
           const ActivityDataset& ds) {
          PageAudience audience = page_audience(page_id, cls, ds);
          py::dict out;
          out["occasional"] = audience.occasional;
          out["polarized_here"] = audience.polarized_here;
          out["habitual_not_polarized"] = audience.habitual_not_polarized;
          out["polarized_elsewhere"] = audience.polarized_elsewhere;
          return out;
        },
        py::arg("page_id"), py::arg("classification"), py::arg("dataset"));

  m.def("polarized_activity",
        [](const UserClassification& cls, const ActivityDataset& ds) {
          PolarizedActivity activity = polarized_activity_distributions(cls, ds);
          py::dict out;
          out["likes_per_user"] = activity.likes_per_user;
          out["comments_per_user"] = activity.comments_per_user;
          out["fraction_commented"] =
              activity.fraction_commented
                  ? py::object(py::float_(*activity.fraction_commented))
                  : py::object(py::none());
          return out;
        },
        py::arg("classification"), py::arg("dataset"));

  py::class_<EmpiricalDistribution>(m, "EmpiricalDistribution")
      .def("cdf", &EmpiricalDistribution::cdf, py::arg("x"))
      .def("ccdf", &EmpiricalDistribution::ccdf, py::arg("x"))
      .def("pdf", &EmpiricalDistribution::pdf, py::arg("x"))
      .def_property_readonly("sample_count", &EmpiricalDistribution::sample_count)
      .def("points", &EmpiricalDistribution::ccdf_points);

  m.def("empirical_ccdf", [](const std::vector<double>& samples) {
    return EmpiricalDistribution(samples);
  });

  m.def("pearson", [](const std::vector<double>& x, const std::vector<double>& y) {
    return pearson(x, y);
  });

  py::class_<PageMetricsTable>(m, "PageMetrics")
      .def("rows", &metrics_rows)
      .def("column", &PageMetricsTable::column, py::arg("measure"));

  m.def("page_metrics", &page_metrics, py::arg("dataset"), py::arg("classification"));

  m.def("correlation_matrix",
        [](const PageMetricsTable& metrics, const std::vector<std::string>& columns) {
          CorrelationMatrix matrix = correlation_matrix(metrics, columns);
          py::list cells;
          for (const auto& row : matrix.cells) {
            py::list line;
            for (const auto& cell : row) {
              line.append(cell ? py::object(py::float_(*cell)) : py::object(py::none()));
            }
            cells.append(std::move(line));
          }
          py::dict out;
          out["columns"] = matrix.columns;
          out["cells"] = std::move(cells);
          return out;
        },
        py::arg("metrics"), py::arg("columns"));

  m.def("post_type_breakdown", [](const ActivityDataset& ds) {
    PostTypeBreakdown breakdown = post_type_breakdown(ds);
    py::dict out;
    for (std::size_t i = 0; i < kPostTypeCount; ++i) {
      auto type = static_cast<PostType>(i);
      py::dict row;
      row["posts"] = breakdown.post_counts[i];
      row["likes"] = breakdown.like_counts[i];
      row["comments"] = breakdown.comment_counts[i];
      row["posts_fraction"] = breakdown.post_fraction(type)
                                  ? py::object(py::float_(*breakdown.post_fraction(type)))
                                  : py::object(py::none());
      row["likes_fraction"] = breakdown.like_fraction(type)
                                  ? py::object(py::float_(*breakdown.like_fraction(type)))
                                  : py::object(py::none());
      out[std::string(to_string(type)).c_str()] = std::move(row);
    }
    return out;
  });

  m.def("admin_split", [](const ActivityDataset& ds) {
    AdminSplit split = admin_split(ds);
    py::dict out;
    out["admin_posts"] = split.admin_posts;
    out["user_posts"] = split.user_posts;
    out["admin_post_share"] = split.admin_post_share
                                  ? py::object(py::float_(*split.admin_post_share))
                                  : py::object(py::none());
    out["admin_like_share"] = split.admin_like_share
                                  ? py::object(py::float_(*split.admin_like_share))
                                  : py::object(py::none());
    out["admin_like_samples"] = split.admin_like_samples;
    out["user_like_samples"] = split.user_like_samples;
    py::list per_page;
    for (const auto& row : split.per_page) {
      py::dict item;
      item["page_id"] = row.page_id;
      item["admin_posts"] = row.admin_posts;
      item["user_posts"] = row.user_posts;
      per_page.append(std::move(item));
    }
    out["per_page"] = std::move(per_page);
    return out;
  });

  py::class_<BipartiteGraph>(m, "BipartiteGraph")
      .def_property_readonly("left_count", &BipartiteGraph::left_count)
      .def_property_readonly("right_count", &BipartiteGraph::right_count)
      .def_property_readonly("edge_count", &BipartiteGraph::edge_count)
      .def("has_edge", &BipartiteGraph::has_edge, py::arg("left_id"), py::arg("right_id"));

  m.def("reshare_classes", [](const ActivityDataset& ds) {
    py::list out;
    for (const auto& cls : reshare_classes(ds.posts())) {
      py::dict item;
      item["object_id"] = cls.object_id;
      item["representative"] = cls.representative;
      item["members"] = cls.members;
      item["pages"] = cls.pages;
      out.append(std::move(item));
    }
    return out;
  });

  m.def("build_pages_posts", &build_pages_posts, py::arg("dataset"));
  m.def("build_pages_polarized", &build_pages_polarized, py::arg("dataset"),
        py::arg("classification"));

  py::class_<WeightedGraph>(m, "WeightedGraph")
      .def_property_readonly("vertex_count", &WeightedGraph::vertex_count)
      .def_property_readonly("edge_count", &WeightedGraph::edge_count)
      .def_property_readonly("total_weight", &WeightedGraph::total_weight)
      .def("vertices", &WeightedGraph::vertices)
      .def("degree", &WeightedGraph::degree, py::arg("vertex"))
      .def("strength", &WeightedGraph::strength, py::arg("vertex"))
      .def("edges", [](const WeightedGraph& g) {
        std::vector<std::tuple<std::string, std::string, std::int64_t>> edges;
        for (const auto& edge : g.edges()) {
          edges.emplace_back(edge.source, edge.target, edge.weight);
        }
        return edges;
      });

  m.def("weighted_graph",
        [](const std::vector<std::tuple<std::string, std::string, std::int64_t>>& edges) {
          std::vector<WeightedEdge> converted;
          for (const auto& [source, target, weight] : edges) {
            converted.push_back({source, target, weight});
          }
          return WeightedGraph::from_edges(std::move(converted));
        },
        py::arg("edges"), "Build an undirected weighted graph from (u, v, w) tuples.");

  m.def("project",
        [](const BipartiteGraph& graph, const std::string& side) {
          if (side == "left") return project(graph, ProjectionSide::left);
          if (side == "right") return project(graph, ProjectionSide::right);
          throw DomainError("side must be 'left' or 'right'");
        },
        py::arg("graph"), py::arg("side") = "left");

  m.def("edge_significance", &edge_significance, py::arg("p"), py::arg("k"));

  py::class_<BackboneResult>(m, "BackboneResult")
      .def_readonly("alpha", &BackboneResult::alpha)
      .def_readonly("weight_fraction_preserved", &BackboneResult::weight_fraction_preserved)
      .def_readonly("edge_fraction", &BackboneResult::edge_fraction)
      .def_readonly("node_fraction", &BackboneResult::node_fraction)
      .def("edges",
           [](const BackboneResult& result) {
             py::list out;
             for (const auto& edge : result.edges) {
               py::dict item;
               item["source"] = edge.source;
               item["target"] = edge.target;
               item["weight"] = edge.weight;
               item["score_source"] = edge.score_source;
               item["score_target"] = edge.score_target;
               item["retained"] = edge.retained;
               out.append(std::move(item));
             }
             return out;
           })
      .def("retained", [](const BackboneResult& result) {
        std::vector<std::tuple<std::string, std::string, std::int64_t>> retained;
        for (const auto& edge : result.edges) {
          if (edge.retained) retained.emplace_back(edge.source, edge.target, edge.weight);
        }
        return retained;
      });

  m.def("disparity_filter",
        [](const WeightedGraph& graph, double alpha) {
          return disparity_filter(graph, BackboneConfig{alpha});
        },
        py::arg("graph"), py::arg("alpha") = 0.05);

  m.def("backbone_report",
        [](const BackboneResult& result, const ActivityDataset& ds) {
          py::list out;
          for (const auto& row : backbone_report(result, ds.pages())) {
            py::dict item;
            item["page_id"] = row.page_id;
            item["name"] = row.name;
            item["strength"] = row.strength;
            item["degree"] = row.degree;
            out.append(std::move(item));
          }
          return out;
        },
        py::arg("result"), py::arg("dataset"));

  m.def("run_pipeline",
        [](const std::string& config_path, const std::string& stages,
           const std::optional<std::string>& out_dir,
           const std::optional<std::vector<double>>& alphas) {
          PipelineConfig config = PipelineConfig::from_file(config_path);
          if (out_dir) config.out_dir = *out_dir;
          if (alphas) config.alphas = *alphas;
          RunManifest manifest = run_pipeline(config, parse_stages(stages));
          py::dict out;
          out["stages"] = manifest.stages_run;
          out["exports"] = manifest.exports;
          out["intermediates"] = manifest.intermediates;
          out["warnings"] = manifest.warnings;
          py::dict files;
          for (const auto& [rel, digest] : manifest.files) {
            py::dict item;
            item["bytes"] = digest.bytes;
            item["fnv1a64"] = digest.fnv1a64;
            files[rel.c_str()] = std::move(item);
          }
          out["files"] = std::move(files);
          return out;
        },
        py::arg("config"), py::arg("stages") = "all", py::arg("out_dir") = std::nullopt,
        py::arg("alphas") = std::nullopt,
        "Run the staged pipeline from a config file and return the manifest.");

  m.attr("__version__") = "0.1.0";
}
