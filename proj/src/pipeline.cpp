#include "pagenet/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "pagenet/backbone.hpp"
#include "pagenet/graph.hpp"
#include "pagenet/text.hpp"

namespace fs = std::filesystem;

namespace pagenet {

namespace {

using nlohmann::json;

constexpr std::array<Stage, 5> kStageOrder = {Stage::ingest, Stage::classify,
                                              Stage::stats, Stage::graphs,
                                              Stage::backbone};

// Relative paths of the persisted dataset intermediates.
constexpr const char* kPagesFile = "pages.csv";
constexpr const char* kPostsFile = "posts.jsonl";
constexpr const char* kLikesFile = "likes.jsonl";
constexpr const char* kCommentsFile = "comments.jsonl";
constexpr const char* kEdgesReshares = "edges_reshares.csv";
constexpr const char* kEdgesCommonUsers = "edges_common_users.csv";

}  // namespace

std::string_view to_string(Stage stage) {
  switch (stage) {
    case Stage::ingest: return "ingest";
    case Stage::classify: return "classify";
    case Stage::stats: return "stats";
    case Stage::graphs: return "graphs";
    case Stage::backbone: return "backbone";
  }
  return "unknown";
}

std::span<const Stage> all_stages() { return kStageOrder; }

std::vector<Stage> parse_stages(std::string_view verb) {
  if (verb == "all") return {kStageOrder.begin(), kStageOrder.end()};
  for (Stage stage : kStageOrder) {
    if (verb == to_string(stage)) return {stage};
  }
  throw DomainError("unknown stage '" + std::string(verb) + "'");
}

PipelineConfig PipelineConfig::from_file(const std::string& path,
                                         std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open config file '" + path + "'");
  fs::path base = fs::path(path).parent_path();
  auto resolve = [&](std::string_view value) {
    fs::path p(value);
    return p.is_absolute() ? p.string() : (base / p).string();
  };

  PipelineConfig config;
  bool seen_alpha = false;
  std::string section;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    if (text.front() == '[' && text.back() == ']') {
      section = std::string(trim(text.substr(1, text.size() - 2)));
      continue;
    }
    std::size_t eq = text.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError("config:" + std::to_string(line_no) + ": expected key = value");
    }
    std::string key = std::string(trim(text.substr(0, eq)));
    std::string value = std::string(trim(text.substr(eq + 1)));
    std::string qualified = section.empty() ? key : section + "." + key;

    if (qualified == "inputs.pages") {
      config.pages_path = resolve(value);
    } else if (qualified == "inputs.posts") {
      config.posts_path = resolve(value);
    } else if (qualified == "inputs.likes") {
      config.likes_path = resolve(value);
    } else if (qualified == "inputs.comments") {
      config.comments_path = resolve(value);
    } else if (qualified == "classify.habitual_min_likes") {
      if (!parse_int64(value, config.classify.habitual_min_likes)) {
        throw ParseError("config:" + std::to_string(line_no) +
                         ": bad integer '" + value + "'");
      }
    } else if (qualified == "classify.polarization_fraction") {
      if (!parse_double(value, config.classify.polarization_fraction)) {
        throw ParseError("config:" + std::to_string(line_no) +
                         ": bad number '" + value + "'");
      }
    } else if (qualified == "backbone.alpha") {
      double alpha = 0.0;
      if (!parse_double(value, alpha)) {
        throw ParseError("config:" + std::to_string(line_no) +
                         ": bad number '" + value + "'");
      }
      if (!seen_alpha) {
        config.alphas.clear();  // first explicit alpha replaces the defaults
        seen_alpha = true;
      }
      config.alphas.push_back(alpha);
    } else if (qualified == "output.dir") {
      config.out_dir = resolve(value);
    } else if (warnings != nullptr) {
      warnings->push_back("config:" + std::to_string(line_no) + ": unknown key '" +
                          qualified + "' ignored");
    }
  }
  return config;
}

void PipelineConfig::validate() const {
  classify.validate();
  if (alphas.empty()) throw DomainError("at least one alpha is required");
  for (double alpha : alphas) {
    if (!(alpha > 0.0) || alpha > 1.0) {
      throw DomainError("alpha " + format_double(alpha) + " outside (0, 1]");
    }
  }
  if (out_dir.empty()) throw DomainError("output directory must be set");
}

namespace {

// Collects everything a run writes so a failed stage can sweep the partial
// outputs away, and so the manifest can carry digests of all of them.
class OutputWriter {
 public:
  explicit OutputWriter(fs::path root) : root_(std::move(root)) {}

  void write(const std::string& rel, std::string_view content) {
    fs::path target = root_ / rel;
    std::ofstream out(target, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + target.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.close();
    if (!out) throw Error("short write to '" + target.string() + "'");
    digests_[rel] = FileDigest{content.size(), fnv1a64_hex(content)};
    written_.push_back(target);
  }

  const std::map<std::string, FileDigest>& digests() const { return digests_; }

  void remove_written() {
    for (const fs::path& p : written_) {
      std::error_code ec;
      fs::remove(p, ec);
    }
    written_.clear();
    digests_.clear();
  }

 private:
  fs::path root_;
  std::map<std::string, FileDigest> digests_;
  std::vector<fs::path> written_;
};

struct Context {
  std::optional<ActivityDataset> dataset;
  std::optional<UserClassification> classification;
  std::optional<WeightedGraph> reshares;
  std::optional<WeightedGraph> common_users;
  std::vector<std::string> warnings;
};

std::ifstream open_or_throw(const std::string& path, std::string_view what) {
  std::ifstream in(path);
  if (!in) {
    throw Error("missing " + std::string(what) + " file '" + path + "'");
  }
  return in;
}

ActivityDataset load_raw_inputs(const PipelineConfig& config,
                                std::vector<std::string>* warnings) {
  auto pages_in = open_or_throw(config.pages_path, "pages");
  auto posts_in = open_or_throw(config.posts_path, "posts");
  auto likes_in = open_or_throw(config.likes_path, "likes");
  auto comments_in = open_or_throw(config.comments_path, "comments");
  std::vector<PageRecord> pages = load_pages(pages_in);
  return load_events(std::move(pages), posts_in, likes_in, comments_in, warnings);
}

bool intermediates_present(const PipelineConfig& config) {
  for (const char* rel : {kPagesFile, kPostsFile, kLikesFile, kCommentsFile}) {
    if (!fs::exists(fs::path(config.out_dir) / rel)) return false;
  }
  return true;
}

ActivityDataset load_intermediates(const PipelineConfig& config,
                                   std::vector<std::string>* warnings) {
  fs::path root(config.out_dir);
  auto pages_in = open_or_throw((root / kPagesFile).string(), "pages intermediate");
  auto posts_in = open_or_throw((root / kPostsFile).string(), "posts intermediate");
  auto likes_in = open_or_throw((root / kLikesFile).string(), "likes intermediate");
  auto comments_in =
      open_or_throw((root / kCommentsFile).string(), "comments intermediate");
  std::vector<PageRecord> pages = load_pages(pages_in);
  return load_events(std::move(pages), posts_in, likes_in, comments_in, warnings);
}

const ActivityDataset& ensure_dataset(Context& ctx, const PipelineConfig& config) {
  if (!ctx.dataset) {
    if (intermediates_present(config)) {
      ctx.dataset = load_intermediates(config, &ctx.warnings);
    } else {
      ctx.dataset = load_raw_inputs(config, &ctx.warnings);
    }
  }
  return *ctx.dataset;
}

const UserClassification& ensure_classification(Context& ctx,
                                                const PipelineConfig& config) {
  if (!ctx.classification) {
    ctx.classification = classify_users(ensure_dataset(ctx, config), config.classify);
  }
  return *ctx.classification;
}

json report_to_json(const ValidationReport& report,
                    std::span<const std::string> warnings) {
  json obj;
  obj["pages"] = report.page_count;
  obj["posts"] = report.post_count;
  obj["likes"] = report.like_count;
  obj["comments"] = report.comment_count;
  obj["posts_with_object_id"] = report.posts_with_object_id;
  if (auto v = report.object_id_coverage()) obj["object_id_coverage"] = *v;
  obj["admin_posts"] = report.admin_posts;
  if (auto v = report.admin_post_share()) obj["admin_post_share"] = *v;
  obj["errors"] = report.errors;
  obj["warnings"] = std::vector<std::string>(warnings.begin(), warnings.end());
  return obj;
}

void run_ingest(Context& ctx, const PipelineConfig& config, OutputWriter& writer,
                RunManifest& manifest) {
  ctx.dataset = load_raw_inputs(config, &ctx.warnings);
  const ActivityDataset& ds = *ctx.dataset;

  std::ostringstream pages_out, posts_out, likes_out, comments_out;
  write_pages(pages_out, ds.pages());
  write_posts(posts_out, ds.posts());
  write_likes(likes_out, ds.likes());
  write_comments(comments_out, ds.comments());
  writer.write(kPagesFile, pages_out.str());
  writer.write(kPostsFile, posts_out.str());
  writer.write(kLikesFile, likes_out.str());
  writer.write(kCommentsFile, comments_out.str());

  ValidationReport report = validate(ds);
  writer.write("validation.json", report_to_json(report, ctx.warnings).dump(2) + "\n");

  manifest.intermediates = {kPagesFile, kPostsFile, kLikesFile, kCommentsFile,
                            "validation.json"};
}

void run_classify(Context& ctx, const PipelineConfig& config, OutputWriter& writer,
                  RunManifest& manifest) {
  const UserClassification& classification = ensure_classification(ctx, config);
  std::ostringstream csv;
  write_classification(csv, classification);
  writer.write("classification.csv", csv.str());

  CategoryCounts counts = category_counts(classification, *ctx.dataset);
  json summary;
  summary["active"] = counts.active;
  summary["habitual"] = counts.habitual;
  summary["occasional"] = counts.occasional;
  summary["polarized"] = counts.polarized;
  summary["polarized_likes"] = counts.polarized_likes;
  summary["polarized_comments"] = counts.polarized_comments;
  if (counts.polarized_like_share) {
    summary["polarized_like_share"] = *counts.polarized_like_share;
  }
  if (counts.polarized_comment_share) {
    summary["polarized_comment_share"] = *counts.polarized_comment_share;
  }
  summary["habitual_min_likes"] = config.classify.habitual_min_likes;
  summary["polarization_fraction"] = config.classify.polarization_fraction;
  writer.write("category_summary.json", summary.dump(2) + "\n");

  manifest.exports["classification"] = {"classification.csv", "category_summary.json"};
}

// Every CCDF point set the pipeline publishes, stacked into one long CSV.
std::string build_ccdf_csv(const ActivityDataset& ds,
                           const UserClassification& classification,
                           const PageMetricsTable& metrics, const AdminSplit& split) {
  std::ostringstream out;
  out << "distribution,x,ccdf\n";
  auto emit = [&](std::string_view name, std::span<const std::int64_t> samples) {
    if (samples.empty()) return;
    EmpiricalDistribution dist = empirical_ccdf(samples);
    for (const auto& [x, c] : dist.ccdf_points()) {
      out << name << ',' << format_double(x) << ',' << format_double(c) << '\n';
    }
  };

  for (std::string_view measure : {"users", "posts", "likes", "comments", "shares"}) {
    std::vector<double> column = metrics.column(measure);
    std::vector<std::int64_t> samples(column.begin(), column.end());
    emit("page_" + std::string(measure), samples);
  }

  std::vector<std::int64_t> post_likes, post_comments;
  for (std::size_t i = 0; i < ds.posts().size(); ++i) {
    post_likes.push_back(ds.like_count(i));
    post_comments.push_back(ds.comment_count(i));
  }
  emit("post_likes", post_likes);
  emit("post_comments", post_comments);
  emit("admin_post_likes", split.admin_like_samples);
  emit("user_post_likes", split.user_like_samples);

  std::vector<std::int64_t> occ, pol_here, hab_not, pol_else;
  for (const auto& row : metrics.rows()) {
    PageAudience audience = page_audience(row.page_id, classification, ds);
    occ.push_back(audience.occasional);
    pol_here.push_back(audience.polarized_here);
    hab_not.push_back(audience.habitual_not_polarized);
    pol_else.push_back(audience.polarized_elsewhere);
  }
  emit("page_occasional", occ);
  emit("page_polarized_here", pol_here);
  emit("page_habitual_not_polarized", hab_not);
  emit("page_polarized_elsewhere", pol_else);

  PolarizedActivity activity = polarized_activity_distributions(classification, ds);
  emit("polarized_user_likes", activity.likes_per_user);
  emit("polarized_user_comments", activity.comments_per_user);
  return out.str();
}

std::string build_post_types_csv(const PostTypeBreakdown& breakdown) {
  std::ostringstream out;
  out << "post_type,posts,posts_fraction,likes,likes_fraction,comments,comments_fraction\n";
  for (std::size_t i = 0; i < kPostTypeCount; ++i) {
    auto type = static_cast<PostType>(i);
    out << to_string(type) << ',' << breakdown.post_counts[i] << ',';
    if (auto f = breakdown.post_fraction(type)) out << format_double(*f);
    out << ',' << breakdown.like_counts[i] << ',';
    if (auto f = breakdown.like_fraction(type)) out << format_double(*f);
    out << ',' << breakdown.comment_counts[i] << ',';
    if (auto f = breakdown.comment_fraction(type)) out << format_double(*f);
    out << '\n';
  }
  return out.str();
}

std::string build_admin_split_csv(const AdminSplit& split) {
  std::ostringstream out;
  if (split.admin_post_share) {
    out << "# admin_post_share=" << format_double(*split.admin_post_share) << '\n';
  }
  if (split.admin_like_share) {
    out << "# admin_like_share=" << format_double(*split.admin_like_share) << '\n';
  }
  out << "page_id,admin_posts,user_posts\n";
  for (const auto& row : split.per_page) {
    out << csv_escape(row.page_id) << ',' << row.admin_posts << ',' << row.user_posts
        << '\n';
  }
  return out.str();
}

void run_stats(Context& ctx, const PipelineConfig& config, OutputWriter& writer,
               RunManifest& manifest) {
  const ActivityDataset& ds = ensure_dataset(ctx, config);
  const UserClassification& classification = ensure_classification(ctx, config);

  PageMetricsTable metrics = page_metrics(ds, classification);
  std::ostringstream metrics_out;
  write_page_metrics(metrics_out, metrics);
  writer.write("metrics.csv", metrics_out.str());
  manifest.exports["metrics"] = {"metrics.csv"};

  const std::vector<std::string> activity_cols = {"users", "posts", "likes",
                                                  "comments", "shares"};
  const std::vector<std::string> polarized_cols = {"polarized", "users", "posts",
                                                   "likes", "comments", "shares"};
  std::ostringstream corr1, corr2;
  write_correlation_matrix(corr1, correlation_matrix(metrics, activity_cols));
  write_correlation_matrix(corr2, correlation_matrix(metrics, polarized_cols));
  writer.write("correlations_activity.csv", corr1.str());
  writer.write("correlations_polarized.csv", corr2.str());
  manifest.exports["correlations"] = {"correlations_activity.csv",
                                      "correlations_polarized.csv"};

  AdminSplit split = admin_split(ds);
  writer.write("ccdf.csv", build_ccdf_csv(ds, classification, metrics, split));
  manifest.exports["ccdf"] = {"ccdf.csv"};

  writer.write("post_types.csv", build_post_types_csv(post_type_breakdown(ds)));
  manifest.exports["post_types"] = {"post_types.csv"};

  writer.write("admin_split.csv", build_admin_split_csv(split));
  manifest.exports["admin_split"] = {"admin_split.csv"};

  std::vector<std::string> geo_files;
  for (std::string_view measure : PageMetricsTable::kMeasures) {
    std::ostringstream geo;
    export_geolayer(metrics, measure, ds.pages(), geo);
    std::string rel = "geo_" + std::string(measure) + ".geojson";
    writer.write(rel, geo.str());
    geo_files.push_back(rel);
  }
  manifest.exports["geolayers"] = geo_files;
}

void run_graphs(Context& ctx, const PipelineConfig& config, OutputWriter& writer,
                RunManifest& manifest) {
  const ActivityDataset& ds = ensure_dataset(ctx, config);
  const UserClassification& classification = ensure_classification(ctx, config);

  ctx.reshares = project(build_pages_posts(ds), ProjectionSide::left);
  ctx.common_users = project(build_pages_polarized(ds, classification),
                             ProjectionSide::left);

  std::ostringstream reshares_out, common_out;
  write_weighted_edges(reshares_out, *ctx.reshares);
  write_weighted_edges(common_out, *ctx.common_users);
  writer.write(kEdgesReshares, reshares_out.str());
  writer.write(kEdgesCommonUsers, common_out.str());
  manifest.exports["edges"] = {kEdgesReshares, kEdgesCommonUsers};
}

const WeightedGraph& ensure_network(const PipelineConfig& config,
                                    std::optional<WeightedGraph>& slot,
                                    const char* rel) {
  if (!slot) {
    fs::path path = fs::path(config.out_dir) / rel;
    if (!fs::exists(path)) {
      throw Error("missing graph intermediate '" + path.string() +
                  "' (run the graphs stage first)");
    }
    std::ifstream in(path);
    slot = read_weighted_edges(in);
  }
  return *slot;
}

void run_backbone(Context& ctx, const PipelineConfig& config, OutputWriter& writer,
                  RunManifest& manifest, std::ostream* log) {
  struct Network {
    const char* name;
    const WeightedGraph* graph;
  };
  const Network networks[] = {
      {"reshares", &ensure_network(config, ctx.reshares, kEdgesReshares)},
      {"common_users",
       &ensure_network(config, ctx.common_users, kEdgesCommonUsers)},
  };

  std::vector<std::string> files;
  for (const Network& net : networks) {
    for (double alpha : config.alphas) {
      std::string rel = "backbone_" + std::string(net.name) + "_alpha" +
                        format_double(alpha) + ".csv";
      std::ostringstream out;
      if (net.graph->edge_count() == 0) {
        // An empty co-occurrence network has no backbone; keep the export
        // well-formed instead of failing the stage.
        out << "# alpha=" << format_double(alpha)
            << " weight_fraction_preserved=0 edge_fraction=0 node_fraction=0\n";
        out << "# conventions: degree-1 endpoints score 1; retained iff "
               "min(score_src,score_dst) < alpha (strict)\n";
        out << "source,target,weight,score_src,score_dst,retained_at_alpha\n";
        writer.write(rel, out.str());
        files.push_back(rel);
        continue;
      }
      BackboneResult result = disparity_filter(*net.graph, BackboneConfig{alpha});
      write_backbone(out, result);
      writer.write(rel, out.str());
      files.push_back(rel);

      if (log != nullptr) {
        std::vector<PageRecord> no_pages;
        const ActivityDataset* ds = ctx.dataset ? &*ctx.dataset : nullptr;
        auto ranking = backbone_report(
            result, ds != nullptr ? std::span<const PageRecord>(ds->pages())
                                  : std::span<const PageRecord>(no_pages));
        *log << "backbone " << net.name << " alpha=" << format_double(alpha)
             << ": " << result.retained_edges().size() << "/" << result.edges.size()
             << " edges, weight preserved "
             << format_double(result.weight_fraction_preserved) << '\n';
        std::size_t shown = std::min<std::size_t>(ranking.size(), 5);
        for (std::size_t i = 0; i < shown; ++i) {
          *log << "  " << (i + 1) << ". " << ranking[i].page_id
               << (ranking[i].name.empty() ? "" : " (" + ranking[i].name + ")")
               << " strength=" << ranking[i].strength
               << " degree=" << ranking[i].degree << '\n';
        }
      }
    }
  }
  manifest.exports["backbone"] = files;
}

}  // namespace

void export_geolayer(const PageMetricsTable& metrics, std::string_view measure,
                     std::span<const PageRecord> pages, std::ostream& out) {
  if (!PageMetricsTable::is_measure(measure)) {
    throw DomainError("unknown measure '" + std::string(measure) + "'");
  }
  std::map<std::string_view, const PageRecord*> registry;
  for (const auto& page : pages) registry.emplace(page.page_id, &page);

  std::vector<double> column = metrics.column(measure);
  json features = json::array();
  for (std::size_t i = 0; i < metrics.rows().size(); ++i) {
    const PageMetricsRow& row = metrics.rows()[i];
    auto it = registry.find(row.page_id);
    if (it == registry.end()) {
      throw LookupError("page '" + row.page_id + "' missing from the registry");
    }
    const PageRecord& page = *it->second;
    json feature;
    feature["type"] = "Feature";
    feature["geometry"]["type"] = "Point";
    feature["geometry"]["coordinates"] = {page.longitude, page.latitude};
    feature["properties"]["page_id"] = page.page_id;
    feature["properties"]["name"] = page.name;
    feature["properties"]["measure"] = std::string(measure);
    feature["properties"]["value"] = static_cast<std::int64_t>(column[i]);
    features.push_back(std::move(feature));
  }
  json collection;
  collection["type"] = "FeatureCollection";
  collection["features"] = std::move(features);
  out << collection.dump(2) << '\n';
}

std::string RunManifest::to_json() const {
  json obj;
  obj["stages"] = stages_run;
  json timings_obj = json::object();
  for (const auto& [stage, seconds] : timings) timings_obj[stage] = seconds;
  obj["timings"] = std::move(timings_obj);
  json exports_obj = json::object();
  for (const auto& [kind, paths] : exports) exports_obj[kind] = paths;
  obj["exports"] = std::move(exports_obj);
  obj["intermediates"] = intermediates;
  json files_obj = json::object();
  for (const auto& [rel, digest] : files) {
    files_obj[rel] = {{"bytes", digest.bytes}, {"fnv1a64", digest.fnv1a64}};
  }
  obj["files"] = std::move(files_obj);
  obj["warnings"] = warnings;
  return obj.dump(2) + "\n";
}

RunManifest run_pipeline(const PipelineConfig& config, std::span<const Stage> stages,
                         std::ostream* log) {
  config.validate();
  std::set<Stage> requested(stages.begin(), stages.end());
  if (requested.empty()) throw DomainError("no stages requested");

  fs::create_directories(config.out_dir);
  OutputWriter writer{fs::path(config.out_dir)};
  Context ctx;
  RunManifest manifest;

  for (Stage stage : kStageOrder) {
    if (!requested.contains(stage)) continue;
    auto start = std::chrono::steady_clock::now();
    if (log != nullptr) *log << "[" << to_string(stage) << "] running\n";
    try {
      switch (stage) {
        case Stage::ingest: run_ingest(ctx, config, writer, manifest); break;
        case Stage::classify: run_classify(ctx, config, writer, manifest); break;
        case Stage::stats: run_stats(ctx, config, writer, manifest); break;
        case Stage::graphs: run_graphs(ctx, config, writer, manifest); break;
        case Stage::backbone: run_backbone(ctx, config, writer, manifest, log); break;
      }
    } catch (const std::exception& e) {
      writer.remove_written();
      throw StageError(stage, e.what());
    }
    std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    manifest.stages_run.push_back(std::string(to_string(stage)));
    manifest.timings[std::string(to_string(stage))] = elapsed.count();
  }

  manifest.files = writer.digests();
  manifest.warnings = ctx.warnings;
  std::string manifest_text = manifest.to_json();
  fs::path manifest_path = fs::path(config.out_dir) / "manifest.json";
  std::ofstream out(manifest_path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + manifest_path.string() + "'");
  out << manifest_text;
  if (log != nullptr) *log << "manifest: " << manifest_path.string() << '\n';
  return manifest;
}

}  // namespace pagenet
