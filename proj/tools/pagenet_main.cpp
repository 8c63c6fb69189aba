#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pagenet/pipeline.hpp"

namespace {

int stage_exit_code(pagenet::Stage stage) {
  switch (stage) {
    case pagenet::Stage::ingest: return 2;
    case pagenet::Stage::classify: return 3;
    case pagenet::Stage::stats: return 4;
    case pagenet::Stage::graphs: return 5;
    case pagenet::Stage::backbone: return 6;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Geolocated page-activity analytics: classification, activity "
               "statistics, co-occurrence networks, and multiscale backbones"};
  app.require_subcommand(1);

  std::string config_path;
  std::string pages_path, posts_path, likes_path, comments_path;
  std::string out_dir;
  std::int64_t habitual_min_likes = 0;
  double polarization_fraction = 0.0;
  std::vector<double> alphas;

  app.add_option("--config", config_path, "pipeline config file (key = value sections)");
  app.add_option("--pages", pages_path, "pages CSV (page_id,name,lat,lon)");
  app.add_option("--posts", posts_path, "posts JSONL");
  app.add_option("--likes", likes_path, "likes JSONL");
  app.add_option("--comments", comments_path, "comments JSONL");
  app.add_option("--habitual-min-likes", habitual_min_likes,
                 "minimum likes for a habitual user");
  app.add_option("--polarization-fraction", polarization_fraction,
                 "single-page like share marking a polarized user");
  app.add_option("--alpha", alphas, "backbone significance level, repeatable");
  app.add_option("--out", out_dir, "output directory");

  const char* verbs[] = {"ingest", "classify", "stats", "graphs", "backbone", "all"};
  const char* descs[] = {
      "parse and validate the raw activity logs",
      "assign user categories and export the classification",
      "page metrics, correlations, distributions, and geolayers",
      "build the two co-occurrence networks",
      "extract backbones at each significance level",
      "run every stage in order",
  };
  for (std::size_t i = 0; i < 6; ++i) {
    CLI::App* sub = app.add_subcommand(verbs[i], descs[i]);
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    std::vector<std::string> warnings;
    pagenet::PipelineConfig config;
    if (!config_path.empty()) {
      config = pagenet::PipelineConfig::from_file(config_path, &warnings);
    }
    for (const auto& warning : warnings) std::cerr << "warning: " << warning << '\n';

    // command-line flags win over the config file
    if (app.count("--pages") > 0) config.pages_path = pages_path;
    if (app.count("--posts") > 0) config.posts_path = posts_path;
    if (app.count("--likes") > 0) config.likes_path = likes_path;
    if (app.count("--comments") > 0) config.comments_path = comments_path;
    if (app.count("--habitual-min-likes") > 0) {
      config.classify.habitual_min_likes = habitual_min_likes;
    }
    if (app.count("--polarization-fraction") > 0) {
      config.classify.polarization_fraction = polarization_fraction;
    }
    if (app.count("--alpha") > 0) config.alphas = alphas;
    if (app.count("--out") > 0) config.out_dir = out_dir;

    const std::string verb = app.get_subcommands().front()->get_name();
    std::vector<pagenet::Stage> stages = pagenet::parse_stages(verb);
    pagenet::RunManifest manifest = pagenet::run_pipeline(config, stages, &std::cout);
    for (const auto& warning : manifest.warnings) {
      std::cerr << "warning: " << warning << '\n';
    }
    return 0;
  } catch (const pagenet::StageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return stage_exit_code(e.stage());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
