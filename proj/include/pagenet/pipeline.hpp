#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pagenet/classify.hpp"
#include "pagenet/stats.hpp"

namespace pagenet {

struct PipelineConfig {
  std::string pages_path;
  std::string posts_path;
  std::string likes_path;
  std::string comments_path;
  ClassifyConfig classify;
  std::vector<double> alphas = {0.01, 0.05};
  std::string out_dir = "out";

  // Line-oriented `key = value` file with [inputs]/[classify]/[backbone]/
  // [output] sections. Relative paths resolve against the config file's
  // directory. Unknown keys warn, they never fail the parse.
  static PipelineConfig from_file(const std::string& path,
                                  std::vector<std::string>* warnings = nullptr);

  void validate() const;  // throws DomainError
};

enum class Stage { ingest, classify, stats, graphs, backbone };

std::string_view to_string(Stage stage);
std::span<const Stage> all_stages();
std::vector<Stage> parse_stages(std::string_view verb);  // "all" or one stage name

// Aborts the run: carries which stage failed so the CLI can map it to a
// distinct exit code. Partial outputs of the run are removed before this
// propagates.
class StageError : public Error {
 public:
  StageError(Stage stage, const std::string& cause)
      : Error(std::string(to_string(stage)) + " stage failed: " + cause), stage_(stage) {}
  Stage stage() const { return stage_; }

 private:
  Stage stage_;
};

struct FileDigest {
  std::uint64_t bytes = 0;
  std::string fnv1a64;
};

struct RunManifest {
  std::vector<std::string> stages_run;
  std::map<std::string, double> timings;                        // stage -> seconds
  std::map<std::string, std::vector<std::string>> exports;      // kind -> files
  std::vector<std::string> intermediates;
  std::map<std::string, FileDigest> files;                      // rel path -> digest
  std::vector<std::string> warnings;

  // Everything except "timings" is a pure function of (inputs, config).
  std::string to_json() const;
};

// Executes the requested stages in canonical order, persisting every
// intermediate and export under config.out_dir and finishing with
// manifest.json. Any failure removes the files this run wrote and rethrows
// as StageError.
RunManifest run_pipeline(const PipelineConfig& config, std::span<const Stage> stages,
                         std::ostream* log = nullptr);

// GeoJSON point layer: one feature per page carrying the chosen metrics
// measure. Throws DomainError for an unknown measure.
void export_geolayer(const PageMetricsTable& metrics, std::string_view measure,
                     std::span<const PageRecord> pages, std::ostream& out);

}  // namespace pagenet
