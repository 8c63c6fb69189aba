#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pagenet/graph.hpp"
#include "pagenet/pipeline.hpp"
#include "support.hpp"

using namespace pagenet;
namespace ts = testsupport;
namespace fs = std::filesystem;

namespace {

// A hand-sized dataset: 3 pages, reshares spanning all page pairs, two
// polarized users with cross-page activity. Thresholds in the config are
// lowered so polarization is reachable with a handful of likes.
struct MiniFixture {
  fs::path dir;
  fs::path config_path;

  explicit MiniFixture(const std::string& tag) {
    dir = fs::temp_directory_path() / ("pagenet_test_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);

    std::vector<PageRecord> pages = {
        {"A", "Alpha", 40.0, -74.0},
        {"B", "Bravo", 34.0, -118.0},
        {"C", "Charlie", 41.0, -87.0},
    };
    auto o = [](const char* id) { return std::optional<std::string>(id); };
    std::vector<PostRecord> posts = {
        ts::post("a1", "A", "u1", PostType::photo, o("o1"), 10),
        ts::post("a2", "A", "A", PostType::status, std::nullopt, 11),
        ts::post("a3", "A", "u2", PostType::photo, std::nullopt, 12),
        ts::post("a4", "A", "u3", PostType::link, o("o2"), 13),
        ts::post("b1", "B", "u1", PostType::photo, o("o1"), 14),
        ts::post("b2", "B", "B", PostType::video, std::nullopt, 15),
        ts::post("b3", "B", "u4", PostType::status, o("o3"), 16),
        ts::post("c1", "C", "u5", PostType::photo, o("o2"), 17),
        ts::post("c2", "C", "u6", PostType::status, o("o3"), 18),
        ts::post("c3", "C", "C", PostType::photo, std::nullopt, 19),
        ts::post("c4", "C", "u1", PostType::link, std::nullopt, 20),
    };
    std::vector<LikeRecord> likes;
    for (const char* post : {"a1", "a2", "a3", "a4"}) likes.push_back(ts::like(post, "pol1"));
    likes.push_back(ts::like("b1", "pol1"));  // 4/5 on A -> polarized at 0.8
    for (const char* post : {"a1", "a2", "a3"}) likes.push_back(ts::like(post, "pol2"));
    likes.push_back(ts::like("b1", "pol3"));
    likes.push_back(ts::like("b2", "pol3"));
    for (const char* post : {"c1", "c2", "c3", "c4"}) likes.push_back(ts::like(post, "pol4"));
    likes.push_back(ts::like("b3", "pol4"));  // polarized on C, active on B
    likes.push_back(ts::like("a1", "occ1"));
    likes.push_back(ts::like("b2", "occ2"));
    std::vector<CommentRecord> comments = {
        ts::comment("a1", "u1"), ts::comment("a1", "u1"), ts::comment("b1", "pol2")};

    std::ofstream pages_out(dir / "pages.csv", std::ios::binary);
    write_pages(pages_out, pages);
    std::ofstream posts_out(dir / "posts.jsonl", std::ios::binary);
    write_posts(posts_out, posts);
    std::ofstream likes_out(dir / "likes.jsonl", std::ios::binary);
    write_likes(likes_out, likes);
    std::ofstream comments_out(dir / "comments.jsonl", std::ios::binary);
    write_comments(comments_out, comments);

    config_path = dir / "pipeline.conf";
    std::ofstream conf(config_path, std::ios::binary);
    conf << "[inputs]\n"
         << "pages = pages.csv\n"
         << "posts = posts.jsonl\n"
         << "likes = likes.jsonl\n"
         << "comments = comments.jsonl\n"
         << "[classify]\n"
         << "habitual_min_likes = 2\n"
         << "polarization_fraction = 0.8\n"
         << "[backbone]\n"
         << "alpha = 0.05\n"
         << "alpha = 0.5\n"
         << "[output]\n"
         << "dir = out\n";
  }

  ~MiniFixture() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }

  PipelineConfig config(const std::string& out_name = "out") const {
    PipelineConfig cfg = PipelineConfig::from_file(config_path.string());
    cfg.out_dir = (dir / out_name).string();
    return cfg;
  }
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

TEST_CASE("config file parsing") {
  MiniFixture fx("config");
  SUBCASE("sections, alpha replacement, relative paths") {
    auto cfg = PipelineConfig::from_file(fx.config_path.string());
    CHECK(cfg.classify.habitual_min_likes == 2);
    CHECK(cfg.classify.polarization_fraction == doctest::Approx(0.8));
    REQUIRE(cfg.alphas.size() == 2);  // explicit alphas replace the defaults
    CHECK(cfg.alphas[0] == doctest::Approx(0.05));
    CHECK(cfg.alphas[1] == doctest::Approx(0.5));
    CHECK(fs::path(cfg.pages_path).is_absolute());
    CHECK(fs::exists(cfg.pages_path));
    CHECK(fs::path(cfg.out_dir).parent_path() == fx.dir);
  }
  SUBCASE("unknown keys warn") {
    fs::path extra = fx.dir / "extra.conf";
    std::ofstream out(extra);
    out << "[classify]\nhabitual_min_likes = 3\nmystery = 1\n";
    out.close();
    std::vector<std::string> warnings;
    auto cfg = PipelineConfig::from_file(extra.string(), &warnings);
    CHECK(cfg.classify.habitual_min_likes == 3);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("classify.mystery") != std::string::npos);
  }
  SUBCASE("malformed line is a parse error") {
    fs::path bad = fx.dir / "bad.conf";
    std::ofstream out(bad);
    out << "[inputs]\njust a dangling line\n";
    out.close();
    CHECK_THROWS_AS(PipelineConfig::from_file(bad.string()), ParseError);
  }
  SUBCASE("validation rejects bad alphas") {
    auto cfg = fx.config();
    cfg.alphas = {0.0};
    CHECK_THROWS_AS(cfg.validate(), DomainError);
    cfg.alphas = {1.5};
    CHECK_THROWS_AS(cfg.validate(), DomainError);
  }
}

TEST_CASE("run_pipeline produces the full export set with a manifest") {
  MiniFixture fx("full");
  auto cfg = fx.config();
  auto manifest = run_pipeline(cfg, all_stages());

  REQUIRE(manifest.exports.size() == 9);
  for (const char* kind :
       {"classification", "metrics", "correlations", "ccdf", "post_types",
        "admin_split", "edges", "backbone", "geolayers"}) {
    INFO(kind);
    REQUIRE(manifest.exports.contains(kind));
    for (const auto& rel : manifest.exports.at(kind)) {
      CHECK(fs::exists(fs::path(cfg.out_dir) / rel));
      CHECK(manifest.files.contains(rel));
    }
  }
  CHECK(manifest.exports.at("backbone").size() == 4);     // 2 networks x 2 alphas
  CHECK(manifest.exports.at("geolayers").size() == 6);
  CHECK(manifest.stages_run.size() == 5);
  CHECK(fs::exists(fs::path(cfg.out_dir) / "manifest.json"));

  // the manifest digests are honest
  for (const auto& [rel, digest] : manifest.files) {
    std::string content = slurp(fs::path(cfg.out_dir) / rel);
    CHECK(content.size() == digest.bytes);
  }
}

TEST_CASE("re-running the pipeline yields byte-identical outputs") {
  MiniFixture fx("determinism");
  auto cfg1 = fx.config("out1");
  auto cfg2 = fx.config("out2");
  auto m1 = run_pipeline(cfg1, all_stages());
  auto m2 = run_pipeline(cfg2, all_stages());

  REQUIRE(m1.files.size() == m2.files.size());
  for (const auto& [rel, digest] : m1.files) {
    REQUIRE(m2.files.contains(rel));
    CHECK(m2.files.at(rel).fnv1a64 == digest.fnv1a64);
    CHECK(slurp(fs::path(cfg1.out_dir) / rel) == slurp(fs::path(cfg2.out_dir) / rel));
  }
}

TEST_CASE("a missing input aborts the ingest stage and leaves no outputs") {
  MiniFixture fx("missing");
  fs::remove(fx.dir / "likes.jsonl");
  auto cfg = fx.config();
  try {
    run_pipeline(cfg, all_stages());
    FAIL("expected StageError");
  } catch (const StageError& e) {
    CHECK(e.stage() == Stage::ingest);
    CHECK(std::string(e.what()).find("likes") != std::string::npos);
  }
  // the out dir may exist, but nothing survives inside it
  if (fs::exists(cfg.out_dir)) {
    CHECK(fs::directory_iterator(cfg.out_dir) == fs::directory_iterator());
  }
}

TEST_CASE("backbone stage failure reports its own exit stage") {
  MiniFixture fx("bbfail");
  auto cfg = fx.config();
  // backbone without graph intermediates
  std::vector<Stage> only_backbone = {Stage::backbone};
  try {
    run_pipeline(cfg, only_backbone);
    FAIL("expected StageError");
  } catch (const StageError& e) {
    CHECK(e.stage() == Stage::backbone);
  }
}

TEST_CASE("backbone stage rerun from persisted intermediates is exact") {
  MiniFixture fx("isolation");
  auto cfg = fx.config("full_out");
  auto full = run_pipeline(cfg, all_stages());

  // fresh dir seeded only with the graph intermediates
  auto cfg2 = fx.config("bb_out");
  fs::create_directories(cfg2.out_dir);
  for (const char* rel : {"edges_reshares.csv", "edges_common_users.csv"}) {
    fs::copy_file(fs::path(cfg.out_dir) / rel, fs::path(cfg2.out_dir) / rel);
  }
  std::vector<Stage> only_backbone = {Stage::backbone};
  auto partial = run_pipeline(cfg2, only_backbone);

  REQUIRE(partial.exports.contains("backbone"));
  for (const auto& rel : full.exports.at("backbone")) {
    CHECK(slurp(fs::path(cfg.out_dir) / rel) == slurp(fs::path(cfg2.out_dir) / rel));
  }
}

TEST_CASE("downstream stages restart from persisted dataset intermediates") {
  MiniFixture fx("restart");
  auto cfg = fx.config();
  std::vector<Stage> just_ingest = {Stage::ingest};
  run_pipeline(cfg, just_ingest);
  // raw inputs vanish; classify must feed off the intermediates
  for (const char* rel : {"pages.csv", "posts.jsonl", "likes.jsonl", "comments.jsonl"}) {
    fs::remove(fx.dir / rel);
  }
  std::vector<Stage> just_classify = {Stage::classify};
  auto manifest = run_pipeline(cfg, just_classify);
  CHECK(manifest.exports.contains("classification"));
  std::string csv = slurp(fs::path(cfg.out_dir) / "classification.csv");
  CHECK(csv.find("pol1,5,habitual,A") != std::string::npos);
  CHECK(csv.find("pol4,5,habitual,C") != std::string::npos);
  CHECK(csv.find("occ1,1,occasional,") != std::string::npos);
}

TEST_CASE("export_geolayer") {
  MiniFixture fx("geo");
  auto cfg = fx.config();
  auto manifest = run_pipeline(cfg, all_stages());

  std::string text = slurp(fs::path(cfg.out_dir) / "geo_likes.geojson");
  auto geo = nlohmann::json::parse(text);
  CHECK(geo.at("type") == "FeatureCollection");
  REQUIRE(geo.at("features").size() == 3);
  const auto& first = geo.at("features").at(0);
  CHECK(first.at("geometry").at("type") == "Point");
  CHECK(first.at("geometry").at("coordinates").at(0) == doctest::Approx(-74.0));
  CHECK(first.at("geometry").at("coordinates").at(1) == doctest::Approx(40.0));
  CHECK(first.at("properties").at("page_id") == "A");
  CHECK(first.at("properties").at("measure") == "likes");
  CHECK(first.at("properties").at("value").get<std::int64_t>() == 8);

  // polarized layer mirrors the classification's per-page counts
  auto pol = nlohmann::json::parse(slurp(fs::path(cfg.out_dir) / "geo_polarized.geojson"));
  std::map<std::string, std::int64_t> values;
  for (const auto& feature : pol.at("features")) {
    values[feature.at("properties").at("page_id")] =
        feature.at("properties").at("value").get<std::int64_t>();
  }
  CHECK(values.at("A") == 2);  // pol1, pol2
  CHECK(values.at("B") == 1);  // pol3
  CHECK(values.at("C") == 1);  // pol4

  SUBCASE("unknown measure is a domain error") {
    std::vector<PageRecord> pages = {ts::page("A")};
    PageMetricsTable metrics({PageMetricsRow{"A", 1, 1, 1, 1, 0, 0}});
    std::ostringstream out;
    CHECK_THROWS_AS(export_geolayer(metrics, "velocity", pages, out), DomainError);
  }
}

TEST_CASE("graph exports reflect the mini fixture's structure") {
  MiniFixture fx("edges");
  auto cfg = fx.config();
  run_pipeline(cfg, all_stages());

  CHECK(slurp(fs::path(cfg.out_dir) / "edges_reshares.csv") ==
        "source_page,target_page,weight\n"
        "A,B,1\n"
        "A,C,1\n"
        "B,C,1\n");
  CHECK(slurp(fs::path(cfg.out_dir) / "edges_common_users.csv") ==
        "source_page,target_page,weight\n"
        "A,B,1\n"
        "B,C,1\n");
}

#ifdef PAGENET_CLI_PATH
namespace {

int run_cli(const std::string& args) {
  std::string command = std::string(PAGENET_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  int status = std::system(command.c_str());
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("CLI exit codes and flag precedence") {
  MiniFixture fx("cli");
  std::string conf = fx.config_path.string();
  std::string out = (fx.dir / "cli_out").string();

  SUBCASE("success is 0") {
    CHECK(run_cli("all --config " + conf + " --out " + out) == 0);
  }
  SUBCASE("usage errors are 1") {
    CHECK(run_cli("") == 1);
    CHECK(run_cli("frobnicate") == 1);
    CHECK(run_cli("all --config /nonexistent.conf") == 1);
  }
  SUBCASE("a missing input maps to the ingest exit code") {
    fs::remove(fx.dir / "likes.jsonl");
    CHECK(run_cli("all --config " + conf + " --out " + out) == 2);
  }
  SUBCASE("backbone without intermediates maps to the backbone exit code") {
    CHECK(run_cli("backbone --config " + conf + " --out " + (fx.dir / "empty").string()) == 6);
  }
  SUBCASE("--alpha flags override the config list") {
    CHECK(run_cli("all --config " + conf + " --out " + out + " --alpha 0.11") == 0);
    CHECK(fs::exists(fs::path(out) / "backbone_reshares_alpha0.11.csv"));
    CHECK_FALSE(fs::exists(fs::path(out) / "backbone_reshares_alpha0.05.csv"));
  }
  SUBCASE("--habitual-min-likes flag wins over the config") {
    CHECK(run_cli("classify --config " + conf + " --out " + out +
                  " --habitual-min-likes 99") == 0);
    std::string csv = slurp(fs::path(out) / "classification.csv");
    CHECK(csv.find("habitual") == std::string::npos);  // nobody reaches 99 likes
  }
}
#endif
