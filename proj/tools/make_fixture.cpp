// Deterministic generator for the bundled synthetic fixture: 50 city pages
// (5 high-activity hubs), ~5,000 users with heavy-tailed like budgets,
// reshare cascades biased toward the hubs, and a config file wired to the
// generated inputs. All randomness goes through a local splitmix64 so the
// output is bit-stable across platforms and rebuilds.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Rng {
  std::uint64_t state;

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform_pos() { return 1.0 - uniform(); }  // (0, 1]
  std::uint64_t below(std::uint64_t n) { return next() % n; }
};

// floor(scale / u^(1/alpha)): Pareto-style heavy tail, capped.
std::int64_t pareto_int(Rng& rng, double scale, double alpha, std::int64_t cap) {
  double value = scale * std::pow(rng.uniform_pos(), -1.0 / alpha);
  if (value > static_cast<double>(cap)) value = static_cast<double>(cap);
  auto result = static_cast<std::int64_t>(value);
  return result < 1 ? 1 : result;
}

struct City {
  const char* name;
  double lat;
  double lon;
};

constexpr City kCities[] = {
    {"New York", 40.71, -74.01},      {"Los Angeles", 34.05, -118.24},
    {"Chicago", 41.88, -87.63},       {"Boston", 42.36, -71.06},
    {"San Francisco", 37.77, -122.42},{"Portland", 45.52, -122.68},
    {"Phoenix", 33.45, -112.07},      {"Denver", 39.74, -104.99},
    {"Seattle", 47.61, -122.33},      {"Austin", 30.27, -97.74},
    {"Houston", 29.76, -95.37},       {"Dallas", 32.78, -96.8},
    {"Philadelphia", 39.95, -75.17},  {"San Diego", 32.72, -117.16},
    {"San Jose", 37.34, -121.89},     {"Jacksonville", 30.33, -81.66},
    {"Columbus", 39.96, -83.0},       {"Charlotte", 35.23, -80.84},
    {"Indianapolis", 39.77, -86.16},  {"Fort Worth", 32.75, -97.33},
    {"Detroit", 42.33, -83.05},       {"El Paso", 31.76, -106.49},
    {"Memphis", 35.15, -90.05},       {"Nashville", 36.16, -86.78},
    {"Baltimore", 39.29, -76.61},     {"Oklahoma City", 35.47, -97.52},
    {"Louisville", 38.25, -85.76},    {"Milwaukee", 43.04, -87.91},
    {"Albuquerque", 35.08, -106.65},  {"Tucson", 32.22, -110.97},
    {"Fresno", 36.74, -119.79},       {"Sacramento", 38.58, -121.49},
    {"Kansas City", 39.1, -94.58},    {"Atlanta", 33.75, -84.39},
    {"Omaha", 41.26, -95.93},         {"Raleigh", 35.78, -78.64},
    {"Miami", 25.76, -80.19},         {"Minneapolis", 44.98, -93.27},
    {"Cleveland", 41.5, -81.69},      {"Tampa", 27.95, -82.46},
    {"Pittsburgh", 40.44, -80.0},     {"St. Louis", 38.63, -90.2},
    {"Cincinnati", 39.1, -84.51},     {"Orlando", 28.54, -81.38},
    {"Salt Lake City", 40.76, -111.89},{"Richmond", 37.54, -77.44},
    {"Buffalo", 42.89, -78.88},       {"New Orleans", 29.95, -90.07},
    {"Madison", 43.07, -89.4},        {"Providence", 41.82, -71.41},
};

constexpr std::size_t kPageCount = 50;
constexpr std::size_t kHubCount = 5;  // first five cities, 10x activity weight
constexpr std::size_t kUserCount = 5000;
constexpr std::int64_t kEpoch = 1316217600;  // 2011-09-17

struct FixturePost {
  std::string post_id;
  std::size_t page = 0;
  std::string author;
  std::int64_t timestamp = 0;
  const char* type = "status";
  std::optional<std::string> object_id;
  std::optional<bool> admin_override;
  bool admin = false;  // resolved, used for like-placement ranking only
};

std::string pad(std::uint64_t value, int width) {
  std::string digits = std::to_string(value);
  while (static_cast<int>(digits.size()) < width) digits.insert(digits.begin(), '0');
  return digits;
}

std::string page_id(std::size_t idx) { return "p" + pad(idx + 1, 2); }
std::string user_id(std::size_t idx) { return "u" + pad(idx + 1, 4); }

double page_weight(std::size_t idx) { return idx < kHubCount ? 10.0 : 1.0; }

std::size_t weighted_page(Rng& rng) {
  double total = kHubCount * 10.0 + (kPageCount - kHubCount) * 1.0;
  double roll = rng.uniform() * total;
  for (std::size_t i = 0; i < kPageCount; ++i) {
    roll -= page_weight(i);
    if (roll < 0.0) return i;
  }
  return kPageCount - 1;
}

// 60% of cross-page traffic heads for a hub.
std::size_t biased_target(Rng& rng, std::size_t avoid) {
  for (int tries = 0; tries < 64; ++tries) {
    std::size_t pick = rng.uniform() < 0.6 ? rng.below(kHubCount)
                                           : rng.below(kPageCount);
    if (pick != avoid) return pick;
  }
  return (avoid + 1) % kPageCount;
}

const char* roll_post_type(Rng& rng) {
  double r = rng.uniform();
  if (r < 0.30) return "photo";
  if (r < 0.70) return "status";
  if (r < 0.80) return "video";
  return "link";
}

// Distinct post picks, front-biased so admin/photo posts soak up the likes.
std::vector<std::size_t> sample_distinct(Rng& rng, std::size_t n, std::size_t count) {
  if (count > n) count = n;
  std::set<std::size_t> chosen;
  std::size_t guard = 0;
  while (chosen.size() < count && guard < count * 50) {
    double u = rng.uniform();
    auto idx = static_cast<std::size_t>(std::pow(u, 2.5) * static_cast<double>(n));
    if (idx >= n) idx = n - 1;
    chosen.insert(idx);
    ++guard;
  }
  for (std::size_t i = 0; chosen.size() < count && i < n; ++i) chosen.insert(i);
  return {chosen.begin(), chosen.end()};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: " << argv[0] << " <output-dir>\n";
    return 1;
  }
  fs::path out_dir(argv[1]);
  fs::create_directories(out_dir);

  Rng rng{20110917ULL};
  std::vector<FixturePost> posts;

  // Base posts per page; hubs carry ~10x the volume.
  for (std::size_t page = 0; page < kPageCount; ++page) {
    std::size_t count = 40 + static_cast<std::size_t>(18.0 * page_weight(page));
    for (std::size_t i = 0; i < count; ++i) {
      FixturePost post;
      post.page = page;
      post.type = roll_post_type(rng);
      if (rng.uniform() < 0.27) {
        post.author = page_id(page);  // admin sentinel
        post.admin = true;
      } else {
        post.author = user_id(rng.below(kUserCount - 1));
      }
      posts.push_back(std::move(post));
    }
  }

  // Reshare cascades: one object replicated across several pages. A slice of
  // them re-posts the object on the origin page a second time.
  std::size_t object_seq = 0;
  for (std::size_t cascade = 0; cascade < 450; ++cascade) {
    std::string object = "o" + pad(++object_seq, 4);
    std::size_t origin = rng.uniform() < 0.55 ? rng.below(kHubCount)
                                              : rng.below(kPageCount);
    std::set<std::size_t> members = {origin};
    std::size_t extra = 1 + rng.below(3) + (rng.below(10) == 0 ? rng.below(4) : 0);
    while (members.size() < extra + 1 && members.size() < kPageCount) {
      members.insert(biased_target(rng, origin));
    }
    std::vector<std::size_t> ordered(members.begin(), members.end());
    if (cascade % 22 == 0) ordered.push_back(origin);  // duplicate copy, same page
    for (std::size_t page : ordered) {
      FixturePost post;
      post.page = page;
      post.type = roll_post_type(rng);
      post.object_id = object;
      if (rng.uniform() < 0.27) {
        post.author = page_id(page);
        post.admin = true;
      } else {
        post.author = user_id(rng.below(kUserCount - 1));
      }
      posts.push_back(std::move(post));
    }
  }

  // Singleton objects: resharable identity that never left one page.
  for (std::size_t i = 0; i < 150; ++i) {
    posts[rng.below(posts.size())].object_id = "o" + pad(++object_seq, 4);
  }

  // Two posts exercising the explicit admin flag, which beats the sentinel.
  {
    FixturePost flagged;
    flagged.page = 0;
    flagged.author = user_id(41);
    flagged.type = "status";
    flagged.admin_override = true;
    flagged.admin = true;
    posts.push_back(std::move(flagged));

    FixturePost unflagged;
    unflagged.page = 0;
    unflagged.author = page_id(0);
    unflagged.type = "status";
    unflagged.admin_override = false;
    unflagged.admin = false;
    posts.push_back(std::move(unflagged));
  }

  for (std::size_t i = 0; i < posts.size(); ++i) {
    posts[i].post_id = "t" + pad(i + 1, 5);
    posts[i].timestamp = kEpoch + static_cast<std::int64_t>(i) * 937;
  }

  // Page post lists ranked admin-photo first: like placement below is
  // front-biased, which makes admin and photo posts collect most likes.
  std::vector<std::vector<std::size_t>> ranked(kPageCount);
  for (std::size_t i = 0; i < posts.size(); ++i) ranked[posts[i].page].push_back(i);
  auto rank_of = [&](std::size_t idx) {
    const FixturePost& post = posts[idx];
    bool photo = std::string_view(post.type) == "photo";
    if (post.admin && photo) return 0;
    if (post.admin) return 1;
    if (photo) return 2;
    return 3;
  };
  for (auto& list : ranked) {
    std::stable_sort(list.begin(), list.end(), [&](std::size_t a, std::size_t b) {
      return rank_of(a) < rank_of(b);
    });
  }

  struct Event {
    std::string post_id;
    std::string user_id;
    std::int64_t timestamp;
  };
  std::vector<Event> likes;
  std::vector<Event> comments;

  auto place_likes = [&](std::size_t user, std::size_t page, std::size_t count) {
    const auto& pool = ranked[page];
    for (std::size_t idx : sample_distinct(rng, pool.size(), count)) {
      const FixturePost& post = posts[pool[idx]];
      likes.push_back({post.post_id, user_id(user),
                       post.timestamp + 3600 + static_cast<std::int64_t>(idx) * 211});
    }
  };

  // The last user never likes; it exists to exercise comment-only users.
  for (std::size_t user = 0; user + 1 < kUserCount; ++user) {
    std::size_t home = weighted_page(rng);
    double roll = rng.uniform();
    std::map<std::size_t, std::size_t> plan;  // page -> like count
    if (roll < 0.12) {
      // Ambassador: polarized on the home page with a thin slice of foreign
      // activity. floor(budget/20) keeps the home share at >= 95%.
      auto budget = static_cast<std::size_t>(20 + pareto_int(rng, 2.0, 1.3, 100));
      std::size_t foreign_likes = budget / 20;
      plan[home] = budget - foreign_likes;
      plan[biased_target(rng, home)] += foreign_likes;
    } else if (roll < 0.42) {
      // Roamer: budget spread over 2-5 pages.
      auto budget = static_cast<std::size_t>(pareto_int(rng, 2.5, 1.5, 300));
      std::set<std::size_t> pages = {home};
      std::size_t extra = 1 + rng.below(4);
      while (pages.size() < extra + 1) pages.insert(biased_target(rng, home));
      std::vector<std::size_t> order(pages.begin(), pages.end());
      for (std::size_t i = 0; i < budget; ++i) ++plan[order[rng.below(order.size())]];
    } else {
      // Loyal: everything on the home page.
      plan[home] = static_cast<std::size_t>(pareto_int(rng, 2.5, 1.5, 300));
    }
    std::size_t placed_posts = 0;
    for (const auto& [page, count] : plan) {
      place_likes(user, page, count);
      placed_posts += count;
    }

    if (rng.uniform() < 0.35) {
      auto count = static_cast<std::size_t>(pareto_int(rng, 0.8, 1.6, 40));
      std::vector<std::size_t> pages;
      for (const auto& [page, unused] : plan) pages.push_back(page);
      for (std::size_t i = 0; i < count; ++i) {
        std::size_t page = pages[rng.below(pages.size())];
        const auto& pool = ranked[page];
        const FixturePost& post =
            posts[pool[static_cast<std::size_t>(std::pow(rng.uniform(), 2.0) *
                                                static_cast<double>(pool.size()))]];
        comments.push_back({post.post_id, user_id(user),
                            post.timestamp + 7200 + static_cast<std::int64_t>(i) * 457});
      }
    }
    (void)placed_posts;
  }

  for (int i = 0; i < 3; ++i) {
    const FixturePost& post = posts[ranked[0][static_cast<std::size_t>(i)]];
    comments.push_back({post.post_id, user_id(kUserCount - 1),
                        post.timestamp + 9000 + i * 311});
  }

  // pages.csv
  {
    std::ofstream out(out_dir / "pages.csv", std::ios::binary);
    out << "page_id,name,lat,lon\n";
    for (std::size_t i = 0; i < kPageCount; ++i) {
      out << page_id(i) << ',' << kCities[i].name << " Assembly," << kCities[i].lat
          << ',' << kCities[i].lon << '\n';
    }
  }

  // posts.jsonl; admin stays implicit through the author sentinel except for
  // the two override posts.
  {
    std::ofstream out(out_dir / "posts.jsonl", std::ios::binary);
    for (std::size_t i = 0; i < posts.size(); ++i) {
      const FixturePost& post = posts[i];
      json obj;
      obj["post_id"] = post.post_id;
      obj["page_id"] = page_id(post.page);
      obj["author_user_id"] = post.author;
      obj["timestamp"] = post.timestamp;
      obj["post_type"] = post.type;
      if (post.object_id) obj["object_id"] = *post.object_id;
      if (post.admin_override) obj["admin"] = *post.admin_override;
      if (i == 0) obj["source"] = "synthetic";  // exercises unknown-field warnings
      out << obj.dump() << '\n';
    }
  }

  // likes.jsonl, with a few duplicate lines the loader must collapse.
  {
    std::ofstream out(out_dir / "likes.jsonl", std::ios::binary);
    for (std::size_t i = 0; i < likes.size(); ++i) {
      json obj;
      obj["post_id"] = likes[i].post_id;
      obj["user_id"] = likes[i].user_id;
      obj["timestamp"] = likes[i].timestamp;
      out << obj.dump() << '\n';
      if (i % 400 == 0) out << obj.dump() << '\n';
    }
  }

  {
    std::ofstream out(out_dir / "comments.jsonl", std::ios::binary);
    for (const Event& comment : comments) {
      json obj;
      obj["post_id"] = comment.post_id;
      obj["user_id"] = comment.user_id;
      obj["timestamp"] = comment.timestamp;
      out << obj.dump() << '\n';
    }
  }

  {
    std::ofstream out(out_dir / "pipeline.conf", std::ios::binary);
    out << "# synthetic fixture pipeline configuration\n"
        << "[inputs]\n"
        << "pages = pages.csv\n"
        << "posts = posts.jsonl\n"
        << "likes = likes.jsonl\n"
        << "comments = comments.jsonl\n"
        << "\n[classify]\n"
        << "habitual_min_likes = 5\n"
        << "polarization_fraction = 0.95\n"
        << "\n[backbone]\n"
        << "alpha = 0.01\n"
        << "alpha = 0.05\n"
        << "\n[output]\n"
        << "dir = out\n";
  }

  std::cout << "fixture: " << kPageCount << " pages, " << kUserCount << " users, "
            << posts.size() << " posts, " << likes.size() << " like lines, "
            << comments.size() << " comments -> " << out_dir.string() << '\n';
  return 0;
}
