#include <doctest.h>

#include <cmath>
#include <sstream>

#include "pagenet/stats.hpp"
#include "support.hpp"

using namespace pagenet;
namespace ts = testsupport;

TEST_CASE("empirical ccdf uses strict inequality") {
  SUBCASE("samples {1,2,3}") {
    auto dist = empirical_ccdf(std::vector<double>{1, 2, 3});
    CHECK(dist.ccdf(1.0) == doctest::Approx(2.0 / 3.0));
    CHECK(dist.ccdf(2.0) == doctest::Approx(1.0 / 3.0));
    CHECK(dist.ccdf(3.0) == 0.0);
  }
  SUBCASE("samples {5,5}") {
    auto dist = empirical_ccdf(std::vector<double>{5, 5});
    CHECK(dist.ccdf(5.0) == 0.0);
    CHECK(dist.ccdf(4.9) == 1.0);
  }
  SUBCASE("single sample") {
    auto dist = empirical_ccdf(std::vector<double>{7});
    CHECK(dist.ccdf(0.0) == 1.0);
  }
  SUBCASE("empty samples are a domain error") {
    CHECK_THROWS_AS(empirical_ccdf(std::vector<double>{}), DomainError);
  }
  SUBCASE("negative samples are rejected") {
    CHECK_THROWS_AS(empirical_ccdf(std::vector<double>{-1.0, 2.0}), DomainError);
  }
}

TEST_CASE("ccdf invariants on random sample sets") {
  ts::Rng rng{31};
  for (int round = 0; round < 40; ++round) {
    std::vector<double> samples;
    std::size_t n = 1 + rng.below(60);
    for (std::size_t i = 0; i < n; ++i) {
      samples.push_back(static_cast<double>(rng.below(20)));
    }
    auto dist = empirical_ccdf(samples);

    double prev = 1.1;
    for (double x = -1.0; x <= 21.0; x += 0.5) {
      double c = dist.ccdf(x);
      double f = dist.cdf(x);
      CHECK(c <= prev);                       // non-increasing
      CHECK(c >= 0.0);
      CHECK(c <= 1.0);
      CHECK(std::abs(c + f - 1.0) < 1e-12);   // complement
      // strict inequality against a direct recount
      std::size_t greater = 0;
      for (double s : samples) {
        if (s > x) ++greater;
      }
      CHECK(c == doctest::Approx(static_cast<double>(greater) / static_cast<double>(n))
                     .epsilon(1e-12));
      prev = c;
    }
    CHECK(dist.ccdf(dist.max_value()) == 0.0);
    CHECK(dist.ccdf(dist.min_value() - 1.0) == 1.0);
  }
}

TEST_CASE("ccdf_points emit one pair per distinct value") {
  auto dist = empirical_ccdf(std::vector<double>{1, 1, 2, 5});
  auto points = dist.ccdf_points();
  REQUIRE(points.size() == 3);
  CHECK(points[0] == std::pair<double, double>{1.0, 0.5});
  CHECK(points[1] == std::pair<double, double>{2.0, 0.25});
  CHECK(points[2] == std::pair<double, double>{5.0, 0.0});
  CHECK(dist.pdf(1.0) == doctest::Approx(0.5));
  CHECK(dist.pdf(3.0) == 0.0);
}

TEST_CASE("pearson basics") {
  std::vector<double> x = {1, 2, 3};
  SUBCASE("perfect correlation") {
    CHECK(pearson(x, x) == doctest::Approx(1.0));
  }
  SUBCASE("perfect anticorrelation") {
    std::vector<double> y = {-1, -2, -3};
    CHECK(pearson(x, y) == doctest::Approx(-1.0));
  }
  SUBCASE("frozen derived value") {
    std::vector<double> y = {1, 2, 4};
    // oracle: raw-sum formula, 0.9819805060619657
    CHECK(pearson(x, y) == doctest::Approx(0.9819805060619657).epsilon(1e-12));
    CHECK(pearson(x, y) == doctest::Approx(ts::pearson_oracle(x, y)).epsilon(1e-12));
    CHECK(pearson(y, x) == pearson(x, y));  // symmetry
  }
  SUBCASE("errors") {
    std::vector<double> constant = {2, 2, 2};
    std::vector<double> shorter = {1, 2};
    CHECK_THROWS_AS(pearson(x, constant), UndefinedCorrelationError);
    CHECK_THROWS_AS(pearson(x, shorter), DomainError);
    std::vector<double> one = {1};
    CHECK_THROWS_AS(pearson(one, one), DomainError);
  }
}

TEST_CASE("pearson matches the oracle on random vectors") {
  ts::Rng rng{17};
  for (int round = 0; round < 60; ++round) {
    std::size_t n = 2 + rng.below(120);
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = rng.uniform() * 100.0;
      y[i] = rng.uniform() * 100.0 - 50.0;
    }
    x[0] += 1.0;  // guard against the (vanishing) chance of a constant draw
    y[0] += 1.0;
    CHECK(pearson(x, y) ==
          doctest::Approx(ts::pearson_oracle(x, y)).epsilon(1e-12));
  }
}

TEST_CASE("pearson affine invariance up to sign") {
  ts::Rng rng{23};
  std::vector<double> x(40), y(40);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = rng.uniform() * 10.0;
    y[i] = rng.uniform() * 10.0;
  }
  double base = pearson(x, y);
  for (double a : {2.5, -3.0, 0.125}) {
    std::vector<double> ax(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) ax[i] = a * x[i] + 7.0;
    double expected = a > 0 ? base : -base;
    CHECK(pearson(ax, y) == doctest::Approx(expected).epsilon(1e-9));
  }
}

namespace {

ActivityDataset two_page_dataset() {
  std::vector<PageRecord> pages = {ts::page("P"), ts::page("Q")};
  std::vector<PostRecord> posts = {
      ts::post("t1", "P", "u9", PostType::photo),
      ts::post("t2", "P", "P", PostType::status),  // admin sentinel
      ts::post("t3", "Q", "u9", PostType::photo),
  };
  std::vector<LikeRecord> likes = {
      ts::like("t1", "u1"), ts::like("t1", "u2"), ts::like("t2", "u1"),
      ts::like("t3", "u3"),
  };
  std::vector<CommentRecord> comments = {ts::comment("t1", "u4")};
  return ActivityDataset::from_records(pages, posts, likes, comments);
}

}  // namespace

TEST_CASE("page_metrics enumerated example") {
  auto ds = two_page_dataset();
  auto cls = classify_users(ds, ClassifyConfig{});
  auto metrics = page_metrics(ds, cls);
  REQUIRE(metrics.rows().size() == 2);
  const auto& p = metrics.rows()[0];
  CHECK(p.page_id == "P");
  CHECK(p.users == 2);
  CHECK(p.posts == 2);
  CHECK(p.likes == 3);
  CHECK(p.comments == 1);
  CHECK(p.shares == 0);
  const auto& q = metrics.rows()[1];
  CHECK(q.users == 1);
  CHECK(q.posts == 1);
}

TEST_CASE("page with no activity yields an all-zero row") {
  std::vector<PageRecord> pages = {ts::page("P")};
  auto ds = ActivityDataset::from_records(pages, {}, {}, {});
  auto metrics = page_metrics(ds, classify_users(ds, ClassifyConfig{}));
  REQUIRE(metrics.rows().size() == 1);
  const auto& row = metrics.rows()[0];
  CHECK(row.users == 0);
  CHECK(row.posts == 0);
  CHECK(row.likes == 0);
  CHECK(row.comments == 0);
  CHECK(row.shares == 0);
  CHECK(row.polarized == 0);
}

TEST_CASE("shares count copies of objects spanning at least two pages") {
  std::vector<PageRecord> pages = {ts::page("P"), ts::page("Q")};
  std::vector<PostRecord> posts = {
      ts::post("t1", "P", "a", PostType::photo, std::optional<std::string>("o1")),
      ts::post("t2", "Q", "a", PostType::photo, std::optional<std::string>("o1")),
      ts::post("t3", "P", "a", PostType::photo, std::optional<std::string>("o2")),
      ts::post("t4", "P", "a", PostType::photo),  // no object id
  };
  auto ds = ActivityDataset::from_records(pages, posts, {}, {});
  auto metrics = page_metrics(ds, classify_users(ds, ClassifyConfig{}));
  CHECK(metrics.rows()[0].shares == 1);  // o1 copy only; o2 stays on one page
  CHECK(metrics.rows()[1].shares == 1);
}

TEST_CASE("polarized column mirrors the classify module") {
  std::vector<PageRecord> pages = {ts::page("P"), ts::page("Q")};
  std::vector<PostRecord> posts;
  for (int i = 0; i < 6; ++i) {
    posts.push_back(ts::post("t" + std::to_string(i), "P"));
  }
  std::vector<LikeRecord> likes;
  for (int i = 0; i < 6; ++i) likes.push_back(ts::like("t" + std::to_string(i), "u1"));
  auto ds = ActivityDataset::from_records(pages, posts, likes, {});
  auto cls = classify_users(ds, ClassifyConfig{});
  auto metrics = page_metrics(ds, cls);
  CHECK(metrics.rows()[0].polarized == cls.polarized_count_by_page().at("P"));
  CHECK(metrics.rows()[1].polarized == 0);
}

TEST_CASE("page_metrics totals line up with the dataset") {
  auto ds = two_page_dataset();
  auto metrics = page_metrics(ds, classify_users(ds, ClassifyConfig{}));
  std::int64_t posts = 0, likes = 0, comments = 0, users_with_multiplicity = 0;
  for (const auto& row : metrics.rows()) {
    posts += row.posts;
    likes += row.likes;
    comments += row.comments;
    users_with_multiplicity += row.users;
  }
  CHECK(posts == static_cast<std::int64_t>(ds.posts().size()));
  CHECK(likes == static_cast<std::int64_t>(ds.likes().size()));
  CHECK(comments == static_cast<std::int64_t>(ds.comments().size()));
  std::int64_t distinct_active = 0;
  for (const auto& [user_id, activity] : ds.users()) {
    if (activity.total_likes > 0) ++distinct_active;
  }
  CHECK(users_with_multiplicity >= distinct_active);
}

TEST_CASE("correlation_matrix") {
  auto ds = two_page_dataset();
  auto metrics = page_metrics(ds, classify_users(ds, ClassifyConfig{}));

  SUBCASE("unit diagonal, symmetry, oracle agreement") {
    std::vector<std::string> cols = {"users", "posts", "likes"};
    auto matrix = correlation_matrix(metrics, cols);
    for (std::size_t i = 0; i < cols.size(); ++i) {
      CHECK(*matrix.cells[i][i] == 1.0);
      for (std::size_t j = 0; j < cols.size(); ++j) {
        CHECK(matrix.cells[i][j] == matrix.cells[j][i]);
        if (i != j && matrix.cells[i][j]) {
          CHECK(*matrix.cells[i][j] ==
                doctest::Approx(ts::pearson_oracle(metrics.column(cols[i]),
                                                   metrics.column(cols[j]))));
        }
      }
    }
  }
  SUBCASE("identical measures correlate at 1") {
    std::vector<std::string> cols = {"users", "users"};
    auto matrix = correlation_matrix(metrics, cols);
    CHECK(*matrix.cells[0][1] == doctest::Approx(1.0));
  }
  SUBCASE("constant column reports absent cells") {
    std::vector<std::string> cols = {"users", "shares"};  // shares are all zero here
    auto matrix = correlation_matrix(metrics, cols);
    CHECK_FALSE(matrix.cells[0][1].has_value());
    CHECK(*matrix.cells[1][1] == 1.0);  // diagonal stays unit
  }
  SUBCASE("needs two pages") {
    auto single = ActivityDataset::from_records({ts::page("P")}, {}, {}, {});
    auto m = page_metrics(single, classify_users(single, ClassifyConfig{}));
    std::vector<std::string> cols = {"users", "posts"};
    CHECK_THROWS_AS(correlation_matrix(m, cols), DomainError);
  }
}

TEST_CASE("correlation matrix on hand-built 3-page counts equals cellwise pearson") {
  std::vector<PageMetricsRow> rows(3);
  rows[0] = {"a", 10, 5, 100, 20, 3, 7};
  rows[1] = {"b", 20, 9, 180, 35, 5, 12};
  rows[2] = {"c", 5, 2, 40, 10, 1, 2};
  PageMetricsTable metrics(rows);
  std::vector<std::string> cols(PageMetricsTable::kMeasures.begin(),
                                PageMetricsTable::kMeasures.end());
  auto matrix = correlation_matrix(metrics, cols);
  for (std::size_t i = 0; i < cols.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (i == j) continue;
      CHECK(*matrix.cells[i][j] ==
            doctest::Approx(ts::pearson_oracle(metrics.column(cols[i]),
                                               metrics.column(cols[j])))
                .epsilon(1e-12));
    }
  }
}

TEST_CASE("post_type_breakdown") {
  SUBCASE("all photos") {
    std::vector<PageRecord> pages = {ts::page("P")};
    std::vector<PostRecord> posts = {ts::post("t1", "P", "a", PostType::photo)};
    auto ds = ActivityDataset::from_records(pages, posts, {ts::like("t1", "u1")},
                                            {ts::comment("t1", "u1")});
    auto breakdown = post_type_breakdown(ds);
    CHECK(*breakdown.post_fraction(PostType::photo) == 1.0);
    CHECK(*breakdown.like_fraction(PostType::photo) == 1.0);
    CHECK(*breakdown.comment_fraction(PostType::photo) == 1.0);
  }
  SUBCASE("two statuses and two photos, likes only on photos") {
    std::vector<PageRecord> pages = {ts::page("P")};
    std::vector<PostRecord> posts = {
        ts::post("t1", "P", "a", PostType::status),
        ts::post("t2", "P", "a", PostType::status),
        ts::post("t3", "P", "a", PostType::photo),
        ts::post("t4", "P", "a", PostType::photo),
    };
    std::vector<LikeRecord> likes = {ts::like("t3", "u1"), ts::like("t4", "u2")};
    auto ds = ActivityDataset::from_records(pages, posts, likes, {});
    auto breakdown = post_type_breakdown(ds);
    CHECK(*breakdown.post_fraction(PostType::status) == doctest::Approx(0.5));
    CHECK(*breakdown.post_fraction(PostType::photo) == doctest::Approx(0.5));
    CHECK(*breakdown.like_fraction(PostType::status) == 0.0);
    CHECK(*breakdown.like_fraction(PostType::photo) == 1.0);
  }
  SUBCASE("empty dataset reports absent fractions") {
    auto ds = ActivityDataset::from_records({ts::page("P")}, {}, {}, {});
    auto breakdown = post_type_breakdown(ds);
    CHECK_FALSE(breakdown.post_fraction(PostType::photo).has_value());
    CHECK_FALSE(breakdown.like_fraction(PostType::photo).has_value());
  }
  SUBCASE("fractions sum to one per measure") {
    auto ds = two_page_dataset();
    auto breakdown = post_type_breakdown(ds);
    double posts = 0, likes = 0;
    for (std::size_t i = 0; i < kPostTypeCount; ++i) {
      posts += *breakdown.post_fraction(static_cast<PostType>(i));
      likes += *breakdown.like_fraction(static_cast<PostType>(i));
    }
    CHECK(std::abs(posts - 1.0) < 1e-12);
    CHECK(std::abs(likes - 1.0) < 1e-12);
  }
}

TEST_CASE("admin_split enumerated example") {
  // 1 admin post with 5 likes, 3 user posts with 1 like total
  std::vector<PageRecord> pages = {ts::page("P")};
  std::vector<PostRecord> posts = {
      ts::post("t1", "P", "P"),  // admin
      ts::post("t2", "P", "u1"),
      ts::post("t3", "P", "u2"),
      ts::post("t4", "P", "u3"),
  };
  std::vector<LikeRecord> likes;
  for (int i = 0; i < 5; ++i) likes.push_back(ts::like("t1", "u" + std::to_string(10 + i)));
  likes.push_back(ts::like("t2", "u20"));
  auto ds = ActivityDataset::from_records(pages, posts, likes, {});
  auto split = admin_split(ds);
  CHECK(split.admin_posts == 1);
  CHECK(split.user_posts == 3);
  CHECK(*split.admin_post_share == doctest::Approx(0.25));
  CHECK(*split.admin_like_share == doctest::Approx(5.0 / 6.0));
  REQUIRE(split.admin_like_samples.size() == 1);
  CHECK(split.admin_like_samples[0] == 5);
  CHECK(split.user_like_samples.size() == 3);
  // per-page vectors feed a pearson of admin vs. user post counts
  REQUIRE(split.per_page.size() == 1);
  CHECK(split.per_page[0].admin_posts == 1);
  CHECK(split.per_page[0].user_posts == 3);
}

TEST_CASE("admin vs user posting patterns correlate via pearson per page") {
  // the per-page rows feed straight into pearson; the coefficient itself is
  // data-dependent
  std::vector<PageRecord> pages = {ts::page("P"), ts::page("Q"), ts::page("R")};
  std::vector<PostRecord> posts;
  int seq = 0;
  auto add_posts = [&](const char* page, int admin, int user) {
    for (int i = 0; i < admin; ++i) {
      posts.push_back(ts::post("t" + std::to_string(seq++), page, page));
    }
    for (int i = 0; i < user; ++i) {
      posts.push_back(ts::post("t" + std::to_string(seq++), page, "u1"));
    }
  };
  add_posts("P", 4, 10);
  add_posts("Q", 1, 8);
  add_posts("R", 6, 3);
  auto ds = ActivityDataset::from_records(pages, posts, {}, {});
  auto split = admin_split(ds);
  std::vector<double> admin_counts, user_counts;
  for (const auto& row : split.per_page) {
    admin_counts.push_back(static_cast<double>(row.admin_posts));
    user_counts.push_back(static_cast<double>(row.user_posts));
  }
  double r = pearson(admin_counts, user_counts);
  CHECK(r == doctest::Approx(ts::pearson_oracle(admin_counts, user_counts)).epsilon(1e-12));
  CHECK(r >= -1.0);
  CHECK(r <= 1.0);
}

TEST_CASE("admin_split with every post from admins") {
  std::vector<PageRecord> pages = {ts::page("P")};
  std::vector<PostRecord> posts = {ts::post("t1", "P", "P"), ts::post("t2", "P", "P")};
  auto ds = ActivityDataset::from_records(pages, posts, {}, {});
  auto split = admin_split(ds);
  CHECK(*split.admin_post_share == 1.0);
  CHECK(split.user_like_samples.empty());
  CHECK_FALSE(split.admin_like_share.has_value());  // no likes at all
}

TEST_CASE("metrics CSV export is stable") {
  auto ds = two_page_dataset();
  auto metrics = page_metrics(ds, classify_users(ds, ClassifyConfig{}));
  std::ostringstream out;
  write_page_metrics(out, metrics);
  CHECK(out.str() ==
        "page_id,users,posts,likes,comments,shares,polarized\n"
        "P,2,2,3,1,0,0\n"
        "Q,1,1,1,0,0,0\n");
}
