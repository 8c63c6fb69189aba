#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pagenet/classify.hpp"
#include "pagenet/ingest.hpp"

namespace pagenet {

// Empirical distribution over a finite sample multiset. cdf is
// Pr(X <= x), ccdf is Pr(X > x) -- the strict inequality matters at sample
// points -- and pdf is the probability mass at an exact sample value.
class EmpiricalDistribution {
 public:
  explicit EmpiricalDistribution(std::vector<double> samples);  // throws DomainError

  double cdf(double x) const;
  double ccdf(double x) const;
  double pdf(double x) const;

  std::int64_t sample_count() const { return total_; }
  double min_value() const { return values_.front(); }
  double max_value() const { return values_.back(); }

  // One (x, ccdf(x)) pair per distinct sample value, ascending in x. Raw
  // points; axis scaling (log-log plots) is left to downstream tooling.
  std::vector<std::pair<double, double>> ccdf_points() const;

 private:
  std::vector<double> values_;        // distinct, ascending
  std::vector<std::int64_t> cum_le_;  // # samples <= values_[i]
  std::int64_t total_ = 0;
};

EmpiricalDistribution empirical_ccdf(std::span<const double> samples);
EmpiricalDistribution empirical_ccdf(std::span<const std::int64_t> samples);

// Product-moment correlation. Throws DomainError on length mismatch or
// length < 2, UndefinedCorrelationError when either vector is constant.
double pearson(std::span<const double> x, std::span<const double> y);

struct PageMetricsRow {
  std::string page_id;
  std::int64_t users = 0;      // distinct likers on the page's posts
  std::int64_t posts = 0;
  std::int64_t likes = 0;
  std::int64_t comments = 0;
  std::int64_t shares = 0;     // posts whose object_id appears on >= 2 pages
  std::int64_t polarized = 0;  // users polarized on this page
};

class PageMetricsTable {
 public:
  static constexpr std::array<std::string_view, 6> kMeasures = {
      "users", "posts", "likes", "comments", "shares", "polarized"};

  explicit PageMetricsTable(std::vector<PageMetricsRow> rows) : rows_(std::move(rows)) {}

  const std::vector<PageMetricsRow>& rows() const { return rows_; }  // sorted by page_id
  std::vector<double> column(std::string_view measure) const;        // throws DomainError
  static bool is_measure(std::string_view name);

 private:
  std::vector<PageMetricsRow> rows_;
};

PageMetricsTable page_metrics(const ActivityDataset& dataset,
                              const UserClassification& classification);

// Symmetric correlation matrix over page-level measure columns. Cells where
// pearson is undefined (constant column) are reported absent rather than 0.
struct CorrelationMatrix {
  std::vector<std::string> columns;
  std::vector<std::vector<std::optional<double>>> cells;
};

CorrelationMatrix correlation_matrix(const PageMetricsTable& metrics,
                                     std::span<const std::string> columns);

struct PostTypeBreakdown {
  std::array<std::int64_t, kPostTypeCount> post_counts{};
  std::array<std::int64_t, kPostTypeCount> like_counts{};
  std::array<std::int64_t, kPostTypeCount> comment_counts{};

  std::optional<double> post_fraction(PostType type) const;
  std::optional<double> like_fraction(PostType type) const;
  std::optional<double> comment_fraction(PostType type) const;
};

PostTypeBreakdown post_type_breakdown(const ActivityDataset& dataset);

// Admin vs. common-user authorship split, with per-post like-count sample
// sets for the two classes.
struct AdminSplit {
  struct PageRow {
    std::string page_id;
    std::int64_t admin_posts = 0;
    std::int64_t user_posts = 0;
  };

  std::vector<PageRow> per_page;  // sorted by page_id
  std::int64_t admin_posts = 0;
  std::int64_t user_posts = 0;
  std::vector<std::int64_t> admin_like_samples;  // likes per admin post
  std::vector<std::int64_t> user_like_samples;   // likes per common-user post
  std::optional<double> admin_post_share;
  std::optional<double> admin_like_share;
};

AdminSplit admin_split(const ActivityDataset& dataset);

// CSV writers used for exports and persisted intermediates.
void write_page_metrics(std::ostream& out, const PageMetricsTable& metrics);
void write_correlation_matrix(std::ostream& out, const CorrelationMatrix& matrix);

}  // namespace pagenet
