#include "pagenet/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <set>
#include <unordered_map>

#include "pagenet/text.hpp"

namespace pagenet {

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> samples) {
  if (samples.empty()) throw DomainError("empirical distribution needs samples");
  std::sort(samples.begin(), samples.end());
  if (samples.front() < 0.0) throw DomainError("samples must be non-negative");
  total_ = static_cast<std::int64_t>(samples.size());
  std::int64_t cum = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    ++cum;
    if (i + 1 == samples.size() || samples[i + 1] != samples[i]) {
      values_.push_back(samples[i]);
      cum_le_.push_back(cum);
    }
  }
}

double EmpiricalDistribution::cdf(double x) const {
  // # samples <= x: last distinct value not greater than x
  auto it = std::upper_bound(values_.begin(), values_.end(), x);
  if (it == values_.begin()) return 0.0;
  std::int64_t le = cum_le_[static_cast<std::size_t>(it - values_.begin()) - 1];
  return static_cast<double>(le) / static_cast<double>(total_);
}

double EmpiricalDistribution::ccdf(double x) const {
  auto it = std::upper_bound(values_.begin(), values_.end(), x);
  if (it == values_.begin()) return 1.0;
  std::int64_t le = cum_le_[static_cast<std::size_t>(it - values_.begin()) - 1];
  return static_cast<double>(total_ - le) / static_cast<double>(total_);
}

double EmpiricalDistribution::pdf(double x) const {
  auto it = std::lower_bound(values_.begin(), values_.end(), x);
  if (it == values_.end() || *it != x) return 0.0;
  std::size_t i = static_cast<std::size_t>(it - values_.begin());
  std::int64_t count = cum_le_[i] - (i == 0 ? 0 : cum_le_[i - 1]);
  return static_cast<double>(count) / static_cast<double>(total_);
}

std::vector<std::pair<double, double>> EmpiricalDistribution::ccdf_points() const {
  std::vector<std::pair<double, double>> points;
  points.reserve(values_.size());
  for (std::size_t i = 0; i < values_.size(); ++i) {
    double c = static_cast<double>(total_ - cum_le_[i]) / static_cast<double>(total_);
    points.emplace_back(values_[i], c);
  }
  return points;
}

EmpiricalDistribution empirical_ccdf(std::span<const double> samples) {
  return EmpiricalDistribution(std::vector<double>(samples.begin(), samples.end()));
}

EmpiricalDistribution empirical_ccdf(std::span<const std::int64_t> samples) {
  std::vector<double> values(samples.begin(), samples.end());
  return EmpiricalDistribution(std::move(values));
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DomainError("pearson: length mismatch");
  if (x.size() < 2) throw DomainError("pearson: need at least 2 points");
  double mean_x = 0.0, mean_y = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mean_x += x[i];
    mean_y += y[i];
  }
  mean_x /= static_cast<double>(x.size());
  mean_y /= static_cast<double>(y.size());
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double dx = x[i] - mean_x;
    double dy = y[i] - mean_y;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw UndefinedCorrelationError("pearson undefined for a constant vector");
  }
  double r = sxy / std::sqrt(sxx * syy);
  return std::clamp(r, -1.0, 1.0);
}

std::vector<double> PageMetricsTable::column(std::string_view measure) const {
  std::vector<double> values;
  values.reserve(rows_.size());
  for (const auto& row : rows_) {
    std::int64_t v;
    if (measure == "users") v = row.users;
    else if (measure == "posts") v = row.posts;
    else if (measure == "likes") v = row.likes;
    else if (measure == "comments") v = row.comments;
    else if (measure == "shares") v = row.shares;
    else if (measure == "polarized") v = row.polarized;
    else throw DomainError("unknown measure '" + std::string(measure) + "'");
    values.push_back(static_cast<double>(v));
  }
  return values;
}

bool PageMetricsTable::is_measure(std::string_view name) {
  return std::find(kMeasures.begin(), kMeasures.end(), name) != kMeasures.end();
}

PageMetricsTable page_metrics(const ActivityDataset& dataset,
                              const UserClassification& classification) {
  // Object classes spanning >= 2 distinct pages make each member post a share.
  std::unordered_map<std::string, std::set<std::string>> object_pages;
  for (const auto& post : dataset.posts()) {
    if (post.object_id) object_pages[*post.object_id].insert(post.page_id);
  }

  std::map<std::string, std::int64_t> polarized_by_page =
      classification.polarized_count_by_page();

  std::vector<PageMetricsRow> rows;
  rows.reserve(dataset.pages().size());
  for (const auto& page : dataset.pages()) {
    PageMetricsRow row;
    row.page_id = page.page_id;
    std::size_t page_idx = dataset.page_index(page.page_id);
    for (std::size_t post_idx : dataset.posts_of_page(page_idx)) {
      const PostRecord& post = dataset.posts()[post_idx];
      ++row.posts;
      row.likes += dataset.like_count(post_idx);
      row.comments += dataset.comment_count(post_idx);
      if (post.object_id && object_pages.at(*post.object_id).size() >= 2) {
        ++row.shares;
      }
    }
    if (auto it = dataset.likers_by_page().find(page.page_id);
        it != dataset.likers_by_page().end()) {
      row.users = static_cast<std::int64_t>(it->second.size());
    }
    if (auto it = polarized_by_page.find(page.page_id); it != polarized_by_page.end()) {
      row.polarized = it->second;
    }
    rows.push_back(std::move(row));
  }
  std::sort(rows.begin(), rows.end(),
            [](const PageMetricsRow& a, const PageMetricsRow& b) {
              return a.page_id < b.page_id;
            });
  return PageMetricsTable(std::move(rows));
}

CorrelationMatrix correlation_matrix(const PageMetricsTable& metrics,
                                     std::span<const std::string> columns) {
  if (metrics.rows().size() < 2) {
    throw DomainError("correlation matrix needs at least 2 pages");
  }
  CorrelationMatrix matrix;
  matrix.columns.assign(columns.begin(), columns.end());
  std::vector<std::vector<double>> data;
  data.reserve(columns.size());
  for (const auto& name : columns) data.push_back(metrics.column(name));

  std::size_t n = columns.size();
  matrix.cells.assign(n, std::vector<std::optional<double>>(n));
  for (std::size_t i = 0; i < n; ++i) {
    matrix.cells[i][i] = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      std::optional<double> r;
      try {
        r = pearson(data[i], data[j]);
      } catch (const UndefinedCorrelationError&) {
        // reported as an absent entry, never silently coerced to 0
      }
      matrix.cells[i][j] = r;
      matrix.cells[j][i] = r;
    }
  }
  return matrix;
}

std::optional<double> PostTypeBreakdown::post_fraction(PostType type) const {
  std::int64_t total = 0;
  for (auto c : post_counts) total += c;
  if (total == 0) return std::nullopt;
  return static_cast<double>(post_counts[static_cast<std::size_t>(type)]) /
         static_cast<double>(total);
}

std::optional<double> PostTypeBreakdown::like_fraction(PostType type) const {
  std::int64_t total = 0;
  for (auto c : like_counts) total += c;
  if (total == 0) return std::nullopt;
  return static_cast<double>(like_counts[static_cast<std::size_t>(type)]) /
         static_cast<double>(total);
}

std::optional<double> PostTypeBreakdown::comment_fraction(PostType type) const {
  std::int64_t total = 0;
  for (auto c : comment_counts) total += c;
  if (total == 0) return std::nullopt;
  return static_cast<double>(comment_counts[static_cast<std::size_t>(type)]) /
         static_cast<double>(total);
}

PostTypeBreakdown post_type_breakdown(const ActivityDataset& dataset) {
  PostTypeBreakdown breakdown;
  for (std::size_t i = 0; i < dataset.posts().size(); ++i) {
    auto type_idx = static_cast<std::size_t>(dataset.posts()[i].post_type);
    ++breakdown.post_counts[type_idx];
    breakdown.like_counts[type_idx] += dataset.like_count(i);
    breakdown.comment_counts[type_idx] += dataset.comment_count(i);
  }
  return breakdown;
}

AdminSplit admin_split(const ActivityDataset& dataset) {
  AdminSplit split;
  std::map<std::string, AdminSplit::PageRow> per_page;
  for (const auto& page : dataset.pages()) {
    per_page[page.page_id].page_id = page.page_id;
  }
  std::int64_t admin_likes = 0;
  std::int64_t total_likes = 0;
  for (std::size_t i = 0; i < dataset.posts().size(); ++i) {
    const PostRecord& post = dataset.posts()[i];
    auto& row = per_page[post.page_id];
    std::int64_t likes = dataset.like_count(i);
    total_likes += likes;
    if (post.admin) {
      ++split.admin_posts;
      ++row.admin_posts;
      split.admin_like_samples.push_back(likes);
      admin_likes += likes;
    } else {
      ++split.user_posts;
      ++row.user_posts;
      split.user_like_samples.push_back(likes);
    }
  }
  for (auto& [page_id, row] : per_page) split.per_page.push_back(std::move(row));
  std::int64_t total_posts = split.admin_posts + split.user_posts;
  if (total_posts > 0) {
    split.admin_post_share =
        static_cast<double>(split.admin_posts) / static_cast<double>(total_posts);
  }
  if (total_likes > 0) {
    split.admin_like_share =
        static_cast<double>(admin_likes) / static_cast<double>(total_likes);
  }
  return split;
}

void write_page_metrics(std::ostream& out, const PageMetricsTable& metrics) {
  out << "page_id,users,posts,likes,comments,shares,polarized\n";
  for (const auto& row : metrics.rows()) {
    out << csv_escape(row.page_id) << ',' << row.users << ',' << row.posts << ','
        << row.likes << ',' << row.comments << ',' << row.shares << ','
        << row.polarized << '\n';
  }
}

void write_correlation_matrix(std::ostream& out, const CorrelationMatrix& matrix) {
  out << "measure";
  for (const auto& name : matrix.columns) out << ',' << csv_escape(name);
  out << '\n';
  for (std::size_t i = 0; i < matrix.columns.size(); ++i) {
    out << csv_escape(matrix.columns[i]);
    for (std::size_t j = 0; j < matrix.columns.size(); ++j) {
      out << ',';
      if (matrix.cells[i][j]) out << format_double(*matrix.cells[i][j]);
    }
    out << '\n';
  }
}

}  // namespace pagenet
