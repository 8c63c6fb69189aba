// Shared test helpers: deterministic RNG, dataset builders, and the
// independent oracles the assertions are frozen against. Everything here
// must stay decoupled from the implementation paths it checks.
#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "pagenet/ingest.hpp"

namespace testsupport {

struct Rng {
  std::uint64_t state;

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  std::uint64_t below(std::uint64_t n) { return next() % n; }
  std::int64_t int_in(std::int64_t lo, std::int64_t hi) {  // inclusive
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }
};

// Raw-sum product-moment formula; a different algebraic route than the
// two-pass centered implementation.
inline double pearson_oracle(const std::vector<double>& x, const std::vector<double>& y) {
  double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxy += x[i] * y[i];
    sxx += x[i] * x[i];
    syy += y[i] * y[i];
  }
  return (n * sxy - sx * sy) / std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
}

// Adaptive Simpson quadrature for the disparity-filter null model
// 1 - (k-1) * \int_0^p (1-x)^(k-2) dx.
inline double simpson(double (*f)(double, double), double k, double a, double b) {
  double m = 0.5 * (a + b);
  return (b - a) / 6.0 * (f(a, k) + 4.0 * f(m, k) + f(b, k));
}

inline double adaptive_simpson(double (*f)(double, double), double k, double a, double b,
                               double whole, double tol, int depth) {
  double m = 0.5 * (a + b);
  double left = simpson(f, k, a, m);
  double right = simpson(f, k, m, b);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return adaptive_simpson(f, k, a, m, left, tol / 2.0, depth - 1) +
         adaptive_simpson(f, k, m, b, right, tol / 2.0, depth - 1);
}

inline double null_model_integrand(double x, double k) {
  return std::pow(1.0 - x, k - 2.0);
}

inline double significance_integral_oracle(double p, std::int64_t k) {
  if (k == 1) return 1.0;
  double integral =
      adaptive_simpson(null_model_integrand, static_cast<double>(k), 0.0, p,
                       simpson(null_model_integrand, static_cast<double>(k), 0.0, p),
                       1e-13, 48);
  return 1.0 - static_cast<double>(k - 1) * integral;
}

// Dense M * M^T oracle over a 0/1 incidence matrix.
inline std::vector<std::vector<std::int64_t>> mmt_oracle(
    const std::vector<std::vector<int>>& incidence) {
  std::size_t rows = incidence.size();
  std::size_t cols = rows == 0 ? 0 : incidence[0].size();
  std::vector<std::vector<std::int64_t>> product(rows, std::vector<std::int64_t>(rows, 0));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < rows; ++j) {
      for (std::size_t k = 0; k < cols; ++k) {
        product[i][j] += static_cast<std::int64_t>(incidence[i][k]) * incidence[j][k];
      }
    }
  }
  return product;
}

// Brute-force user classifier working straight off raw like records.
struct OracleUser {
  std::int64_t total = 0;
  std::string category;
  std::optional<std::string> polarized_on;
};

inline std::map<std::string, OracleUser> classify_oracle(
    const std::vector<pagenet::LikeRecord>& likes,
    const std::map<std::string, std::string>& post_to_page,
    std::int64_t habitual_min_likes, double polarization_fraction) {
  std::set<std::pair<std::string, std::string>> pairs;
  std::map<std::string, std::map<std::string, std::int64_t>> per_user_page;
  for (const auto& like : likes) {
    if (!pairs.insert({like.user_id, like.post_id}).second) continue;
    per_user_page[like.user_id][post_to_page.at(like.post_id)] += 1;
  }
  std::map<std::string, OracleUser> out;
  for (const auto& [user, pages] : per_user_page) {
    OracleUser rec;
    for (const auto& [page, count] : pages) rec.total += count;
    if (rec.total < habitual_min_likes) {
      rec.category = "occasional";
    } else {
      rec.category = "habitual";
      for (const auto& [page, count] : pages) {
        if (static_cast<double>(count) / static_cast<double>(rec.total) >=
            polarization_fraction) {
          rec.polarized_on = page;
        }
      }
    }
    out.emplace(user, std::move(rec));
  }
  return out;
}

// Convenience builders for tiny in-memory datasets.
inline pagenet::PageRecord page(std::string id, double lat = 40.0, double lon = -74.0) {
  return pagenet::PageRecord{std::move(id), "page", lat, lon};
}

inline pagenet::PostRecord post(std::string id, std::string page_id,
                                std::string author = "author",
                                pagenet::PostType type = pagenet::PostType::status,
                                std::optional<std::string> object_id = std::nullopt,
                                std::int64_t timestamp = 0) {
  pagenet::PostRecord rec;
  rec.post_id = std::move(id);
  rec.page_id = page_id;
  rec.author_user_id = std::move(author);
  rec.timestamp = timestamp;
  rec.post_type = type;
  rec.object_id = std::move(object_id);
  rec.admin = rec.author_user_id == page_id;
  return rec;
}

inline pagenet::LikeRecord like(std::string post_id, std::string user_id,
                                std::int64_t timestamp = 0) {
  return pagenet::LikeRecord{std::move(post_id), std::move(user_id), timestamp};
}

inline pagenet::CommentRecord comment(std::string post_id, std::string user_id,
                                      std::int64_t timestamp = 0) {
  return pagenet::CommentRecord{std::move(post_id), std::move(user_id), timestamp};
}

}  // namespace testsupport
