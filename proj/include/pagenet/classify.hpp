#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "pagenet/ingest.hpp"

namespace pagenet {

struct ClassifyConfig {
  std::int64_t habitual_min_likes = 5;       // "at least 5" is a closed bound
  double polarization_fraction = 0.95;       // share in (0.5, 1]; closed bound
  void validate() const;                     // throws DomainError
};

enum class UserCategory { occasional, habitual };

std::string_view to_string(UserCategory category);

struct UserClassRecord {
  std::int64_t total_likes = 0;
  std::map<std::string, std::int64_t> likes_by_page;
  UserCategory category = UserCategory::occasional;
  std::optional<std::string> polarized_on;  // habitual users only
};

// Category assignment for every active user (>= 1 like). Comment-only users
// are excluded here; the dataset keeps them for comment statistics.
class UserClassification {
 public:
  UserClassification(ClassifyConfig config, std::map<std::string, UserClassRecord> users)
      : config_(config), users_(std::move(users)) {}

  const ClassifyConfig& config() const { return config_; }
  const std::map<std::string, UserClassRecord>& users() const { return users_; }

  bool is_polarized(std::string_view user_id) const;
  // page_id -> number of users polarized on it
  std::map<std::string, std::int64_t> polarized_count_by_page() const;

 private:
  ClassifyConfig config_;
  std::map<std::string, UserClassRecord> users_;
};

UserClassification classify_users(const ActivityDataset& dataset,
                                  const ClassifyConfig& config);

struct CategoryCounts {
  std::int64_t active = 0;
  std::int64_t habitual = 0;
  std::int64_t occasional = 0;
  std::int64_t polarized = 0;
  std::int64_t polarized_likes = 0;
  std::int64_t polarized_comments = 0;
  std::optional<double> polarized_like_share;     // absent when the dataset has no likes
  std::optional<double> polarized_comment_share;  // absent when it has no comments
};

CategoryCounts category_counts(const UserClassification& classification,
                               const ActivityDataset& dataset);

// Audience composition of one page over its active users (>= 1 like there).
// The four buckets partition that set.
struct PageAudience {
  std::int64_t occasional = 0;
  std::int64_t polarized_here = 0;
  std::int64_t habitual_not_polarized = 0;
  std::int64_t polarized_elsewhere = 0;

  std::int64_t total() const {
    return occasional + polarized_here + habitual_not_polarized + polarized_elsewhere;
  }
};

PageAudience page_audience(std::string_view page_id,
                           const UserClassification& classification,
                           const ActivityDataset& dataset);

// Paired per-user like/comment sample sets over polarized users, plus the
// fraction of them that commented at least once (absent when there are none).
struct PolarizedActivity {
  std::vector<std::int64_t> likes_per_user;     // index-aligned with comments_per_user,
  std::vector<std::int64_t> comments_per_user;  // ordered by user id
  std::optional<double> fraction_commented;
};

PolarizedActivity polarized_activity_distributions(const UserClassification& classification,
                                                   const ActivityDataset& dataset);

// CSV export `user_id,total_likes,category,polarized_on`, sorted by user id.
void write_classification(std::ostream& out, const UserClassification& classification);

}  // namespace pagenet
