#include "pagenet/classify.hpp"

#include <cassert>
#include <ostream>

#include "pagenet/text.hpp"

namespace pagenet {

void ClassifyConfig::validate() const {
  if (habitual_min_likes < 1) {
    throw DomainError("habitual_min_likes must be positive");
  }
  if (!(polarization_fraction > 0.5) || polarization_fraction > 1.0) {
    throw DomainError("polarization_fraction must lie in (0.5, 1]");
  }
}

std::string_view to_string(UserCategory category) {
  return category == UserCategory::habitual ? "habitual" : "occasional";
}

bool UserClassification::is_polarized(std::string_view user_id) const {
  auto it = users_.find(std::string(user_id));
  return it != users_.end() && it->second.polarized_on.has_value();
}

std::map<std::string, std::int64_t> UserClassification::polarized_count_by_page() const {
  std::map<std::string, std::int64_t> counts;
  for (const auto& [user_id, rec] : users_) {
    if (rec.polarized_on) ++counts[*rec.polarized_on];
  }
  return counts;
}

UserClassification classify_users(const ActivityDataset& dataset,
                                  const ClassifyConfig& config) {
  config.validate();
  std::map<std::string, UserClassRecord> users;
  for (const auto& [user_id, activity] : dataset.users()) {
    if (activity.total_likes == 0) continue;  // comment-only users are not active
    UserClassRecord rec;
    rec.total_likes = activity.total_likes;
    rec.likes_by_page = activity.likes_by_page;
    if (activity.total_likes < config.habitual_min_likes) {
      rec.category = UserCategory::occasional;
    } else {
      rec.category = UserCategory::habitual;
      for (const auto& [page_id, count] : rec.likes_by_page) {
        double share = static_cast<double>(count) / static_cast<double>(rec.total_likes);
        if (share >= config.polarization_fraction) {
          // polarization_fraction > 0.5 makes a second qualifying page impossible
          assert(!rec.polarized_on);
          rec.polarized_on = page_id;
        }
      }
    }
    users.emplace(user_id, std::move(rec));
  }
  return UserClassification(config, std::move(users));
}

CategoryCounts category_counts(const UserClassification& classification,
                               const ActivityDataset& dataset) {
  CategoryCounts counts;
  for (const auto& [user_id, rec] : classification.users()) {
    ++counts.active;
    if (rec.category == UserCategory::habitual) {
      ++counts.habitual;
    } else {
      ++counts.occasional;
    }
    if (rec.polarized_on) {
      ++counts.polarized;
      counts.polarized_likes += rec.total_likes;
      auto it = dataset.users().find(user_id);
      if (it != dataset.users().end()) {
        counts.polarized_comments += it->second.total_comments;
      }
    }
  }
  std::int64_t total_likes = static_cast<std::int64_t>(dataset.likes().size());
  std::int64_t total_comments = static_cast<std::int64_t>(dataset.comments().size());
  if (total_likes > 0) {
    counts.polarized_like_share =
        static_cast<double>(counts.polarized_likes) / static_cast<double>(total_likes);
  }
  if (total_comments > 0) {
    counts.polarized_comment_share =
        static_cast<double>(counts.polarized_comments) / static_cast<double>(total_comments);
  }
  return counts;
}

PageAudience page_audience(std::string_view page_id,
                           const UserClassification& classification,
                           const ActivityDataset& dataset) {
  dataset.page_index(page_id);  // throws LookupError for unknown pages
  PageAudience audience;
  auto likers_it = dataset.likers_by_page().find(std::string(page_id));
  if (likers_it == dataset.likers_by_page().end()) return audience;
  for (const std::string& user_id : likers_it->second) {
    const UserClassRecord& rec = classification.users().at(user_id);
    if (rec.category == UserCategory::occasional) {
      ++audience.occasional;
    } else if (!rec.polarized_on) {
      ++audience.habitual_not_polarized;
    } else if (*rec.polarized_on == page_id) {
      ++audience.polarized_here;
    } else {
      ++audience.polarized_elsewhere;
    }
  }
  return audience;
}

PolarizedActivity polarized_activity_distributions(const UserClassification& classification,
                                                   const ActivityDataset& dataset) {
  PolarizedActivity activity;
  std::int64_t commented = 0;
  for (const auto& [user_id, rec] : classification.users()) {
    if (!rec.polarized_on) continue;
    std::int64_t comments = 0;
    if (auto it = dataset.users().find(user_id); it != dataset.users().end()) {
      comments = it->second.total_comments;
    }
    activity.likes_per_user.push_back(rec.total_likes);
    activity.comments_per_user.push_back(comments);
    if (comments > 0) ++commented;
  }
  if (!activity.likes_per_user.empty()) {
    activity.fraction_commented = static_cast<double>(commented) /
                                  static_cast<double>(activity.likes_per_user.size());
  }
  return activity;
}

void write_classification(std::ostream& out, const UserClassification& classification) {
  out << "user_id,total_likes,category,polarized_on\n";
  for (const auto& [user_id, rec] : classification.users()) {
    out << csv_escape(user_id) << ',' << rec.total_likes << ','
        << to_string(rec.category) << ','
        << (rec.polarized_on ? csv_escape(*rec.polarized_on) : std::string()) << '\n';
  }
}

}  // namespace pagenet
