#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pagenet/errors.hpp"

namespace pagenet {

enum class PostType { photo, status, video, link };

PostType parse_post_type(std::string_view text);  // throws ValidationError
std::string_view to_string(PostType type);
inline constexpr std::size_t kPostTypeCount = 4;

struct PageRecord {
  std::string page_id;
  std::string name;
  double latitude = 0.0;   // degrees, [-90, 90]
  double longitude = 0.0;  // degrees, [-180, 180]
};

struct PostRecord {
  std::string post_id;
  std::string page_id;
  std::string author_user_id;
  std::int64_t timestamp = 0;  // seconds since epoch
  PostType post_type = PostType::status;
  std::optional<std::string> object_id;  // shared by all copies of a reshared item
  // Resolved at load time: an explicit "admin" flag in the input wins,
  // otherwise author_user_id equal to page_id marks the post as admin-shared.
  bool admin = false;
};

struct LikeRecord {
  std::string post_id;
  std::string user_id;
  std::int64_t timestamp = 0;
};

struct CommentRecord {
  std::string post_id;
  std::string user_id;
  std::int64_t timestamp = 0;
};

// Per-user aggregates derived once at dataset build time. Users that only
// comment have total_likes == 0; they are kept for comment statistics but are
// not "active" in the classification sense.
struct UserActivity {
  std::map<std::string, std::int64_t> likes_by_page;  // distinct liked posts per page
  std::int64_t total_likes = 0;
  std::int64_t total_comments = 0;
};

// Validated, fully indexed, immutable activity store. Construction enforces
// referential integrity and deduplicates likes per (user, post); afterwards
// the dataset is safe for concurrent readers.
class ActivityDataset {
 public:
  static ActivityDataset from_records(std::vector<PageRecord> pages,
                                      std::vector<PostRecord> posts,
                                      std::vector<LikeRecord> likes,
                                      std::vector<CommentRecord> comments);

  const std::vector<PageRecord>& pages() const { return pages_; }
  const std::vector<PostRecord>& posts() const { return posts_; }
  const std::vector<LikeRecord>& likes() const { return likes_; }  // deduplicated
  const std::vector<CommentRecord>& comments() const { return comments_; }

  bool has_page(std::string_view page_id) const;
  const PageRecord& page(std::string_view page_id) const;  // throws LookupError
  const PostRecord& post(std::string_view post_id) const;  // throws LookupError
  std::size_t page_index(std::string_view page_id) const;
  std::size_t post_index(std::string_view post_id) const;

  std::span<const std::size_t> posts_of_page(std::size_t page_idx) const;
  std::int64_t like_count(std::size_t post_idx) const;
  std::int64_t comment_count(std::size_t post_idx) const;

  // Sorted by user id; deterministic iteration order for all consumers.
  const std::map<std::string, UserActivity>& users() const { return users_; }

  // page_id -> sorted distinct likers / distinct liker count
  const std::map<std::string, std::vector<std::string>>& likers_by_page() const {
    return likers_by_page_;
  }

 private:
  ActivityDataset() = default;
  void build_indexes();

  std::vector<PageRecord> pages_;
  std::vector<PostRecord> posts_;
  std::vector<LikeRecord> likes_;
  std::vector<CommentRecord> comments_;

  std::unordered_map<std::string, std::size_t> page_index_;
  std::unordered_map<std::string, std::size_t> post_index_;
  std::vector<std::vector<std::size_t>> posts_by_page_;
  std::vector<std::int64_t> like_counts_;
  std::vector<std::int64_t> comment_counts_;
  std::map<std::string, UserActivity> users_;
  std::map<std::string, std::vector<std::string>> likers_by_page_;
};

// Parses the page registry CSV (header `page_id,name,lat,lon`). Order of the
// input lines is preserved.
std::vector<PageRecord> load_pages(std::istream& in);

// Parses the three JSONL event streams against an already-loaded page
// registry and materializes the indexed dataset. Unknown fields are skipped;
// one warning per (stream, field) is appended to `warnings` when provided.
ActivityDataset load_events(std::vector<PageRecord> pages, std::istream& posts_in,
                            std::istream& likes_in, std::istream& comments_in,
                            std::vector<std::string>* warnings = nullptr);

struct ValidationReport {
  std::int64_t page_count = 0;
  std::int64_t post_count = 0;
  std::int64_t like_count = 0;
  std::int64_t comment_count = 0;
  std::int64_t posts_with_object_id = 0;
  std::int64_t admin_posts = 0;
  std::vector<std::string> errors;

  bool ok() const { return errors.empty(); }
  std::optional<double> object_id_coverage() const;
  std::optional<double> admin_post_share() const;
};

// Re-derives counts from the raw collections and re-checks every invariant.
// Never throws; findings land in the report.
ValidationReport validate(const ActivityDataset& dataset);

// Interchange writers; reloading their output through load_pages/load_events
// reproduces identical aggregates.
void write_pages(std::ostream& out, std::span<const PageRecord> pages);
void write_posts(std::ostream& out, std::span<const PostRecord> posts);
void write_likes(std::ostream& out, std::span<const LikeRecord> likes);
void write_comments(std::ostream& out, std::span<const CommentRecord> comments);

}  // namespace pagenet
