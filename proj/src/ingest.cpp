#include "pagenet/ingest.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <unordered_set>

#include <json.hpp>

#include "pagenet/text.hpp"

namespace pagenet {

namespace {

using nlohmann::json;

constexpr std::array<std::string_view, kPostTypeCount> kPostTypeNames = {
    "photo", "status", "video", "link"};

std::string location(std::string_view stream, std::size_t line) {
  return std::string(stream) + ":" + std::to_string(line);
}

// Warns once per (stream, field) so a systematically extended input does not
// flood the log.
void warn_unknown_fields(const json& obj, const std::set<std::string_view>& known,
                         std::string_view stream, std::size_t line,
                         std::vector<std::string>* warnings,
                         std::set<std::string>* seen) {
  if (warnings == nullptr) return;
  for (const auto& [key, value] : obj.items()) {
    if (known.contains(key)) continue;
    if (!seen->insert(key).second) continue;
    warnings->push_back(location(stream, line) + ": unknown field '" + key +
                        "' ignored");
  }
}

json parse_line(std::string_view stream, std::size_t line, const std::string& text) {
  json obj = json::parse(text, nullptr, false);
  if (obj.is_discarded() || !obj.is_object()) {
    throw ParseError(location(stream, line) + ": not a JSON object");
  }
  return obj;
}

std::string require_string(const json& obj, const char* key, std::string_view stream,
                           std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) {
    throw ParseError(location(stream, line) + ": missing string field '" +
                     key + "'");
  }
  return it->get<std::string>();
}

std::int64_t require_timestamp(const json& obj, std::string_view stream,
                               std::size_t line) {
  auto it = obj.find("timestamp");
  if (it == obj.end() || !it->is_number_integer()) {
    throw ParseError(location(stream, line) + ": missing integer field 'timestamp'");
  }
  return it->get<std::int64_t>();
}

}  // namespace

PostType parse_post_type(std::string_view text) {
  for (std::size_t i = 0; i < kPostTypeNames.size(); ++i) {
    if (text == kPostTypeNames[i]) return static_cast<PostType>(i);
  }
  throw ValidationError("unknown post_type '" + std::string(text) + "'");
}

std::string_view to_string(PostType type) {
  return kPostTypeNames[static_cast<std::size_t>(type)];
}

std::vector<PageRecord> load_pages(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw ParseError("pages:1: empty input, header required");
  ++line_no;
  if (trim(line) != "page_id,name,lat,lon") {
    throw ParseError("pages:1: expected header 'page_id,name,lat,lon'");
  }

  std::vector<PageRecord> pages;
  std::unordered_set<std::string> seen;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view trimmed = trim(line);
    if (trimmed.empty()) continue;
    std::vector<std::string> fields;
    try {
      fields = split_csv_line(trimmed);
    } catch (const ParseError&) {
      throw ParseError(location("pages", line_no) + ": malformed CSV line");
    }
    if (fields.size() != 4) {
      throw ParseError(location("pages", line_no) + ": expected 4 fields, got " +
                       std::to_string(fields.size()));
    }
    PageRecord rec;
    rec.page_id = fields[0];
    rec.name = fields[1];
    if (rec.page_id.empty()) {
      throw ParseError(location("pages", line_no) + ": empty page_id");
    }
    if (!parse_double(trim(fields[2]), rec.latitude) ||
        !parse_double(trim(fields[3]), rec.longitude)) {
      throw ParseError(location("pages", line_no) + ": unparseable coordinate");
    }
    if (rec.latitude < -90.0 || rec.latitude > 90.0) {
      throw ValidationError(location("pages", line_no) + ": latitude " +
                            format_double(rec.latitude) + " outside [-90, 90]");
    }
    if (rec.longitude < -180.0 || rec.longitude > 180.0) {
      throw ValidationError(location("pages", line_no) + ": longitude " +
                            format_double(rec.longitude) + " outside [-180, 180]");
    }
    if (!seen.insert(rec.page_id).second) {
      throw IntegrityError(location("pages", line_no) + ": duplicate page_id '" +
                           rec.page_id + "'");
    }
    pages.push_back(std::move(rec));
  }
  return pages;
}

ActivityDataset load_events(std::vector<PageRecord> pages, std::istream& posts_in,
                            std::istream& likes_in, std::istream& comments_in,
                            std::vector<std::string>* warnings) {
  static const std::set<std::string_view> kPostFields = {
      "post_id", "page_id", "author_user_id", "timestamp",
      "post_type", "object_id", "admin"};
  static const std::set<std::string_view> kEventFields = {"post_id", "user_id",
                                                          "timestamp"};

  std::vector<PostRecord> posts;
  {
    std::set<std::string> seen_fields;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(posts_in, line)) {
      ++line_no;
      if (trim(line).empty()) continue;
      json obj = parse_line("posts", line_no, line);
      warn_unknown_fields(obj, kPostFields, "posts", line_no, warnings, &seen_fields);
      PostRecord rec;
      rec.post_id = require_string(obj, "post_id", "posts", line_no);
      rec.page_id = require_string(obj, "page_id", "posts", line_no);
      rec.author_user_id = require_string(obj, "author_user_id", "posts", line_no);
      rec.timestamp = require_timestamp(obj, "posts", line_no);
      try {
        rec.post_type = parse_post_type(require_string(obj, "post_type", "posts", line_no));
      } catch (const ValidationError& e) {
        throw ValidationError(location("posts", line_no) + ": " + e.what());
      }
      if (auto it = obj.find("object_id"); it != obj.end() && !it->is_null()) {
        if (!it->is_string()) {
          throw ParseError(location("posts", line_no) + ": object_id must be a string");
        }
        rec.object_id = it->get<std::string>();
      }
      if (auto it = obj.find("admin"); it != obj.end() && !it->is_null()) {
        if (!it->is_boolean()) {
          throw ParseError(location("posts", line_no) + ": admin must be a boolean");
        }
        rec.admin = it->get<bool>();
      } else {
        rec.admin = rec.author_user_id == rec.page_id;
      }
      posts.push_back(std::move(rec));
    }
  }

  auto load_event_stream = [&](std::istream& in, std::string_view stream) {
    std::vector<LikeRecord> records;
    std::set<std::string> seen_fields;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (trim(line).empty()) continue;
      json obj = parse_line(stream, line_no, line);
      warn_unknown_fields(obj, kEventFields, stream, line_no, warnings, &seen_fields);
      LikeRecord rec;
      rec.post_id = require_string(obj, "post_id", stream, line_no);
      rec.user_id = require_string(obj, "user_id", stream, line_no);
      rec.timestamp = require_timestamp(obj, stream, line_no);
      records.push_back(std::move(rec));
    }
    return records;
  };

  std::vector<LikeRecord> likes = load_event_stream(likes_in, "likes");
  std::vector<CommentRecord> comments;
  for (auto& rec : load_event_stream(comments_in, "comments")) {
    comments.push_back(CommentRecord{std::move(rec.post_id), std::move(rec.user_id),
                                     rec.timestamp});
  }

  return ActivityDataset::from_records(std::move(pages), std::move(posts),
                                       std::move(likes), std::move(comments));
}

ActivityDataset ActivityDataset::from_records(std::vector<PageRecord> pages,
                                              std::vector<PostRecord> posts,
                                              std::vector<LikeRecord> likes,
                                              std::vector<CommentRecord> comments) {
  ActivityDataset ds;
  ds.pages_ = std::move(pages);
  ds.posts_ = std::move(posts);
  ds.likes_ = std::move(likes);
  ds.comments_ = std::move(comments);
  ds.build_indexes();
  return ds;
}

void ActivityDataset::build_indexes() {
  page_index_.clear();
  for (std::size_t i = 0; i < pages_.size(); ++i) {
    if (!page_index_.emplace(pages_[i].page_id, i).second) {
      throw IntegrityError("duplicate page_id '" + pages_[i].page_id + "'");
    }
  }

  post_index_.clear();
  posts_by_page_.assign(pages_.size(), {});
  std::vector<std::string> dangling;
  for (std::size_t i = 0; i < posts_.size(); ++i) {
    const PostRecord& p = posts_[i];
    if (!post_index_.emplace(p.post_id, i).second) {
      throw IntegrityError("duplicate post_id '" + p.post_id + "'");
    }
    auto it = page_index_.find(p.page_id);
    if (it == page_index_.end()) {
      dangling.push_back("post '" + p.post_id + "' -> page '" + p.page_id + "'");
    } else {
      posts_by_page_[it->second].push_back(i);
    }
  }

  like_counts_.assign(posts_.size(), 0);
  comment_counts_.assign(posts_.size(), 0);

  // Deduplicate likes per (user, post), keeping the first occurrence.
  std::vector<LikeRecord> deduped;
  deduped.reserve(likes_.size());
  std::set<std::pair<std::string, std::string>> like_pairs;
  for (auto& like : likes_) {
    auto it = post_index_.find(like.post_id);
    if (it == post_index_.end()) {
      dangling.push_back("like by '" + like.user_id + "' -> post '" + like.post_id + "'");
      continue;
    }
    if (!like_pairs.insert({like.user_id, like.post_id}).second) continue;
    deduped.push_back(std::move(like));
  }
  likes_ = std::move(deduped);

  for (const auto& comment : comments_) {
    if (!post_index_.contains(comment.post_id)) {
      dangling.push_back("comment by '" + comment.user_id + "' -> post '" +
                         comment.post_id + "'");
    }
  }
  if (!dangling.empty()) {
    std::string msg = "dangling references:";
    std::size_t shown = std::min<std::size_t>(dangling.size(), 10);
    for (std::size_t i = 0; i < shown; ++i) msg += " [" + dangling[i] + "]";
    if (dangling.size() > shown) {
      msg += " (+" + std::to_string(dangling.size() - shown) + " more)";
    }
    throw IntegrityError(msg);
  }

  users_.clear();
  likers_by_page_.clear();
  std::map<std::string, std::set<std::string>> likers;
  for (const auto& like : likes_) {
    std::size_t post_idx = post_index_.at(like.post_id);
    ++like_counts_[post_idx];
    const std::string& page_id = posts_[post_idx].page_id;
    UserActivity& ua = users_[like.user_id];
    ++ua.likes_by_page[page_id];
    ++ua.total_likes;
    likers[page_id].insert(like.user_id);
  }
  for (const auto& comment : comments_) {
    ++comment_counts_[post_index_.at(comment.post_id)];
    ++users_[comment.user_id].total_comments;
  }
  for (auto& [page_id, users] : likers) {
    likers_by_page_[page_id] = std::vector<std::string>(users.begin(), users.end());
  }
}

bool ActivityDataset::has_page(std::string_view page_id) const {
  return page_index_.contains(std::string(page_id));
}

const PageRecord& ActivityDataset::page(std::string_view page_id) const {
  return pages_[page_index(page_id)];
}

const PostRecord& ActivityDataset::post(std::string_view post_id) const {
  return posts_[post_index(post_id)];
}

std::size_t ActivityDataset::page_index(std::string_view page_id) const {
  auto it = page_index_.find(std::string(page_id));
  if (it == page_index_.end()) {
    throw LookupError("unknown page '" + std::string(page_id) + "'");
  }
  return it->second;
}

std::size_t ActivityDataset::post_index(std::string_view post_id) const {
  auto it = post_index_.find(std::string(post_id));
  if (it == post_index_.end()) {
    throw LookupError("unknown post '" + std::string(post_id) + "'");
  }
  return it->second;
}

std::span<const std::size_t> ActivityDataset::posts_of_page(std::size_t page_idx) const {
  return posts_by_page_.at(page_idx);
}

std::int64_t ActivityDataset::like_count(std::size_t post_idx) const {
  return like_counts_.at(post_idx);
}

std::int64_t ActivityDataset::comment_count(std::size_t post_idx) const {
  return comment_counts_.at(post_idx);
}

std::optional<double> ValidationReport::object_id_coverage() const {
  if (post_count == 0) return std::nullopt;
  return static_cast<double>(posts_with_object_id) / static_cast<double>(post_count);
}

std::optional<double> ValidationReport::admin_post_share() const {
  if (post_count == 0) return std::nullopt;
  return static_cast<double>(admin_posts) / static_cast<double>(post_count);
}

ValidationReport validate(const ActivityDataset& dataset) {
  ValidationReport report;
  report.page_count = static_cast<std::int64_t>(dataset.pages().size());
  report.post_count = static_cast<std::int64_t>(dataset.posts().size());
  report.like_count = static_cast<std::int64_t>(dataset.likes().size());
  report.comment_count = static_cast<std::int64_t>(dataset.comments().size());

  std::unordered_set<std::string> page_ids, post_ids;
  for (const auto& page : dataset.pages()) {
    if (!page_ids.insert(page.page_id).second) {
      report.errors.push_back("duplicate page_id '" + page.page_id + "'");
    }
    if (page.latitude < -90.0 || page.latitude > 90.0 || page.longitude < -180.0 ||
        page.longitude > 180.0) {
      report.errors.push_back("page '" + page.page_id + "' has out-of-range coordinates");
    }
  }
  for (const auto& post : dataset.posts()) {
    if (!post_ids.insert(post.post_id).second) {
      report.errors.push_back("duplicate post_id '" + post.post_id + "'");
    }
    if (!page_ids.contains(post.page_id)) {
      report.errors.push_back("post '" + post.post_id + "' references unknown page '" +
                              post.page_id + "'");
    }
    if (post.object_id) ++report.posts_with_object_id;
    if (post.admin) ++report.admin_posts;
  }
  std::set<std::pair<std::string_view, std::string_view>> like_pairs;
  for (const auto& like : dataset.likes()) {
    if (!post_ids.contains(like.post_id)) {
      report.errors.push_back("like references unknown post '" + like.post_id + "'");
    }
    if (!like_pairs.insert({like.user_id, like.post_id}).second) {
      report.errors.push_back("duplicate like (" + like.user_id + ", " + like.post_id + ")");
    }
  }
  for (const auto& comment : dataset.comments()) {
    if (!post_ids.contains(comment.post_id)) {
      report.errors.push_back("comment references unknown post '" + comment.post_id + "'");
    }
  }
  return report;
}

void write_pages(std::ostream& out, std::span<const PageRecord> pages) {
  out << "page_id,name,lat,lon\n";
  for (const auto& page : pages) {
    out << csv_escape(page.page_id) << ',' << csv_escape(page.name) << ','
        << format_double(page.latitude) << ',' << format_double(page.longitude) << '\n';
  }
}

void write_posts(std::ostream& out, std::span<const PostRecord> posts) {
  for (const auto& post : posts) {
    json obj;
    obj["post_id"] = post.post_id;
    obj["page_id"] = post.page_id;
    obj["author_user_id"] = post.author_user_id;
    obj["timestamp"] = post.timestamp;
    obj["post_type"] = std::string(to_string(post.post_type));
    if (post.object_id) obj["object_id"] = *post.object_id;
    obj["admin"] = post.admin;
    out << obj.dump() << '\n';
  }
}

namespace {

template <typename Record>
void write_events(std::ostream& out, std::span<const Record> records) {
  for (const auto& rec : records) {
    json obj;
    obj["post_id"] = rec.post_id;
    obj["user_id"] = rec.user_id;
    obj["timestamp"] = rec.timestamp;
    out << obj.dump() << '\n';
  }
}

}  // namespace

void write_likes(std::ostream& out, std::span<const LikeRecord> likes) {
  write_events(out, likes);
}

void write_comments(std::ostream& out, std::span<const CommentRecord> comments) {
  write_events(out, comments);
}

}  // namespace pagenet
