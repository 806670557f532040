#include "audit/model.hpp"

#include <cmath>
#include <json.hpp>

namespace audit {

using ordered_json = nlohmann::ordered_json;

std::string to_string(Role r) {
  return r == Role::control ? "control" : "personalised";
}

Role role_from_string(const std::string& s) {
  if (s == "control") return Role::control;
  if (s == "personalised") return Role::personalised;
  throw ValidationError("unknown role: " + s);
}

std::string to_string(Factor f) {
  switch (f) {
    case Factor::none: return "none";
    case Factor::location: return "location";
    case Factor::watch: return "watch";
    case Factor::like: return "like";
    case Factor::follow: return "follow";
  }
  return "none";
}

std::string validate_record(const FeedRecord& r) {
  if (r.video.id.empty()) return "video.id is empty";
  if (!(r.video.duration_s > 0)) return "video.duration_s must be > 0";
  if (r.video.play_count < 0 || r.video.like_count < 0 || r.video.comment_count < 0 ||
      r.video.share_count < 0)
    return "video engagement counts must be >= 0";
  if (r.watched_s < 0) return "watched_s must be >= 0";
  if (r.run_index < 0 || r.position < 0) return "run_index/position must be >= 0";
  const double expect = r.watched_s / r.video.duration_s * 100.0;
  const double scale = std::max(1.0, std::abs(expect));
  if (std::abs(r.watched_pct - expect) > 1e-6 * scale)
    return "watched_pct inconsistent with watched_s/duration_s";
  return {};
}

namespace {

ordered_json video_to_json(const Video& v) {
  ordered_json j;
  j["id"] = v.id;
  j["creator"] = v.creator;
  j["hashtags"] = v.hashtags;
  j["duration_s"] = v.duration_s;
  j["play_count"] = v.play_count;
  j["like_count"] = v.like_count;
  j["comment_count"] = v.comment_count;
  j["share_count"] = v.share_count;
  j["is_ad"] = v.is_ad;
  j["is_live"] = v.is_live;
  j["region"] = v.region;
  return j;
}

Video video_from_json(const ordered_json& j) {
  Video v;
  v.id = j.at("id").get<std::string>();
  v.creator = j.at("creator").get<std::string>();
  v.hashtags = j.at("hashtags").get<std::vector<std::string>>();
  v.duration_s = j.at("duration_s").get<double>();
  v.play_count = j.at("play_count").get<std::int64_t>();
  v.like_count = j.at("like_count").get<std::int64_t>();
  v.comment_count = j.at("comment_count").get<std::int64_t>();
  v.share_count = j.at("share_count").get<std::int64_t>();
  v.is_ad = j.at("is_ad").get<bool>();
  v.is_live = j.at("is_live").get<bool>();
  v.region = j.at("region").get<std::string>();
  return v;
}

const char* const kRecordKeys[] = {"scenario_id", "repetition", "bot_id", "role",
                                   "run_index",   "position",   "video",  "watched_s",
                                   "watched_pct", "liked",      "followed", "ts_ms"};
const char* const kVideoKeys[] = {"id",         "creator",    "hashtags",      "duration_s",
                                  "play_count", "like_count", "comment_count", "share_count",
                                  "is_ad",      "is_live",    "region"};

template <typename Keys>
void collect_unknown_keys(const ordered_json& j, const Keys& known, const std::string& prefix,
                          std::vector<std::string>* warnings) {
  if (!warnings) return;
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool found = false;
    for (const char* k : known)
      if (it.key() == k) { found = true; break; }
    if (!found) warnings->push_back("ignored unknown field: " + prefix + it.key());
  }
}

}  // namespace

std::string serialize_run_log(const std::vector<FeedRecord>& records) {
  std::string out;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const FeedRecord& r = records[i];
    if (std::string err = validate_record(r); !err.empty())
      throw ValidationError("record " + std::to_string(i) + ": " + err);
    ordered_json j;
    j["scenario_id"] = r.scenario_id;
    j["repetition"] = r.repetition;
    j["bot_id"] = r.bot_id;
    j["role"] = to_string(r.role);
    j["run_index"] = r.run_index;
    j["position"] = r.position;
    j["video"] = video_to_json(r.video);
    j["watched_s"] = r.watched_s;
    j["watched_pct"] = r.watched_pct;
    j["liked"] = r.liked;
    j["followed"] = r.followed;
    j["ts_ms"] = r.ts_ms;
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::vector<FeedRecord> parse_run_log(const std::string& stream,
                                      std::vector<std::string>* warnings) {
  std::vector<FeedRecord> records;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < stream.size()) {
    std::size_t nl = stream.find('\n', pos);
    std::string line = stream.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos);
    pos = nl == std::string::npos ? stream.size() : nl + 1;
    ++line_no;
    if (line.empty()) continue;
    ordered_json j = ordered_json::parse(line, nullptr, false);
    if (j.is_discarded()) throw ParseError(line_no, "malformed record");
    FeedRecord r;
    try {
      r.scenario_id = j.at("scenario_id").get<std::string>();
      r.repetition = j.at("repetition").get<int>();
      r.bot_id = j.at("bot_id").get<std::string>();
      r.role = role_from_string(j.at("role").get<std::string>());
      r.run_index = j.at("run_index").get<int>();
      r.position = j.at("position").get<int>();
      r.video = video_from_json(j.at("video"));
      r.watched_s = j.at("watched_s").get<double>();
      r.watched_pct = j.at("watched_pct").get<double>();
      r.liked = j.at("liked").get<bool>();
      r.followed = j.at("followed").get<bool>();
      r.ts_ms = j.at("ts_ms").get<std::int64_t>();
      collect_unknown_keys(j, kRecordKeys, "", warnings);
      collect_unknown_keys(j.at("video"), kVideoKeys, "video.", warnings);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(line_no, e.what());
    } catch (const ValidationError& e) {
      throw ParseError(line_no, e.what());
    }
    if (std::string err = validate_record(r); !err.empty())
      throw ParseError(line_no, err);
    records.push_back(std::move(r));
  }
  return records;
}

std::string serialize_bot_state(const BotState& s) {
  ordered_json j;
  j["bot_id"] = s.bot_id;
  j["seed"] = s.seed;
  j["rng_cursor"] = s.rng_cursor;
  ordered_json watch = ordered_json::array();
  for (const auto& [topic, w] : s.watch_tally) watch.push_back({topic, w});
  j["watch_tally"] = std::move(watch);
  ordered_json like = ordered_json::array();
  for (const auto& [topic, w] : s.like_tally) like.push_back({topic, w});
  j["like_tally"] = std::move(like);
  ordered_json served = ordered_json::array();
  for (const auto& [topic, n] : s.served_topics) served.push_back({topic, n});
  j["served_topics"] = std::move(served);
  j["followed_creators"] = std::vector<std::string>(s.followed_creators.begin(),
                                                    s.followed_creators.end());
  j["liked_videos"] = std::vector<std::string>(s.liked_videos.begin(), s.liked_videos.end());
  j["recent_videos"] = s.recent_videos;
  j["served_total"] = s.served_total;
  j["interactions"] = s.interactions;
  j["epoch"] = s.epoch;
  j["session_token"] = s.session_token;
  return j.dump() + "\n";
}

BotState parse_bot_state(const std::string& text) {
  ordered_json j = ordered_json::parse(text);
  BotState s;
  s.bot_id = j.at("bot_id").get<std::string>();
  s.seed = j.at("seed").get<std::uint64_t>();
  s.rng_cursor = j.at("rng_cursor").get<std::uint64_t>();
  for (const auto& e : j.at("watch_tally")) s.watch_tally[e.at(0).get<int>()] = e.at(1).get<double>();
  for (const auto& e : j.at("like_tally")) s.like_tally[e.at(0).get<int>()] = e.at(1).get<double>();
  for (const auto& e : j.at("served_topics"))
    s.served_topics[e.at(0).get<int>()] = e.at(1).get<std::int64_t>();
  for (const auto& c : j.at("followed_creators")) s.followed_creators.insert(c.get<std::string>());
  for (const auto& c : j.at("liked_videos")) s.liked_videos.insert(c.get<std::string>());
  s.recent_videos = j.at("recent_videos").get<std::vector<std::string>>();
  s.served_total = j.at("served_total").get<std::int64_t>();
  s.interactions = j.at("interactions").get<std::int64_t>();
  s.epoch = j.at("epoch").get<int>();
  s.session_token = j.at("session_token").get<std::string>();
  return s;
}

}  // namespace audit
