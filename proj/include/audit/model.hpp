#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace audit {

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line(line) {}
  std::size_t line;
};

struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SequencingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One recommended item, snapshotted at serve time. Hashtags are stored
// verbatim; canonicalization happens only in the metrics layer.
struct Video {
  std::string id;
  std::string creator;
  std::vector<std::string> hashtags;
  double duration_s = 0.0;
  std::int64_t play_count = 0;
  std::int64_t like_count = 0;
  std::int64_t comment_count = 0;
  std::int64_t share_count = 0;
  bool is_ad = false;
  bool is_live = false;
  std::string region;

  bool operator==(const Video&) const = default;
};

enum class Role { control, personalised };

std::string to_string(Role r);
Role role_from_string(const std::string& s);

struct WatchPolicy {
  double base_pct = 100.0;
  double boost_pct = 100.0;
  int random_boost_count = 0;  // per run; 0 when boosts are interest-driven
  double cap_s = 120.0;

  bool operator==(const WatchPolicy&) const = default;
};

enum class LikePolicyKind { none, random_k, hashtag_match, creator_match };
enum class FollowPolicyKind { none, random_k };

struct LikePolicy {
  LikePolicyKind kind = LikePolicyKind::none;
  int k = 0;  // random_k only

  bool operator==(const LikePolicy&) const = default;
};

struct FollowPolicy {
  FollowPolicyKind kind = FollowPolicyKind::none;
  int k = 0;

  bool operator==(const FollowPolicy&) const = default;
};

struct BotProfile {
  std::string bot_id;
  Role role = Role::control;
  std::string location = "US";
  std::vector<std::string> interest_hashtags;  // canonical form
  std::vector<std::string> interest_creators;
  WatchPolicy watch_policy;
  LikePolicy like_policy;
  FollowPolicy follow_policy;

  bool operator==(const BotProfile&) const = default;
};

enum class Factor { none, location, watch, like, follow };

std::string to_string(Factor f);

struct ScenarioSpec {
  std::string scenario_id;  // "S0".."S16"
  Factor factor = Factor::none;
  int runs = 4;
  int videos_per_run = 250;
  BotProfile control;
  BotProfile personalised;
  int repetitions = 1;
};

// One (bot, run, position) observation; the atomic unit of all analysis.
struct FeedRecord {
  std::string scenario_id;
  int repetition = 0;
  std::string bot_id;
  Role role = Role::control;
  int run_index = 0;
  int position = 0;
  Video video;
  double watched_s = 0.0;
  double watched_pct = 0.0;
  bool liked = false;
  bool followed = false;
  std::int64_t ts_ms = 0;

  bool operator==(const FeedRecord&) const = default;
};

// Everything the platform may consume about a bot's past, plus the position
// of its private random stream. State after run k fully determines run k+1.
struct BotState {
  std::string bot_id;
  std::uint64_t seed = 0;
  std::uint64_t rng_cursor = 0;
  std::map<int, double> watch_tally;        // topic -> accumulated watch ratio
  std::map<int, double> like_tally;         // topic -> accumulated like weight
  std::map<int, std::int64_t> served_topics;
  std::set<std::string> followed_creators;
  std::set<std::string> liked_videos;
  std::vector<std::string> recent_videos;  // most recent last; bounds repeat checks
  std::int64_t served_total = 0;
  std::int64_t interactions = 0;
  int epoch = 0;
  std::string session_token;

  bool operator==(const BotState&) const = default;
};

// Per-record invariant check; returns a description of the first violation,
// empty string if the record is valid.
std::string validate_record(const FeedRecord& r);

// Newline-delimited records, deterministic field order; round-trips losslessly.
std::string serialize_run_log(const std::vector<FeedRecord>& records);

// Inverse of serialize_run_log. Unknown extra fields are ignored; their names
// are reported through `warnings` when non-null.
std::vector<FeedRecord> parse_run_log(const std::string& stream,
                                      std::vector<std::string>* warnings = nullptr);

std::string serialize_bot_state(const BotState& s);
BotState parse_bot_state(const std::string& text);

}  // namespace audit
