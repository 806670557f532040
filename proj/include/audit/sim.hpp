#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "audit/model.hpp"
#include "audit/platform.hpp"

namespace audit::sim {

struct RegionSpec {
  std::string code;
  std::vector<double> topic_affinity;  // empty -> generated from the seed
};

struct UniverseConfig {
  int n_topics = 48;
  int n_creators = 600;
  int n_videos = 20000;
  std::pair<int, int> hashtags_per_video = {2, 5};
  double popularity_exponent = 1.1;
  double ad_rate = 0.25;   // about 1 in 4
  double live_rate = 0.05; // about 1 in 20
  std::vector<RegionSpec> regions = {{"US", {}}, {"DE", {}}, {"FR", {}}, {"RO", {}}, {"UA", {}}};
  std::uint64_t seed = 42;
};

struct RecommenderConfig {
  double w_watch = 3.0;
  double w_like = 1.5;
  double w_follow = 2.0;
  double w_location = 1.5;
  double explore_prob = 0.30;
  std::int64_t exploit_onset = 4000;
  int no_repeat_window = 2000;
};

UniverseConfig universe_config_from_json(const nlohmann::json& j);
RecommenderConfig recommender_config_from_json(const nlohmann::json& j);

// Immutable after generation; safe to share across concurrent sessions.
struct ContentUniverse {
  UniverseConfig config;
  std::vector<Video> videos;
  std::vector<int> topic_of;                  // per video
  std::vector<std::vector<double>> affinity;  // region index x topic
  std::unordered_map<std::string, int> region_index;
  std::unordered_map<std::string, std::size_t> video_index;

  // Popularity sampling tables.
  std::vector<double> global_cum;                   // cumulative play_count mass
  std::vector<std::vector<std::size_t>> by_topic;   // topic -> video indices
  std::vector<std::vector<double>> topic_cum;       // matching cumulative mass

  int topic_of_id(const std::string& video_id) const;
};

ContentUniverse generate_universe(const UniverseConfig& config);

class SimPlatform final : public Platform {
 public:
  SimPlatform(const ContentUniverse& universe, RecommenderConfig rec)
      : universe_(universe), rec_(rec) {}

  std::unique_ptr<PlatformSession> open_session(BotState& state,
                                                const std::string& location) override;
  std::size_t capacity() const override { return universe_.videos.size(); }

  const ContentUniverse& universe() const { return universe_; }
  const RecommenderConfig& recommender() const { return rec_; }

 private:
  const ContentUniverse& universe_;
  RecommenderConfig rec_;
};

}  // namespace audit::sim
