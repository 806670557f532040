#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "audit/interests.hpp"
#include "audit/model.hpp"
#include "audit/platform.hpp"
#include "audit/rng.hpp"

namespace audit::engine {

// Per-run decision state for one bot. Random-k policies are resolved online
// with sequential sampling so selection is uniform without pre-reading the
// feed (exactly k picks whenever the run is long enough).
struct RunPlan {
  RunPlan(std::uint64_t seed, int videos_per_run, const BotProfile& profile,
          const std::set<std::string>& already_followed);

  Rng rng;
  InterestSpec interests;
  int watch_budget = 0;
  int watch_positions_left = 0;
  int like_budget = 0;
  int like_positions_left = 0;
  int follow_budget = 0;
  int follow_positions_left = 0;
  const std::set<std::string>* followed = nullptr;  // bot state, read-only
  std::set<std::string> newly_followed;
};

struct Actions {
  bool liked = false;
  bool followed = false;
};

struct RunSummary {
  std::string scenario_id;
  int repetition = 0;
  std::string bot_id;
  int run_index = 0;
  int ads_skipped = 0;
  int lives_skipped = 0;
  int watch_boost_shortfall = 0;
  int like_shortfall = 0;
  int follow_shortfall = 0;
};

struct ScenarioResult {
  std::vector<FeedRecord> records;
  std::vector<RunSummary> summaries;
};

// Known scenario ids, "S0".."S16".
const std::vector<std::string>& scenario_ids();

// Scenario catalog; throws ValidationError listing valid ids on unknown id.
ScenarioSpec build_scenario(const std::string& scenario_id);

// Watch percentage for one organic video.
double decide_watch(const Video& video, const BotProfile& profile, RunPlan& plan);

// Seconds actually watched: full loops plus remainder, the cap applies to
// each playback loop separately.
double watch_seconds(const Video& video, double watched_pct, double cap_s);

Actions decide_actions(const Video& video, const BotProfile& profile, RunPlan& plan);

// Drives both bots of the spec through all runs and repetitions against the
// platform. Deterministic given master_seed.
ScenarioResult execute_scenario(const ScenarioSpec& spec, Platform& platform,
                                std::uint64_t master_seed);

}  // namespace audit::engine
