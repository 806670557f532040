#include "audit/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <tuple>

namespace audit {

const std::vector<std::string>& default_interest_hashtags() {
  static const std::vector<std::string> tags = {
      "movie",    "film",          "marvel",        "foodtiktok", "tiktokfood", "foodie",
      "cooking",  "food",          "gaming",        "gta6",       "gta",        "minecraft",
      "roblox",   "cat",           "dog",           "pet",        "dogsoftiktok",
      "catsoftiktok", "cute",      "puppy",         "dogs",       "cats",       "animals",
      "petsoftiktok", "kitten",    "comedy",        "lol",        "humour",     "laugh",
      "fun",      "jokes",         "love",          "couple",     "relationships"};
  return tags;
}

}  // namespace audit

namespace audit::engine {

namespace {

constexpr double kSkipWatchS = 3.0;  // ads and livestreams
constexpr std::int64_t kEpochBaseMs = 1735689600000;  // 2025-01-01T00:00:00Z

std::vector<std::string> default_top_creators() {
  std::vector<std::string> out;
  out.reserve(30);
  for (int i = 0; i < 30; ++i) {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "c%03d", i);
    out.emplace_back(buf);
  }
  return out;
}

BotProfile make_profile(const std::string& scenario_id, Role role) {
  BotProfile p;
  p.bot_id = scenario_id + "-" + to_string(role);
  p.role = role;
  p.location = "US";
  return p;
}

}  // namespace

const std::vector<std::string>& scenario_ids() {
  static const std::vector<std::string> ids = {"S0", "S1", "S2",  "S3",  "S4",  "S5",
                                               "S6", "S7", "S8",  "S9",  "S10", "S11",
                                               "S12", "S13", "S14", "S15", "S16"};
  return ids;
}

ScenarioSpec build_scenario(const std::string& scenario_id) {
  const auto& ids = scenario_ids();
  if (std::find(ids.begin(), ids.end(), scenario_id) == ids.end()) {
    std::string valid;
    for (const auto& id : ids) valid += (valid.empty() ? "" : ", ") + id;
    throw ValidationError("unknown scenario id '" + scenario_id + "' (valid: " + valid + ")");
  }

  ScenarioSpec spec;
  spec.scenario_id = scenario_id;
  spec.control = make_profile(scenario_id, Role::control);
  spec.personalised = make_profile(scenario_id, Role::personalised);
  BotProfile& c = spec.control;
  BotProfile& p = spec.personalised;

  auto watch = [](BotProfile& b, double base, double boost, int random_count) {
    b.watch_policy.base_pct = base;
    b.watch_policy.boost_pct = boost;
    b.watch_policy.random_boost_count = random_count;
  };
  auto hashtag_interests = [&](BotProfile& b) {
    for (const auto& t : default_interest_hashtags()) b.interest_hashtags.push_back(t);
  };

  if (scenario_id == "S0") {
    spec.factor = Factor::none;
    spec.repetitions = 2;  // two independent control/personalised pairs
  } else if (scenario_id == "S1" || scenario_id == "S2" || scenario_id == "S3" ||
             scenario_id == "S4") {
    spec.factor = Factor::location;
    p.location = scenario_id == "S1"   ? "DE"
                 : scenario_id == "S2" ? "FR"
                 : scenario_id == "S3" ? "RO"
                                       : "UA";
  } else if (scenario_id == "S5" || scenario_id == "S6" || scenario_id == "S7") {
    spec.factor = Factor::watch;
    const double boost = scenario_id == "S5" ? 50 : scenario_id == "S6" ? 75 : 100;
    watch(c, 25, 25, 0);
    watch(p, 25, boost, 25);
  } else if (scenario_id == "S8") {
    spec.factor = Factor::watch;
    watch(p, 100, 200, 25);
  } else if (scenario_id == "S9" || scenario_id == "S10" || scenario_id == "S11") {
    spec.factor = Factor::watch;
    hashtag_interests(p);
    if (scenario_id == "S9") {
      watch(c, 25, 25, 0);
      watch(p, 25, 50, 0);
    } else {
      watch(p, 100, scenario_id == "S10" ? 200 : 400, 0);
      spec.repetitions = 2;
    }
  } else if (scenario_id == "S12") {
    spec.factor = Factor::like;
    p.like_policy = {LikePolicyKind::random_k, 10};
  } else if (scenario_id == "S13") {
    spec.factor = Factor::like;
    hashtag_interests(p);
    p.like_policy = {LikePolicyKind::hashtag_match, 0};
    spec.repetitions = 2;
  } else if (scenario_id == "S14") {
    spec.factor = Factor::like;
    p.interest_creators = default_top_creators();
    p.like_policy = {LikePolicyKind::creator_match, 0};
    spec.repetitions = 2;
  } else if (scenario_id == "S15" || scenario_id == "S16") {
    spec.factor = Factor::follow;
    p.follow_policy = {FollowPolicyKind::random_k, scenario_id == "S15" ? 5 : 10};
  }
  return spec;
}

RunPlan::RunPlan(std::uint64_t seed, int videos_per_run, const BotProfile& profile,
                 const std::set<std::string>& already_followed)
    : rng(seed), followed(&already_followed) {
  interests = InterestSpec::from_raw(profile.interest_hashtags, profile.interest_creators);
  watch_budget = profile.watch_policy.random_boost_count;
  watch_positions_left = videos_per_run;
  if (profile.like_policy.kind == LikePolicyKind::random_k) like_budget = profile.like_policy.k;
  like_positions_left = videos_per_run;
  if (profile.follow_policy.kind == FollowPolicyKind::random_k)
    follow_budget = profile.follow_policy.k;
  follow_positions_left = videos_per_run;
}

double decide_watch(const Video& video, const BotProfile& profile, RunPlan& plan) {
  const WatchPolicy& wp = profile.watch_policy;
  if (wp.random_boost_count > 0) {
    // Sequential sampling: uniform without knowing the feed in advance.
    bool selected = false;
    if (plan.watch_budget > 0 && plan.watch_positions_left > 0) {
      selected = plan.rng.next_double() * plan.watch_positions_left < plan.watch_budget;
      if (selected) plan.watch_budget -= 1;
    }
    plan.watch_positions_left -= 1;
    return selected ? wp.boost_pct : wp.base_pct;
  }
  plan.watch_positions_left -= 1;
  if (wp.boost_pct != wp.base_pct && !plan.interests.empty() &&
      matches_interest(video, plan.interests))
    return wp.boost_pct;
  return wp.base_pct;
}

double watch_seconds(const Video& video, double watched_pct, double cap_s) {
  const double loops = std::floor(watched_pct / 100.0);
  const double frac = watched_pct / 100.0 - loops;
  return loops * std::min(video.duration_s, cap_s) + std::min(video.duration_s * frac, cap_s);
}

Actions decide_actions(const Video& video, const BotProfile& profile, RunPlan& plan) {
  Actions a;
  switch (profile.like_policy.kind) {
    case LikePolicyKind::none:
      break;
    case LikePolicyKind::random_k:
      if (plan.like_budget > 0 && plan.like_positions_left > 0 &&
          plan.rng.next_double() * plan.like_positions_left < plan.like_budget) {
        a.liked = true;
        plan.like_budget -= 1;
      }
      break;
    case LikePolicyKind::hashtag_match:
      a.liked = matches_interest(video, plan.interests);
      break;
    case LikePolicyKind::creator_match:
      a.liked = std::find(plan.interests.creators.begin(), plan.interests.creators.end(),
                          video.creator) != plan.interests.creators.end();
      break;
  }
  plan.like_positions_left -= 1;

  if (profile.follow_policy.kind == FollowPolicyKind::random_k && plan.follow_budget > 0 &&
      plan.follow_positions_left > 0 && !plan.followed->count(video.creator) &&
      !plan.newly_followed.count(video.creator)) {
    if (plan.rng.next_double() * plan.follow_positions_left < plan.follow_budget) {
      a.followed = true;
      plan.follow_budget -= 1;
      plan.newly_followed.insert(video.creator);
    }
  }
  plan.follow_positions_left -= 1;
  return a;
}

namespace {

void run_bot(const ScenarioSpec& spec, const BotProfile& profile, int repetition,
             Platform& platform, std::uint64_t master_seed, ScenarioResult& out) {
  const std::string bot_id = profile.bot_id + "-r" + std::to_string(repetition);
  BotState state;
  state.bot_id = bot_id;
  state.seed = mix_seed(mix_seed(master_seed, bot_id), "platform");

  for (int run = 0; run < spec.runs; ++run) {
    auto session = platform.open_session(state, profile.location);
    RunPlan plan(mix_seed(mix_seed(master_seed, bot_id), static_cast<std::uint64_t>(run)),
                 spec.videos_per_run, profile, state.followed_creators);
    RunSummary summary;
    summary.scenario_id = spec.scenario_id;
    summary.repetition = repetition;
    summary.bot_id = bot_id;
    summary.run_index = run;

    int organic = 0;
    long serves = 0;
    const long serve_guard = static_cast<long>(spec.videos_per_run) * 20 + 100;
    while (organic < spec.videos_per_run) {
      if (++serves > serve_guard)
        throw CapacityError("too few organic videos available (scenario " + spec.scenario_id +
                            ")");
      Video v = session->next_video();
      if (v.is_ad || v.is_live) {
        // Non-organic items get the skip treatment and never consume budgets.
        session->register_feedback(v, std::min(v.duration_s, kSkipWatchS), false, false);
        (v.is_ad ? summary.ads_skipped : summary.lives_skipped) += 1;
        continue;
      }
      const double pct = decide_watch(v, profile, plan);
      const double ws = watch_seconds(v, pct, profile.watch_policy.cap_s);
      const Actions actions = decide_actions(v, profile, plan);
      session->register_feedback(v, ws, actions.liked, actions.followed);

      FeedRecord r;
      r.scenario_id = spec.scenario_id;
      r.repetition = repetition;
      r.bot_id = bot_id;
      r.role = profile.role;
      r.run_index = run;
      r.position = organic;
      r.video = std::move(v);
      r.watched_s = ws;
      r.watched_pct = ws / r.video.duration_s * 100.0;
      r.liked = actions.liked;
      r.followed = actions.followed;
      r.ts_ms = kEpochBaseMs + static_cast<std::int64_t>(repetition) * 864000000 +
                static_cast<std::int64_t>(run) * 86400000 + static_cast<std::int64_t>(organic) * 30000;
      out.records.push_back(std::move(r));
      ++organic;
    }
    session->close();
    summary.watch_boost_shortfall = plan.watch_budget;
    summary.like_shortfall = plan.like_budget;
    summary.follow_shortfall = plan.follow_budget;
    out.summaries.push_back(std::move(summary));
  }
}

}  // namespace

ScenarioResult execute_scenario(const ScenarioSpec& spec, Platform& platform,
                                std::uint64_t master_seed) {
  if (spec.runs < 1 || spec.videos_per_run < 1)
    throw ValidationError("runs and videos_per_run must be >= 1");
  if (platform.capacity() < static_cast<std::size_t>(spec.videos_per_run))
    throw CapacityError("platform capacity below videos_per_run");

  ScenarioResult out;
  for (int rep = 1; rep <= spec.repetitions; ++rep) {
    run_bot(spec, spec.control, rep, platform, master_seed, out);
    run_bot(spec, spec.personalised, rep, platform, master_seed, out);
  }
  std::stable_sort(out.records.begin(), out.records.end(),
                   [](const FeedRecord& a, const FeedRecord& b) {
                     return std::tie(a.repetition, a.bot_id, a.run_index, a.position) <
                            std::tie(b.repetition, b.bot_id, b.run_index, b.position);
                   });
  return out;
}

}  // namespace audit::engine
