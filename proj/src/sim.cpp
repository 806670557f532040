#include "audit/sim.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <optional>

#include "audit/interests.hpp"
#include "audit/rng.hpp"

namespace audit::sim {

namespace {

const std::vector<std::string> kGenericTags = {"fyp", "foryou", "foryoupage", "viral", "trending"};

std::string fmt_id(const char* prefix, int width, std::size_t n) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%0*zu", prefix, width, n);
  return buf;
}

void validate(const UniverseConfig& c) {
  if (c.n_topics < 1 || c.n_creators < 1 || c.n_videos < 1)
    throw ValidationError("universe sizes must be positive");
  if (c.ad_rate < 0 || c.ad_rate > 1 || c.live_rate < 0 || c.live_rate > 1 ||
      c.ad_rate + c.live_rate > 1)
    throw ValidationError("ad_rate/live_rate must be probabilities with sum <= 1");
  if (!(c.popularity_exponent > 0)) throw ValidationError("popularity_exponent must be > 0");
  if (c.hashtags_per_video.first < 1 || c.hashtags_per_video.second < c.hashtags_per_video.first)
    throw ValidationError("hashtags_per_video range is invalid");
  if (c.regions.empty()) throw ValidationError("at least one region is required");
}

}  // namespace

UniverseConfig universe_config_from_json(const nlohmann::json& j) {
  UniverseConfig c;
  if (j.contains("n_topics")) c.n_topics = j.at("n_topics").get<int>();
  if (j.contains("n_creators")) c.n_creators = j.at("n_creators").get<int>();
  if (j.contains("n_videos")) c.n_videos = j.at("n_videos").get<int>();
  if (j.contains("hashtags_per_video")) {
    auto r = j.at("hashtags_per_video");
    c.hashtags_per_video = {r.at(0).get<int>(), r.at(1).get<int>()};
  }
  if (j.contains("popularity_exponent"))
    c.popularity_exponent = j.at("popularity_exponent").get<double>();
  if (j.contains("ad_rate")) c.ad_rate = j.at("ad_rate").get<double>();
  if (j.contains("live_rate")) c.live_rate = j.at("live_rate").get<double>();
  if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("regions")) {
    c.regions.clear();
    for (const auto& r : j.at("regions")) {
      if (r.is_string()) {
        c.regions.push_back({r.get<std::string>(), {}});
      } else {
        RegionSpec spec;
        spec.code = r.at("code").get<std::string>();
        if (r.contains("affinity")) spec.topic_affinity = r.at("affinity").get<std::vector<double>>();
        c.regions.push_back(std::move(spec));
      }
    }
  }
  return c;
}

RecommenderConfig recommender_config_from_json(const nlohmann::json& j) {
  RecommenderConfig c;
  if (j.contains("w_watch")) c.w_watch = j.at("w_watch").get<double>();
  if (j.contains("w_like")) c.w_like = j.at("w_like").get<double>();
  if (j.contains("w_follow")) c.w_follow = j.at("w_follow").get<double>();
  if (j.contains("w_location")) c.w_location = j.at("w_location").get<double>();
  if (j.contains("explore_prob")) c.explore_prob = j.at("explore_prob").get<double>();
  if (j.contains("exploit_onset")) c.exploit_onset = j.at("exploit_onset").get<std::int64_t>();
  if (j.contains("no_repeat_window")) c.no_repeat_window = j.at("no_repeat_window").get<int>();
  if (c.explore_prob < 0 || c.explore_prob > 1)
    throw ValidationError("explore_prob must be in [0,1]");
  if (!(std::isfinite(c.w_watch) && std::isfinite(c.w_like) && std::isfinite(c.w_follow) &&
        std::isfinite(c.w_location)))
    throw ValidationError("recommender weights must be finite");
  return c;
}

int ContentUniverse::topic_of_id(const std::string& video_id) const {
  auto it = video_index.find(video_id);
  if (it == video_index.end()) throw ValidationError("unknown video id: " + video_id);
  return topic_of[it->second];
}

ContentUniverse generate_universe(const UniverseConfig& config) {
  validate(config);
  ContentUniverse u;
  u.config = config;
  Rng rng(mix_seed(config.seed, "universe"));

  const int n_regions = static_cast<int>(config.regions.size());
  u.affinity.resize(n_regions);
  for (int r = 0; r < n_regions; ++r) {
    u.region_index[config.regions[r].code] = r;
    if (!config.regions[r].topic_affinity.empty()) {
      if (static_cast<int>(config.regions[r].topic_affinity.size()) != config.n_topics)
        throw ValidationError("region affinity vector length must equal n_topics");
      u.affinity[r] = config.regions[r].topic_affinity;
    } else {
      // Block structure: each region prefers an interleaved slice of topics.
      u.affinity[r].assign(config.n_topics, 0.0);
      for (int t = 0; t < config.n_topics; ++t)
        if (t % n_regions == r) u.affinity[r][t] = 1.0;
    }
  }

  // Topic vocabularies: one themed tag (drawn from the stock interest list)
  // plus synthetic filler tags.
  const auto& themes = default_interest_hashtags();
  std::vector<std::vector<std::string>> vocab(config.n_topics);
  for (int t = 0; t < config.n_topics; ++t) {
    if (t < static_cast<int>(themes.size())) vocab[t].push_back(themes[t]);
    for (int j = 0; j < 5; ++j)
      vocab[t].push_back("t" + std::to_string(t) + "w" + std::to_string(j));
  }

  std::vector<std::vector<std::string>> topic_creators(config.n_topics);
  for (int i = 0; i < config.n_creators; ++i)
    topic_creators[i % config.n_topics].push_back(fmt_id("c", 3, static_cast<std::size_t>(i)));

  u.videos.reserve(config.n_videos);
  u.topic_of.reserve(config.n_videos);
  u.by_topic.resize(config.n_topics);
  u.topic_cum.resize(config.n_topics);
  u.global_cum.reserve(config.n_videos);
  double global_mass = 0.0;
  std::vector<double> topic_mass(config.n_topics, 0.0);

  for (int i = 0; i < config.n_videos; ++i) {
    Video v;
    v.id = fmt_id("v", 5, static_cast<std::size_t>(i));
    const int topic = static_cast<int>(rng.next_below(config.n_topics));
    const auto& creators = topic_creators[topic];
    v.creator = creators.empty() ? fmt_id("c", 3, 0) : creators[rng.next_below(creators.size())];
    v.duration_s = 5.0 + 55.0 * rng.next_double();
    const double up = std::max(rng.next_double(), 1e-12);
    v.play_count = static_cast<std::int64_t>(
        std::min(5e8, 50.0 * std::pow(up, -1.0 / config.popularity_exponent)));
    v.like_count = static_cast<std::int64_t>(v.play_count * (0.01 + 0.09 * rng.next_double()));
    v.comment_count = static_cast<std::int64_t>(v.like_count * 0.1 * rng.next_double());
    v.share_count = static_cast<std::int64_t>(v.like_count * 0.2 * rng.next_double());

    const auto& voc = vocab[topic];
    int want = config.hashtags_per_video.first +
               static_cast<int>(rng.next_below(
                   config.hashtags_per_video.second - config.hashtags_per_video.first + 1));
    want = std::min<int>(want, static_cast<int>(voc.size()));
    std::vector<std::size_t> order(voc.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    for (int k = 0; k < want; ++k) {
      std::size_t pick = k + rng.next_below(order.size() - k);
      std::swap(order[k], order[pick]);
      std::string tag = voc[order[k]];
      if (rng.next_bernoulli(0.15) && !tag.empty())
        tag[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(tag[0])));
      v.hashtags.push_back(std::move(tag));
    }
    if (rng.next_bernoulli(0.3))
      v.hashtags.push_back(kGenericTags[rng.next_below(kGenericTags.size())]);

    const double kind = rng.next_double();
    if (kind < config.ad_rate) v.is_ad = true;
    else if (kind < config.ad_rate + config.live_rate) v.is_live = true;
    v.region = config.regions[rng.next_below(config.regions.size())].code;

    const double mass = static_cast<double>(v.play_count) + 1.0;
    global_mass += mass;
    u.global_cum.push_back(global_mass);
    topic_mass[topic] += mass;
    u.by_topic[topic].push_back(static_cast<std::size_t>(i));
    u.topic_cum[topic].push_back(topic_mass[topic]);
    u.video_index[v.id] = static_cast<std::size_t>(i);
    u.topic_of.push_back(topic);
    u.videos.push_back(std::move(v));
  }
  return u;
}

namespace {

class SimSession final : public PlatformSession {
 public:
  SimSession(const ContentUniverse& universe, const RecommenderConfig& rec, BotState& state,
             std::string location)
      : u_(universe), rec_(rec), state_(state), location_(std::move(location)),
        rng_(state.seed, state.rng_cursor) {
    auto it = u_.region_index.find(location_);
    loc_idx_ = it == u_.region_index.end() ? -1 : it->second;
    const std::int64_t base = state_.served_total - static_cast<std::int64_t>(state_.recent_videos.size());
    for (std::size_t i = 0; i < state_.recent_videos.size(); ++i)
      last_pos_[state_.recent_videos[i]] = base + static_cast<std::int64_t>(i) + 1;
  }

  Video next_video() override {
    const std::size_t idx = pick_index();
    const Video& v = u_.videos[idx];
    state_.served_total += 1;
    last_pos_[v.id] = state_.served_total;
    state_.recent_videos.push_back(v.id);
    const std::size_t keep = static_cast<std::size_t>(rec_.no_repeat_window) + 1024;
    if (state_.recent_videos.size() > 2 * keep)
      state_.recent_videos.erase(state_.recent_videos.begin(),
                                 state_.recent_videos.end() - static_cast<std::ptrdiff_t>(keep));
    state_.served_topics[u_.topic_of[idx]] += 1;
    current_ = v.id;
    state_.rng_cursor = rng_.cursor();
    return v;
  }

  void register_feedback(const Video& video, double watched_s, bool liked,
                         bool followed) override {
    if (!current_ || *current_ != video.id)
      throw SequencingError("feedback does not reference the current video");
    current_.reset();
    const int topic = u_.topic_of_id(video.id);
    const double ratio = watched_s / video.duration_s;
    if (ratio > 0) state_.watch_tally[topic] += ratio;
    if (liked) {
      state_.like_tally[topic] += 1.0;
      state_.liked_videos.insert(video.id);
    }
    if (followed) state_.followed_creators.insert(video.creator);
    state_.interactions += 1;
  }

  void close() override {
    state_.epoch += 1;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "epoch-%d-%016llx", state_.epoch,
                  static_cast<unsigned long long>(mix_seed(state_.seed, static_cast<std::uint64_t>(state_.epoch))));
    state_.session_token = buf;
    const std::size_t keep = static_cast<std::size_t>(rec_.no_repeat_window) + 64;
    if (state_.recent_videos.size() > keep)
      state_.recent_videos.erase(state_.recent_videos.begin(),
                                 state_.recent_videos.end() - static_cast<std::ptrdiff_t>(keep));
    state_.rng_cursor = rng_.cursor();
    current_.reset();
  }

 private:
  bool eligible(std::size_t idx) const {
    auto it = last_pos_.find(u_.videos[idx].id);
    if (it == last_pos_.end()) return true;
    return state_.served_total + 1 - it->second > rec_.no_repeat_window;
  }

  double effective_explore() const {
    const double floor = std::min(0.05, rec_.explore_prob);
    if (state_.interactions < rec_.exploit_onset) return rec_.explore_prob;
    const double half = std::max<double>(1.0, static_cast<double>(rec_.exploit_onset) / 2.0);
    const double age = static_cast<double>(state_.interactions - rec_.exploit_onset);
    return floor + (rec_.explore_prob - floor) * std::exp(-age / half);
  }

  static std::size_t cum_pick(const std::vector<double>& cum, double un) {
    const double target = un * cum.back();
    auto it = std::upper_bound(cum.begin(), cum.end(), target);
    std::size_t k = static_cast<std::size_t>(it - cum.begin());
    return std::min(k, cum.size() - 1);
  }

  // Mean engagement per serve in the topic. A bot that engages uniformly
  // produces the same value for every candidate, so the term cancels in the
  // softmax and cannot feed back on itself through serve volume alone.
  double engagement_rate(const std::map<int, double>& tally, int topic) const {
    auto it = tally.find(topic);
    if (it == tally.end()) return 0.0;
    auto sit = state_.served_topics.find(topic);
    const double serves = sit == state_.served_topics.end()
                              ? 0.0
                              : static_cast<double>(sit->second);
    return it->second / (serves + 2.0);
  }

  // Account-level confidence in the engagement history: identical for every
  // candidate, so it rescales the engagement terms without introducing any
  // per-topic bias of its own.
  double history_ramp() const {
    const double n = static_cast<double>(state_.served_total);
    return n / (n + 600.0);
  }

  double score(std::size_t idx) const {
    const Video& v = u_.videos[idx];
    const int t = u_.topic_of[idx];
    // Like signals are sparse (at most one per serve vs a watch ratio of up
    // to ~4), so they are scaled up to comparable strength.
    const double ramp = history_ramp();
    double s = ramp * (rec_.w_watch * engagement_rate(state_.watch_tally, t) +
                       rec_.w_like * 4.0 * engagement_rate(state_.like_tally, t));
    if (rec_.w_follow != 0 && state_.followed_creators.count(v.creator)) s += rec_.w_follow;
    if (rec_.w_location != 0 && loc_idx_ >= 0)
      s += rec_.w_location *
           (0.6 * (v.region == location_ ? 1.0 : 0.0) + 0.8 * u_.affinity[loc_idx_][t]);
    return s;
  }

  std::size_t fallback_scan() {
    for (std::size_t i = 0; i < u_.videos.size(); ++i)
      if (eligible(i)) return i;
    throw CapacityError("content universe exhausted for bot " + state_.bot_id);
  }

  std::size_t pick_index() {
    if (rng_.next_bernoulli(effective_explore())) return pick_explore();
    return pick_exploit();
  }

  std::size_t pick_explore() {
    std::vector<int> topics;
    for (int t = 0; t < u_.config.n_topics; ++t) {
      auto it = state_.served_topics.find(t);
      if (it == state_.served_topics.end() || it->second == 0) topics.push_back(t);
    }
    if (topics.empty())
      for (int t = 0; t < u_.config.n_topics; ++t) topics.push_back(t);
    for (int attempt = 0; attempt < 64; ++attempt) {
      const int t = topics[rng_.next_below(topics.size())];
      const auto& cum = u_.topic_cum[t];
      if (cum.empty()) continue;
      const std::size_t idx = u_.by_topic[t][cum_pick(cum, rng_.next_double())];
      if (eligible(idx)) return idx;
    }
    return fallback_scan();
  }

  std::size_t pick_exploit() {
    constexpr int kCandidates = 24;
    std::vector<std::size_t> cand;
    cand.reserve(kCandidates);
    for (int draw = 0; draw < kCandidates * 4 && static_cast<int>(cand.size()) < kCandidates;
         ++draw) {
      const std::size_t idx = cum_pick(u_.global_cum, rng_.next_double());
      if (eligible(idx)) cand.push_back(idx);
    }
    if (cand.empty()) return fallback_scan();
    std::vector<double> w(cand.size());
    double total = 0.0;
    for (std::size_t i = 0; i < cand.size(); ++i) {
      total += std::exp(std::clamp(score(cand[i]), -30.0, 30.0));
      w[i] = total;
    }
    return cand[cum_pick(w, rng_.next_double())];
  }

  const ContentUniverse& u_;
  const RecommenderConfig& rec_;
  BotState& state_;
  std::string location_;
  int loc_idx_ = -1;
  Rng rng_;
  std::unordered_map<std::string, std::int64_t> last_pos_;
  std::optional<std::string> current_;
};

}  // namespace

std::unique_ptr<PlatformSession> SimPlatform::open_session(BotState& state,
                                                           const std::string& location) {
  return std::make_unique<SimSession>(universe_, rec_, state, location);
}

}  // namespace audit::sim
