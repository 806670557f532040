#include "audit/report.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <tuple>

namespace audit::report {

namespace {

struct Group {
  const char* name;
  std::vector<std::string> scenario_ids;
};

const std::vector<Group>& table2_groups() {
  static const std::vector<Group> g = {
      {"random_explicit", {"S12", "S15", "S16"}},
      {"predefined_explicit", {"S13", "S14"}},
      {"random_implicit", {"S5", "S6", "S7", "S8"}},
      {"predefined_implicit", {"S9", "S10", "S11"}},
  };
  return g;
}

const std::vector<Group>& table3_groups() {
  static const std::vector<Group> g = {
      {"follow", {"S15", "S16"}},
      {"random_like", {"S12"}},
      {"predefined_like", {"S13", "S14"}},
      {"random_watch", {"S5", "S6", "S7", "S8"}},
      {"predefined_watch", {"S9", "S10", "S11"}},
  };
  return g;
}

bool in_group(const Group& g, const std::string& scenario_id) {
  return std::find(g.scenario_ids.begin(), g.scenario_ids.end(), scenario_id) !=
         g.scenario_ids.end();
}

bool is_noise_or_location(const std::string& scenario_id) {
  return scenario_id == "S0" || scenario_id == "S1" || scenario_id == "S2" ||
         scenario_id == "S3" || scenario_id == "S4";
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::vector<FeedView> group_feeds(const std::vector<FeedRecord>& records) {
  std::vector<FeedView> feeds;
  std::map<std::tuple<std::string, int, std::string>, std::size_t> index;
  for (const auto& r : records) {
    auto key = std::make_tuple(r.scenario_id, r.repetition, r.bot_id);
    auto it = index.find(key);
    if (it == index.end()) {
      FeedView f;
      f.scenario_id = r.scenario_id;
      f.repetition = r.repetition;
      f.bot_id = r.bot_id;
      f.role = r.role;
      it = index.emplace(key, feeds.size()).first;
      feeds.push_back(std::move(f));
    }
    if (!r.video.is_ad && !r.video.is_live) feeds[it->second].organic.push_back(r);
  }
  for (auto& f : feeds)
    std::stable_sort(f.organic.begin(), f.organic.end(),
                     [](const FeedRecord& a, const FeedRecord& b) {
                       return std::tie(a.run_index, a.position) < std::tie(b.run_index, b.position);
                     });
  std::stable_sort(feeds.begin(), feeds.end(), [](const FeedView& a, const FeedView& b) {
    return std::tie(a.scenario_id, a.repetition, a.bot_id) <
           std::tie(b.scenario_id, b.repetition, b.bot_id);
  });
  return feeds;
}

Reports analyze(const std::vector<FeedRecord>& records, const AnalysisOptions& options) {
  if (records.empty()) throw ValidationError("no records to analyze");
  const std::vector<FeedView> feeds = group_feeds(records);
  const metrics::WindowSpec window{options.window};

  std::vector<std::vector<metrics::CanonicalTagSet>> tags(feeds.size());
  for (std::size_t i = 0; i < feeds.size(); ++i)
    tags[i] = metrics::feed_tag_sets(feeds[i].organic, options.stoplist);

  Reports out;

  // Popularity deltas per activity group (Table-2 shape).
  out.table2_csv = "activity,control_delta_pct,personalised_delta_pct\n";
  for (const auto& g : table2_groups()) {
    std::vector<double> control, personalised;
    for (std::size_t i = 0; i < feeds.size(); ++i) {
      if (!in_group(g, feeds[i].scenario_id)) continue;
      double d = metrics::popularity_delta(feeds[i].organic, window, options.stat);
      (feeds[i].role == Role::control ? control : personalised).push_back(d);
    }
    if (control.empty() || personalised.empty()) continue;
    out.table2_csv += std::string(g.name) + "," + format_value(mean_of(control)) + "," +
                      format_value(mean_of(personalised)) + "\n";
  }

  // Windowed similarity deltas per activity group (Table-3 shape).
  out.table3_csv = "activity,c_vs_p,c_vs_c,p_vs_p\n";
  for (const auto& g : table3_groups()) {
    std::vector<double> cvp, cvc, pvp;
    std::map<std::pair<std::string, int>, std::pair<int, int>> pairs;  // (scenario,rep) -> idx
    for (std::size_t i = 0; i < feeds.size(); ++i) {
      if (!in_group(g, feeds[i].scenario_id)) continue;
      auto& p = pairs.try_emplace({feeds[i].scenario_id, feeds[i].repetition},
                                  std::make_pair(-1, -1)).first->second;
      (feeds[i].role == Role::control ? p.first : p.second) = static_cast<int>(i);
    }
    for (const auto& [key, p] : pairs) {
      const auto [ci, pi] = p;
      if (ci >= 0)
        cvc.push_back(metrics::window_similarity_delta(tags[ci], tags[ci], window, options.measure));
      if (pi >= 0)
        pvp.push_back(metrics::window_similarity_delta(tags[pi], tags[pi], window, options.measure));
      if (ci >= 0 && pi >= 0)
        cvp.push_back(metrics::window_similarity_delta(tags[ci], tags[pi], window, options.measure));
    }
    if (cvp.empty()) continue;
    out.table3_csv += std::string(g.name) + "," + format_value(mean_of(cvp)) + "," +
                      format_value(mean_of(cvc)) + "," + format_value(mean_of(pvp)) + "\n";
  }

  // Full-feed pairwise similarity (Figure-1 shape). Restricted to the noise
  // and location scenarios when present; otherwise all feeds.
  std::vector<std::size_t> hm;
  for (std::size_t i = 0; i < feeds.size(); ++i)
    if (is_noise_or_location(feeds[i].scenario_id)) hm.push_back(i);
  if (hm.empty())
    for (std::size_t i = 0; i < feeds.size(); ++i) hm.push_back(i);
  out.heatmap_csv = "feed_a,feed_b,measure,value\n";
  for (std::size_t a = 0; a < hm.size(); ++a) {
    for (std::size_t b = a; b < hm.size(); ++b) {
      const auto& ta = tags[hm[a]];
      const auto& tb = tags[hm[b]];
      if (ta.empty() || tb.empty() || (a == b && ta.size() < 2)) continue;
      double v = a == b ? metrics::set_similarity(ta, ta, options.measure)
                        : metrics::set_similarity(ta, tb, options.measure);
      out.heatmap_csv += feeds[hm[a]].bot_id + "," + feeds[hm[b]].bot_id + "," +
                         metrics::to_string(options.measure) + "," + format_value(v) + "\n";
    }
  }

  // Interest-ratio series per feed.
  out.interest_series_csv = "feed,bucket_index,ratio\n";
  for (std::size_t i = 0; i < feeds.size(); ++i) {
    for (const auto& b :
         metrics::interest_ratio_series(feeds[i].organic, options.interests, options.bucket))
      out.interest_series_csv += feeds[i].bot_id + "," + std::to_string(b.bucket_index) + "," +
                                 format_value(b.ratio) + "\n";
  }

  // Noise baseline over the neutral-scenario feeds (every S0 bot behaves as
  // a control); header-only when fewer than two are present.
  out.noise_csv = "kind,feed_a,feed_b,value\n";
  std::vector<std::size_t> noise_idx;
  for (std::size_t i = 0; i < feeds.size(); ++i)
    if (feeds[i].scenario_id == "S0" && !tags[i].empty()) noise_idx.push_back(i);
  if (noise_idx.size() >= 2) {
    std::vector<std::vector<metrics::CanonicalTagSet>> nf;
    for (std::size_t i : noise_idx) nf.push_back(tags[i]);
    auto nb = metrics::noise_baseline(nf, options.measure);
    for (const auto& p : nb.cross_pairs)
      out.noise_csv += "pair," + feeds[noise_idx[p.a]].bot_id + "," +
                       feeds[noise_idx[p.b]].bot_id + "," + format_value(p.value) + "\n";
    for (const auto& p : nb.intra)
      out.noise_csv += "intra," + feeds[noise_idx[p.a]].bot_id + "," +
                       feeds[noise_idx[p.a]].bot_id + "," + format_value(p.value) + "\n";
    out.noise_csv += "mean,,," + format_value(nb.mean) + "\n";
    out.noise_csv += "min,,," + format_value(nb.min) + "\n";
    out.noise_csv += "max,,," + format_value(nb.max) + "\n";
  }
  return out;
}

}  // namespace audit::report
