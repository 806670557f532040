// Acceptance battery: one pass/fail line per criterion, non-zero exit when
// any criterion fails. Heavier statistical checks run against the bundled
// simulator with fixed seeds, so every run is reproducible.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "audit/engine.hpp"
#include "audit/metrics.hpp"
#include "audit/report.hpp"
#include "audit/sim.hpp"
#include "audit/suite.hpp"
#include "oracle.hpp"

namespace fs = std::filesystem;
using namespace audit;
namespace m = audit::metrics;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(AUDIT_CLI_BIN) + " " + args + " >/dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

fs::path fresh_dir(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("audit_acceptance_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

const sim::ContentUniverse& default_universe() {
  static const sim::ContentUniverse u = sim::generate_universe({});
  return u;
}

engine::ScenarioResult run_scenario(const std::string& id, std::uint64_t seed,
                                    const sim::RecommenderConfig& rec, int repetitions) {
  sim::SimPlatform platform(default_universe(), rec);
  ScenarioSpec spec = engine::build_scenario(id);
  spec.repetitions = repetitions;
  return engine::execute_scenario(spec, platform, seed);
}

double feed_slope(const report::FeedView& f, const InterestSpec& interests, int bucket) {
  auto series = m::interest_ratio_series(f.organic, interests, bucket);
  std::vector<std::pair<double, double>> pts;
  for (const auto& b : series) pts.emplace_back(b.bucket_index, b.ratio);
  return m::fit_trend(pts).slope;
}

double feed_mean_ratio(const report::FeedView& f, const InterestSpec& interests, int bucket) {
  auto series = m::interest_ratio_series(f.organic, interests, bucket);
  double s = 0;
  for (const auto& b : series) s += b.ratio;
  return s / static_cast<double>(series.size());
}

// --- criteria ---------------------------------------------------------------

Outcome jaccard_worked_example() {
  m::CanonicalTagSet a = {"a1", "a2", "a3", "a4", "s1", "s2"};
  m::CanonicalTagSet b = {"b1", "b2", "b3", "b4", "s1", "s2"};
  const double v = m::jaccard(a, b);
  return {v == 0.20 && m::jaccard(b, a) == 0.20,
          "jaccard(|inter|=2, |union|=10) = " + report::format_value(v)};
}

Outcome basic_match_example() {
  const double ab = m::basic_match({"cat"}, {"cutecat"});
  const double ba = m::basic_match({"cutecat"}, {"cat"});
  return {ab == 1.0 && ba == 1.0,
          "basic_match both directions = " + report::format_value(ab) + "/" +
              report::format_value(ba)};
}

Outcome oracle_equivalence() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937 g(1234);
  std::uniform_int_distribution<int> feed_len(60, 200);
  const auto interests = InterestSpec::from_raw(default_interest_hashtags());
  int comparisons = 0;
  for (int it = 0; it < 50; ++it) {
    const int n = feed_len(g);
    auto feed_a = oracle::random_feed(g, n, 8);
    auto feed_b = oracle::random_feed(g, n, 8);
    auto tags_a = m::feed_tag_sets(feed_a, {});
    auto tags_b = m::feed_tag_sets(feed_b, {});
    std::vector<std::vector<std::string>> plain_a(tags_a.begin(), tags_a.end());
    std::vector<std::vector<std::string>> plain_b(tags_b.begin(), tags_b.end());
    const int window = n / 4;
    const int bucket = 17;

    for (auto measure : {m::Measure::jaccard, m::Measure::basic_match}) {
      const bool ja = measure == m::Measure::jaccard;
      if (!close_rel(m::set_similarity(tags_a, tags_b, measure),
                     oracle::set_similarity(plain_a, plain_b, ja, false), 1e-9))
        return {false, "set_similarity cross mismatch"};
      if (!close_rel(m::set_similarity(tags_a, tags_a, measure),
                     oracle::set_similarity(plain_a, plain_a, ja, true), 1e-9))
        return {false, "set_similarity intra mismatch"};
      if (!close_rel(m::window_similarity_delta(tags_a, tags_b, m::WindowSpec{window}, measure),
                     oracle::window_similarity_delta(plain_a, plain_b, window, ja, false), 1e-9))
        return {false, "window_similarity_delta mismatch"};
      comparisons += 3;
    }
    for (auto stat : {m::PopularityStat::mean, m::PopularityStat::median}) {
      if (!close_rel(m::popularity_delta(feed_a, m::WindowSpec{window}, stat),
                     oracle::popularity_delta(feed_a, window, stat == m::PopularityStat::mean),
                     1e-9))
        return {false, "popularity_delta mismatch"};
      ++comparisons;
    }
    auto series = m::interest_ratio_series(feed_a, interests, bucket);
    auto oseries = oracle::interest_ratio_series(feed_a, interests.hashtags, bucket);
    if (series.size() != oseries.size()) return {false, "interest_ratio_series length mismatch"};
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < series.size(); ++i) {
      if (!close_rel(series[i].ratio, oseries[i], 1e-9))
        return {false, "interest_ratio_series mismatch"};
      pts.emplace_back(series[i].bucket_index, series[i].ratio);
      ++comparisons;
    }
    auto trend = m::fit_trend(pts);
    auto [slope, intercept] = oracle::fit_line(pts);
    if (!close_rel(trend.slope, slope, 1e-9) || !close_rel(trend.intercept, intercept, 1e-9))
      return {false, "fit_trend mismatch"};
    comparisons += 2;
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%d comparisons within 1e-9 in %.1f s (limit 60 s)",
                comparisons, secs);
  return {secs < 60.0, buf};
}

Outcome suite_determinism() {
  const fs::path a = fresh_dir("suite_a");
  const fs::path b = fresh_dir("suite_b");
  const auto t0 = std::chrono::steady_clock::now();
  if (run_cli("suite --seed 42 --out " + a.string()) != 0)
    return {false, "first suite run failed"};
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (run_cli("suite --seed 42 --out " + b.string()) != 0)
    return {false, "second suite run failed"};

  long records = 0;
  std::vector<fs::path> rel;
  for (const auto& e : fs::recursive_directory_iterator(a))
    if (e.is_regular_file()) rel.push_back(fs::relative(e.path(), a));
  std::sort(rel.begin(), rel.end());
  for (const auto& r : rel) {
    const std::string va = slurp(a / r), vb = slurp(b / r);
    if (va != vb) return {false, "differs between runs: " + r.string()};
    if (r.extension() == ".ndjson")
      records += std::count(va.begin(), va.end(), '\n');
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "%zu files byte-identical, %ld organic records (expect 44000), %.1f s (limit 120 s)",
                rel.size(), records, secs);
  return {records == 44000 && secs < 120.0, buf};
}

Outcome null_personalization() {
  sim::RecommenderConfig rec;
  rec.w_watch = rec.w_like = rec.w_follow = rec.w_location = 0.0;
  const auto interests = InterestSpec::from_raw(default_interest_hashtags());
  int delta_pos = 0, delta_neg = 0, slope_pos = 0, slope_neg = 0;
  for (int s = 0; s < 20; ++s) {
    auto result = run_scenario("S11", 9100 + static_cast<std::uint64_t>(s), rec, 2);
    auto feeds = report::group_feeds(result.records);
    const report::FeedView *c1 = nullptr, *c2 = nullptr, *p1 = nullptr;
    for (const auto& f : feeds) {
      if (f.role == Role::control && f.repetition == 1) c1 = &f;
      if (f.role == Role::control && f.repetition == 2) c2 = &f;
      if (f.role == Role::personalised && f.repetition == 1) p1 = &f;
    }
    auto t1 = m::feed_tag_sets(c1->organic, m::default_stoplist());
    auto t2 = m::feed_tag_sets(c2->organic, m::default_stoplist());
    auto t3 = m::feed_tag_sets(p1->organic, m::default_stoplist());
    const m::WindowSpec w{125};
    const double cvp = m::window_similarity_delta(t1, t3, w, m::Measure::jaccard);
    const double cvc = m::window_similarity_delta(t1, t2, w, m::Measure::jaccard);
    (cvp > cvc ? delta_pos : delta_neg) += 1;
    const double ps = feed_slope(*p1, interests, 100);
    const double cs = feed_slope(*c1, interests, 100);
    (ps > cs ? slope_pos : slope_neg) += 1;
  }
  const double p_delta = m::sign_test_p(delta_pos, delta_neg);
  const double p_slope = m::sign_test_p(slope_pos, slope_neg);
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "paired sign tests over 20 seeds: deltas p=%.3f, slopes p=%.3f (need >= 0.05)",
                p_delta, p_slope);
  return {p_delta >= 0.05 && p_slope >= 0.05, buf};
}

struct DetectionData {
  int pers_pos = 0;
  int ctrl_pos = 0, ctrl_neg = 0;
  std::vector<double> mean_ratio_s11;
};

DetectionData s11_detection(const InterestSpec& interests) {
  DetectionData d;
  for (int s = 0; s < 20; ++s) {
    auto result = run_scenario("S11", 1000 + static_cast<std::uint64_t>(s), {}, 1);
    for (const auto& f : report::group_feeds(result.records)) {
      const double slope = feed_slope(f, interests, 100);
      if (f.role == Role::personalised) {
        d.pers_pos += slope > 0;
        d.mean_ratio_s11.push_back(feed_mean_ratio(f, interests, 100));
      } else {
        (slope > 0 ? d.ctrl_pos : d.ctrl_neg) += 1;
      }
    }
  }
  return d;
}

Outcome detection_power(const DetectionData& d) {
  int location_ok = 0;
  for (int s = 0; s < 20; ++s) {
    auto result = run_scenario("S1", 5000 + static_cast<std::uint64_t>(s), {}, 2);
    auto feeds = report::group_feeds(result.records);
    const report::FeedView *c1 = nullptr, *c2 = nullptr, *p1 = nullptr;
    for (const auto& f : feeds) {
      if (f.role == Role::control && f.repetition == 1) c1 = &f;
      if (f.role == Role::control && f.repetition == 2) c2 = &f;
      if (f.role == Role::personalised && f.repetition == 1) p1 = &f;
    }
    auto t1 = m::feed_tag_sets(c1->organic, m::default_stoplist());
    auto t2 = m::feed_tag_sets(c2->organic, m::default_stoplist());
    auto t3 = m::feed_tag_sets(p1->organic, m::default_stoplist());
    const double cc = m::set_similarity(t1, t2, m::Measure::jaccard);
    const double cp = m::set_similarity(t1, t3, m::Measure::jaccard);
    location_ok += cc > cp;
  }
  const double p_ctrl = m::sign_test_p(d.ctrl_pos, d.ctrl_neg);
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "S11 pers slope>0 in %d/20 (need >= 18), ctrl sign test p=%.3f (need >= 0.05); "
                "location C-vs-C > C-vs-P in %d/20 (need >= 18)",
                d.pers_pos, p_ctrl, location_ok);
  return {d.pers_pos >= 18 && p_ctrl >= 0.05 && location_ok >= 18, buf};
}

Outcome dose_response(const DetectionData& d, const InterestSpec& interests) {
  auto mean_ratio = [&](const std::string& id) {
    double sum = 0;
    int n = 0;
    for (int s = 0; s < 20; ++s) {
      auto result = run_scenario(id, 1000 + static_cast<std::uint64_t>(s), {}, 1);
      for (const auto& f : report::group_feeds(result.records)) {
        if (f.role != Role::personalised) continue;
        sum += feed_mean_ratio(f, interests, 100);
        ++n;
      }
    }
    return sum / n;
  };
  const double r9 = mean_ratio("S9");
  const double r10 = mean_ratio("S10");
  double r11 = 0;
  for (double v : d.mean_ratio_s11) r11 += v;
  r11 /= static_cast<double>(d.mean_ratio_s11.size());
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "mean personalised interest ratio over 20 seeds: S9 %.4f <= S10 %.4f <= S11 %.4f",
                r9, r10, r11);
  return {r9 <= r10 && r10 <= r11, buf};
}

Outcome implication_and_idempotence() {
  std::mt19937 g(77);
  for (int it = 0; it < 10000; ++it) {
    auto a = m::normalize_hashtags(oracle::random_raw_tags(g, 6), {});
    auto b = m::normalize_hashtags(oracle::random_raw_tags(g, 6), {});
    if (m::basic_match(a, b) == 0.0 && m::jaccard(a, b) != 0.0)
      return {false, "basic_match=0 but jaccard>0"};
  }
  for (int it = 0; it < 10000; ++it) {
    auto once = m::normalize_hashtags(oracle::random_raw_tags(g, 8), m::default_stoplist());
    if (m::normalize_hashtags(once, m::default_stoplist()) != once)
      return {false, "normalize_hashtags not idempotent"};
  }
  return {true, "10000 implication pairs and 10000 idempotence lists"};
}

Outcome golden_pipeline() {
  const fs::path out = fresh_dir("golden");
  const fs::path fixture = fs::path(FIXTURE_DIR) / "fixture.ndjson";
  const fs::path goldens = fs::path(FIXTURE_DIR) / "goldens";
  if (run_cli("analyze --in " + fixture.string() + " --out " + out.string() +
              " --window 50 --bucket 30") != 0)
    return {false, "analyze failed on the bundled fixture"};
  for (const char* name : {"table2.csv", "table3.csv", "heatmap.csv", "interest_series.csv",
                           "noise_baseline.csv"}) {
    const std::string got = slurp(out / name);
    const std::string want = slurp(goldens / name);
    if (want.empty()) return {false, std::string("missing golden: ") + name};
    if (got != want) return {false, std::string("golden mismatch: ") + name};
  }
  return {true, "5 reports byte-identical to the goldens"};
}

}  // namespace

int main() {
  const auto interests = InterestSpec::from_raw(default_interest_hashtags());
  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria;
  criteria.emplace_back("jaccard worked example", jaccard_worked_example);
  criteria.emplace_back("basic-match substring example", basic_match_example);
  criteria.emplace_back("oracle equivalence", oracle_equivalence);
  criteria.emplace_back("suite determinism and scale", suite_determinism);
  criteria.emplace_back("null-personalization soundness", null_personalization);
  DetectionData detection;
  criteria.emplace_back("detection power", [&] {
    detection = s11_detection(interests);
    return detection_power(detection);
  });
  criteria.emplace_back("dose-response ordering",
                        [&] { return dose_response(detection, interests); });
  criteria.emplace_back("implication and idempotence properties", implication_and_idempotence);
  criteria.emplace_back("golden pipeline", golden_pipeline);

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("[%s] criterion %zu: %s — %s\n", o.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), o.detail.c_str());
  }
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  else std::printf("all %zu criteria passed\n", criteria.size());
  return failures == 0 ? 0 : 1;
}
