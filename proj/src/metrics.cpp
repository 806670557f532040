#include "audit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace audit::metrics {

Measure measure_from_string(const std::string& s) {
  if (s == "jaccard") return Measure::jaccard;
  if (s == "basic-match" || s == "basic_match") return Measure::basic_match;
  throw ValidationError("unknown measure: " + s + " (expected jaccard or basic-match)");
}

std::string to_string(Measure m) {
  return m == Measure::jaccard ? "jaccard" : "basic_match";
}

CanonicalTagSet normalize_hashtags(const std::vector<std::string>& raw,
                                   const std::set<std::string>& stoplist) {
  CanonicalTagSet out;
  for (const auto& r : raw) {
    std::string c = canonicalize_tag(r);
    if (c.empty() || stoplist.count(c)) continue;
    out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

const std::set<std::string>& default_stoplist() {
  static const std::set<std::string> s = {"fyp", "foryou", "foryoupage", "viral", "trending", "fy"};
  return s;
}

std::set<std::string> load_stoplist(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open stoplist: " + path);
  std::set<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::string c = canonicalize_tag(line);
    if (!c.empty()) out.insert(c);
  }
  return out;
}

double jaccard(const CanonicalTagSet& a, const CanonicalTagSet& b) {
  if (a.empty() && b.empty()) return 0.0;
  std::size_t inter = 0, i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    int c = a[i].compare(b[j]);
    if (c == 0) { ++inter; ++i; ++j; }
    else if (c < 0) ++i;
    else ++j;
  }
  std::size_t uni = a.size() + b.size() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

double basic_match(const CanonicalTagSet& a, const CanonicalTagSet& b) {
  for (const auto& x : a)
    for (const auto& y : b)
      if (tags_substring_match(x, y)) return 1.0;
  return 0.0;
}

namespace {

double pair_value(const CanonicalTagSet& a, const CanonicalTagSet& b, Measure m) {
  return m == Measure::jaccard ? jaccard(a, b) : basic_match(a, b);
}

struct Kahan {
  double sum = 0.0, c = 0.0;
  void add(double v) {
    double y = v - c;
    double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
};

}  // namespace

double set_similarity_serial(std::span<const CanonicalTagSet> a,
                             std::span<const CanonicalTagSet> b, Measure m) {
  const bool intra = a.data() == b.data() && a.size() == b.size();
  if (a.empty() || b.empty() || (intra && a.size() < 2))
    throw ValidationError("set_similarity requires non-empty inputs");
  Kahan acc;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (intra && i == j) continue;
      acc.add(pair_value(a[i], b[j], m));
      ++pairs;
    }
  }
  return acc.sum / static_cast<double>(pairs);
}

double set_similarity(std::span<const CanonicalTagSet> a, std::span<const CanonicalTagSet> b,
                      Measure m) {
  const bool intra = a.data() == b.data() && a.size() == b.size();
  if (a.empty() || b.empty() || (intra && a.size() < 2))
    throw ValidationError("set_similarity requires non-empty inputs");
  const std::size_t n = a.size();
  std::vector<double> row_sums(n, 0.0);
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(n); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    Kahan row;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (intra && i == j) continue;
      row.add(pair_value(a[i], b[j], m));
    }
    row_sums[i] = row.sum;
  }
  // Reduce rows in index order so the total is thread-count independent.
  Kahan total;
  for (double r : row_sums) total.add(r);
  const std::size_t pairs = intra ? n * (n - 1) : n * b.size();
  return total.sum / static_cast<double>(pairs);
}

namespace {

std::vector<double> window_play_counts(std::span<const FeedRecord> feed, std::size_t begin,
                                       std::size_t len) {
  std::vector<double> v;
  v.reserve(len);
  for (std::size_t i = begin; i < begin + len; ++i)
    v.push_back(static_cast<double>(feed[i].video.play_count));
  return v;
}

double stat_of(std::vector<double> v, PopularityStat stat) {
  if (stat == PopularityStat::mean) {
    Kahan k;
    for (double x : v) k.add(x);
    return k.sum / static_cast<double>(v.size());
  }
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

double popularity_delta(std::span<const FeedRecord> feed, const WindowSpec& w,
                        PopularityStat stat) {
  const auto len = static_cast<std::size_t>(w.window_len);
  if (w.window_len < 1 || feed.size() < 2 * len)
    throw ValidationError("feed shorter than two windows of " + std::to_string(w.window_len));
  double first = stat_of(window_play_counts(feed, 0, len), stat);
  double last = stat_of(window_play_counts(feed, feed.size() - len, len), stat);
  if (first == 0.0) throw ValidationError("first-window popularity level is zero");
  return (last - first) / first * 100.0;
}

double window_similarity_delta(std::span<const CanonicalTagSet> x,
                               std::span<const CanonicalTagSet> y, const WindowSpec& w,
                               Measure m) {
  const auto len = static_cast<std::size_t>(w.window_len);
  if (w.window_len < 1 || x.size() < 2 * len || y.size() < 2 * len)
    throw ValidationError("feed shorter than two windows of " + std::to_string(w.window_len));
  const bool intra = x.data() == y.data() && x.size() == y.size();
  auto win = [&](std::span<const CanonicalTagSet> f, bool last) {
    return f.subspan(last ? f.size() - len : 0, len);
  };
  auto sim = [&](bool last) {
    auto wx = win(x, last);
    if (intra) return set_similarity(wx, wx, m);
    return set_similarity(wx, win(y, last), m);
  };
  return (sim(true) - sim(false)) * 100.0;
}

std::vector<BucketRatio> interest_ratio_series(std::span<const FeedRecord> feed,
                                               const InterestSpec& interests, int bucket) {
  if (bucket < 1) throw ValidationError("bucket must be >= 1");
  std::vector<BucketRatio> out;
  std::size_t i = 0;
  int index = 0;
  while (i < feed.size()) {
    std::size_t end = std::min(feed.size(), i + static_cast<std::size_t>(bucket));
    int hits = 0;
    for (std::size_t k = i; k < end; ++k)
      if (matches_interest(feed[k].video, interests)) ++hits;
    out.push_back({index, static_cast<double>(hits) / static_cast<double>(end - i)});
    ++index;
    i = end;
  }
  return out;
}

TrendLine fit_trend(std::span<const std::pair<double, double>> series) {
  if (series.size() < 2) throw ValidationError("fit_trend needs at least 2 points");
  Kahan sx, sy;
  for (const auto& [x, y] : series) { sx.add(x); sy.add(y); }
  const double n = static_cast<double>(series.size());
  const double mx = sx.sum / n, my = sy.sum / n;
  Kahan sxx, sxy;
  for (const auto& [x, y] : series) {
    sxx.add((x - mx) * (x - mx));
    sxy.add((x - mx) * (y - my));
  }
  if (sxx.sum == 0.0) throw ValidationError("fit_trend: all x values are equal");
  TrendLine t;
  t.slope = sxy.sum / sxx.sum;
  t.intercept = my - t.slope * mx;
  return t;
}

NoiseBaseline noise_baseline(const std::vector<std::vector<CanonicalTagSet>>& control_feeds,
                             Measure m) {
  if (control_feeds.size() < 2)
    throw ValidationError("noise_baseline needs at least 2 control feeds");
  NoiseBaseline nb;
  for (std::size_t i = 0; i < control_feeds.size(); ++i)
    for (std::size_t j = i + 1; j < control_feeds.size(); ++j)
      nb.cross_pairs.push_back(
          {i, j, set_similarity(control_feeds[i], control_feeds[j], m)});
  for (std::size_t i = 0; i < control_feeds.size(); ++i) {
    std::span<const CanonicalTagSet> f = control_feeds[i];
    nb.intra.push_back({i, i, set_similarity(f, f, m)});
  }
  Kahan k;
  nb.min = nb.cross_pairs.front().value;
  nb.max = nb.cross_pairs.front().value;
  for (const auto& p : nb.cross_pairs) {
    k.add(p.value);
    nb.min = std::min(nb.min, p.value);
    nb.max = std::max(nb.max, p.value);
  }
  nb.mean = k.sum / static_cast<double>(nb.cross_pairs.size());
  return nb;
}

double sign_test_p(int positives, int negatives) {
  const int n = positives + negatives;
  if (n == 0) return 1.0;
  const int k = std::min(positives, negatives);
  // P(X <= k) for X ~ Binomial(n, 1/2), doubled and clamped.
  double tail = 0.0;
  double logc = 0.0;  // log C(n, 0)
  for (int i = 0; i <= k; ++i) {
    tail += std::exp(logc - n * std::log(2.0));
    logc += std::log(static_cast<double>(n - i)) - std::log(static_cast<double>(i + 1));
  }
  return std::min(1.0, 2.0 * tail);
}

std::vector<CanonicalTagSet> feed_tag_sets(std::span<const FeedRecord> feed,
                                           const std::set<std::string>& stoplist) {
  std::vector<CanonicalTagSet> out;
  out.reserve(feed.size());
  for (const auto& r : feed) {
    if (r.video.is_ad || r.video.is_live) continue;
    out.push_back(normalize_hashtags(r.video.hashtags, stoplist));
  }
  return out;
}

}  // namespace audit::metrics
