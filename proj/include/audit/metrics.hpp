#pragma once

#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "audit/interests.hpp"
#include "audit/model.hpp"

namespace audit::metrics {

// Canonical hashtag set of one video: lowercase alphanumeric, stoplist
// entries removed, deduplicated, sorted.
using CanonicalTagSet = std::vector<std::string>;

enum class Measure { jaccard, basic_match };

Measure measure_from_string(const std::string& s);
std::string to_string(Measure m);

CanonicalTagSet normalize_hashtags(const std::vector<std::string>& raw,
                                   const std::set<std::string>& stoplist);

// Built-in generic-hashtag stoplist (fyp, foryou, ...).
const std::set<std::string>& default_stoplist();

// One hashtag per line, '#' starts a comment.
std::set<std::string> load_stoplist(const std::string& path);

double jaccard(const CanonicalTagSet& a, const CanonicalTagSet& b);
double basic_match(const CanonicalTagSet& a, const CanonicalTagSet& b);

// Mean pairwise similarity over the A x B cross product. When A and B are
// the same span (intra-feed similarity) the diagonal pairs are excluded.
// Parallel over rows; row sums are compensated and reduced in index order so
// the result does not depend on the thread count.
double set_similarity(std::span<const CanonicalTagSet> a, std::span<const CanonicalTagSet> b,
                      Measure m);

// Serial reference for the kernel above; kept for testing and benchmarking.
double set_similarity_serial(std::span<const CanonicalTagSet> a,
                             std::span<const CanonicalTagSet> b, Measure m);

struct WindowSpec {
  int window_len = 125;
};

enum class PopularityStat { mean, median };

// Signed percent change of play-count level between the last and first
// window of the feed.
double popularity_delta(std::span<const FeedRecord> feed, const WindowSpec& w,
                        PopularityStat stat = PopularityStat::mean);

// set_similarity(last(X), last(Y)) - set_similarity(first(X), first(Y)),
// in percentage points. X == Y (same tag-set sequence) gives the intra-feed
// variant with self-pairs excluded.
double window_similarity_delta(std::span<const CanonicalTagSet> x,
                               std::span<const CanonicalTagSet> y, const WindowSpec& w,
                               Measure m);

struct BucketRatio {
  int bucket_index = 0;
  double ratio = 0.0;
};

std::vector<BucketRatio> interest_ratio_series(std::span<const FeedRecord> feed,
                                               const InterestSpec& interests, int bucket);

struct TrendLine {
  double slope = 0.0;
  double intercept = 0.0;
};

// Ordinary least squares over (x, y) points; throws when all x are equal.
TrendLine fit_trend(std::span<const std::pair<double, double>> series);

struct NoiseBaseline {
  struct Pair {
    std::size_t a = 0, b = 0;  // indices into the input feed list; a == b is intra
    double value = 0.0;
  };
  std::vector<Pair> cross_pairs;
  std::vector<Pair> intra;
  double mean = 0.0, min = 0.0, max = 0.0;  // over cross_pairs
};

NoiseBaseline noise_baseline(const std::vector<std::vector<CanonicalTagSet>>& control_feeds,
                             Measure m);

// Two-sided exact binomial sign test p-value for `positives` successes out
// of `positives + negatives` nonzero-signed trials under p = 0.5.
double sign_test_p(int positives, int negatives);

// Tag-set sequence of a feed: ads and livestreams dropped, remaining records
// normalized in feed order.
std::vector<CanonicalTagSet> feed_tag_sets(std::span<const FeedRecord> feed,
                                           const std::set<std::string>& stoplist);

}  // namespace audit::metrics
