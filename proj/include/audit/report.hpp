#pragma once

#include <set>
#include <string>
#include <vector>

#include "audit/interests.hpp"
#include "audit/metrics.hpp"
#include "audit/model.hpp"

namespace audit::report {

// One bot's concatenated organic feed across runs of one scenario repetition.
struct FeedView {
  std::string scenario_id;
  int repetition = 0;
  std::string bot_id;
  Role role = Role::control;
  std::vector<FeedRecord> organic;  // ads/lives dropped, (run, position) order
};

std::vector<FeedView> group_feeds(const std::vector<FeedRecord>& records);

struct AnalysisOptions {
  metrics::Measure measure = metrics::Measure::jaccard;
  int window = 125;
  int bucket = 100;
  metrics::PopularityStat stat = metrics::PopularityStat::mean;
  std::set<std::string> stoplist = metrics::default_stoplist();
  InterestSpec interests = InterestSpec::from_raw(default_interest_hashtags());
};

struct Reports {
  std::string table2_csv;           // activity, control_delta_pct, personalised_delta_pct
  std::string table3_csv;           // activity, c_vs_p, c_vs_c, p_vs_p
  std::string heatmap_csv;          // feed_a, feed_b, measure, value
  std::string interest_series_csv;  // feed, bucket_index, ratio
  std::string noise_csv;            // kind, feed_a, feed_b, value
};

// Full analysis battery over a parsed record set. Throws ValidationError on
// empty input or feeds shorter than the requested windows.
Reports analyze(const std::vector<FeedRecord>& records, const AnalysisOptions& options);

std::string format_value(double v);  // fixed 6-decimal CSV number format

}  // namespace audit::report
