#include "audit/suite.hpp"

#include <fstream>
#include <json.hpp>

namespace audit::suite {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "0.1.0";

void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << content;
}

ordered_json summaries_to_json(const std::vector<engine::RunSummary>& summaries) {
  ordered_json arr = ordered_json::array();
  for (const auto& s : summaries) {
    ordered_json j;
    j["scenario_id"] = s.scenario_id;
    j["repetition"] = s.repetition;
    j["bot_id"] = s.bot_id;
    j["run_index"] = s.run_index;
    j["ads_skipped"] = s.ads_skipped;
    j["lives_skipped"] = s.lives_skipped;
    j["watch_boost_shortfall"] = s.watch_boost_shortfall;
    j["like_shortfall"] = s.like_shortfall;
    j["follow_shortfall"] = s.follow_shortfall;
    arr.push_back(std::move(j));
  }
  return arr;
}

}  // namespace

HarnessConfig load_config(const std::string& path) {
  HarnessConfig c;
  if (path.empty()) return c;
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config: " + path);
  nlohmann::json j = nlohmann::json::parse(in, nullptr, true, true);
  if (j.contains("universe")) c.universe = sim::universe_config_from_json(j.at("universe"));
  if (j.contains("recommender"))
    c.recommender = sim::recommender_config_from_json(j.at("recommender"));
  if (j.contains("overrides")) {
    const auto& o = j.at("overrides");
    if (o.contains("runs")) c.overrides.runs = o.at("runs").get<int>();
    if (o.contains("videos_per_run"))
      c.overrides.videos_per_run = o.at("videos_per_run").get<int>();
    if (o.contains("interest_hashtags"))
      c.overrides.interest_hashtags = o.at("interest_hashtags").get<std::vector<std::string>>();
    if (o.contains("interest_creators"))
      c.overrides.interest_creators = o.at("interest_creators").get<std::vector<std::string>>();
    if (o.contains("stoplist")) c.overrides.stoplist_path = o.at("stoplist").get<std::string>();
  }
  return c;
}

ScenarioSpec apply_overrides(ScenarioSpec spec, const Overrides& o) {
  if (o.runs > 0) spec.runs = o.runs;
  if (o.videos_per_run > 0) spec.videos_per_run = o.videos_per_run;
  if (!o.interest_hashtags.empty()) {
    for (BotProfile* b : {&spec.control, &spec.personalised})
      if (!b->interest_hashtags.empty()) b->interest_hashtags = o.interest_hashtags;
  }
  if (!o.interest_creators.empty()) {
    for (BotProfile* b : {&spec.control, &spec.personalised})
      if (!b->interest_creators.empty()) b->interest_creators = o.interest_creators;
  }
  return spec;
}

report::AnalysisOptions analysis_options_from(const HarnessConfig& config) {
  report::AnalysisOptions options;
  if (!config.overrides.stoplist_path.empty())
    options.stoplist = metrics::load_stoplist(config.overrides.stoplist_path);
  if (!config.overrides.interest_hashtags.empty())
    options.interests = InterestSpec::from_raw(config.overrides.interest_hashtags,
                                               config.overrides.interest_creators);
  return options;
}

void run_scenario_to_dir(const std::string& scenario_id, const HarnessConfig& config,
                         std::uint64_t master_seed, const fs::path& out_dir) {
  const ScenarioSpec spec = apply_overrides(engine::build_scenario(scenario_id), config.overrides);
  const sim::ContentUniverse universe = sim::generate_universe(config.universe);
  sim::SimPlatform platform(universe, config.recommender);
  const auto result = engine::execute_scenario(spec, platform, mix_seed(master_seed, scenario_id));
  write_file(out_dir / (scenario_id + ".ndjson"), serialize_run_log(result.records));
  write_file(out_dir / (scenario_id + "_summary.json"),
             summaries_to_json(result.summaries).dump(2) + "\n");
}

SuiteResult run_suite(const HarnessConfig& config, std::uint64_t master_seed,
                      const fs::path& out_dir, const report::AnalysisOptions& options) {
  fs::create_directories(out_dir);
  const sim::ContentUniverse universe = sim::generate_universe(config.universe);
  sim::SimPlatform platform(universe, config.recommender);

  SuiteResult result;
  std::vector<FeedRecord> all_records;
  ordered_json manifest;
  manifest["version"] = kVersion;
  manifest["master_seed"] = master_seed;
  manifest["universe_seed"] = config.universe.seed;
  ordered_json scenarios = ordered_json::array();

  for (const auto& id : engine::scenario_ids()) {
    ordered_json entry;
    entry["scenario_id"] = id;
    entry["seed"] = mix_seed(master_seed, id);
    try {
      const ScenarioSpec spec = apply_overrides(engine::build_scenario(id), config.overrides);
      entry["repetitions"] = spec.repetitions;
      auto r = engine::execute_scenario(spec, platform, mix_seed(master_seed, id));
      write_file(out_dir / (id + ".ndjson"), serialize_run_log(r.records));
      write_file(out_dir / (id + "_summary.json"), summaries_to_json(r.summaries).dump(2) + "\n");
      entry["log"] = id + ".ndjson";
      entry["records"] = r.records.size();
      entry["status"] = "ok";
      all_records.insert(all_records.end(), r.records.begin(), r.records.end());
      result.scenarios_ok += 1;
    } catch (const std::exception& e) {
      entry["status"] = "failed";
      entry["error"] = e.what();
      result.failures.emplace_back(id, e.what());
    }
    scenarios.push_back(std::move(entry));
  }
  manifest["scenarios"] = std::move(scenarios);

  try {
    const report::Reports reports = report::analyze(all_records, options);
    write_file(out_dir / "reports" / "table2.csv", reports.table2_csv);
    write_file(out_dir / "reports" / "table3.csv", reports.table3_csv);
    write_file(out_dir / "reports" / "heatmap.csv", reports.heatmap_csv);
    write_file(out_dir / "reports" / "interest_series.csv", reports.interest_series_csv);
    write_file(out_dir / "reports" / "noise_baseline.csv", reports.noise_csv);
    manifest["reports"] = "reports/";
  } catch (const std::exception& e) {
    manifest["analysis_error"] = e.what();
    result.failures.emplace_back("analysis", e.what());
  }

  write_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
  return result;
}

}  // namespace audit::suite
