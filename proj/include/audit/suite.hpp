#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "audit/engine.hpp"
#include "audit/report.hpp"
#include "audit/sim.hpp"

namespace audit::suite {

struct Overrides {
  int runs = -1;            // -1 keeps the scenario default
  int videos_per_run = -1;
  std::vector<std::string> interest_hashtags;  // replaces the stock list when set
  std::vector<std::string> interest_creators;
  std::string stoplist_path;
};

struct HarnessConfig {
  sim::UniverseConfig universe;
  sim::RecommenderConfig recommender;
  Overrides overrides;
};

// Reads {"universe": {...}, "recommender": {...}, "overrides": {...}}; every
// section and key is optional. An empty path yields the defaults.
HarnessConfig load_config(const std::string& path);

ScenarioSpec apply_overrides(ScenarioSpec spec, const Overrides& o);

report::AnalysisOptions analysis_options_from(const HarnessConfig& config);

// Executes one scenario against a fresh simulator built from the config and
// writes <out>/<scenario>.ndjson plus <out>/<scenario>_summary.json.
void run_scenario_to_dir(const std::string& scenario_id, const HarnessConfig& config,
                         std::uint64_t master_seed, const std::filesystem::path& out_dir);

struct SuiteResult {
  int scenarios_ok = 0;
  std::vector<std::pair<std::string, std::string>> failures;  // (scenario, error)
};

// Full catalog with per-scenario repetition counts, followed by the analysis
// battery; writes logs, summaries, reports/ and manifest.json under out_dir.
// Best-effort: scenario failures are recorded and execution continues.
SuiteResult run_suite(const HarnessConfig& config, std::uint64_t master_seed,
                      const std::filesystem::path& out_dir,
                      const report::AnalysisOptions& options);

}  // namespace audit::suite
