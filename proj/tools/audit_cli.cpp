#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include "audit/suite.hpp"

namespace fs = std::filesystem;
using namespace audit;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitCapacity = 3;

std::vector<fs::path> collect_logs(const std::vector<std::string>& inputs) {
  std::vector<fs::path> logs;
  for (const auto& in : inputs) {
    fs::path p(in);
    if (fs::is_directory(p)) {
      for (const auto& e : fs::directory_iterator(p))
        if (e.path().extension() == ".ndjson") logs.push_back(e.path());
    } else if (fs::exists(p)) {
      logs.push_back(p);
    } else {
      throw ValidationError("input not found: " + in);
    }
  }
  std::sort(logs.begin(), logs.end());
  if (logs.empty()) throw ValidationError("no run logs found in the given inputs");
  return logs;
}

std::vector<FeedRecord> load_records(const std::vector<fs::path>& logs) {
  std::vector<FeedRecord> records;
  for (const auto& p : logs) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    std::vector<std::string> warnings;
    try {
      auto part = parse_run_log(ss.str(), &warnings);
      records.insert(records.end(), part.begin(), part.end());
    } catch (const ParseError& e) {
      throw ParseError(e.line, p.string() + ": " + e.what());
    }
    for (const auto& w : warnings) std::cerr << p.string() << ": " << w << "\n";
  }
  return records;
}

void write_text(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << content;
}

struct AnalyzeFlags {
  std::vector<std::string> inputs;
  std::string out_dir = "reports";
  std::string measure = "jaccard";
  int window = 125;
  int bucket = 100;
  std::string stat = "mean";
  std::string stoplist;
  std::string config;
};

report::AnalysisOptions make_options(const AnalyzeFlags& flags) {
  suite::HarnessConfig config = suite::load_config(flags.config);
  report::AnalysisOptions options = suite::analysis_options_from(config);
  options.measure = metrics::measure_from_string(flags.measure);
  options.window = flags.window;
  options.bucket = flags.bucket;
  options.stat = flags.stat == "median" ? metrics::PopularityStat::median
                                        : metrics::PopularityStat::mean;
  if (!flags.stoplist.empty()) options.stoplist = metrics::load_stoplist(flags.stoplist);
  return options;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sockpuppet-audit harness for short-video recommenders"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "Execute one scenario against the simulator");
  std::string scenario, config_path, out_dir = "out";
  std::uint64_t seed = 42;
  run->add_option("--scenario", scenario, "Scenario id (S0..S16)")->required();
  run->add_option("--config", config_path, "Config file (JSON)");
  run->add_option("--seed", seed, "Master seed");
  run->add_option("--out", out_dir, "Output directory");

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Compute the report battery from run logs");
  AnalyzeFlags aflags;
  analyze->add_option("--in", aflags.inputs, "Run log files or directories")->required();
  analyze->add_option("--out", aflags.out_dir, "Output directory for CSV reports");
  analyze->add_option("--measure", aflags.measure, "jaccard|basic-match")
      ->check(CLI::IsMember({"jaccard", "basic-match"}));
  analyze->add_option("--window", aflags.window, "Window length in videos");
  analyze->add_option("--bucket", aflags.bucket, "Interest-ratio bucket size");
  analyze->add_option("--stat", aflags.stat, "Popularity statistic")
      ->check(CLI::IsMember({"mean", "median"}));
  analyze->add_option("--stoplist", aflags.stoplist, "Generic-hashtag stoplist file");
  analyze->add_option("--config", aflags.config, "Config file (interest overrides)");

  // suite
  auto* suite_cmd = app.add_subcommand("suite", "Run all 17 scenarios plus the analysis battery");
  AnalyzeFlags sflags;
  std::uint64_t suite_seed = 42;
  std::string suite_config, suite_out = "suite_out";
  suite_cmd->add_option("--config", suite_config, "Config file (JSON)");
  suite_cmd->add_option("--seed", suite_seed, "Master seed");
  suite_cmd->add_option("--out", suite_out, "Output directory");
  suite_cmd->add_option("--measure", sflags.measure, "jaccard|basic-match")
      ->check(CLI::IsMember({"jaccard", "basic-match"}));
  suite_cmd->add_option("--window", sflags.window, "Window length in videos");
  suite_cmd->add_option("--bucket", sflags.bucket, "Interest-ratio bucket size");
  suite_cmd->add_option("--stat", sflags.stat, "Popularity statistic")
      ->check(CLI::IsMember({"mean", "median"}));
  suite_cmd->add_option("--stoplist", sflags.stoplist, "Generic-hashtag stoplist file");

  // noise
  auto* noise = app.add_subcommand("noise", "Noise baseline from neutral-scenario logs");
  AnalyzeFlags nflags;
  noise->add_option("--in", nflags.inputs, "Run log files or directories")->required();
  noise->add_option("--out", nflags.out_dir, "Output directory");
  noise->add_option("--measure", nflags.measure, "jaccard|basic-match")
      ->check(CLI::IsMember({"jaccard", "basic-match"}));
  noise->add_option("--stoplist", nflags.stoplist, "Generic-hashtag stoplist file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*run) {
      suite::HarnessConfig config = suite::load_config(config_path);
      suite::run_scenario_to_dir(scenario, config, seed, out_dir);
      std::cout << "wrote " << (fs::path(out_dir) / (scenario + ".ndjson")).string() << "\n";
    } else if (*analyze) {
      auto records = load_records(collect_logs(aflags.inputs));
      auto reports = report::analyze(records, make_options(aflags));
      const fs::path out(aflags.out_dir);
      write_text(out / "table2.csv", reports.table2_csv);
      write_text(out / "table3.csv", reports.table3_csv);
      write_text(out / "heatmap.csv", reports.heatmap_csv);
      write_text(out / "interest_series.csv", reports.interest_series_csv);
      write_text(out / "noise_baseline.csv", reports.noise_csv);
      std::cout << "wrote reports to " << out.string() << "\n";
    } else if (*suite_cmd) {
      suite::HarnessConfig config = suite::load_config(suite_config);
      sflags.config = suite_config;
      auto options = make_options(sflags);
      auto result = suite::run_suite(config, suite_seed, suite_out, options);
      std::cout << result.scenarios_ok << " scenarios ok, " << result.failures.size()
                << " failed\n";
      if (!result.failures.empty()) {
        for (const auto& [id, err] : result.failures)
          std::cerr << id << ": " << err << "\n";
        return kExitData;
      }
    } else if (*noise) {
      auto records = load_records(collect_logs(nflags.inputs));
      auto reports = report::analyze(records, make_options(nflags));
      write_text(fs::path(nflags.out_dir) / "noise_baseline.csv", reports.noise_csv);
      std::cout << reports.noise_csv;
    }
  } catch (const CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << "\n";
    return kExitCapacity;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return 0;
}
