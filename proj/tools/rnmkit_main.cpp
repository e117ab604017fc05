#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "rnm/experiment.hpp"
#include "rnm/version.hpp"

namespace {

int do_run(const std::string& scenario_path, const rnm::RunOverrides& overrides,
           const std::string& report_path, const std::string& format) {
  rnm::ScenarioConfig config = rnm::ScenarioConfig::from_file(scenario_path);
  if (overrides.seed.has_value()) config.checks.seed = *overrides.seed;
  if (overrides.horizon.has_value()) config.checks.horizon = *overrides.horizon;

  const rnm::DemiclosednessReport report = rnm::run_demiclosedness(config);
  const std::string dump = report.to_json().dump(2);
  if (!report_path.empty()) {
    std::ofstream out(report_path);
    if (!out) {
      std::cerr << "cannot write report to " << report_path << '\n';
      return 1;
    }
    out << dump << '\n';
  }
  if (format == "csv") {
    std::cout << "name,hypotheses,conclusion_residual,verdict\n"
              << report.scenario << ','
              << (report.hypothesis_weak && report.hypothesis_residual
                      ? "weak+residual"
                      : (report.hypothesis_weak
                             ? "weak"
                             : (report.hypothesis_residual ? "residual"
                                                           : "none")))
              << ',' << report.conclusion_linf << ',' << report.verdict << '\n';
  } else {
    std::cout << dump << '\n';
  }
  if (report.verdict == "theorem-violated") return 2;
  if (report.verdict == "generator-error" || !report.structural_ok) return 1;
  return 0;
}

int do_suite(const std::string& dir, const rnm::RunOverrides& overrides,
             std::string report_dir, const std::string& format) {
  if (report_dir.empty()) report_dir = dir + "/reports";
  const rnm::SuiteResult result =
      rnm::run_suite(dir, report_dir, overrides, format);
  std::cout << result.summary_csv();
  std::cout << "pass=" << result.passes << " vacuous=" << result.vacuous
            << " violations=" << result.violations
            << " errors=" << result.errors << '\n'
            << "reports written to " << report_dir << '\n';
  return result.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rnmkit: fixed-point experiments on random normed modules"};
  app.set_version_flag("--version", std::string(rnm::kVersion));
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed;
  std::optional<int> horizon;
  std::string report_path;
  std::string format = "json";

  auto add_common = [&](CLI::App* cmd, bool with_report) {
    cmd->add_option("--seed", seed, "Override the scenario seed");
    cmd->add_option("--horizon", horizon, "Override the certificate horizon");
    cmd->add_option("--format", format, "Summary format")
        ->check(CLI::IsMember({"json", "csv"}));
    if (with_report) {
      cmd->add_option("--report", report_path, "Report destination");
    }
  };

  std::string scenario_path;
  CLI::App* run = app.add_subcommand("run", "Run one scenario file");
  run->add_option("scenario", scenario_path, "Scenario JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  add_common(run, true);

  std::string suite_dir;
  CLI::App* suite =
      app.add_subcommand("suite", "Run every scenario in a directory");
  suite->add_option("dir", suite_dir, "Directory of scenario JSON files")
      ->required()
      ->check(CLI::ExistingDirectory);
  add_common(suite, true);

  CLI::App* selftest =
      app.add_subcommand("selftest", "Run the built-in invariant corpus");
  selftest->add_option("--seed", seed, "Selftest seed");

  CLI11_PARSE(app, argc, argv);

  rnm::RunOverrides overrides;
  overrides.seed = seed;
  overrides.horizon = horizon;

  try {
    if (run->parsed()) {
      return do_run(scenario_path, overrides, report_path, format);
    }
    if (suite->parsed()) {
      return do_suite(suite_dir, overrides, report_path, format);
    }
    if (selftest->parsed()) {
      const int failures = rnm::run_selftest(std::cout, seed.value_or(2024));
      std::cout << (failures == 0 ? "selftest: all blocks passed\n"
                                  : "selftest: failures detected\n");
      return failures == 0 ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
