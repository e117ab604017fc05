#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rnm/partition_engine.hpp"
#include "rnm/scenario.hpp"

namespace rnm {

/// The body recentred at the origin together with the conjugated map
/// f'(u) = f(u + offset) - offset. Certificates are unchanged.
struct TranslatedInstance {
  ConvexBody body;
  AsymptoticMap map;
  RNElement offset;
};

TranslatedInstance translate_to_origin(const ConvexBody& G,
                                       const AsymptoticMap& f);

struct WeakDiagnostic {
  std::size_t functional;  // index into the coordinate dual family
  bool converged;
  double tail_gap;  // max |F(x_n) - F(x)| over the checked tail
};

/// Outcome of one demiclosedness scenario. The verdict separates vacuous
/// instances (hypotheses not met) from genuine conclusion failures.
struct DemiclosednessReport {
  std::string scenario;
  std::string config_hash;
  std::uint64_t seed = 0;
  std::string version;

  bool generator_ok = false;
  std::string generator_message;
  std::string limit_source;  // "fixed-point", "declared" or "plateau"
  bool plateau_reached = false;
  std::size_t sequence_length = 0;
  std::size_t tail_index = 0;

  bool hypothesis_weak = false;
  std::vector<WeakDiagnostic> weak_diagnostics;
  bool hypothesis_residual = false;
  double residual_tail_linf = 0.0;
  double residual_tail_l2 = 0.0;

  std::vector<double> conclusion_residual;  // per atom
  double conclusion_linf = 0.0;
  double conclusion_l2 = 0.0;
  double conclusion_tol = 0.0;

  bool structural_ok = false;
  std::string structural_message;
  std::size_t partition_pieces = 0;
  std::size_t lipschitz_violations = 0;
  bool recomposition_ok = false;

  std::string verdict;  // pass | hypotheses-not-met | theorem-violated |
                        // generator-error

  nlohmann::json to_json() const;
};

/// Builds the instance, generates the hypothesis sequence, checks both
/// hypotheses and the conclusion, and runs the decomposition sub-verdicts.
DemiclosednessReport run_demiclosedness(const ScenarioConfig& config);

/// CLI-level overrides applied on top of scenario files.
struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> horizon;
};

struct SuiteRow {
  std::string scenario;
  std::string file;
  std::string verdict;
  bool hypothesis_weak = false;
  bool hypothesis_residual = false;
  double conclusion_residual = 0.0;
  double wall_time_ms = 0.0;
  std::string error;  // nonempty when the file could not be run
};

struct SuiteResult {
  std::vector<SuiteRow> rows;
  std::size_t passes = 0;
  std::size_t vacuous = 0;
  std::size_t violations = 0;
  std::size_t errors = 0;

  int exit_code() const { return (violations == 0 && errors == 0) ? 0 : 1; }
  nlohmann::json summary_json() const;
  std::string summary_csv() const;
};

/// Runs every *.json scenario under config_dir (sorted by filename), writes
/// one report per scenario plus a summary into report_dir, and returns the
/// collected rows. format is "json" or "csv" and controls the summary file.
SuiteResult run_suite(const std::string& config_dir,
                      const std::string& report_dir, const RunOverrides& overrides,
                      const std::string& format = "json");

/// Condensed invariant corpus; prints one line per block and returns the
/// number of failing blocks.
int run_selftest(std::ostream& out, std::uint64_t seed);

}  // namespace rnm
