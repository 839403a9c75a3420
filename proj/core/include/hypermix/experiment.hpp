#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hypermix/bounds.hpp"
#include "hypermix/config.hpp"
#include "hypermix/diagnostics.hpp"
#include "hypermix/solver.hpp"

namespace hypermix {

struct RunRecord {
  std::uint64_t config_hash = 0;
  ExperimentConfig config;
  std::string csv_file;  // relative to the output directory
  std::map<std::string, double> exponents;  // fitted on the test window
  BoundParams bounds;                       // constants fitted on the train window
  double onset_t1 = 0.0;
  double certified_M = 0.0;   // continuum normalization (plain transform)
  double plancherel_M = 0.0;  // what the bound formulas take
  bool flow_hypothesis_ok = true;
  double wall_seconds = 0.0;
  std::vector<double> energy_residuals;  // per sample interval
  std::vector<double> productions;       // advective energy production, relative
};

/// Runs the configured experiment: integrates, certifies the low-mode floor,
/// fits the existential constants on the train window, writes
/// diagnostics.csv, run.log and runrecord.json into the output directory.
RunRecord cmd_simulate(const ExperimentConfig& cfg, bool override_horizon = false);

void write_run_record(const RunRecord& rec, const std::string& path);
RunRecord load_run_record(const std::string& path);

/// The diagnostics series back from a CSV written by cmd_simulate.
std::vector<MixingDiagnostics> load_diagnostics_csv(const std::string& path);

struct BoundCheck {
  std::string name;
  std::string direction;  // "lower" or "upper"
  double constant = 0.0;
  double worst_margin = 0.0;
  bool pass = false;
  bool applicable = true;
  std::string note;
};

struct VerifyReport {
  std::vector<BoundCheck> checks;
  bool all_pass = false;
};

/// Judges every bound on the test window of the record. Constants come from
/// the record (train-window fits). thm1_exponent, when given, replaces the
/// default -n/8 in the energy lower bound; the run must then fail unless the
/// replacement is actually valid (falsifiability hook).
VerifyReport cmd_verify(const RunRecord& rec, std::span<const MixingDiagnostics> series,
                        std::optional<double> thm1_exponent = std::nullopt);

void print_verify_report(const VerifyReport& report, std::ostream& out);

/// Tabulates every oracle at the given times as CSV, with per-oracle
/// hypothesis violations reported in-cell, plus the long-time
/// classification as a trailing comment.
void cmd_bounds(const BoundParams& params, std::span<const double> times, std::ostream& out);

BoundParams parse_bound_params(std::istream& in);
BoundParams parse_bound_params_file(const std::string& path);

/// Writes the gnuplot-ready bundle (one whitespace-separated file per
/// diagnostic, first column t, oracle overlays alongside) under
/// <out_dir>/report/.
void cmd_report(const RunRecord& rec, std::span<const MixingDiagnostics> series,
                const std::string& out_dir);

}  // namespace hypermix
