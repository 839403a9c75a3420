#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace hypermix {

/// Full experiment description, read from a flat key-value file with dotted
/// section names ('#' starts a comment). Unset keys take the defaults below.
struct ExperimentConfig {
  struct {  // grid
    int n = 2;
    int N = 256;
    double L = 100.0;
  } grid;
  struct {  // scheme
    double kappa = 1.0;
    double cfl = 0.5;
    bool dealias = true;
    double step_growth = 0.006;
  } scheme;
  struct {  // initial data (gaussian family)
    std::string kind = "gaussian";
    double sigma = 2.0;
    double amplitude = 1.0;
    double delta = 0.5;
  } initial;
  struct {  // flow
    std::string profile = "zero";  // zero | taylor_green | shear | user_snapshot
    double a0 = 0.0;
    double alpha = 0.875;
    int m = 1;
    std::string snapshot_dir;
  } flow;
  struct {  // times
    double t_end = 2000.0;
    double sample_ratio = 1.1;
    std::vector<double> snapshot_times;
  } times;
  struct {  // bounds
    double beta = 0.0;  // 0: use the default floor formula
    double epsilon = 0.01;
    double fit_train_lo = 10.0;
    double fit_train_hi = 100.0;
    double fit_test_lo = 100.0;
    double fit_test_hi = 2000.0;
  } bounds;
  struct {  // output
    std::string directory = "out";
    bool emit_snapshots = false;
  } output;
  std::uint64_t seed = 0;
};

struct ConfigError : std::runtime_error {
  std::vector<std::string> violations;
  explicit ConfigError(std::vector<std::string> v);
};

/// Parses the key-value file; unknown keys and malformed values are
/// collected and thrown as a ConfigError listing every offender.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config_file(const std::string& path);

/// Every violated field by name, empty when valid. Horizon violations are
/// included unless override_horizon is set.
std::vector<std::string> validate_config(const ExperimentConfig& cfg, bool override_horizon);

/// Largest t_end the torus supports: the diffusive length (kappa t)^{1/4}
/// must stay under L/4 and the decaying nonzero-mode energy must still
/// dominate the conserved-mean floor at t_end.
double diffusive_horizon(const ExperimentConfig& cfg);
double floor_horizon(const ExperimentConfig& cfg);

/// FNV-1a over the canonical "key=value" serialization of the effective
/// config (sorted keys, 17-digit numbers), so comment and ordering changes
/// do not move the hash.
std::uint64_t config_hash(const ExperimentConfig& cfg);

/// The canonical serialization itself (also the format written back out).
std::string canonical_config(const ExperimentConfig& cfg);

}  // namespace hypermix
