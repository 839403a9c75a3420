// Command-line driver: simulate / bounds / verify / report / kernel.
// Exit codes: 0 success or all bounds pass, 1 a bound failed, 2 configuration
// error, 3 numerical abort.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "hypermix/experiment.hpp"
#include "hypermix/kernel.hpp"

namespace {

int print_config_error(const hypermix::ConfigError& e) {
  std::cerr << "configuration error:\n";
  for (const auto& v : e.violations) std::cerr << "  " << v << "\n";
  return 2;
}

std::string record_dir(const std::string& record_path) {
  auto dir = std::filesystem::path(record_path).parent_path().string();
  return dir.empty() ? "." : dir;
}

std::vector<double> parse_times(const std::string& spec) {
  std::vector<double> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stod(item));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pseudo-spectral advection-hyperdiffusion laboratory"};
  app.require_subcommand(1);

  // ------------------------------------------------------------- simulate
  auto* sim = app.add_subcommand("simulate", "run an experiment from a config file");
  std::string sim_config, sim_out;
  bool sim_override = false;
  std::optional<std::uint64_t> sim_seed;
  sim->add_option("--config", sim_config, "experiment config file")->required();
  sim->add_option("--out", sim_out, "output directory (overrides output.directory)");
  sim->add_flag("--override-horizon", sim_override, "accept t_end beyond the validity horizons");
  sim->add_option("--seed", sim_seed, "seed recorded with the run");

  // --------------------------------------------------------------- bounds
  auto* bnd = app.add_subcommand("bounds", "tabulate every closed-form oracle");
  std::string bnd_params, bnd_times = "0,1,10,100,1000", bnd_out;
  bnd->add_option("--params", bnd_params, "bound parameter file")->required();
  bnd->add_option("--times", bnd_times, "comma-separated evaluation times");
  bnd->add_option("--out", bnd_out, "output directory (default: stdout)");

  // --------------------------------------------------------------- verify
  auto* ver = app.add_subcommand("verify", "judge a finished run against the oracles");
  std::string ver_record, ver_params;
  std::optional<double> ver_thm1;
  ver->add_option("--record", ver_record, "runrecord.json of a finished run")->required();
  ver->add_option("--params", ver_params, "override the recorded bound parameters");
  ver->add_option("--thm1-exponent", ver_thm1,
                  "replace the energy lower-bound exponent (falsifiability hook)");

  // --------------------------------------------------------------- report
  auto* rep = app.add_subcommand("report", "emit gnuplot-ready plot data");
  std::string rep_record, rep_out;
  rep->add_option("--record", rep_record, "runrecord.json of a finished run")->required();
  rep->add_option("--out", rep_out, "output directory (default: the record's directory)");

  // --------------------------------------------------------------- kernel
  auto* ker = app.add_subcommand("kernel", "radial kernel utilities");
  auto* tab = ker->add_subcommand("tabulate", "CSV of f_n, envelope and recurrence residual");
  int tab_n = 2;
  double tab_eta_max = 10.0, tab_step = 0.1;
  std::string tab_out;
  tab->add_option("--n", tab_n, "dimension (2 or 3)")->required();
  tab->add_option("--eta-max", tab_eta_max, "largest eta");
  tab->add_option("--step", tab_step, "eta step");
  tab->add_option("--out", tab_out, "output file (default: stdout)");
  ker->require_subcommand(1);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim) {
      hypermix::ExperimentConfig cfg = hypermix::parse_config_file(sim_config);
      if (!sim_out.empty()) cfg.output.directory = sim_out;
      if (sim_seed) cfg.seed = *sim_seed;
      hypermix::RunRecord rec = hypermix::cmd_simulate(cfg, sim_override);
      std::cout << "run complete: " << cfg.output.directory << "/runrecord.json (hash "
                << rec.config_hash << ", " << rec.wall_seconds << " s)\n";
      return 0;
    }
    if (*bnd) {
      hypermix::BoundParams params = hypermix::parse_bound_params_file(bnd_params);
      std::vector<double> times = parse_times(bnd_times);
      if (bnd_out.empty()) {
        hypermix::cmd_bounds(params, times, std::cout);
      } else {
        std::filesystem::create_directories(bnd_out);
        std::ofstream out(bnd_out + "/bounds.csv", std::ios::trunc);
        hypermix::cmd_bounds(params, times, out);
        std::cout << "wrote " << bnd_out << "/bounds.csv\n";
      }
      return 0;
    }
    if (*ver) {
      hypermix::RunRecord rec = hypermix::load_run_record(ver_record);
      if (!ver_params.empty()) rec.bounds = hypermix::parse_bound_params_file(ver_params);
      auto series =
          hypermix::load_diagnostics_csv(record_dir(ver_record) + "/" + rec.csv_file);
      hypermix::VerifyReport report = hypermix::cmd_verify(rec, series, ver_thm1);
      hypermix::print_verify_report(report, std::cout);
      return report.all_pass ? 0 : 1;
    }
    if (*rep) {
      hypermix::RunRecord rec = hypermix::load_run_record(rep_record);
      std::string dir = rep_out.empty() ? record_dir(rep_record) : rep_out;
      auto series =
          hypermix::load_diagnostics_csv(record_dir(rep_record) + "/" + rec.csv_file);
      hypermix::cmd_report(rec, series, dir);
      std::cout << "wrote " << dir << "/report/\n";
      return 0;
    }
    if (*tab) {
      if (tab_out.empty()) {
        hypermix::tabulate_profile(tab_n, tab_eta_max, tab_step, std::cout);
      } else {
        std::ofstream out(tab_out, std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tab_out);
        hypermix::tabulate_profile(tab_n, tab_eta_max, tab_step, out);
      }
      return 0;
    }
  } catch (const hypermix::ConfigError& e) {
    return print_config_error(e);
  } catch (const hypermix::SolverAbort& e) {
    std::cerr << "numerical abort: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
