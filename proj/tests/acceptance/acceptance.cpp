// End-to-end acceptance suite. Runs every criterion at its stated tolerance
// and prints one pass/fail line each; exits nonzero when any fail.
//
// argv[1]: path to the hypermix CLI (for the exit-code criterion)
// argv[2]: path to the shipped configs/ directory

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "hypermix/experiment.hpp"
#include "hypermix/flows.hpp"
#include "hypermix/kernel.hpp"
#include "hypermix/transform.hpp"
#include "test_oracles.hpp"

using namespace hypermix;

namespace oracles {
std::string scratch_dir(const std::string& tag) {
  auto dir = std::filesystem::temp_directory_path() / ("hypermix_accept_" + tag);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir.string();
}
}  // namespace oracles

namespace {

int failures = 0;

void criterion(const std::string& name, bool pass, const std::string& detail) {
  std::printf("%s criterion %s: %s\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct PureRun {
  RunRecord rec;
  std::vector<MixingDiagnostics> series;
};

PureRun run_config(const std::string& path, const std::string& out_dir) {
  ExperimentConfig cfg = parse_config_file(path);
  cfg.output.directory = out_dir;
  PureRun r;
  r.rec = cmd_simulate(cfg);
  r.series = load_diagnostics_csv(out_dir + "/" + r.rec.csv_file);
  return r;
}

bool interpolation_holds(const std::vector<MixingDiagnostics>& series, double box_len, int dim,
                         double* worst_out) {
  double worst = -1e300;
  for (const auto& d : series) {
    double zero_energy = std::norm(d.zero_mode) / std::pow(box_len, dim);
    double nz2 = d.l2 * d.l2 - zero_energy;
    double slack = nz2 - d.grad_l2 * d.hminus1;
    worst = std::max(worst, slack);
  }
  *worst_out = worst;
  return worst <= 1e-12;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  const std::string configs = argc > 2 ? argv[2] : "configs";

  // ---- reference decay runs -------------------------------------------
  PureRun pure2 = run_config(configs + "/pure_n2.cfg", oracles::scratch_dir("pure_n2"));
  PureRun pure3 = run_config(configs + "/pure_n3.cfg", oracles::scratch_dir("pure_n3"));

  {  // 1: hyperdiffusion decay exponents
    double e2 = pure2.rec.exponents.at("theta_l2");
    criterion("1 (decay exponent n=2)", std::abs(e2 + 0.25) <= 0.02,
              "fitted " + fmt(e2) + " target -0.25 +/- 0.02");
    double e3 = pure3.rec.exponents.at("theta_l2");
    criterion("1 (decay exponent n=3)", std::abs(e3 + 0.375) <= 0.03,
              "fitted " + fmt(e3) + " target -0.375 +/- 0.03");
  }

  {  // 2a: explicit reference lower bound with the certified floor
    auto check_lower = [](const PureRun& run) {
      double worst = 1e300;
      int used = 0;
      for (const auto& d : run.series) {
        if (d.t < 1.0) continue;
        ++used;
        worst = std::min(worst, d.l2 / reference_lower_bound(run.rec.bounds, d.t) - 1.0);
      }
      return std::pair<double, int>(worst, used);
    };
    auto [w2, n2] = check_lower(pure2);
    criterion("2a (reference bound n=2)", n2 > 0 && w2 >= 0.0,
              "worst margin " + fmt(w2) + " over " + std::to_string(n2) + " samples in [1, 1e4]");
    auto [w3, n3] = check_lower(pure3);
    criterion("2a (reference bound n=3)", n3 > 0 && w3 >= 0.0,
              "worst margin " + fmt(w3) + " over " + std::to_string(n3) + " samples");

    // the same verdict through the verification pipeline
    VerifyReport pure_verdicts = cmd_verify(pure2.rec, pure2.series);
    const BoundCheck* lemma2 = nullptr;
    for (const auto& c : pure_verdicts.checks)
      if (c.name == "lemma2_lower") lemma2 = &c;
    criterion("2a (cmd_verify agrees)", lemma2 && lemma2->applicable && lemma2->pass,
              lemma2 ? "lemma2_lower margin " + fmt(lemma2->worst_margin) : "verdict missing");
  }

  // ---- default advected scenario --------------------------------------
  std::string adv_dir = oracles::scratch_dir("default");
  PureRun adv = run_config(configs + "/default.cfg", adv_dir);
  VerifyReport verdicts = cmd_verify(adv.rec, adv.series);

  {  // 2b: energy lower bound past the onset time on the test window
    const BoundCheck* thm1 = nullptr;
    for (const auto& c : verdicts.checks)
      if (c.name == "thm1_lower") thm1 = &c;
    criterion("2b (energy bound, advected)", thm1 && thm1->pass,
              thm1 ? "worst margin " + fmt(thm1->worst_margin) + " beyond onset t1 = " +
                         fmt(adv.rec.onset_t1)
                   : "verdict missing");
  }

  {  // 3: spectral propagation against the quadrature-kernel convolution
    Grid g = make_grid(2, 128, 64.0);
    auto [theta0, tr] = gaussian_theta0(g, 2.0, 1.0);
    RealField conv = kernel_convolve(theta0, 1.0);
    SpectralField spec = forward(theta0);
    std::vector<double> sym(g.size());
    for (std::size_t i = 0; i < sym.size(); ++i) {
      double k2 = g.wavenumber_sq(i);
      sym[i] = std::exp(-k2 * k2);
    }
    RealField via_spec = inverse(apply_multiplier(spec, sym));
    double diff2 = 0.0, ref2 = 0.0;
    for (std::size_t i = 0; i < conv.values.size(); ++i) {
      double d = conv.values[i] - via_spec.values[i];
      diff2 += d * d;
      ref2 += via_spec.values[i] * via_spec.values[i];
    }
    double rel = std::sqrt(diff2 / ref2);
    criterion("3 (kernel/solver consistency)", rel <= 1e-6,
              "relative L2 discrepancy " + fmt(rel) + " at kappa*t = 1");
  }

  {  // 4: kernel identities
    double worst_res = 0.0;
    for (int dim : {1, 2, 3})
      for (double eta = 0.0; eta <= 5.0 + 1e-9; eta += 0.1)
        worst_res = std::max(worst_res, std::abs(recurrence_residual(dim, eta)));
    criterion("4 (derivative recurrence)", worst_res <= 1e-6,
              "max residual " + fmt(worst_res) + " on eta in [0,5], n in {1,2,3}");

    double f20 = profile_f(2, 0.0);
    criterion("4 (f_2(0) = sqrt(pi)/4)", std::abs(f20 - std::sqrt(M_PI) / 4.0) <= 1e-8,
              "value " + fmt(f20));

    bool envelope_ok = true;
    double worst_gap = 0.0;
    for (int dim : {1, 2, 3}) {
      auto [amp, rate] = envelope_fit(dim);
      for (double eta = 0.0; eta <= 10.0 + 1e-9; eta += 0.01) {
        double gap = std::abs(profile_f(dim, eta)) -
                     amp * std::exp(-rate * std::pow(eta, 4.0 / 3.0));
        worst_gap = std::max(worst_gap, gap);
        if (gap > 0.0) envelope_ok = false;
      }
    }
    criterion("4 (stretched-exponential envelope)", envelope_ok,
              "worst overshoot " + fmt(worst_gap) + " on eta in [0,10], n in {1,2,3}");

    bool lp_ok = true;
    std::string lp_note;
    for (int dim : {2, 3})
      for (double p : {1.0, 2.0, 4.0}) {
        double expo = kernel_lp_exponent(dim, p);
        double measured =
            std::log(kernel_lp_norm(dim, p, 100.0) / kernel_lp_norm(dim, p, 1.0)) /
            std::log(100.0);
        bool ok = p == 1.0 ? std::abs(kernel_lp_norm(dim, 1.0, 100.0) /
                                          kernel_lp_norm(dim, 1.0, 1.0) -
                                      1.0) <= 0.01
                           : std::abs(measured / expo - 1.0) <= 0.01;
        if (!ok) {
          lp_ok = false;
          lp_note = "n=" + std::to_string(dim) + " p=" + fmt(p) + " measured " + fmt(measured);
        }
      }
    criterion("4 (Lp scaling exponents)", lp_ok,
              lp_ok ? "all exponents -(n/4)(1-1/p) within 1%" : lp_note);
  }

  {  // 5: discrete energy identity on the advected run
    double worst_res = 0.0, worst_prod = 0.0;
    for (double r : adv.rec.energy_residuals) worst_res = std::max(worst_res, r);
    for (double p : adv.rec.productions) worst_prod = std::max(worst_prod, p);
    criterion("5 (energy identity)", worst_res <= 1e-6,
              "worst per-sample residual " + fmt(worst_res));
    criterion("5 (advective production)", worst_prod <= 1e-8,
              "worst relative production " + fmt(worst_prod));
  }

  {  // 6: interpolation inequality on every snapshot of every run
    double w1, w2, w3;
    bool ok = interpolation_holds(pure2.series, 100.0, 2, &w1) &&
              interpolation_holds(pure3.series, 50.0, 3, &w2) &&
              interpolation_holds(adv.series, 100.0, 2, &w3);
    criterion("6 (interpolation inequality)", ok,
              "worst slack " + fmt(std::max({w1, w2, w3})));

    Grid g = make_grid(2, 32, 2.0 * M_PI);
    RealField shell = make_real_field(g);
    std::size_t idx = 0;
    for (int a = 0; a < g.npts; ++a)
      for (int b = 0; b < g.npts; ++b, ++idx) shell.values[idx] = std::sin(2.0 * g.coord(a));
    SpectralField sh = forward(shell);
    double nz = l2_norm_nonzero_modes(sh);
    double gap = std::abs(nz * nz - grad_norm(sh) * hminus1_norm(sh));
    criterion("6 (single-shell equality)", gap <= 1e-12 * nz * nz,
              "relative gap " + fmt(gap / (nz * nz)));
  }

  {  // 7: oracle suite
    struct Cell { int n; double nu, c; LimitClass f, g; };
    const LimitClass Z = LimitClass::zero, C = LimitClass::constant, I = LimitClass::infinity;
    std::vector<Cell> cells;
    for (double c : {1.0 / 16, 1.0 / 8, 1.0 / 4}) {
      cells.push_back({2, 0.5, c, Z, Z});
      cells.push_back({2, 1.0, c, C, I});
      cells.push_back({3, 0.5, c, Z, Z});
      cells.push_back({3, 1.0, c, Z, I});
    }
    cells.push_back({2, 2.0, 1.0 / 16, I, I});
    cells.push_back({2, 2.0, 1.0 / 8, I, I});
    cells.push_back({2, 2.0, 1.0 / 4, I, I});
    cells.push_back({3, 2.0, 1.0 / 16, Z, I});
    cells.push_back({3, 2.0, 1.0 / 8, C, I});
    cells.push_back({3, 2.0, 1.0 / 4, I, I});
    bool table_ok = true;
    for (const auto& cell : cells) {
      AsymptoticClass cls = classify_long_time(cell.n, cell.nu, cell.c);
      if (cls.f_inf != cell.f || cls.g_inf != cell.g) table_ok = false;
    }
    criterion("7 (long-time classification table)", table_ok,
              std::to_string(cells.size()) + " cells reproduced");

    RateIteration it = bootstrap_decay_rates(2, 0.6);
    bool seq_ok = it.rates.size() == 3 && std::abs(it.rates[0]) < 1e-12 &&
                  std::abs(it.rates[1] - 0.1) < 1e-12 && std::abs(it.rates[2] - 0.2) < 1e-12 &&
                  std::abs(it.final_rate - 0.25) < 1e-15;
    bool term_ok = true;
    for (double alpha : {0.51, 0.6, 0.9}) {
      try {
        bootstrap_decay_rates(2, alpha);
      } catch (...) {
        term_ok = false;
      }
    }
    for (double alpha : {0.3, 0.5}) {
      try {
        bootstrap_decay_rates(2, alpha);
        term_ok = false;
      } catch (const std::domain_error&) {
      }
    }
    criterion("7 (rate bootstrap iteration)", seq_ok && term_ok,
              "sequence 0, 0.1, 0.2 capped at 0.25; terminates iff alpha > (6-n)/8");

    std::mt19937 gen(2024);
    std::uniform_real_distribution<double> s_dist(0.1, 3.0);
    std::uniform_real_distribution<double> t_dist(0.0, 200.0);
    bool dom_ok = true;
    double worst = -1e300;
    for (int i = 0; i < 100; ++i) {
      double s = i % 10 == 0 ? 1.0 : s_dist(gen);
      double t = t_dist(gen);
      double integral = oracles::simpson(
          [s](double u) { return std::pow(1.0 + u, -s); }, 0.0, t, 4000);
      double gap = integral - integral_majorant(s, 0.01, t);
      worst = std::max(worst, gap);
      if (gap > 1e-9) dom_ok = false;
    }
    criterion("7 (integral majorant dominates)", dom_ok,
              "worst gap " + fmt(worst) + " over 100 random (s, t)");
  }

  {  // 8: measured gradient never exceeds its fitted upper bound on test
    const BoundCheck* lemma4 = nullptr;
    for (const auto& c : verdicts.checks)
      if (c.name == "lemma4_upper") lemma4 = &c;
    criterion("8 (gradient bound consistency)", lemma4 && lemma4->pass,
              lemma4 ? "worst margin " + fmt(lemma4->worst_margin) + " (constant fitted on train)"
                     : "verdict missing");
  }

  {  // 9: falsifiability through the real CLI
    VerifyReport tampered = cmd_verify(adv.rec, adv.series, -0.5);
    bool neg_margin = false;
    for (const auto& c : tampered.checks)
      if (!c.pass && c.worst_margin < 0.0) neg_margin = true;
    bool lib_ok = !tampered.all_pass && neg_margin;

    bool cli_ok = true;
    std::string note = "library margin negative";
    if (!cli.empty()) {
      std::string cmd = cli + " verify --record " + adv_dir +
                        "/runrecord.json --thm1-exponent -0.5 > " + adv_dir + "/verify.out 2>&1";
      int rc = std::system(cmd.c_str());
      int exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
      cli_ok = exit_code == 1;
      note = "cli exit code " + std::to_string(exit_code) + ", library margin negative: " +
             (neg_margin ? "yes" : "no");
    }
    criterion("9 (falsifiability)", lib_ok && cli_ok, note);
  }

  std::printf("%s: %d criterion check(s) failed\n", failures == 0 ? "ALL PASS" : "RESULT",
              failures);
  return failures == 0 ? 0 : 1;
}
