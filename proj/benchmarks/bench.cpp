#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "hypermix/bounds.hpp"
#include "hypermix/flows.hpp"
#include "hypermix/kernel.hpp"
#include "hypermix/solver.hpp"
#include "hypermix/transform.hpp"

using namespace hypermix;

namespace {

RealField random_field(const Grid& g, unsigned seed) {
  RealField f = make_real_field(g);
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (double& v : f.values) v = dist(gen);
  return f;
}

}  // namespace

static void BM_ForwardTransform(benchmark::State& state) {
  Grid g = make_grid(2, static_cast<int>(state.range(0)), 2.0 * M_PI);
  RealField f = random_field(g, 1);
  for (auto _ : state) benchmark::DoNotOptimize(forward(f));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(g.size()));
}
BENCHMARK(BM_ForwardTransform)->Arg(64)->Arg(128)->Arg(256);

static void BM_AdvectionRhs(benchmark::State& state) {
  Grid g = make_grid(2, static_cast<int>(state.range(0)), 2.0 * M_PI);
  SpectralField theta = forward(random_field(g, 2));
  auto u = taylor_green(g, 1);
  SchemeConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(advection_rhs(theta, u, cfg));
}
BENCHMARK(BM_AdvectionRhs)->Arg(64)->Arg(128)->Arg(256);

static void BM_SolverStep(benchmark::State& state) {
  Grid g = make_grid(2, static_cast<int>(state.range(0)), 2.0 * M_PI);
  RealField theta0 = random_field(g, 3);
  FlowSpec flow = make_separable_flow(FlowProfile::taylor_green, g, 1, 1.0, 0.875);
  SchemeConfig cfg;
  cfg.kappa = 1.0;
  SolverState st = init_state(theta0);
  for (auto _ : state) {
    st = step(st, flow, cfg, 1e-3);
    benchmark::DoNotOptimize(st.theta_hat.coeffs.data());
  }
}
BENCHMARK(BM_SolverStep)->Arg(64)->Arg(128)->Arg(256);

static void BM_ProfileF(benchmark::State& state) {
  double eta = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(profile_f(2, eta));
}
BENCHMARK(BM_ProfileF)->Arg(0)->Arg(2)->Arg(8);

static void BM_BoundOracles(benchmark::State& state) {
  BoundParams p;
  p.dim = 2;
  p.alpha = 0.875;
  p.nu = 0.875;
  p.c_grad_u = 0.1;
  double t = 0.0;
  for (auto _ : state) {
    t += 1.0;
    benchmark::DoNotOptimize(energy_lower_bound(p, t));
    benchmark::DoNotOptimize(gradient_upper_bound(p, t));
    benchmark::DoNotOptimize(mixing_lower_bounds(p, t));
  }
}
BENCHMARK(BM_BoundOracles);

BENCHMARK_MAIN();
