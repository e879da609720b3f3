#include <cmath>

#include <benchmark/benchmark.h>

#include "curvint/dynamics.hpp"
#include "curvint/invariants.hpp"
#include "curvint/verify.hpp"

using namespace curvint;

namespace {

SystemSpec pw_for(double kappa, int p, int q) {
  return SystemSpec::pw(Curvature(kappa), 1.0, 0.8, 0.3, Rational(p, q));
}

const PhaseState kState{1.0, 1.0, 0.2, 0.7};

}  // namespace

static void BM_Integrate(benchmark::State& st) {
  const auto spec = pw_for(static_cast<double>(st.range(0)), 3, 2);
  std::size_t steps = 0;
  for (auto _ : st) {
    const Trajectory traj = integrate(kState, spec, 100.0);
    steps = traj.size();
    benchmark::DoNotOptimize(traj.states().back());
  }
  st.counters["steps"] = static_cast<double>(steps);
}
BENCHMARK(BM_Integrate)->Arg(-1)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_Integrate_Tolerance(benchmark::State& st) {
  const auto spec = pw_for(1.0, 2, 1);
  IntegratorConfig cfg;
  cfg.rel_tol = std::pow(10.0, -static_cast<double>(st.range(0)));
  cfg.abs_tol = cfg.rel_tol * 1e-2;
  for (auto _ : st) benchmark::DoNotOptimize(integrate(kState, spec, 100.0, cfg).size());
}
BENCHMARK(BM_Integrate_Tolerance)->DenseRange(8, 13)->Unit(benchmark::kMillisecond);

static void BM_Hamiltonian(benchmark::State& st) {
  const auto spec = pw_for(1.0, 3, 2);
  PhaseState s = kState;
  for (auto _ : st) {
    benchmark::DoNotOptimize(hamiltonian(s, spec));
    s.p_r += 1e-12;
  }
}
BENCHMARK(BM_Hamiltonian);

static void BM_KConstant(benchmark::State& st) {
  const auto spec = pw_for(1.0, static_cast<int>(st.range(0)), 2);
  for (auto _ : st) benchmark::DoNotOptimize(k_constant(kState, spec));
}
BENCHMARK(BM_KConstant)->Arg(1)->Arg(3)->Arg(9);

static void BM_Bracket(benchmark::State& st) {
  const auto spec = pw_for(1.0, 2, 1);
  const PhaseFunction H = [spec](const PhaseState& s) { return hamiltonian(s, spec); };
  const PhaseFunction K = [spec](const PhaseState& s) { return k_constant(s, spec).real(); };
  for (auto _ : st) benchmark::DoNotOptimize(poisson_bracket_fd(K, H, kState));
}
BENCHMARK(BM_Bracket);

static void BM_DenseStateAt(benchmark::State& st) {
  const auto spec = pw_for(1.0, 2, 1);
  const Trajectory traj = integrate(kState, spec, 100.0);
  double t = 0.0;
  for (auto _ : st) {
    benchmark::DoNotOptimize(traj.state_at(t));
    t = t > 99.0 ? 0.0 : t + 0.37;
  }
}
BENCHMARK(BM_DenseStateAt);
BENCHMARK_MAIN();
