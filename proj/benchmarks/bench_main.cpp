// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include <cmath>

#include "irscrb/ao.hpp"
#include "irscrb/crb_extended.hpp"
#include "irscrb/rng.hpp"

using namespace irscrb;

namespace {

constexpr double kPi = 3.14159265358979323846;

SystemConfig square(int n) {
  SystemConfig cfg;
  cfg.M = cfg.N = cfg.K = n;
  cfg.P0 = dbm_to_watts(30);
  cfg.sigma2_R = dbm_to_watts(-90);
  return cfg;
}

// max <H, X> over unit-trace Hermitian PSD X of order n
void BM_EigenvalueSdp(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  CMat H(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) H(r, c) = complex_normal_at(1, Stream::user, r * n + c);
  H = (0.5 * (H + H.adjoint())).eval();
  ConicProgram prog;
  const int b = prog.add_block(2 * n);
  prog.objective.add(b, -0.5 * embed_hermitian(H));
  LinearConstraint tr;
  tr.functional.add(b, 0.5 * RMat::Identity(2 * n, 2 * n));
  tr.bound = 1.0;
  prog.equalities.push_back(tr);
  for (auto _ : state) benchmark::DoNotOptimize(solve(prog).primal_objective);
  state.SetComplexityN(n);
}
BENCHMARK(BM_EigenvalueSdp)->RangeMultiplier(2)->Range(4, 64)->Complexity()->Unit(benchmark::kMillisecond);

void BM_IrsSubproblem(benchmark::State& state) {
  const SystemConfig cfg = square(static_cast<int>(state.range(0)));
  const auto ch = rician_channel(cfg, 3);
  const CVec a = target_steering(kPi / 3, cfg.N, cfg.d_hat, cfg.lambda_R);
  const CMat Rx = TransmitCovariance::isotropic(cfg.M, cfg.P0).R;
  for (auto _ : state) benchmark::DoNotOptimize(irs_subproblem(Rx, a, ch.G, cfg.K).objective);
  state.SetComplexityN(cfg.N);
}
BENCHMARK(BM_IrsSubproblem)->RangeMultiplier(2)->Range(4, 32)->Complexity()->Unit(benchmark::kMillisecond);

void BM_AoMinimize(benchmark::State& state) {
  const SystemConfig cfg = square(static_cast<int>(state.range(0)));
  const auto ch = rician_channel(cfg, 5);
  const auto scene = make_scene(kPi / 3, cplx(1.0, 0.0), cfg);
  const CVec a = target_steering(scene.theta, cfg.N, cfg.d_hat, cfg.lambda_R);
  const PhaseProfile init = default_initial_phases(a, ch.G);
  int iters = 0;
  for (auto _ : state) {
    const auto r = ao_minimize_crb(scene, ch.G, cfg, init);
    iters = r.iterations;
    benchmark::DoNotOptimize(r.crb);
  }
  state.counters["ao_iterations"] = iters;
  state.SetComplexityN(cfg.N);
}
BENCHMARK(BM_AoMinimize)->RangeMultiplier(2)->Range(4, 16)->Complexity()->Unit(benchmark::kMillisecond);

void BM_ExtendedOptimal(benchmark::State& state) {
  SystemConfig cfg = square(static_cast<int>(state.range(0)));
  cfg.M = 2 * cfg.N;
  const auto ch = rician_channel(cfg, 7);
  for (auto _ : state)
    benchmark::DoNotOptimize(crb_extended_opt(ch.G, cfg.P0, cfg.K, cfg.T, cfg.sigma2_R).crb);
  state.SetComplexityN(cfg.N);
}
BENCHMARK(BM_ExtendedOptimal)->RangeMultiplier(2)->Range(4, 128)->Complexity();

}  // namespace
BENCHMARK_MAIN();
