// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "irscrb/ao.hpp"
#include "test_support.hpp"

using namespace irscrb;
using namespace irscrb::testing;
using Catch::Approx;

namespace {

struct Setup {
  SystemConfig cfg;
  PointTargetScene scene;
  CVec a;
  CMat G;
};

Setup make_setup(int M, int N, int K, std::uint64_t seed) {
  Setup s;
  s.cfg.M = M;
  s.cfg.N = N;
  s.cfg.K = K;
  s.cfg.sigma2_R = dbm_to_watts(-90);
  s.scene = make_scene(60.0 * 3.14159265358979323846 / 180.0, cplx(1.0, 0.0), s.cfg);
  s.a = target_steering(s.scene.theta, N, s.cfg.d_hat, s.cfg.lambda_R);
  s.G = rician_channel(s.cfg, seed).G;
  return s;
}

std::vector<double> ranks(const std::vector<double>& x) {
  std::vector<std::size_t> idx(x.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](auto i, auto j) { return x[i] < x[j]; });
  std::vector<double> r(x.size());
  for (std::size_t k = 0; k < idx.size(); ++k) r[idx[k]] = static_cast<double>(k);
  return r;
}

}  // namespace

TEST_CASE("relaxed objective") {
  const Setup s = make_setup(3, 5, 4, 1);
  double worst = 0.0;
  for (std::uint64_t k = 0; k < 20; ++k) {
    const auto Rx = random_covariance(3, 1.0, k);
    const auto v = random_phases(5, k);
    const double f = sdr_objective(Rx.R, v.lift(), s.a, s.G, 4);
    // K f equals the closed-form bracket: crb = prefactor / (K f)
    const double crb = crb_point_closed(s.scene, Rx, v, s.G, s.cfg);
    worst = std::max(worst, rel_diff(crb, crb_point_prefactor(s.scene, s.cfg) / (4 * f)));
    CHECK(sdr_objective(2.5 * Rx.R, v.lift(), s.a, s.G, 4) == Approx(2.5 * f).epsilon(1e-12));
  }
  CHECK(worst < 1e-10);

  // maximizing f and minimizing the bound order pairs identically
  std::vector<double> fs, crbs;
  for (std::uint64_t k = 0; k < 100; ++k) {
    const auto Rx = random_covariance(3, 1.0, 500 + k);
    const auto v = random_phases(5, 500 + k);
    fs.push_back(sdr_objective(Rx.R, v.lift(), s.a, s.G, 4));
    crbs.push_back(-crb_point_closed(s.scene, Rx, v, s.G, s.cfg));
  }
  CHECK(ranks(fs) == ranks(crbs));

  CHECK_THROWS_AS(sdr_objective(CMat::Zero(3, 3), CMat::Identity(5, 5), s.a, s.G, 4), NumericalError);
  CHECK_THROWS_AS(sdr_objective(CMat::Identity(2, 2), CMat::Identity(5, 5), s.a, s.G, 4), std::invalid_argument);
}

TEST_CASE("transmit subproblem") {
  const Setup s = make_setup(4, 4, 4, 2);
  const CMat V = random_phases(4, 3).lift();
  const auto res = transmit_subproblem(V, s.a, s.G, 4, s.cfg.P0);
  CHECK(res.report.status == SolveStatus::optimal);
  CHECK(res.report.kkt.max() <= 1e-8);
  CHECK(res.Rx.R.trace().real() == Approx(s.cfg.P0).epsilon(1e-6));
  CHECK_NOTHROW(res.Rx.validate());
  for (std::uint64_t k = 0; k < 50; ++k) {
    const auto other = random_covariance(4, s.cfg.P0 * uniform(k, 0, 0.1, 1.0), 40 + k);
    CHECK(res.objective >= sdr_objective(other.R, V, s.a, s.G, 4) * (1 - 1e-9));
  }

  const Setup one = make_setup(1, 4, 4, 2);
  const auto r1 = transmit_subproblem(V, one.a, one.G, 4, 0.3);
  CHECK(r1.Rx.R.rows() == 1);
  CHECK(r1.Rx.R(0, 0).real() == Approx(0.3).epsilon(1e-9));
}

TEST_CASE("IRS subproblem") {
  const Setup s = make_setup(3, 5, 4, 4);
  const auto Rx = random_covariance(3, 1.0, 5);
  const auto res = irs_subproblem(Rx.R, s.a, s.G, 4);
  CHECK(res.report.status == SolveStatus::optimal);
  CHECK(res.report.kkt.max() <= 1e-8);
  for (int n = 0; n < 5; ++n) CHECK(std::abs(res.V(n, n) - 1.0) <= 1e-8);
  // relaxation dominance over rank-one feasible points
  for (std::uint64_t k = 0; k < 100; ++k)
    CHECK(res.objective >= sdr_objective(Rx.R, random_phases(5, 900 + k).lift(), s.a, s.G, 4) * (1 - 1e-9));

  const Setup single = make_setup(2, 1, 3, 6);
  const auto Rx1 = random_covariance(2, 1.0, 6);
  const auto r1 = irs_subproblem(Rx1.R, single.a, single.G, 3);
  CHECK(std::abs(r1.V(0, 0) - 1.0) < 1e-12);
  CHECK(r1.objective == Approx(sdr_objective(Rx1.R, CMat::Ones(1, 1), single.a, single.G, 3)).epsilon(1e-12));
}

TEST_CASE("Gaussian randomization") {
  const Setup s = make_setup(2, 4, 4, 7);
  const auto Rx = random_covariance(2, 1.0, 7);

  const auto v = random_phases(4, 8);
  const auto r1 = gaussian_randomization(v.lift(), Rx.R, s.a, s.G, 4, 10, 1);
  CHECK(r1.best_index == -1);
  const cplx phase = r1.v.v.dot(v.v) / 4.0;  // common global phase
  CHECK(std::abs(std::abs(phase) - 1.0) < 1e-10);
  CHECK((r1.v.v * phase - v.v).norm() < 1e-8);

  const CMat V = irs_subproblem(Rx.R, s.a, s.G, 4).V;
  CMat W = V;
  W += 0.3 * CMat::Identity(4, 4);  // make sure the rank is > 1
  W = W.diagonal().real().cwiseSqrt().cwiseInverse().cast<cplx>().asDiagonal() * W *
      W.diagonal().real().cwiseSqrt().cwiseInverse().cast<cplx>().asDiagonal();
  double prev = -1.0;
  for (int n : {1, 5, 20, 80, 200}) {
    const auto r = gaussian_randomization(W, Rx.R, s.a, s.G, 4, n, 11);
    CHECK(r.objective >= prev);
    prev = r.objective;
    CHECK((r.v.v.cwiseAbs().array() - 1.0).abs().maxCoeff() <= 1e-10);
  }
  const auto again = gaussian_randomization(W, Rx.R, s.a, s.G, 4, 200, 11);
  CHECK(again.objective == prev);
  CHECK_THROWS_AS(gaussian_randomization(W, Rx.R, s.a, s.G, 4, 0, 11), std::invalid_argument);
}

TEST_CASE("default initialization aligns with the dominant direction") {
  const Setup s = make_setup(1, 6, 4, 12);
  const auto v = default_initial_phases(s.a, s.G);
  const cplx g = (s.a.transpose() * v.v.asDiagonal() * s.G.col(0))(0);
  CHECK(std::abs(g) == Approx(s.G.col(0).cwiseAbs().sum()).epsilon(1e-12));
  CHECK(default_initial_phases(s.a, CMat::Zero(6, 1)).v == CVec::Ones(6));
}

TEST_CASE("alternating optimization") {
  const Setup s = make_setup(4, 4, 4, 21);
  const auto init = default_initial_phases(s.a, s.G);
  const auto res = ao_minimize_crb(s.scene, s.G, s.cfg, init);
  for (std::size_t i = 1; i < res.objective_trace.size(); ++i)
    CHECK(res.objective_trace[i] >= res.objective_trace[i - 1] - 1e-9 * std::abs(res.objective_trace[i - 1]));
  CHECK((res.v.v.cwiseAbs().array() - 1.0).abs().maxCoeff() <= 1e-10);
  CHECK(res.crb <= res.initial_crb);
  CHECK(res.crb == Approx(crb_point_closed(s.scene, res.Rx, res.v, s.G, s.cfg)).epsilon(1e-12));
  CHECK(res.iterations >= 1);
  for (const auto& r : res.reports) {
    CHECK(r.status == SolveStatus::optimal);
    CHECK(r.kkt.max() <= 1e-8);
  }

  std::ostringstream trace;
  write_ao_trace(res, s.scene, s.cfg, trace);
  std::istringstream lines(trace.str());
  std::string line;
  std::getline(lines, line);
  CHECK(line == "iteration,f,crb");
  int rows = 0;
  while (std::getline(lines, line)) ++rows;
  CHECK(rows == static_cast<int>(res.objective_trace.size()));

  AoOptions bad;
  bad.max_iter = 0;
  CHECK_THROWS_AS(ao_minimize_crb(s.scene, s.G, s.cfg, init, bad), std::invalid_argument);
}

TEST_CASE("single antenna optimizer reaches the closed form") {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    Setup s = make_setup(1, 6, 4, 30 + seed);
    const auto res = ao_minimize_crb(s.scene, s.G, s.cfg, default_initial_phases(s.a, s.G));
    const double closed = single_antenna_optimum(s.scene, s.G.col(0), s.cfg).crb;
    CHECK(res.crb <= closed * 1.01);
    CHECK(res.crb >= closed * (1 - 1e-9));
  }
}

TEST_CASE("relaxation bounds every rank-one profile for one antenna") {
  // R1 is rank one here, so f(v v^H) = ((K^2-1)/3) |r^H v|^2 and the lifted
  // problem can only sit above the aligned value (it is not tight in general)
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Setup s = make_setup(1, 6, 4, 60 + seed);
    const CMat Rx = TransmitCovariance::isotropic(1, s.cfg.P0).R;
    const auto opt = single_antenna_optimum(s.scene, s.G.col(0), s.cfg);
    const double aligned = sdr_objective(Rx, PhaseProfile::from_phases(opt.phases).lift(), s.a, s.G, s.cfg.K);
    const auto irs = irs_subproblem(Rx, s.a, s.G, s.cfg.K);
    CHECK(irs.objective >= aligned * (1 - 1e-7));
    for (std::uint64_t k = 0; k < 20; ++k)
      CHECK(sdr_objective(Rx, random_phases(6, k).lift(), s.a, s.G, s.cfg.K) <= aligned * (1 + 1e-12));
  }
}

TEST_CASE("optimized bound falls with transmit power") {
  Setup s = make_setup(4, 4, 4, 40);
  double prev = kInfiniteCrb;
  for (double dbm : {20.0, 23.0, 26.0, 30.0}) {
    s.cfg.P0 = dbm_to_watts(dbm);
    const auto res = ao_minimize_crb(s.scene, s.G, s.cfg, default_initial_phases(s.a, s.G));
    CHECK(res.crb < prev);
    prev = res.crb;
  }
}
