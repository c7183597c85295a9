// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

#include "irscrb/allocation.hpp"
#include "irscrb/harness.hpp"
#include "irscrb/rng.hpp"

using namespace irscrb;
using Catch::Approx;

namespace {

SweepSpec point_spec(SweepVariable vary, std::vector<double> values, std::vector<Scheme> schemes) {
  SweepSpec s;
  s.base.M = 4;
  s.base.N = 4;
  s.base.K = 4;
  s.base.sigma2_R = dbm_to_watts(-90);
  s.vary = vary;
  s.values = std::move(values);
  s.schemes = std::move(schemes);
  s.trials = 2;
  s.seed = 3;
  s.alpha_draws = 5;
  s.ao.max_iter = 8;
  s.ao.randomization_samples = 40;
  return s;
}

std::string csv_of(const std::vector<SweepRecord>& r) {
  std::ostringstream ss;
  write_csv(r, ss);
  return ss.str();
}

}  // namespace

TEST_CASE("single antenna power sweep drops 10 dB per decade") {
  auto s = point_spec(SweepVariable::P0, {10, 20, 30}, {Scheme::single_antenna_closed});
  s.base.M = 1;
  const auto r = run_sweep(s, false);
  REQUIRE(r.size() == 3);
  for (std::size_t i = 1; i < r.size(); ++i) CHECK(r[i - 1].crb_db - r[i].crb_db == Approx(10.0).epsilon(1e-12));
  for (const auto& x : r) {
    CHECK(x.status == RecordStatus::ok);
    CHECK(x.trials == 2);
    CHECK(x.crb_db == Approx(10 * std::log10(x.crb)).epsilon(1e-12));
  }
}

TEST_CASE("proposed design beats random phases on paired seeds") {
  auto s = point_spec(SweepVariable::P0, {20, 30}, {Scheme::proposed_ao, Scheme::random_phase, Scheme::isotropic_tx});
  s.trials = 3;
  const auto r = run_sweep(s, false);
  REQUIRE(r.size() == 6);
  for (std::size_t v = 0; v < 2; ++v) {
    CHECK(r[3 * v].crb <= r[3 * v + 1].crb);
    CHECK(r[3 * v].crb <= r[3 * v + 2].crb * (1 + 1e-9));
  }
  // per-trial pairing, not only the mean
  for (int t = 0; t < s.trials; ++t)
    CHECK(evaluate_trial(s, 20, Scheme::proposed_ao, t) <= evaluate_trial(s, 20, Scheme::random_phase, t));
}

TEST_CASE("extended sweep is linear in K through the origin") {
  SweepSpec s;
  s.base.M = 6;
  s.base.N = 4;
  s.target = TargetModel::extended;
  s.vary = SweepVariable::K;
  s.values = {4, 8, 16};
  s.schemes = {Scheme::extended_opt, Scheme::extended_iso};
  s.trials = 3;
  const auto r = run_sweep(s, false);
  for (std::size_t k = 0; k < 2; ++k) {
    const double slope = r[k].crb / 4.0;
    for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(r[2 * i + k].crb - slope * s.values[i]) <= 1e-9 * r[2 * i + k].crb);
  }
}

TEST_CASE("extended sweep reports rank deficiency") {
  SweepSpec s;
  s.base.M = 2;
  s.target = TargetModel::extended;
  s.vary = SweepVariable::N;
  s.values = {2, 3};
  s.schemes = {Scheme::extended_opt, Scheme::fully_passive};
  const auto r = run_sweep(s, false);
  CHECK(r[0].status == RecordStatus::ok);
  CHECK(r[2].status == RecordStatus::rank_deficient);
  CHECK(std::isinf(r[2].crb));
  CHECK(r[3].status == RecordStatus::rank_deficient);
  const std::string csv = csv_of(r);
  CHECK(csv.find(",inf,inf,1,rank_deficient,") != std::string::npos);
}

TEST_CASE("allocation-driven sweeps") {
  auto s = point_spec(SweepVariable::Q_tot, {20, 40}, {Scheme::single_antenna_closed});
  s.base.M = 1;
  const SystemConfig c = apply_sweep_value(s, 40);
  const auto a = allocate_optimal(40, 1, 1);
  CHECK(c.N == std::lround(a.N_cont));
  CHECK(c.K == std::lround(a.K_cont));
  const auto r = run_sweep(s, false);
  CHECK(r[1].crb < r[0].crb);

  auto bad = s;
  bad.schemes = {Scheme::proposed_ao};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("sweep validation") {
  auto s = point_spec(SweepVariable::P0, {10, 20}, {Scheme::extended_opt});
  CHECK_THROWS_AS(run_sweep(s), std::invalid_argument);
  s.schemes = {Scheme::proposed_ao};
  s.values = {20, 10};
  CHECK_THROWS_AS(run_sweep(s), std::invalid_argument);
  s.values = {};
  CHECK_THROWS_AS(run_sweep(s), std::invalid_argument);
  s.values = {10};
  s.trials = 0;
  CHECK_THROWS_AS(run_sweep(s), std::invalid_argument);
  s.trials = 1;
  s.schemes = {Scheme::single_antenna_closed};
  CHECK_THROWS_AS(run_sweep(s), std::invalid_argument);  // M = 4
  s.schemes = {Scheme::proposed_ao};
  s.theta = 1.56;
  CHECK_THROWS_AS(run_sweep(s), std::invalid_argument);
}

TEST_CASE("reproducibility and trial-indexed seeding") {
  auto s = point_spec(SweepVariable::N, {2, 4}, {Scheme::proposed_ao, Scheme::random_phase});
  const std::string a = csv_of(run_sweep(s, false));
  const std::string b = csv_of(run_sweep(s, false));
  CHECK(a == b);

  // dropping the last trial leaves earlier trials untouched
  const double t0 = evaluate_trial(s, 4, Scheme::random_phase, 0);
  auto fewer = s;
  fewer.trials = 1;
  CHECK(evaluate_trial(fewer, 4, Scheme::random_phase, 0) == t0);
  CHECK(run_sweep(fewer, false)[3].crb == t0);
  CHECK(trial_seed(5, 2) == trial_seed(5, 2));
  CHECK(trial_seed(5, 2) != trial_seed(5, 3));
}

TEST_CASE("alpha averaging") {
  auto s = point_spec(SweepVariable::P0, {20}, {Scheme::single_antenna_closed});
  s.base.M = 1;
  s.average_alpha = false;
  CHECK(alpha_factor(s, 9) == 1.0);
  s.average_alpha = true;
  s.alpha_draws = 50;
  const double f = alpha_factor(s, 9);
  double want = 0.0;
  for (int d = 0; d < 50; ++d) want += 1.0 / std::norm(complex_normal_at(9, Stream::target_fading, d));
  CHECK(f == Approx(want / 50).epsilon(1e-14));
}

TEST_CASE("csv format and round trip") {
  CHECK(csv_of({}) == "vary,value,scheme,crb,crb_db,trials,status,wall_ms\n");

  SweepRecord a;
  a.vary = SweepVariable::beta_BI;
  a.value = 5.0;
  a.scheme = Scheme::isotropic_tx;
  a.crb = 1.0 / 3.0;
  a.crb_db = 10 * std::log10(a.crb);
  a.trials = 7;
  a.wall_ms = 12.25;
  SweepRecord b = a;
  b.crb = b.crb_db = kInfiniteCrb;
  b.status = RecordStatus::rank_deficient;
  const std::string text = csv_of({a, b});
  CHECK(text.find("3.33333333333333315e-01") != std::string::npos);
  CHECK(text.find("\r") == std::string::npos);
  std::istringstream in(text);
  const auto back = read_csv(in);
  REQUIRE(back.size() == 2);
  CHECK(back[0].crb == a.crb);
  CHECK(back[0].crb_db == a.crb_db);
  CHECK(back[0].wall_ms == a.wall_ms);
  CHECK(back[0].vary == a.vary);
  CHECK(back[0].scheme == a.scheme);
  CHECK(back[0].trials == 7);
  CHECK(std::isinf(back[1].crb));
  CHECK(back[1].status == RecordStatus::rank_deficient);
  CHECK(csv_of(back) == text);

  const std::string path = std::string(IRSCRB_TEST_TMP) + "/roundtrip.csv";
  emit_csv({a, b}, path);
  std::ifstream f(path);
  CHECK(read_csv(f).size() == 2);
  CHECK_THROWS_AS(emit_csv({a}, "/nonexistent-dir/x.csv"), std::runtime_error);
  std::istringstream badhdr("a,b\n");
  CHECK_THROWS_AS(read_csv(badhdr), std::invalid_argument);
}

TEST_CASE("configuration parsing") {
  std::istringstream in(R"([system]
M = 2
N = 3
K = 4
P0_dBm = 20
sigma2_dBm = -80
beta_BI_dB = 10
[scene]
theta_deg = 30
[sweep]
target = point
vary = K
values = 2, 4, 8
schemes = proposed_ao random_phase
trials = 3
seed = 11
average_alpha = false
[solver]
ao_max_iter = 7
randomization_samples = 33
)");
  const SweepSpec s = parse_sweep_spec(in);
  CHECK(s.base.M == 2);
  CHECK(s.base.N == 3);
  CHECK(s.base.P0 == Approx(0.1));
  CHECK(s.base.sigma2_R == Approx(1e-11));
  CHECK(s.base.beta_BI == Approx(10.0));
  CHECK(s.base.d_hat == Approx(0.1));
  CHECK(s.base.C0 == Approx(1e-3));
  CHECK(s.base.kappa == Approx(std::pow(10.0, 0.7)));
  CHECK(s.theta == Approx(3.14159265358979323846 / 6));
  CHECK(s.vary == SweepVariable::K);
  CHECK(s.values == std::vector<double>{2, 4, 8});
  CHECK(s.schemes == std::vector<Scheme>{Scheme::proposed_ao, Scheme::random_phase});
  CHECK(s.trials == 3);
  CHECK(s.seed == 11);
  CHECK_FALSE(s.average_alpha);
  CHECK(s.ao.max_iter == 7);
  CHECK(s.ao.randomization_samples == 33);
  CHECK_NOTHROW(s.validate());

  std::istringstream unknown("[system]\nMM = 3\n");
  CHECK_THROWS_AS(parse_sweep_spec(unknown), std::invalid_argument);
  std::istringstream section("[bogus]\nx = 1\n");
  CHECK_THROWS_AS(parse_sweep_spec(section), std::invalid_argument);
  std::istringstream badnum("[system]\nM = three\n");
  CHECK_THROWS_AS(parse_sweep_spec(badnum), std::invalid_argument);
  std::istringstream badscheme("[sweep]\nschemes = best\n");
  CHECK_THROWS_AS(parse_sweep_spec(badscheme), std::invalid_argument);
  CHECK_THROWS_AS(load_sweep_spec("/nonexistent.ini"), std::invalid_argument);
}

TEST_CASE("thread count override") {
  setenv("IRSCRB_THREADS", "3", 1);
  CHECK(worker_count() == 3);
  setenv("IRSCRB_THREADS", "zero", 1);
  CHECK(worker_count() >= 1);
  unsetenv("IRSCRB_THREADS");

  // worker count does not change results
  auto s = point_spec(SweepVariable::P0, {20, 30}, {Scheme::random_phase});
  setenv("IRSCRB_THREADS", "1", 1);
  const std::string one = csv_of(run_sweep(s, false));
  setenv("IRSCRB_THREADS", "4", 1);
  const std::string four = csv_of(run_sweep(s, false));
  unsetenv("IRSCRB_THREADS");
  CHECK(one == four);
}

TEST_CASE("selftest suite passes") {
  for (const auto& c : run_selftest()) {
    INFO(c.name << ": " << c.detail);
    CHECK(c.passed);
  }
}
