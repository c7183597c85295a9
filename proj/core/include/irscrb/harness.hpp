// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "irscrb/ao.hpp"
#include "irscrb/core_model.hpp"

namespace irscrb {

enum class TargetModel { point, extended };
enum class SweepVariable { P0, M, N, K, beta_BI, W_I, Q_tot };
enum class Scheme {
  proposed_ao,
  random_phase,
  isotropic_tx,
  single_antenna_closed,
  extended_opt,
  extended_iso,
  fully_passive,
};

const char* to_string(TargetModel t);
const char* to_string(SweepVariable v);
const char* to_string(Scheme s);
TargetModel parse_target(const std::string& s);
SweepVariable parse_variable(const std::string& s);
Scheme parse_scheme(const std::string& s);
bool scheme_is_point(Scheme s);

struct AllocationBudget {
  double W_I = 1.0;
  double W_s = 1.0;
  double Q_tot = 600.0;
};

struct SweepSpec {
  SystemConfig base;
  double theta = 60.0 * 3.14159265358979323846 / 180.0;
  TargetModel target = TargetModel::point;
  SweepVariable vary = SweepVariable::P0;
  // P0 in dBm and beta_BI in dB; the other variables are plain numbers.
  std::vector<double> values;
  std::vector<Scheme> schemes;
  int trials = 1;
  std::uint64_t seed = 1;
  bool average_alpha = true;
  int alpha_draws = 50;
  AllocationBudget allocation;
  AoOptions ao;
  int M_r = 0;  // fully-passive receive antennas; 0 means K

  /// Throws std::invalid_argument on an empty or non-increasing value list,
  /// trials < 1, or a scheme that does not fit the target model.
  void validate() const;
};

enum class RecordStatus { ok, rank_deficient, failed, invalid };
const char* to_string(RecordStatus s);
RecordStatus parse_record_status(const std::string& s);

struct SweepRecord {
  SweepVariable vary = SweepVariable::P0;
  double value = 0.0;
  Scheme scheme = Scheme::proposed_ao;
  double crb = kInfiniteCrb;  // mean over trials
  double crb_db = kInfiniteCrb;
  int trials = 0;             // trials that contributed
  RecordStatus status = RecordStatus::ok;
  double wall_ms = 0.0;
};

/// Configuration with the value applied (dimension, power or Rician factor).
/// W_I and Q_tot set N and K from the rounded optimal allocation.
SystemConfig apply_sweep_value(const SweepSpec& spec, double value);

/// Mean of 1 / |alpha0_d|^2 over the trial's fading draws (1 when averaging
/// is off, where alpha0 = 1).
double alpha_factor(const SweepSpec& spec, std::uint64_t trial_seed);

/// Seed of trial t: depends only on (spec.seed, t).
std::uint64_t trial_seed(std::uint64_t seed, int trial);

/// One (value, scheme, trial) evaluation. Point-target values are CRBs in
/// rad^2 at |alpha0| = 1 scaled by alpha_factor.
double evaluate_trial(const SweepSpec& spec, double value, Scheme scheme, int trial);

/// Runs every (value, scheme, trial) item on a thread pool (IRSCRB_THREADS
/// overrides the worker count) and merges in (value, scheme) order.
/// Set `timing` to false to zero wall_ms for bitwise-reproducible output.
std::vector<SweepRecord> run_sweep(const SweepSpec& spec, bool timing = true);

/// Header `vary,value,scheme,crb,crb_db,trials,status,wall_ms`, numbers as
/// %.17e, infinity as `inf`. Throws std::runtime_error naming the path on
/// I/O failure.
void emit_csv(const std::vector<SweepRecord>& records, const std::string& path);
void write_csv(const std::vector<SweepRecord>& records, std::ostream& out);
std::vector<SweepRecord> read_csv(std::istream& in);

/// INI-style configuration (see README). Throws std::invalid_argument with
/// the offending key on malformed input.
SweepSpec load_sweep_spec(const std::string& path);
SweepSpec parse_sweep_spec(std::istream& in);

/// Invariant and trend checks run by `irscrb selftest`.
struct SelftestCase {
  std::string name;
  bool passed;
  std::string detail;
};
std::vector<SelftestCase> run_selftest();

int worker_count();

}  // namespace irscrb
