// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "irscrb/conic.hpp"
#include "irscrb/crb_point.hpp"

namespace irscrb {

/// The relaxed DoA objective over (R_x, V):
///   f = ((K^2-1)/3) tr(R1 V) + tr(D R1 D V) - |tr(R1 D V)|^2 / tr(R1 V)
/// with R1 = reflect_gram(a, G, R_x). For V = v v^H, K f is the bracket of
/// the closed-form bound. Throws NumericalError when tr(R1 V) <= 0.
double sdr_objective(const CMat& Rx, const CMat& V, const CVec& a, const CMat& G, int K);

/// Status and residuals of one conic solve inside the optimizer.
struct SubproblemReport {
  enum class Kind { transmit, irs } kind;
  SolveStatus status;
  KktResiduals kkt;
  int iterations;
};

/// A subproblem solve did not reach optimality. Carries the objective trace
/// gathered so far.
class SubproblemError : public NumericalError {
 public:
  SubproblemError(const std::string& what, std::vector<double> partial_trace)
      : NumericalError(what), trace_(std::move(partial_trace)) {}
  const std::vector<double>& partial_trace() const { return trace_; }

 private:
  std::vector<double> trace_;
};

struct TransmitSubproblemResult {
  TransmitCovariance Rx;
  double objective;  // f(R_x, V) at the returned point
  SubproblemReport report;
};

/// Maximizes f(., V) over tr(R_x) <= P0, R_x PSD. The returned covariance
/// is projected onto the PSD cone and rescaled to the full budget (f is
/// positively homogeneous in R_x, so the budget binds).
TransmitSubproblemResult transmit_subproblem(const CMat& V, const CVec& a, const CMat& G, int K,
                                             double P0, const SolverOptions& solver = {});

struct IrsSubproblemResult {
  CMat V;
  double objective;
  SubproblemReport report;
};

/// Maximizes f(R_x, .) over PSD V with unit diagonal.
IrsSubproblemResult irs_subproblem(const CMat& Rx, const CVec& a, const CMat& G, int K,
                                   const SolverOptions& solver = {});

struct RandomizationResult {
  PhaseProfile v;
  double objective;
  int best_index;  // -1 when V was rank one
};

/// Best of `samples` draws v = exp(j arg r), r ~ CN(0, V). Rank-one V
/// (lambda_2 / lambda_1 <= 1e-8) returns the phases of its dominant
/// eigenvector. Ties keep the lowest sample index.
RandomizationResult gaussian_randomization(const CMat& V, const CMat& Rx, const CVec& a,
                                           const CMat& G, int K, int samples,
                                           std::uint64_t seed);

/// phi_n = -arg(a_n) - arg([G w]_n), w the dominant right singular vector of G.
PhaseProfile default_initial_phases(const CVec& a, const CMat& G);

struct AoOptions {
  double tol = 1e-6;  // relative change of f per iteration
  int max_iter = 50;
  int randomization_samples = 200;
  std::uint64_t seed = 0;
  SolverOptions solver;
};

enum class AoStatus { converged, max_iter };
const char* to_string(AoStatus status);

struct AoResult {
  TransmitCovariance Rx;
  PhaseProfile v;
  double crb = kInfiniteCrb;
  std::vector<double> objective_trace;  // f after the start and each half-iteration
  int iterations = 0;
  int randomization_samples = 0;
  AoStatus status = AoStatus::max_iter;
  std::vector<SubproblemReport> reports;
  double initial_crb = kInfiniteCrb;  // initial phases with optimized R_x
};

/// Alternates transmit and IRS subproblems from `init`, recovers a rank-one
/// profile by Gaussian randomization, re-optimizes R_x for it and keeps the
/// better of that and the initial profile.
AoResult ao_minimize_crb(const PointTargetScene& scene, const CMat& G, const SystemConfig& config,
                         const PhaseProfile& init, const AoOptions& options = {});

/// CSV rows "iteration,f,crb" for the objective trace.
void write_ao_trace(const AoResult& result, const PointTargetScene& scene,
                    const SystemConfig& config, std::ostream& out);

}  // namespace irscrb
