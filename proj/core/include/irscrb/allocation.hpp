// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace irscrb {

enum class AllocationMode { optimal, suboptimal, exhaustive };

/// Continuous split of a weighted budget between reflecting elements and
/// sensors, maximizing N^2 (K^3 - K) subject to W_I N + W_s K = Q_tot.
struct AllocationResult {
  double N_cont = 0.0;
  double K_cont = 0.0;
  double varsigma = 0.0;  // K-to-N budget ratio (W_s K) / (W_I N)
  AllocationMode mode = AllocationMode::optimal;
  double objective = 0.0;
};

/// N^2 (K^3 - K).
double allocation_objective(double N, double K);

/// Cubic whose unique root above -2/beta4 is the optimal ratio:
/// beta4 s^3 + 3 s^2 + beta5.
double allocation_stationarity(double varsigma, double Q_tot, double W_s);

/// Budget-scaled objective as a function of the ratio varsigma.
double allocation_ratio_objective(double varsigma, double Q_tot, double W_I, double W_s);

struct AllocationCoefficients {
  double beta4, beta5, beta6;
};
AllocationCoefficients allocation_coefficients(double Q_tot, double W_s);

/// Cardano root of the stationarity cubic. The discriminant term beta6^2 - 4
/// is negative for every admissible budget, so both cube roots are taken on
/// the principal complex branch; their sum is real. Throws NumericalError
/// when the resulting ratio is not the admissible maximizer.
AllocationResult allocate_optimal(double Q_tot, double W_I, double W_s);

/// Large-budget approximation varsigma = -3 / beta4. Written so that
/// W_I N + W_s K = Q_tot holds exactly:
///   N = (2Q^3 - 2Q W_s^2) / ((5Q^2 + W_s^2) W_I)
///   K = (3Q^3 + 3Q W_s^2) / (5Q^2 W_s + W_s^3)
AllocationResult allocate_suboptimal(double Q_tot, double W_I, double W_s);

/// Grid search over N = i * step with K fixed by the budget.
AllocationResult allocate_exhaustive(double Q_tot, double W_I, double W_s, double step);

const char* to_string(AllocationMode mode);

}  // namespace irscrb
