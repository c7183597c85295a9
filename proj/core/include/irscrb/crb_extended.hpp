// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>

#include "irscrb/crb_point.hpp"

namespace irscrb {

enum class ExtendedMode { generic, optimal, isotropic };
const char* to_string(ExtendedMode mode);

struct ExtendedCrbReport {
  double crb = kInfiniteCrb;
  ExtendedMode mode = ExtendedMode::generic;
  RVec singular_values;  // of G, descending
  std::optional<double> gap_db;
  int rank_deficiency = 0;  // > 0 exactly when crb is infinite

  bool finite() const { return rank_deficiency == 0; }
};

struct FullyPassiveConfig {
  int M_r = 1;
  CMat G_r;  // M_r x N, IRS to BS receiver

  void validate(int N) const;
};

/// Singular values s_i <= 1e-10 s_1 count as zero in every rank decision.
inline constexpr double kRankThreshold = 1e-10;

/// Real 2KN x 2KN Fisher information over (Re vec H, Im vec H).
/// Throws std::invalid_argument when K N > 512.
RMat fim_extended(const TransmitCovariance& Rx, const PhaseProfile& v, const CMat& G, int K,
                  int T, double sigma2);

/// (sigma^2 K / T) tr((G R_x G^H)^{-1}); does not depend on the IRS phases.
ExtendedCrbReport crb_extended(const TransmitCovariance& Rx, const CMat& G, int K, int T,
                               double sigma2);

/// Same bound evaluated through the phase-bearing form
/// tr((Phi G R_x G^H Phi^H)^{-1}); used to check phase independence.
double crb_extended_with_phases(const TransmitCovariance& Rx, const PhaseProfile& v,
                                const CMat& G, int K, int T, double sigma2);

/// R_x = Q1 diag(s_i^{-1} P0 / sum_j s_j^{-1}) Q1^H from G = U S Q^H.
/// Throws EstimabilityError when rank(G) < N (which includes M < N).
TransmitCovariance optimal_transmit_extended(const CMat& G, double P0);

/// (sigma^2 K / (P0 T)) (sum s_i^{-1})^2, with gap_db filled in.
ExtendedCrbReport crb_extended_opt(const CMat& G, double P0, int K, int T, double sigma2);

/// (sigma^2 K M / (P0 T)) sum s_i^{-2}.
ExtendedCrbReport crb_extended_iso(const CMat& G, double P0, int K, int T, double sigma2);

/// 10 log10(M sum s^-2 / (sum s^-1)^2). Throws EstimabilityError on rank
/// deficiency.
double gap_db(const CMat& G);

/// (sigma^2 / T) tr((G R_x G^H)^{-1}) tr((G_r^H G_r)^{-1}); infinite when
/// either Gram matrix is singular.
double crb_fully_passive(const TransmitCovariance& Rx, const CMat& G, const FullyPassiveConfig& fp,
                         int T, double sigma2);

/// tr((G_r^H G_r)^{-1}), infinite when rank(G_r) < N.
double fully_passive_factor(const FullyPassiveConfig& fp);

/// True when the semi-passive bound is strictly below the fully-passive one
/// for the same R_x and G, i.e. K < tr((G_r^H G_r)^{-1}).
bool semi_passive_better(int K, const FullyPassiveConfig& fp);

}  // namespace irscrb
