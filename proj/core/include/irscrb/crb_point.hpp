// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <vector>

#include "irscrb/core_model.hpp"

namespace irscrb {

/// Hermitian PSD transmit covariance with its power budget.
struct TransmitCovariance {
  CMat R;
  double budget = 0.0;

  static TransmitCovariance isotropic(int M, double P0);

  /// Hermitian to 1e-12 relative, eigenvalues >= -1e-9 trace, trace within
  /// the budget up to 1e-8 relative. Throws std::invalid_argument.
  void validate() const;
};

/// Unit-modulus IRS reflection vector, optionally carrying V = v v^H.
struct PhaseProfile {
  CVec v;
  std::optional<CMat> lifted;

  static PhaseProfile from_phases(const RVec& phases);
  static PhaseProfile uniform(int N);
  /// Projects arbitrary complex entries onto the unit circle (zeros map to 1).
  static PhaseProfile from_vector(const CVec& raw);

  CMat lift() const { return v * v.adjoint(); }
  void validate() const;
};

/// 3x3 Fisher information over (theta, Re alpha, Im alpha).
struct PointFim {
  Eigen::Matrix3d F;
  double theta_theta() const { return F(0, 0); }
  Eigen::RowVector2d theta_alpha() const { return F.block<1, 2>(0, 1); }
  Eigen::Matrix2d alpha_alpha() const { return F.block<2, 2>(1, 1); }
};

/// E = b v^T A G  (K x M).
CMat effective_matrix(const CVec& b, const CVec& a, const PhaseProfile& v, const CMat& G);

/// dE/dtheta = j pi (d/lambda) cos(theta) (D_b b v^T A G + b v^T D_a A G).
CMat effective_matrix_derivative(double theta, const CVec& b, const CVec& a,
                                 const PhaseProfile& v, const CMat& G, double d_hat,
                                 double lambda_R);

/// R1 = A^* G^* R_x^T G^T A  (N x N Hermitian).
CMat reflect_gram(const CVec& a, const CMat& G, const CMat& Rx);

PointFim fim_point(const PointTargetScene& scene, const TransmitCovariance& Rx,
                   const PhaseProfile& v, const CMat& G, const SystemConfig& config);

/// sigma^2 lambda^2 / (2 T |alpha|^2 pi^2 d^2 cos^2 theta), the factor that
/// multiplies the inverse bracket in the closed-form DoA bound.
double crb_point_prefactor(const PointTargetScene& scene, const SystemConfig& config);

/// Closed-form DoA bound in rad^2. Degenerate geometry (nonpositive bracket,
/// cos(theta) = 0, v^H R1 v = 0) yields kInfiniteCrb.
double crb_point_closed(const PointTargetScene& scene, const TransmitCovariance& Rx,
                        const PhaseProfile& v, const CMat& G, const SystemConfig& config);

struct SingleAntennaOptimum {
  double p_x = 0.0;
  RVec phases;
  double crb = 0.0;        // closed form
  double crb_direct = 0.0;  // crb_point_closed at (p_x, phases)
};

/// Optimal power and phases for M = 1: p_x = P0, phi_n = -arg(a_n) - arg(h_n).
/// With non-uniform channel magnitudes the closed form uses (sum_n |h_n|)^2
/// in place of h_BI^2 N^2, which reduces to it when all |h_n| are equal.
SingleAntennaOptimum single_antenna_optimum(const PointTargetScene& scene, const CVec& h_BI,
                                            const SystemConfig& config);

}  // namespace irscrb
