// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>

#include "irscrb/types.hpp"

namespace irscrb {

/// Physical and system parameters of one semi-passive IRS sensing setup.
/// All quantities are linear SI units (watts, meters, radians).
struct SystemConfig {
  int M = 1;   // BS antennas
  int N = 2;   // IRS reflecting elements
  int K = 2;   // IRS sensors
  int T = 64;  // snapshots
  double P0 = 1.0;
  double lambda_R = 0.2;
  double d_hat = 0.1;  // shared element/sensor spacing
  double sigma2_R = 1e-12;
  double d_BI = 60.0;
  double d_IT = 20.0;
  double C0 = 1e-3;  // linear gain at the 1 m reference distance
  double alpha_BI = 2.5;
  double beta_BI = db_to_linear(5.0);  // linear Rician factor
  double kappa = db_to_linear(7.0);    // RCS in m^2
  // Line-of-sight directions of the BS-IRS link (radians). Not part of the
  // physical model proper; they only shape the deterministic channel part.
  double los_angle_irs = 0.0;
  double los_angle_bs = 0.0;

  /// Throws std::invalid_argument on a nonpositive size or dimension.
  void validate() const;

  /// True when the spacing exceeds half a wavelength (grating lobes).
  bool spacing_warning() const { return d_hat > lambda_R / 2.0; }
};

/// Largest allowed |theta| in configuration files (89 degrees). The bound
/// diverges at endfire since cos(theta) multiplies every derivative.
inline constexpr double kMaxConfigTheta = 89.0 * 3.14159265358979323846 / 180.0;

struct PointTargetScene {
  double theta = 0.0;  // DoA in radians
  cplx alpha0{1.0, 0.0};
  cplx alpha{1.0, 0.0};  // alpha0 * path_gain
};

/// Builds a scene with alpha = alpha0 * path_gain(d_IT, kappa, lambda_R).
PointTargetScene make_scene(double theta, cplx alpha0, const SystemConfig& config);

struct ChannelRealization {
  CMat G;                 // N x M, BS to IRS
  std::optional<CVec> h_BI;  // column 0 of G when M == 1
  std::uint64_t seed = 0;
};

/// Centered ULA response: element m is exp(j (2m - count + 1) pi direction / 2).
CVec ula_steering(double direction, int count);

/// a(theta) for count = N, b(theta) for count = K.
CVec target_steering(double theta, int count, double d_hat, double lambda_R);

/// diag(-(count-1), -(count-3), ..., count-1) as a vector.
RVec steering_weights(int count);

struct SteeringDerivative {
  CVec derivative;  // d/dtheta of the steering vector
  RVec weights;     // diagonal of D
};

SteeringDerivative steering_derivative(double theta, int count, double d_hat, double lambda_R);

/// Round-trip amplitude beta0 = sqrt(lambda^2 kappa / (64 pi^3 d^4)).
double path_gain(double d_IT, double kappa, double lambda_R);

struct PathLoss {
  double gain;
  bool below_reference;  // d < 1 m; value still computed
};

/// C0 * d^(-alpha_d), reference distance 1 m.
PathLoss large_scale_path_loss(double d, double alpha_d, double C0);

/// Deterministic line-of-sight component u(phi_I, N) u(phi_B, M)^T.
CMat los_component(const SystemConfig& config, int rows, int cols);

/// Rician BS-IRS channel. NLoS entry (n, m) is addressed by its index, so a
/// smaller array's draw is the top-left block of a larger one's.
ChannelRealization rician_channel(const SystemConfig& config, std::uint64_t seed);

/// Same fading model with explicit dimensions and stream (used for the
/// IRS-to-receiver link of the fully-passive comparison).
CMat rician_matrix(const SystemConfig& config, int rows, int cols, std::uint64_t seed,
                   bool reverse_link);

}  // namespace irscrb
