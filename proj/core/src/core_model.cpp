// SPDX-License-Identifier: Apache-2.0
#include "irscrb/core_model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "irscrb/rng.hpp"

namespace irscrb {

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0)) throw std::invalid_argument(std::string(name) + " must be > 0");
}

}  // namespace

void SystemConfig::validate() const {
  if (M < 1) throw std::invalid_argument("M must be >= 1");
  if (N < 1) throw std::invalid_argument("N must be >= 1");
  if (K < 2) throw std::invalid_argument("K must be >= 2");
  if (T < 1) throw std::invalid_argument("T must be >= 1");
  require_positive(P0, "P0");
  require_positive(lambda_R, "lambda_R");
  require_positive(d_hat, "d_hat");
  require_positive(sigma2_R, "sigma2_R");
  require_positive(d_BI, "d_BI");
  require_positive(d_IT, "d_IT");
  require_positive(C0, "C0");
  require_positive(kappa, "kappa");
  if (!(beta_BI >= 0.0)) throw std::invalid_argument("beta_BI must be >= 0");
}

PointTargetScene make_scene(double theta, cplx alpha0, const SystemConfig& config) {
  PointTargetScene scene;
  scene.theta = theta;
  scene.alpha0 = alpha0;
  scene.alpha = alpha0 * path_gain(config.d_IT, config.kappa, config.lambda_R);
  return scene;
}

CVec ula_steering(double direction, int count) {
  if (count < 1) throw std::invalid_argument("ula_steering: count must be >= 1");
  CVec u(count);
  for (int m = 0; m < count; ++m) {
    const double phase = (2.0 * m - count + 1) * std::numbers::pi * direction / 2.0;
    u[m] = std::polar(1.0, phase);
  }
  return u;
}

CVec target_steering(double theta, int count, double d_hat, double lambda_R) {
  return ula_steering(2.0 * d_hat * std::sin(theta) / lambda_R, count);
}

RVec steering_weights(int count) {
  if (count < 1) throw std::invalid_argument("steering_weights: count must be >= 1");
  RVec w(count);
  for (int m = 0; m < count; ++m) w[m] = 2.0 * m - count + 1;
  return w;
}

SteeringDerivative steering_derivative(double theta, int count, double d_hat, double lambda_R) {
  SteeringDerivative out;
  out.weights = steering_weights(count);
  const CVec a = target_steering(theta, count, d_hat, lambda_R);
  const cplx scale(0.0, std::numbers::pi * d_hat / lambda_R * std::cos(theta));
  out.derivative = scale * out.weights.cast<cplx>().cwiseProduct(a);
  return out;
}

double path_gain(double d_IT, double kappa, double lambda_R) {
  require_positive(d_IT, "d_IT");
  require_positive(kappa, "kappa");
  require_positive(lambda_R, "lambda_R");
  const double pi3 = std::numbers::pi * std::numbers::pi * std::numbers::pi;
  return std::sqrt(lambda_R * lambda_R * kappa / (64.0 * pi3 * std::pow(d_IT, 4)));
}

PathLoss large_scale_path_loss(double d, double alpha_d, double C0) {
  require_positive(d, "d");
  return {C0 * std::pow(d, -alpha_d), d < 1.0};
}

CMat los_component(const SystemConfig& config, int rows, int cols) {
  const CVec rx = target_steering(config.los_angle_irs, rows, config.d_hat, config.lambda_R);
  const CVec tx = target_steering(config.los_angle_bs, cols, config.d_hat, config.lambda_R);
  return rx * tx.transpose();
}

CMat rician_matrix(const SystemConfig& config, int rows, int cols, std::uint64_t seed,
                   bool reverse_link) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("rician_matrix: empty dimensions");
  const double rho = std::sqrt(large_scale_path_loss(config.d_BI, config.alpha_BI, config.C0).gain);
  const double beta = config.beta_BI;
  const double los_weight = std::sqrt(beta / (beta + 1.0));
  const double nlos_weight = std::sqrt(1.0 / (beta + 1.0));

  CMat los;
  if (reverse_link) {
    // IRS -> receiver: departure at the IRS, arrival at the BS array
    const CVec rx = target_steering(config.los_angle_bs, rows, config.d_hat, config.lambda_R);
    const CVec tx = target_steering(config.los_angle_irs, cols, config.d_hat, config.lambda_R);
    los = rx * tx.transpose();
  } else {
    los = los_component(config, rows, cols);
  }

  const Stream stream = reverse_link ? Stream::reverse_channel_nlos : Stream::channel_nlos;
  CMat G(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const std::uint64_t index = (static_cast<std::uint64_t>(r) << 32) | static_cast<std::uint32_t>(c);
      G(r, c) = rho * (los_weight * los(r, c) + nlos_weight * complex_normal_at(seed, stream, index));
    }
  }
  return G;
}

ChannelRealization rician_channel(const SystemConfig& config, std::uint64_t seed) {
  ChannelRealization out;
  out.G = rician_matrix(config, config.N, config.M, seed, false);
  out.seed = seed;
  if (config.M == 1) out.h_BI = out.G.col(0);
  return out;
}

}  // namespace irscrb
