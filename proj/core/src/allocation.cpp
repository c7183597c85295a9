// SPDX-License-Identifier: Apache-2.0
#include "irscrb/allocation.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "irscrb/types.hpp"

namespace irscrb {

namespace {

void check_budget(double Q_tot, double W_I, double W_s) {
  if (!(W_I > 0.0) || !(W_s > 0.0)) throw std::invalid_argument("allocation weights must be > 0");
  if (!(Q_tot > W_I + 2.0 * W_s))
    throw std::invalid_argument("allocation budget must exceed W_I + 2 W_s");
}

AllocationResult from_ratio(double s, double Q, double W_I, double W_s, AllocationMode mode) {
  AllocationResult r;
  r.varsigma = s;
  r.N_cont = Q / ((1.0 + s) * W_I);
  r.K_cont = s * Q / ((1.0 + s) * W_s);
  r.mode = mode;
  r.objective = allocation_objective(r.N_cont, r.K_cont);
  return r;
}

}  // namespace

double allocation_objective(double N, double K) { return N * N * (K * K * K - K); }

AllocationCoefficients allocation_coefficients(double Q, double W_s) {
  const double q2 = Q * Q;
  const double w2 = W_s * W_s;
  AllocationCoefficients c;
  c.beta4 = -2.0 * (q2 - w2) / (q2 + w2);
  c.beta5 = -w2 / (q2 + w2);
  c.beta6 = -c.beta4 * c.beta4 * c.beta5 - 2.0;
  return c;
}

double allocation_stationarity(double s, double Q, double W_s) {
  const auto c = allocation_coefficients(Q, W_s);
  return c.beta4 * s * s * s + 3.0 * s * s + c.beta5;
}

double allocation_ratio_objective(double s, double Q, double W_I, double W_s) {
  const double q3 = Q * Q * Q;
  const double num = Q * Q * s * s * s - W_s * W_s * s * (1.0 + s) * (1.0 + s);
  return q3 / (W_I * W_I * W_s * W_s * W_s) * num / std::pow(1.0 + s, 5);
}

AllocationResult allocate_optimal(double Q, double W_I, double W_s) {
  check_budget(Q, W_I, W_s);
  const auto c = allocation_coefficients(Q, W_s);
  if (!(c.beta4 < 0.0)) throw NumericalError("allocate_optimal: beta4 must be negative");

  const double disc = c.beta6 * c.beta6 - 4.0;
  const double denom = 2.0 * c.beta4 * c.beta4 * c.beta4;
  double s = -1.0 / c.beta4;
  if (disc >= 0.0) {
    const double beta7 = std::sqrt(disc);
    s += std::cbrt((c.beta6 + beta7) / denom) + std::cbrt((c.beta6 - beta7) / denom);
  } else {
    const std::complex<double> beta7(0.0, std::sqrt(-disc));
    const std::complex<double> z1 = (c.beta6 + beta7) / denom;
    const std::complex<double> z2 = (c.beta6 - beta7) / denom;
    const std::complex<double> sum = std::pow(z1, 1.0 / 3.0) + std::pow(z2, 1.0 / 3.0);
    if (std::abs(sum.imag()) > 1e-9 * (1.0 + std::abs(sum.real())))
      throw NumericalError("allocate_optimal: cube-root sum is not real");
    s += sum.real();
  }

  // Newton polish; the closed form already sits within a few ulps of the root
  for (int it = 0; it < 3; ++it) {
    const double f = c.beta4 * s * s * s + 3.0 * s * s + c.beta5;
    const double df = 3.0 * c.beta4 * s * s + 6.0 * s;
    if (df == 0.0) break;
    s -= f / df;
  }

  const double lower = -2.0 / c.beta4;
  const double residual = allocation_stationarity(s, Q, W_s);
  if (!std::isfinite(s) || !(s > lower) || std::abs(residual) > 1e-8)
    throw NumericalError("allocate_optimal: no admissible stationary ratio (varsigma = " +
                         std::to_string(s) + ")");
  return from_ratio(s, Q, W_I, W_s, AllocationMode::optimal);
}

AllocationResult allocate_suboptimal(double Q, double W_I, double W_s) {
  check_budget(Q, W_I, W_s);
  const double q2 = Q * Q;
  const double w2 = W_s * W_s;
  AllocationResult r;
  r.mode = AllocationMode::suboptimal;
  r.N_cont = (2.0 * Q * q2 - 2.0 * Q * w2) / ((5.0 * q2 + w2) * W_I);
  r.K_cont = (3.0 * Q * q2 + 3.0 * Q * w2) / (5.0 * q2 * W_s + w2 * W_s);
  r.varsigma = -3.0 / allocation_coefficients(Q, W_s).beta4;
  r.objective = allocation_objective(r.N_cont, r.K_cont);
  return r;
}

AllocationResult allocate_exhaustive(double Q, double W_I, double W_s, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("allocate_exhaustive: step must be > 0");
  if (!(W_I > 0.0) || !(W_s > 0.0)) throw std::invalid_argument("allocation weights must be > 0");

  AllocationResult best;
  best.mode = AllocationMode::exhaustive;
  bool found = false;
  for (long long i = 1;; ++i) {
    const double N = static_cast<double>(i) * step;
    const double K = (Q - W_I * N) / W_s;
    if (!(K > 0.0)) break;
    const double obj = allocation_objective(N, K);
    if (!found || obj > best.objective) {
      best.N_cont = N;
      best.K_cont = K;
      best.objective = obj;
      found = true;
    }
  }
  if (!found) throw std::invalid_argument("allocate_exhaustive: empty feasible grid");
  best.varsigma = (W_s * best.K_cont) / (W_I * best.N_cont);
  return best;
}

const char* to_string(AllocationMode mode) {
  switch (mode) {
    case AllocationMode::optimal: return "optimal";
    case AllocationMode::suboptimal: return "suboptimal";
    case AllocationMode::exhaustive: return "exhaustive";
  }
  return "unknown";
}

}  // namespace irscrb
