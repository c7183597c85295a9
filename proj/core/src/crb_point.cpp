// SPDX-License-Identifier: Apache-2.0
#include "irscrb/crb_point.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace irscrb {

TransmitCovariance TransmitCovariance::isotropic(int M, double P0) {
  if (M < 1) throw std::invalid_argument("isotropic: M must be >= 1");
  return {CMat::Identity(M, M) * cplx(P0 / M), P0};
}

void TransmitCovariance::validate() const {
  if (R.rows() != R.cols() || R.rows() == 0)
    throw std::invalid_argument("TransmitCovariance: R must be square and nonempty");
  const double scale = std::max(R.norm(), 1e-300);
  if ((R - R.adjoint()).norm() > 1e-12 * scale)
    throw std::invalid_argument("TransmitCovariance: R is not Hermitian");
  const double trace = R.trace().real();
  Eigen::SelfAdjointEigenSolver<CMat> es(R, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-9 * std::abs(trace))
    throw std::invalid_argument("TransmitCovariance: R is not PSD");
  if (trace > budget * (1.0 + 1e-8))
    throw std::invalid_argument("TransmitCovariance: trace exceeds the budget");
}

PhaseProfile PhaseProfile::from_phases(const RVec& phases) {
  PhaseProfile p;
  p.v.resize(phases.size());
  for (Eigen::Index n = 0; n < phases.size(); ++n) p.v[n] = std::polar(1.0, phases[n]);
  return p;
}

PhaseProfile PhaseProfile::uniform(int N) {
  PhaseProfile p;
  p.v = CVec::Ones(N);
  return p;
}

PhaseProfile PhaseProfile::from_vector(const CVec& raw) {
  PhaseProfile p;
  p.v.resize(raw.size());
  for (Eigen::Index n = 0; n < raw.size(); ++n)
    p.v[n] = std::abs(raw[n]) > 0.0 ? raw[n] / std::abs(raw[n]) : cplx(1.0, 0.0);
  return p;
}

void PhaseProfile::validate() const {
  if (v.size() == 0) throw std::invalid_argument("PhaseProfile: empty");
  for (Eigen::Index n = 0; n < v.size(); ++n)
    if (std::abs(std::abs(v[n]) - 1.0) > 1e-10)
      throw std::invalid_argument("PhaseProfile: entries must have unit modulus");
  if (lifted) {
    if ((*lifted - lift()).norm() > 1e-9)
      throw std::invalid_argument("PhaseProfile: lifted matrix differs from v v^H");
  }
}

namespace {

void check_dims(const CVec& b, const CVec& a, const PhaseProfile& v, const CMat& G) {
  if (b.size() == 0 || a.size() == 0) throw std::invalid_argument("empty steering vector");
  if (v.v.size() != a.size() || G.rows() != a.size())
    throw std::invalid_argument("dimension mismatch between a, v and G");
}

}  // namespace

CMat effective_matrix(const CVec& b, const CVec& a, const PhaseProfile& v, const CMat& G) {
  check_dims(b, a, v, G);
  // v^T A G as a row
  const Eigen::RowVectorXcd row = (v.v.cwiseProduct(a)).transpose() * G;
  return b * row;
}

CMat effective_matrix_derivative(double theta, const CVec& b, const CVec& a,
                                 const PhaseProfile& v, const CMat& G, double d_hat,
                                 double lambda_R) {
  check_dims(b, a, v, G);
  const RVec Db = steering_weights(static_cast<int>(b.size()));
  const RVec Da = steering_weights(static_cast<int>(a.size()));
  const CVec va = v.v.cwiseProduct(a);
  const Eigen::RowVectorXcd row = va.transpose() * G;
  const Eigen::RowVectorXcd row_d = va.cwiseProduct(Da.cast<cplx>()).transpose() * G;
  const cplx scale(0.0, std::numbers::pi * d_hat / lambda_R * std::cos(theta));
  return scale * (Db.cast<cplx>().cwiseProduct(b) * row + b * row_d);
}

CMat reflect_gram(const CVec& a, const CMat& G, const CMat& Rx) {
  // A^* G^* R^T G^T A = conj(A G R G^H A^H) for Hermitian R
  const CMat AG = a.asDiagonal() * G;
  const CMat inner = AG * Rx * AG.adjoint();
  return inner.conjugate();
}

PointFim fim_point(const PointTargetScene& scene, const TransmitCovariance& Rx,
                   const PhaseProfile& v, const CMat& G, const SystemConfig& config) {
  const CVec a = target_steering(scene.theta, config.N, config.d_hat, config.lambda_R);
  const CVec b = target_steering(scene.theta, config.K, config.d_hat, config.lambda_R);
  const CMat E = effective_matrix(b, a, v, G);
  const CMat Ed =
      effective_matrix_derivative(scene.theta, b, a, v, G, config.d_hat, config.lambda_R);

  const double c = 2.0 * config.T / config.sigma2_R;
  const double tr_dd = (Ed * Rx.R * Ed.adjoint()).trace().real();
  const cplx tr_ed = (E * Rx.R * Ed.adjoint()).trace();
  const double tr_ee = (E * Rx.R * E.adjoint()).trace().real();
  const cplx w = std::conj(scene.alpha) * tr_ed;

  PointFim fim;
  fim.F.setZero();
  fim.F(0, 0) = c * std::norm(scene.alpha) * tr_dd;
  fim.F(0, 1) = fim.F(1, 0) = c * w.real();
  fim.F(0, 2) = fim.F(2, 0) = c * (cplx(0.0, 1.0) * w).real();
  fim.F(1, 1) = fim.F(2, 2) = c * tr_ee;
  return fim;
}

double crb_point_prefactor(const PointTargetScene& scene, const SystemConfig& config) {
  const double cos_t = std::cos(scene.theta);
  // cos(pi/2) evaluates to ~6e-17; treat the endfire direction as degenerate
  if (std::abs(cos_t) <= 1e-12) return kInfiniteCrb;
  const double denom = 2.0 * config.T * std::norm(scene.alpha) * std::numbers::pi *
                       std::numbers::pi * config.d_hat * config.d_hat * cos_t * cos_t;
  if (!(denom > 0.0)) return kInfiniteCrb;
  return config.sigma2_R * config.lambda_R * config.lambda_R / denom;
}

double crb_point_closed(const PointTargetScene& scene, const TransmitCovariance& Rx,
                        const PhaseProfile& v, const CMat& G, const SystemConfig& config) {
  const CVec a = target_steering(scene.theta, config.N, config.d_hat, config.lambda_R);
  if (v.v.size() != a.size() || G.rows() != a.size() || G.cols() != Rx.R.rows())
    throw std::invalid_argument("crb_point_closed: dimension mismatch");
  const CMat R1 = reflect_gram(a, G, Rx.R);
  const CVec Dv = steering_weights(config.N).cast<cplx>().cwiseProduct(v.v);

  const double q0 = v.v.dot(R1 * v.v).real();
  const cplx q1 = Dv.dot(R1 * v.v);
  const double q2 = Dv.dot(R1 * Dv).real();
  if (!(q0 > 0.0)) return kInfiniteCrb;

  const double K = config.K;
  const double bracket = (K * K * K - K) / 3.0 * q0 + K * q2 - K * std::norm(q1) / q0;
  const double pre = crb_point_prefactor(scene, config);
  if (!(bracket > 0.0) || std::isinf(pre)) return kInfiniteCrb;
  return pre / bracket;
}

SingleAntennaOptimum single_antenna_optimum(const PointTargetScene& scene, const CVec& h_BI,
                                            const SystemConfig& config) {
  if (config.M != 1) throw std::invalid_argument("single_antenna_optimum requires M = 1");
  if (h_BI.size() != config.N)
    throw std::invalid_argument("single_antenna_optimum: h_BI must have N entries");
  const CVec a = target_steering(scene.theta, config.N, config.d_hat, config.lambda_R);

  SingleAntennaOptimum out;
  out.p_x = config.P0;
  out.phases.resize(config.N);
  double coherent_sum = 0.0;
  for (int n = 0; n < config.N; ++n) {
    out.phases[n] = -std::arg(a[n]) - std::arg(h_BI[n]);
    coherent_sum += std::abs(h_BI[n]);
  }

  const double K = config.K;
  const double pre = crb_point_prefactor(scene, config);
  const double gain = config.P0 * coherent_sum * coherent_sum * (K * K * K - K) / 3.0;
  out.crb = (std::isinf(pre) || !(gain > 0.0)) ? kInfiniteCrb : pre / gain;

  const TransmitCovariance Rx{CMat::Constant(1, 1, cplx(config.P0)), config.P0};
  out.crb_direct = crb_point_closed(scene, Rx, PhaseProfile::from_phases(out.phases),
                                    CMat(h_BI), config);
  return out;
}

}  // namespace irscrb
