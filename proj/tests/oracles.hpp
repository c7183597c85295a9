// SPDX-License-Identifier: Apache-2.0
#pragma once

// Independent reference computations shared by unit and acceptance tests.

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "test_support.hpp"

namespace irscrb::testing {

/// G = U diag(s) Q^H with random unitary factors.
inline CMat with_singular_values(int M, const RVec& s, std::uint64_t seed) {
  const int N = static_cast<int>(s.size());
  Eigen::HouseholderQR<CMat> qu(random_cmat(N, N, seed)), qq(random_cmat(M, M, seed + 1));
  const CMat U = qu.householderQ();
  const CMat Q = qq.householderQ();
  CMat S = CMat::Zero(N, M);
  for (int i = 0; i < N; ++i) S(i, i) = s(i);
  return U * S * Q.adjoint();
}

inline double trace_inverse_gram(const CMat& G, const CMat& R) {
  const CMat A = G * R * G.adjoint();
  return A.inverse().trace().real();
}

/// Projection onto {R PSD, tr R <= P0}.
inline CMat project(const CMat& X, double P0) {
  Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (X + X.adjoint()));
  RVec lam = es.eigenvalues().cwiseMax(0.0);
  if (lam.sum() > P0) {
    // shift so that sum(max(lam - tau, 0)) = P0
    double lo = 0.0, hi = lam.maxCoeff();
    for (int it = 0; it < 200; ++it) {
      const double tau = 0.5 * (lo + hi);
      ((lam.array() - tau).max(0.0).sum() > P0 ? lo : hi) = tau;
    }
    lam = (lam.array() - hi).max(0.0);
  }
  return es.eigenvectors() * lam.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

/// Projected gradient with backtracking on min tr((G R G^H)^{-1}).
inline double projected_gradient_min(const CMat& G, double P0) {
  const int M = static_cast<int>(G.cols());
  CMat R = (P0 / M) * CMat::Identity(M, M);
  double f = trace_inverse_gram(G, R);
  double step = 1.0;
  for (int it = 0; it < 20000; ++it) {
    const CMat Ainv = (G * R * G.adjoint()).inverse();
    const CMat grad = -G.adjoint() * Ainv * Ainv * G;
    bool moved = false;
    for (int bt = 0; bt < 60; ++bt) {
      const CMat cand = project(R - step * grad, P0);
      const CMat A = G * cand * G.adjoint();
      Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (A + A.adjoint()), Eigen::EigenvaluesOnly);
      if (es.eigenvalues()(0) > 0.0) {
        const double fc = trace_inverse_gram(G, cand);
        if (fc <= f - 1e-4 * (R - cand).squaredNorm() / step) {
          moved = f - fc > 1e-15 * f;
          R = cand;
          f = fc;
          step *= 1.5;
          break;
        }
      }
      step *= 0.5;
    }
    if (!moved && step < 1e-14) break;
  }
  return f;
}


/// Mean of the vectorized echo alpha b(theta) a(theta)^T Phi G X with
/// X X^H = T R_x, built from the steering vectors only.
inline CVec echo_mean(const SystemConfig& cfg, const TransmitCovariance& Rx, const PhaseProfile& v,
                      const CMat& G, double theta, cplx alpha) {
  const CVec a = target_steering(theta, cfg.N, cfg.d_hat, cfg.lambda_R);
  const CVec b = target_steering(theta, cfg.K, cfg.d_hat, cfg.lambda_R);
  Eigen::SelfAdjointEigenSolver<CMat> es(Rx.R);
  const CMat sq = es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().cast<cplx>().asDiagonal() *
                  es.eigenvectors().adjoint();
  const CMat X = std::sqrt(double(cfg.T)) * sq;
  const CMat Y = alpha * b * (a.transpose() * v.v.asDiagonal() * G) * X;
  return Eigen::Map<const CVec>(Y.data(), Y.size());
}

/// Central-difference FIM over (theta, Re alpha, Im alpha), h = 1e-6.
inline Eigen::Matrix3d fd_point_fim(const PointTargetScene& scene, const TransmitCovariance& Rx,
                                    const PhaseProfile& v, const CMat& G, const SystemConfig& cfg) {
  const double h = 1e-6;
  const double th = scene.theta;
  const cplx al = scene.alpha;
  auto mu = [&](double t, cplx a) { return echo_mean(cfg, Rx, v, G, t, a); };
  CMat J(mu(th, al).size(), 3);
  J.col(0) = (mu(th + h, al) - mu(th - h, al)) / (2 * h);
  J.col(1) = (mu(th, al + h) - mu(th, al - h)) / (2 * h);
  const cplx jh(0.0, h);
  J.col(2) = (mu(th, al + jh) - mu(th, al - jh)) / (2 * h);
  return (2.0 / cfg.sigma2_R) * (J.adjoint() * J).real();
}

}  // namespace irscrb::testing
