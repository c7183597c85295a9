// SPDX-License-Identifier: Apache-2.0
#include "irscrb/crb_extended.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace irscrb {

namespace {

void check_common(const CMat& G, int K, int T, double sigma2) {
  if (G.size() == 0) throw std::invalid_argument("extended CRB: empty channel");
  if (K < 1 || T < 1) throw std::invalid_argument("extended CRB: K and T must be >= 1");
  if (!(sigma2 > 0.0)) throw std::invalid_argument("extended CRB: sigma2 must be > 0");
}

/// Singular values with the rank decision. Missing values (M < N) are
/// zeros.
struct Spectrum {
  RVec s;  // length N, descending
  int deficiency;
};

Spectrum spectrum(const CMat& X, Eigen::Index n) {
  Eigen::BDCSVD<CMat> svd(X);
  Spectrum out{RVec::Zero(n), 0};
  const RVec sv = svd.singularValues();
  out.s.head(std::min(n, sv.size())) = sv.head(std::min(n, sv.size()));
  const double s1 = out.s.size() > 0 ? out.s(0) : 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    if (!(out.s(i) > kRankThreshold * s1)) ++out.deficiency;
  return out;
}

CMat psd_sqrt(const CMat& R) {
  Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (R + R.adjoint()));
  const RVec lam = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * lam.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

/// tr((X X^H)^{-1}) = sum s_i^{-2} over the singular values of X (N rows).
double inverse_gram_trace(const CMat& X, int* deficiency) {
  const Spectrum sp = spectrum(X, X.rows());
  *deficiency = sp.deficiency;
  if (sp.deficiency > 0) return kInfiniteCrb;
  return sp.s.cwiseAbs2().cwiseInverse().sum();
}

double gap_from(const Spectrum& sp, Eigen::Index M) {
  const double s1 = sp.s.cwiseInverse().sum();
  const double s2 = sp.s.cwiseAbs2().cwiseInverse().sum();
  return 10.0 * std::log10(static_cast<double>(M) * s2 / (s1 * s1));
}

}  // namespace

const char* to_string(ExtendedMode mode) {
  switch (mode) {
    case ExtendedMode::generic: return "generic";
    case ExtendedMode::optimal: return "optimal";
    case ExtendedMode::isotropic: return "isotropic";
  }
  return "unknown";
}

void FullyPassiveConfig::validate(int N) const {
  if (M_r < 1) throw std::invalid_argument("FullyPassiveConfig: M_r must be >= 1");
  if (G_r.rows() != M_r || G_r.cols() != N)
    throw std::invalid_argument("FullyPassiveConfig: G_r must be M_r x N");
}

RMat fim_extended(const TransmitCovariance& Rx, const PhaseProfile& v, const CMat& G, int K,
                  int T, double sigma2) {
  check_common(G, K, T, sigma2);
  const Eigen::Index N = G.rows();
  if (static_cast<long long>(K) * N > 512)
    throw std::invalid_argument("fim_extended: K N exceeds the dense guard of 512");
  if (v.v.size() != N || Rx.R.rows() != G.cols())
    throw std::invalid_argument("fim_extended: dimension mismatch");

  // mean of vec(Y) is (X^T Phi G^T ... ) -> information kernel
  // Q = Phi^* G^* R_x^* G^T Phi^T, Kronecker with I_K.
  const CMat PhiG = v.v.asDiagonal() * G;
  const CMat Q = (PhiG * Rx.R * PhiG.adjoint()).conjugate();
  const double c = 2.0 * T / sigma2;
  const Eigen::Index n = static_cast<Eigen::Index>(K) * N;
  RMat F = RMat::Zero(2 * n, 2 * n);
  for (Eigen::Index i = 0; i < N; ++i)
    for (Eigen::Index j = 0; j < N; ++j)
      for (int k = 0; k < K; ++k) {
        const Eigen::Index r = i * K + k;
        const Eigen::Index s = j * K + k;
        const double re = c * Q(i, j).real();
        const double im = c * Q(i, j).imag();
        F(r, s) = re;
        F(n + r, n + s) = re;
        F(n + r, s) = im;
        F(r, n + s) = -im;
      }
  return F;
}

ExtendedCrbReport crb_extended(const TransmitCovariance& Rx, const CMat& G, int K, int T,
                               double sigma2) {
  check_common(G, K, T, sigma2);
  if (Rx.R.rows() != G.cols() || Rx.R.cols() != G.cols())
    throw std::invalid_argument("crb_extended: dimension mismatch");
  ExtendedCrbReport rep;
  rep.mode = ExtendedMode::generic;
  rep.singular_values = spectrum(G, G.rows()).s;
  const double tr = inverse_gram_trace(G * psd_sqrt(Rx.R), &rep.rank_deficiency);
  rep.crb = rep.rank_deficiency > 0 ? kInfiniteCrb : sigma2 * K / T * tr;
  return rep;
}

double crb_extended_with_phases(const TransmitCovariance& Rx, const PhaseProfile& v,
                                const CMat& G, int K, int T, double sigma2) {
  check_common(G, K, T, sigma2);
  if (v.v.size() != G.rows()) throw std::invalid_argument("crb_extended_with_phases: size");
  const CMat PhiG = v.v.asDiagonal() * G;
  const CMat gram = PhiG * Rx.R * PhiG.adjoint();
  Eigen::LDLT<CMat> ldlt(0.5 * (gram + gram.adjoint()));
  if (ldlt.info() != Eigen::Success) return kInfiniteCrb;
  const CMat inv = ldlt.solve(CMat::Identity(G.rows(), G.rows()));
  return sigma2 * K / T * inv.trace().real();
}

TransmitCovariance optimal_transmit_extended(const CMat& G, double P0) {
  if (!(P0 > 0.0)) throw std::invalid_argument("optimal_transmit_extended: P0 must be > 0");
  const Eigen::Index N = G.rows();
  const Spectrum sp = spectrum(G, N);
  if (sp.deficiency > 0)
    throw EstimabilityError("optimal_transmit_extended: rank(G) < N", sp.deficiency);
  Eigen::BDCSVD<CMat> svd(G, Eigen::ComputeFullV);
  const CMat Q1 = svd.matrixV().leftCols(N);
  const RVec inv = sp.s.cwiseInverse();
  const RVec p = inv * (P0 / inv.sum());
  TransmitCovariance out;
  out.R = Q1 * p.cast<cplx>().asDiagonal() * Q1.adjoint();
  out.R = 0.5 * (out.R + out.R.adjoint()).eval();
  out.budget = P0;
  return out;
}

ExtendedCrbReport crb_extended_opt(const CMat& G, double P0, int K, int T, double sigma2) {
  check_common(G, K, T, sigma2);
  if (!(P0 > 0.0)) throw std::invalid_argument("crb_extended_opt: P0 must be > 0");
  ExtendedCrbReport rep;
  rep.mode = ExtendedMode::optimal;
  const Spectrum sp = spectrum(G, G.rows());
  rep.singular_values = sp.s;
  rep.rank_deficiency = sp.deficiency;
  if (sp.deficiency > 0) return rep;
  const double s1 = sp.s.cwiseInverse().sum();
  rep.crb = sigma2 * K / (P0 * T) * s1 * s1;
  rep.gap_db = gap_from(sp, G.cols());
  return rep;
}

ExtendedCrbReport crb_extended_iso(const CMat& G, double P0, int K, int T, double sigma2) {
  check_common(G, K, T, sigma2);
  if (!(P0 > 0.0)) throw std::invalid_argument("crb_extended_iso: P0 must be > 0");
  ExtendedCrbReport rep;
  rep.mode = ExtendedMode::isotropic;
  const Spectrum sp = spectrum(G, G.rows());
  rep.singular_values = sp.s;
  rep.rank_deficiency = sp.deficiency;
  if (sp.deficiency > 0) return rep;
  const double M = static_cast<double>(G.cols());
  rep.crb = sigma2 * K * M / (P0 * T) * sp.s.cwiseAbs2().cwiseInverse().sum();
  rep.gap_db = gap_from(sp, G.cols());
  return rep;
}

double gap_db(const CMat& G) {
  const Spectrum sp = spectrum(G, G.rows());
  if (sp.deficiency > 0) throw EstimabilityError("gap_db: rank(G) < N", sp.deficiency);
  return gap_from(sp, G.cols());
}

double fully_passive_factor(const FullyPassiveConfig& fp) {
  fp.validate(static_cast<int>(fp.G_r.cols()));
  int def = 0;
  // tr((G_r^H G_r)^{-1}) = sum over the N singular values of G_r^H
  return inverse_gram_trace(fp.G_r.adjoint(), &def);
}

double crb_fully_passive(const TransmitCovariance& Rx, const CMat& G, const FullyPassiveConfig& fp,
                         int T, double sigma2) {
  check_common(G, 1, T, sigma2);
  fp.validate(static_cast<int>(G.rows()));
  const auto semi = crb_extended(Rx, G, 1, T, sigma2);  // K = 1 leaves (sigma^2/T) tr(.)
  const double rx = fully_passive_factor(fp);
  if (!semi.finite() || std::isinf(rx)) return kInfiniteCrb;
  return semi.crb * rx;
}

bool semi_passive_better(int K, const FullyPassiveConfig& fp) {
  return static_cast<double>(K) < fully_passive_factor(fp);
}

}  // namespace irscrb
