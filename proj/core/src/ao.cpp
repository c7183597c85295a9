// SPDX-License-Identifier: Apache-2.0
#include "irscrb/ao.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "irscrb/rng.hpp"

namespace irscrb {

namespace {

CMat hermitize(const CMat& X) { return 0.5 * (X + X.adjoint()); }

CMat clip_psd(const CMat& X) {
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitize(X));
  const RVec lam = es.eigenvalues().cwiseMax(0.0);
  return hermitize(es.eigenvectors() * lam.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint());
}

void check_inputs(const CMat& V, const CVec& a, const CMat& G, int K, const char* who) {
  if (K < 2) throw std::invalid_argument(std::string(who) + ": K must be >= 2");
  if (G.rows() != a.size() || V.rows() != a.size() || V.cols() != a.size())
    throw std::invalid_argument(std::string(who) + ": dimension mismatch");
}

double order_factor(int K) { return (static_cast<double>(K) * K - 1.0) / 3.0; }

/// Block [[S11, S12], [S21, S22]] of a 2x2 Hermitian selector: tr(E S) = S_kl.
CMat selector(int k, int l) {
  CMat E = CMat::Zero(2, 2);
  E(l, k) = 1.0;
  return E;
}

/// Adds  min -tr(Q X) + S11  s.t.  S22 = tr(P X), S12 = tr(B X)
/// on blocks (x_block, s_block). Data are Hermitian except B.
void add_schur_epigraph(ConicProgram& p, int x_block, int s_block, const CMat& Q, const CMat& P,
                        const CMat& B) {
  p.objective.add(x_block, -real_part_functional(Q));
  p.objective.add(s_block, real_part_functional(selector(0, 0)));

  LinearConstraint c22;
  c22.functional.add(s_block, real_part_functional(selector(1, 1)));
  c22.functional.add(x_block, -real_part_functional(P));
  p.equalities.push_back(std::move(c22));

  LinearConstraint re12;
  re12.functional.add(s_block, real_part_functional(selector(0, 1)));
  re12.functional.add(x_block, -real_part_functional(B));
  p.equalities.push_back(std::move(re12));

  LinearConstraint im12;
  im12.functional.add(s_block, imag_part_functional(selector(0, 1)));
  im12.functional.add(x_block, -imag_part_functional(B));
  p.equalities.push_back(std::move(im12));
}

SubproblemReport make_report(SubproblemReport::Kind kind, const ConicSolution& sol) {
  return {kind, sol.status, sol.kkt, sol.iterations};
}

double scale_of(const CMat& Q) {
  const double n = Q.norm();
  return n > 0.0 ? 1.0 / n : 1.0;
}

}  // namespace

double sdr_objective(const CMat& Rx, const CMat& V, const CVec& a, const CMat& G, int K) {
  check_inputs(V, a, G, K, "sdr_objective");
  if (Rx.rows() != G.cols() || Rx.cols() != G.cols())
    throw std::invalid_argument("sdr_objective: R_x dimension mismatch");
  const CMat R1 = reflect_gram(a, G, Rx);
  const RVec d = steering_weights(static_cast<int>(a.size()));
  const CMat DR1 = d.cast<cplx>().asDiagonal() * R1;
  const double t0 = (R1 * V).trace().real();
  if (!(t0 > 0.0)) throw NumericalError("sdr_objective: degenerate objective, tr(R1 V) <= 0");
  const double t2 = (DR1 * d.cast<cplx>().asDiagonal() * V).trace().real();
  const cplx t1 = (R1 * d.cast<cplx>().asDiagonal() * V).trace();
  return order_factor(K) * t0 + t2 - std::norm(t1) / t0;
}

TransmitSubproblemResult transmit_subproblem(const CMat& V, const CVec& a, const CMat& G, int K,
                                             double P0, const SolverOptions& solver) {
  check_inputs(V, a, G, K, "transmit_subproblem");
  if (!(P0 > 0.0)) throw std::invalid_argument("transmit_subproblem: P0 must be > 0");
  const int M = static_cast<int>(G.cols());
  const RVec d = steering_weights(static_cast<int>(a.size()));
  const CMat AG = a.asDiagonal() * G;
  const CMat Vt = V.transpose();
  const CMat J = AG.adjoint() * Vt;
  const CMat R0 = hermitize(J * AG);
  const CMat DAG = d.cast<cplx>().asDiagonal() * AG;
  const CMat R2 = hermitize(order_factor(K) * R0 + DAG.adjoint() * Vt * DAG);
  const CMat B = J * DAG;

  // R_x = P0 * Rt with tr(Rt) <= 1; data normalized, which leaves the
  // maximizer unchanged since f is jointly homogeneous in the data.
  const double s = scale_of(R2);
  ConicProgram p;
  const int xb = p.add_block(2 * M);
  const int sb = p.add_block(4);
  add_schur_epigraph(p, xb, sb, s * R2, s * R0, s * B);
  LinearConstraint budget;
  budget.functional.add(xb, real_part_functional(CMat::Identity(M, M)));
  budget.bound = 1.0;
  p.inequalities.push_back(std::move(budget));

  const ConicSolution sol = solve(p, solver);
  TransmitSubproblemResult out;
  out.report = make_report(SubproblemReport::Kind::transmit, sol);
  if (sol.status != SolveStatus::optimal)
    throw NumericalError(std::string("transmit_subproblem: solver status ") +
                         to_string(sol.status) + " (" + sol.message + ")");

  CMat Rt = clip_psd(extract_hermitian(sol.X[xb]));
  const double tr = Rt.trace().real();
  if (!(tr > 0.0)) throw NumericalError("transmit_subproblem: zero covariance returned");
  out.Rx.R = hermitize(Rt * (P0 / tr));
  out.Rx.budget = P0;
  out.objective = sdr_objective(out.Rx.R, V, a, G, K);
  return out;
}

IrsSubproblemResult irs_subproblem(const CMat& Rx, const CVec& a, const CMat& G, int K,
                                   const SolverOptions& solver) {
  const int N = static_cast<int>(a.size());
  check_inputs(CMat::Identity(N, N), a, G, K, "irs_subproblem");
  if (Rx.rows() != G.cols() || Rx.cols() != G.cols())
    throw std::invalid_argument("irs_subproblem: R_x dimension mismatch");
  const RVec d = steering_weights(N);
  const auto Dm = d.cast<cplx>().asDiagonal();
  const CMat R1 = reflect_gram(a, G, Rx);
  const CMat R3 = hermitize(order_factor(K) * R1 + CMat(Dm * R1 * Dm));
  const CMat B = R1 * Dm;

  const double s = scale_of(R3);
  ConicProgram p;
  const int vb = p.add_block(2 * N);
  const int sb = p.add_block(4);
  add_schur_epigraph(p, vb, sb, s * R3, s * R1, s * B);
  for (int n = 0; n < N; ++n) {
    CMat E = CMat::Zero(N, N);
    E(n, n) = 1.0;
    LinearConstraint c;
    c.functional.add(vb, real_part_functional(E));
    c.bound = 1.0;
    p.equalities.push_back(std::move(c));
  }

  const ConicSolution sol = solve(p, solver);
  IrsSubproblemResult out;
  out.report = make_report(SubproblemReport::Kind::irs, sol);
  if (sol.status != SolveStatus::optimal)
    throw NumericalError(std::string("irs_subproblem: solver status ") + to_string(sol.status) +
                         " (" + sol.message + ")");

  CMat V = clip_psd(extract_hermitian(sol.X[vb]));
  const RVec diag = V.diagonal().real();
  if (!(diag.minCoeff() > 0.0)) throw NumericalError("irs_subproblem: singular diagonal");
  const RVec inv_sqrt = diag.cwiseSqrt().cwiseInverse();
  V = inv_sqrt.cast<cplx>().asDiagonal() * V * inv_sqrt.cast<cplx>().asDiagonal();
  V = hermitize(V);
  V.diagonal().setOnes();
  out.V = V;
  out.objective = sdr_objective(Rx, V, a, G, K);
  return out;
}

RandomizationResult gaussian_randomization(const CMat& V, const CMat& Rx, const CVec& a,
                                           const CMat& G, int K, int samples,
                                           std::uint64_t seed) {
  check_inputs(V, a, G, K, "gaussian_randomization");
  if (samples < 1) throw std::invalid_argument("gaussian_randomization: samples must be >= 1");
  const Eigen::Index N = V.rows();
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitize(V));
  const RVec lam = es.eigenvalues().cwiseMax(0.0);  // ascending
  const double l1 = lam(N - 1);
  if (!(l1 > 0.0)) throw std::invalid_argument("gaussian_randomization: V is zero");

  RandomizationResult out;
  if (N == 1 || lam(N - 2) <= 1e-8 * l1) {
    out.v = PhaseProfile::from_vector(es.eigenvectors().col(N - 1));
    out.objective = sdr_objective(Rx, out.v.lift(), a, G, K);
    out.best_index = -1;
    return out;
  }

  const CMat L = es.eigenvectors() * lam.cwiseSqrt().cast<cplx>().asDiagonal();
  CounterRng rng(seed, Stream::randomization);
  out.objective = -std::numeric_limits<double>::infinity();
  out.best_index = -1;
  CVec w(N);
  for (int s = 0; s < samples; ++s) {
    for (Eigen::Index i = 0; i < N; ++i) w(i) = rng.complex_normal();
    const PhaseProfile cand = PhaseProfile::from_vector(L * w);
    const double f = sdr_objective(Rx, cand.lift(), a, G, K);
    if (f > out.objective) {
      out.objective = f;
      out.v = cand;
      out.best_index = s;
    }
  }
  return out;
}

PhaseProfile default_initial_phases(const CVec& a, const CMat& G) {
  if (G.rows() != a.size()) throw std::invalid_argument("default_initial_phases: dimension mismatch");
  Eigen::JacobiSVD<CMat> svd(G, Eigen::ComputeThinV);
  if (!(svd.singularValues().size() > 0 && svd.singularValues()(0) > 0.0))
    return PhaseProfile::uniform(static_cast<int>(a.size()));
  const CVec g = G * svd.matrixV().col(0);
  RVec phases(a.size());
  for (Eigen::Index n = 0; n < a.size(); ++n) phases(n) = -std::arg(a(n)) - std::arg(g(n));
  return PhaseProfile::from_phases(phases);
}

const char* to_string(AoStatus status) {
  return status == AoStatus::converged ? "converged" : "max_iter";
}

AoResult ao_minimize_crb(const PointTargetScene& scene, const CMat& G, const SystemConfig& config,
                         const PhaseProfile& init, const AoOptions& options) {
  config.validate();
  init.validate();
  if (G.rows() != config.N || G.cols() != config.M || init.v.size() != config.N)
    throw std::invalid_argument("ao_minimize_crb: dimension mismatch");
  if (!(options.tol > 0.0) || options.max_iter < 1)
    throw std::invalid_argument("ao_minimize_crb: tol must be > 0 and max_iter >= 1");

  const CVec a = target_steering(scene.theta, config.N, config.d_hat, config.lambda_R);
  const int K = config.K;
  AoResult res;

  auto run_transmit = [&](const CMat& V) {
    try {
      auto r = transmit_subproblem(V, a, G, K, config.P0, options.solver);
      res.reports.push_back(r.report);
      return r;
    } catch (const NumericalError& e) {
      throw SubproblemError(e.what(), res.objective_trace);
    }
  };

  CMat V = init.lift();
  CMat Rx = TransmitCovariance::isotropic(config.M, config.P0).R;
  double f = sdr_objective(Rx, V, a, G, K);
  res.objective_trace.push_back(f);

  // first transmit step doubles as the "initial phases" candidate
  const auto first = run_transmit(V);
  const TransmitCovariance init_Rx = first.Rx;
  if (first.objective >= f) {
    Rx = first.Rx.R;
    f = first.objective;
  }
  res.objective_trace.push_back(f);

  res.status = AoStatus::max_iter;
  for (int it = 1; it <= options.max_iter; ++it) {
    const double f_start = f;
    IrsSubproblemResult irs;
    try {
      irs = irs_subproblem(Rx, a, G, K, options.solver);
    } catch (const NumericalError& e) {
      throw SubproblemError(e.what(), res.objective_trace);
    }
    res.reports.push_back(irs.report);
    if (irs.objective >= f) {
      V = irs.V;
      f = irs.objective;
    }
    res.objective_trace.push_back(f);

    const auto tx = run_transmit(V);
    if (tx.objective >= f) {
      Rx = tx.Rx.R;
      f = tx.objective;
    }
    res.objective_trace.push_back(f);
    res.iterations = it;
    if (f - f_start <= options.tol * std::abs(f)) {
      res.status = AoStatus::converged;
      break;
    }
  }

  const auto rnd = gaussian_randomization(V, Rx, a, G, K, options.randomization_samples,
                                          options.seed);
  res.randomization_samples = rnd.best_index < 0 ? 0 : options.randomization_samples;
  const auto final_tx = run_transmit(rnd.v.lift());

  res.initial_crb = crb_point_closed(scene, init_Rx, init, G, config);
  const double rnd_crb = crb_point_closed(scene, final_tx.Rx, rnd.v, G, config);
  if (rnd_crb <= res.initial_crb) {
    res.Rx = final_tx.Rx;
    res.v = rnd.v;
    res.crb = rnd_crb;
  } else {
    res.Rx = init_Rx;
    res.v = init;
    res.crb = res.initial_crb;
  }
  return res;
}

void write_ao_trace(const AoResult& result, const PointTargetScene& scene,
                    const SystemConfig& config, std::ostream& out) {
  const double pre = crb_point_prefactor(scene, config);
  const auto old = out.precision(17);
  out << "iteration,f,crb\n";
  for (std::size_t i = 0; i < result.objective_trace.size(); ++i) {
    const double f = result.objective_trace[i];
    const double crb = f > 0.0 ? pre / (config.K * f) : kInfiniteCrb;
    out << i << ',' << f << ',' << crb << '\n';
  }
  out.precision(old);
}

}  // namespace irscrb
