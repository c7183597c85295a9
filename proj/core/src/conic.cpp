// SPDX-License-Identifier: Apache-2.0
#include "irscrb/conic.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace irscrb {

// ---------------------------------------------------------------------------
// Program description

double LinearFunctional::evaluate(const std::vector<RMat>& blocks) const {
  double s = 0.0;
  for (const auto& t : terms) s += t.coeff.cwiseProduct(blocks.at(t.block)).sum();
  return s;
}

void LinearFunctional::add(int block, RMat coeff) {
  for (auto& t : terms) {
    if (t.block == block) {
      t.coeff += coeff;
      return;
    }
  }
  terms.push_back({block, std::move(coeff)});
}

int ConicProgram::add_block(int order) {
  blocks.push_back(order);
  return static_cast<int>(blocks.size()) - 1;
}

namespace {

void validate_functional(const LinearFunctional& f, const std::vector<int>& blocks,
                         const char* what, bool require_nonzero) {
  double norm = 0.0;
  for (const auto& t : f.terms) {
    if (t.block < 0 || t.block >= static_cast<int>(blocks.size()))
      throw std::invalid_argument(std::string(what) + ": block index out of range");
    const int n = blocks[t.block];
    if (t.coeff.rows() != n || t.coeff.cols() != n)
      throw std::invalid_argument(std::string(what) + ": coefficient size mismatch");
    const double cn = t.coeff.norm();
    if ((t.coeff - t.coeff.transpose()).norm() > 1e-12 * std::max(1.0, cn))
      throw std::invalid_argument(std::string(what) + ": coefficient is not symmetric");
    norm += cn;
  }
  if (require_nonzero && !(norm > 0.0))
    throw std::invalid_argument(std::string(what) + ": all-zero constraint");
}

}  // namespace

void ConicProgram::validate() const {
  if (blocks.empty()) throw std::invalid_argument("ConicProgram: no blocks");
  for (int n : blocks)
    if (n < 1) throw std::invalid_argument("ConicProgram: block order must be >= 1");
  validate_functional(objective, blocks, "objective", false);
  for (const auto& c : equalities) validate_functional(c.functional, blocks, "equality", true);
  for (const auto& c : inequalities) validate_functional(c.functional, blocks, "inequality", true);
}

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::max_iter: return "max_iter";
    case SolveStatus::infeasible: return "infeasible";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Hermitian embedding

RMat embed_hermitian(const CMat& H) {
  if (H.rows() != H.cols()) throw std::invalid_argument("embed_hermitian: matrix not square");
  if ((H - H.adjoint()).norm() > 1e-10 * std::max(1.0, H.norm()))
    throw std::invalid_argument("embed_hermitian: matrix not Hermitian");
  const Eigen::Index n = H.rows();
  RMat X(2 * n, 2 * n);
  X.topLeftCorner(n, n) = H.real();
  X.topRightCorner(n, n) = -H.imag();
  X.bottomLeftCorner(n, n) = H.imag();
  X.bottomRightCorner(n, n) = H.real();
  return X;
}

CMat extract_hermitian(const RMat& X) {
  if (X.rows() != X.cols() || X.rows() % 2 != 0)
    throw std::invalid_argument("extract_hermitian: expected an even-order square matrix");
  const Eigen::Index n = X.rows() / 2;
  const RMat re = 0.5 * (X.topLeftCorner(n, n) + X.bottomRightCorner(n, n));
  const RMat im = 0.5 * (X.bottomLeftCorner(n, n) - X.topRightCorner(n, n));
  CMat H(n, n);
  H.real() = 0.5 * (re + re.transpose());
  H.imag() = 0.5 * (im - im.transpose());
  return H;
}

RMat real_part_functional(const CMat& B) {
  const CMat h = 0.5 * (B + B.adjoint());
  // tr(h H) = <embed(h), embed(H)> / 2
  return 0.5 * embed_hermitian(h);
}

RMat imag_part_functional(const CMat& B) {
  return real_part_functional(cplx(0.0, -1.0) * B);
}

// ---------------------------------------------------------------------------
// Residuals

namespace {

double min_eigenvalue(const RMat& S) {
  if (S.rows() == 1) return S(0, 0);
  Eigen::SelfAdjointEigenSolver<RMat> es(S, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double functional_norm_sq(const LinearFunctional& f) {
  double s = 0.0;
  for (const auto& t : f.terms) s += t.coeff.squaredNorm();
  return s;
}

}  // namespace

KktResiduals kkt_residuals(const ConicProgram& p, const ConicSolution& sol) {
  const std::size_t nb = p.blocks.size();
  if (sol.X.size() != nb || sol.Z.size() != nb ||
      sol.y.size() != static_cast<Eigen::Index>(p.equalities.size()) ||
      sol.lambda.size() != static_cast<Eigen::Index>(p.inequalities.size()))
    throw std::invalid_argument("kkt_residuals: solution does not match the program");

  double bh_sq = 0.0;
  double primal_sq = 0.0;
  for (std::size_t i = 0; i < p.equalities.size(); ++i) {
    const auto& c = p.equalities[i];
    const double r = c.functional.evaluate(sol.X) - c.bound;
    primal_sq += r * r;
    bh_sq += c.bound * c.bound;
  }
  std::vector<double> ineq_slack(p.inequalities.size());
  for (std::size_t k = 0; k < p.inequalities.size(); ++k) {
    const auto& c = p.inequalities[k];
    ineq_slack[k] = c.bound - c.functional.evaluate(sol.X);
    const double viol = std::max(0.0, -ineq_slack[k]);
    primal_sq += viol * viol;
    bh_sq += c.bound * c.bound;
  }
  for (std::size_t j = 0; j < nb; ++j) {
    const double v = std::max(0.0, -min_eigenvalue(sol.X[j]));
    primal_sq += v * v;
  }

  // C - A^T y + G^T lambda - Z
  std::vector<RMat> R(nb);
  for (std::size_t j = 0; j < nb; ++j) R[j] = -sol.Z[j];
  for (const auto& t : p.objective.terms) R[t.block] += t.coeff;
  for (std::size_t i = 0; i < p.equalities.size(); ++i)
    for (const auto& t : p.equalities[i].functional.terms) R[t.block] -= sol.y[i] * t.coeff;
  for (std::size_t k = 0; k < p.inequalities.size(); ++k)
    for (const auto& t : p.inequalities[k].functional.terms)
      R[t.block] += sol.lambda[k] * t.coeff;
  double dual_sq = 0.0;
  for (std::size_t j = 0; j < nb; ++j) {
    dual_sq += R[j].squaredNorm();
    const double v = std::max(0.0, -min_eigenvalue(sol.Z[j]));
    dual_sq += v * v;
  }
  for (Eigen::Index k = 0; k < sol.lambda.size(); ++k) {
    const double v = std::max(0.0, -sol.lambda[k]);
    dual_sq += v * v;
  }

  double comp = 0.0;
  for (std::size_t j = 0; j < nb; ++j) comp += sol.X[j].cwiseProduct(sol.Z[j]).sum();
  for (std::size_t k = 0; k < ineq_slack.size(); ++k) comp += sol.lambda[k] * ineq_slack[k];
  const double pobj = p.objective.evaluate(sol.X);

  KktResiduals out;
  out.primal = std::sqrt(primal_sq) / (1.0 + std::sqrt(bh_sq));
  out.dual = std::sqrt(dual_sq) / (1.0 + std::sqrt(functional_norm_sq(p.objective)));
  out.gap = std::abs(comp) / (1.0 + std::abs(pobj));
  return out;
}

// ---------------------------------------------------------------------------
// Interior-point method

namespace {

struct SparseEntry {
  int i, j;
  double v;  // applies to (i, j) and (j, i)
};

struct RowPart {
  int block;
  RMat dense;
  std::vector<SparseEntry> sparse;
  bool use_sparse;
};

struct Row {
  std::vector<RowPart> parts;
  double b;
};

RowPart make_part(int block, const RMat& coeff) {
  RowPart part{block, coeff, {}, false};
  const Eigen::Index n = coeff.rows();
  double cost = 0.0;
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i <= j; ++i)
      if (coeff(i, j) != 0.0) {
        part.sparse.push_back({static_cast<int>(i), static_cast<int>(j), coeff(i, j)});
        cost += (i == j) ? 1.0 : 2.0;
      }
  part.use_sparse = cost * static_cast<double>(n * n) <= 2.0 * static_cast<double>(n * n * n);
  return part;
}

double inner(const RowPart& part, const RMat& X) {
  if (part.use_sparse) {
    double s = 0.0;
    for (const auto& e : part.sparse) s += (e.i == e.j ? 1.0 : 2.0) * e.v * X(e.i, e.j);
    return s;
  }
  return part.dense.cwiseProduct(X).sum();
}

/// W A W for a symmetric coefficient A.
RMat congruence(const RowPart& part, const RMat& W) {
  if (!part.use_sparse) return W * part.dense * W;
  const Eigen::Index n = W.rows();
  RMat out = RMat::Zero(n, n);
  for (const auto& e : part.sparse) {
    if (e.i == e.j) {
      out.noalias() += e.v * W.col(e.i) * W.col(e.i).transpose();
    } else {
      out.noalias() += e.v * (W.col(e.i) * W.col(e.j).transpose() +
                              W.col(e.j) * W.col(e.i).transpose());
    }
  }
  return out;
}

double max_step(const RMat& X, const RMat& dX) {
  if (X.rows() == 1) return dX(0, 0) < 0.0 ? -X(0, 0) / dX(0, 0) : std::numeric_limits<double>::infinity();
  Eigen::LLT<RMat> llt(X);
  if (llt.info() != Eigen::Success) return 0.0;
  const RMat L = llt.matrixL();
  RMat T = L.triangularView<Eigen::Lower>().solve(dX);
  T = L.triangularView<Eigen::Lower>().solve(T.transpose()).eval();
  T = 0.5 * (T + T.transpose()).eval();
  const double lmin = min_eigenvalue(T);
  return lmin < 0.0 ? -1.0 / lmin : std::numeric_limits<double>::infinity();
}

struct NtScaling {
  RMat G;     // W = G G^T
  RMat Ginv;  // G^{-1}
  RVec d;     // scaled X = scaled Z = diag(d)
  RMat W;
  bool ok = true;
};

NtScaling nt_scaling(const RMat& X, const RMat& Z) {
  NtScaling s;
  Eigen::LLT<RMat> lx(X), lz(Z);
  if (lx.info() != Eigen::Success || lz.info() != Eigen::Success) {
    s.ok = false;
    return s;
  }
  const RMat LX = lx.matrixL();
  const RMat LZ = lz.matrixL();
  Eigen::JacobiSVD<RMat> svd(LZ.transpose() * LX, Eigen::ComputeFullU | Eigen::ComputeFullV);
  s.d = svd.singularValues();
  if (!(s.d.minCoeff() > 0.0)) {
    s.ok = false;
    return s;
  }
  const RVec dinv_sqrt = s.d.cwiseSqrt().cwiseInverse();
  s.G = LX * svd.matrixV() * dinv_sqrt.asDiagonal();
  s.Ginv = s.d.cwiseInverse().asDiagonal() * s.G.transpose() * Z;
  s.W = s.G * s.G.transpose();
  s.W = 0.5 * (s.W + s.W.transpose()).eval();
  return s;
}

class InteriorPoint {
 public:
  InteriorPoint(const ConicProgram& program, const SolverOptions& options)
      : program_(program), options_(options) {
    build();
  }

  ConicSolution run();

 private:
  void build();
  RVec apply_A(const std::vector<RMat>& X) const;
  std::vector<RMat> apply_At(const RVec& y) const;
  ConicSolution unscaled(int iterations) const;
  void solve_direction(const std::vector<NtScaling>& nt, const Eigen::LDLT<RMat>& schur,
                       const RVec& rp, const std::vector<RMat>& Rd,
                       const std::vector<RMat>& Rc, RVec& dy, std::vector<RMat>& dX,
                       std::vector<RMat>& dZ) const;

  const ConicProgram& program_;
  SolverOptions options_;

  std::vector<int> orders_;  // user blocks then one 1x1 slack per inequality
  std::vector<Row> rows_;
  std::vector<RMat> C_;
  std::vector<double> row_scale_;
  double obj_scale_ = 1.0;
  double rhs_scale_ = 1.0;
  double nu_ = 0.0;

  std::vector<RMat> X_, Z_;
  RVec y_;
};

void InteriorPoint::build() {
  const int nb_user = static_cast<int>(program_.blocks.size());
  orders_ = program_.blocks;
  for (std::size_t k = 0; k < program_.inequalities.size(); ++k) orders_.push_back(1);
  nu_ = 0.0;
  for (int n : orders_) nu_ += n;

  auto add_row = [&](const LinearFunctional& f, double bound, int slack_block) {
    double norm_sq = 0.0;
    for (const auto& t : f.terms) norm_sq += t.coeff.squaredNorm();
    if (slack_block >= 0) norm_sq += 1.0;
    const double scale = std::sqrt(norm_sq);
    Row row;
    for (const auto& t : f.terms) row.parts.push_back(make_part(t.block, t.coeff / scale));
    if (slack_block >= 0) row.parts.push_back(make_part(slack_block, RMat::Constant(1, 1, 1.0 / scale)));
    row.b = bound / scale;
    rows_.push_back(std::move(row));
    row_scale_.push_back(scale);
  };
  for (const auto& c : program_.equalities) add_row(c.functional, c.bound, -1);
  for (std::size_t k = 0; k < program_.inequalities.size(); ++k)
    add_row(program_.inequalities[k].functional, program_.inequalities[k].bound,
            nb_user + static_cast<int>(k));

  C_.assign(orders_.size(), RMat());
  for (std::size_t j = 0; j < orders_.size(); ++j) C_[j] = RMat::Zero(orders_[j], orders_[j]);
  for (const auto& t : program_.objective.terms) C_[t.block] += t.coeff;
  double cnorm = 0.0;
  for (const auto& c : C_) cnorm += c.squaredNorm();
  cnorm = std::sqrt(cnorm);
  obj_scale_ = cnorm > 0.0 ? cnorm : 1.0;
  for (auto& c : C_) c /= obj_scale_;

  double bnorm = 0.0;
  for (const auto& r : rows_) bnorm = std::max(bnorm, std::abs(r.b));
  rhs_scale_ = std::max(1.0, bnorm);
  for (auto& r : rows_) r.b /= rhs_scale_;

  // starting point in the spirit of SDPT3's infeasible start
  X_.resize(orders_.size());
  Z_.resize(orders_.size());
  for (std::size_t j = 0; j < orders_.size(); ++j) {
    const double n = orders_[j];
    double xi = std::max(10.0, std::sqrt(n));
    double eta = std::max(10.0, std::sqrt(n));
    for (const auto& r : rows_)
      for (const auto& part : r.parts)
        if (part.block == static_cast<int>(j)) {
          const double an = part.dense.norm();
          xi = std::max(xi, std::sqrt(n) * (1.0 + std::abs(r.b)) / (1.0 + an));
          eta = std::max(eta, an);
        }
    eta = std::max(eta, C_[j].norm());
    X_[j] = xi * RMat::Identity(orders_[j], orders_[j]);
    Z_[j] = eta * RMat::Identity(orders_[j], orders_[j]);
  }
  y_ = RVec::Zero(static_cast<Eigen::Index>(rows_.size()));
}

RVec InteriorPoint::apply_A(const std::vector<RMat>& X) const {
  RVec out(static_cast<Eigen::Index>(rows_.size()));
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    double s = 0.0;
    for (const auto& part : rows_[i].parts) s += inner(part, X[part.block]);
    out[static_cast<Eigen::Index>(i)] = s;
  }
  return out;
}

std::vector<RMat> InteriorPoint::apply_At(const RVec& y) const {
  std::vector<RMat> out(orders_.size());
  for (std::size_t j = 0; j < orders_.size(); ++j) out[j] = RMat::Zero(orders_[j], orders_[j]);
  for (std::size_t i = 0; i < rows_.size(); ++i)
    for (const auto& part : rows_[i].parts) out[part.block] += y[static_cast<Eigen::Index>(i)] * part.dense;
  return out;
}

ConicSolution InteriorPoint::unscaled(int iterations) const {
  const std::size_t nb = program_.blocks.size();
  const std::size_t neq = program_.equalities.size();
  const std::size_t nin = program_.inequalities.size();
  ConicSolution sol;
  sol.iterations = iterations;
  sol.X.resize(nb);
  sol.Z.resize(nb);
  for (std::size_t j = 0; j < nb; ++j) {
    sol.X[j] = rhs_scale_ * X_[j];
    sol.Z[j] = obj_scale_ * Z_[j];
  }
  sol.y.resize(static_cast<Eigen::Index>(neq));
  sol.lambda.resize(static_cast<Eigen::Index>(nin));
  for (std::size_t i = 0; i < neq; ++i)
    sol.y[static_cast<Eigen::Index>(i)] = obj_scale_ * y_[static_cast<Eigen::Index>(i)] / row_scale_[i];
  for (std::size_t k = 0; k < nin; ++k)
    sol.lambda[static_cast<Eigen::Index>(k)] =
        -obj_scale_ * y_[static_cast<Eigen::Index>(neq + k)] / row_scale_[neq + k];
  sol.primal_objective = program_.objective.evaluate(sol.X);
  double dobj = 0.0;
  for (std::size_t i = 0; i < neq; ++i) dobj += program_.equalities[i].bound * sol.y[static_cast<Eigen::Index>(i)];
  for (std::size_t k = 0; k < nin; ++k)
    dobj -= program_.inequalities[k].bound * sol.lambda[static_cast<Eigen::Index>(k)];
  sol.dual_objective = dobj;
  sol.kkt = kkt_residuals(program_, sol);
  return sol;
}

void InteriorPoint::solve_direction(const std::vector<NtScaling>& nt,
                                    const Eigen::LDLT<RMat>& schur, const RVec& rp,
                                    const std::vector<RMat>& Rd, const std::vector<RMat>& Rc,
                                    RVec& dy, std::vector<RMat>& dX,
                                    std::vector<RMat>& dZ) const {
  const std::size_t nb = orders_.size();
  std::vector<RMat> T(nb);
  for (std::size_t j = 0; j < nb; ++j) T[j] = Rc[j] - nt[j].W * Rd[j] * nt[j].W;
  const RVec rhs = rp - apply_A(T);
  dy = schur.solve(rhs);
  const auto Ady = apply_At(dy);
  dZ.resize(nb);
  dX.resize(nb);
  for (std::size_t j = 0; j < nb; ++j) {
    dZ[j] = Rd[j] - Ady[j];
    dZ[j] = 0.5 * (dZ[j] + dZ[j].transpose()).eval();
    dX[j] = Rc[j] - nt[j].W * dZ[j] * nt[j].W;
    dX[j] = 0.5 * (dX[j] + dX[j].transpose()).eval();
  }
}

ConicSolution InteriorPoint::run() {
  const std::size_t nb = orders_.size();
  const Eigen::Index m = static_cast<Eigen::Index>(rows_.size());
  RVec b(m);
  for (Eigen::Index i = 0; i < m; ++i) b[i] = rows_[static_cast<std::size_t>(i)].b;

  // blocks touched by each row, for Schur assembly
  std::vector<std::vector<std::pair<int, int>>> touching(nb);  // (row, part index)
  for (std::size_t i = 0; i < rows_.size(); ++i)
    for (std::size_t q = 0; q < rows_[i].parts.size(); ++q)
      touching[rows_[i].parts[q].block].push_back({static_cast<int>(i), static_cast<int>(q)});

  int stalled = 0;
  for (int iter = 0; iter <= options_.max_iter; ++iter) {
    ConicSolution current = unscaled(iter);
    const double obj_gap = std::abs(current.primal_objective - current.dual_objective) /
                           (1.0 + std::abs(current.primal_objective));
    if (current.kkt.max() <= options_.tol && obj_gap <= options_.tol) {
      current.status = SolveStatus::optimal;
      current.message = "converged";
      return current;
    }
    if (iter == options_.max_iter) {
      current.status = SolveStatus::max_iter;
      current.message = "iteration limit reached";
      return current;
    }

    // infeasibility certificates on the scaled problem
    {
      const auto Aty = apply_At(y_);
      double ray = 0.0, xnorm = 0.0, znorm = 0.0, cx = 0.0;
      for (std::size_t j = 0; j < nb; ++j) {
        ray += (Aty[j] + Z_[j]).squaredNorm();
        xnorm = std::max(xnorm, X_[j].norm());
        znorm = std::max(znorm, Z_[j].norm());
        cx += C_[j].cwiseProduct(X_[j]).sum();
      }
      const double by = b.dot(y_);
      const double Ax = apply_A(X_).norm();
      if (iter > 5 && by > 0.0 && std::sqrt(ray) < 1e-8 * by) {
        current.status = SolveStatus::infeasible;
        current.message = "primal infeasible (dual ray)";
        return current;
      }
      if (iter > 5 && cx < 0.0 && Ax < 1e-8 * -cx) {
        current.status = SolveStatus::infeasible;
        current.message = "dual infeasible (primal ray)";
        return current;
      }
      if (xnorm > 1e13 || znorm > 1e13) {
        current.status = SolveStatus::infeasible;
        current.message = "iterates diverged";
        return current;
      }
    }

    const RVec rp = b - apply_A(X_);
    const auto Aty = apply_At(y_);
    std::vector<RMat> Rd(nb);
    double mu = 0.0;
    for (std::size_t j = 0; j < nb; ++j) {
      Rd[j] = C_[j] - Z_[j] - Aty[j];
      mu += X_[j].cwiseProduct(Z_[j]).sum();
    }
    mu /= nu_;

    std::vector<NtScaling> nt(nb);
    for (std::size_t j = 0; j < nb; ++j) {
      nt[j] = nt_scaling(X_[j], Z_[j]);
      if (!nt[j].ok) {
        current.status = SolveStatus::max_iter;
        current.message = "lost positive definiteness";
        return current;
      }
    }

    RMat M = RMat::Zero(m, m);
    for (std::size_t j = 0; j < nb; ++j) {
      for (const auto& [k, qk] : touching[j]) {
        const RMat P = congruence(rows_[k].parts[qk], nt[j].W);
        for (const auto& [i, qi] : touching[j]) {
          if (i < k) continue;
          M(i, k) += inner(rows_[i].parts[qi], P);
        }
      }
    }
    M = M.selfadjointView<Eigen::Lower>();
    Eigen::LDLT<RMat> schur(M);
    if (schur.info() != Eigen::Success || !(schur.vectorD().minCoeff() > 0.0)) {
      const double reg = 1e-14 * std::max(1.0, M.diagonal().maxCoeff());
      M.diagonal().array() += reg;
      schur.compute(M);
    }

    // predictor
    std::vector<RMat> Rc(nb);
    for (std::size_t j = 0; j < nb; ++j) Rc[j] = -X_[j];
    RVec dy;
    std::vector<RMat> dX, dZ;
    solve_direction(nt, schur, rp, Rd, Rc, dy, dX, dZ);
    double ap = 1.0, ad = 1.0;
    for (std::size_t j = 0; j < nb; ++j) {
      ap = std::min(ap, max_step(X_[j], dX[j]));
      ad = std::min(ad, max_step(Z_[j], dZ[j]));
    }
    double mu_aff = 0.0;
    for (std::size_t j = 0; j < nb; ++j)
      mu_aff += (X_[j] + ap * dX[j]).cwiseProduct(Z_[j] + ad * dZ[j]).sum();
    mu_aff /= nu_;
    const double expon = std::max(1.0, 3.0 * std::min(ap, ad) * std::min(ap, ad));
    const double sigma = std::clamp(std::pow(std::max(mu_aff, 0.0) / mu, expon), 0.0, 1.0);

    // corrector in the scaled space, where X and Z both equal diag(d)
    for (std::size_t j = 0; j < nb; ++j) {
      const auto& s = nt[j];
      const RMat dXs = s.Ginv * dX[j] * s.Ginv.transpose();
      const RMat dZs = s.G.transpose() * dZ[j] * s.G;
      RMat second = dXs * dZs;
      second = 0.5 * (second + second.transpose()).eval();
      const Eigen::Index n = s.d.size();
      RMat S(n, n);
      for (Eigen::Index c = 0; c < n; ++c)
        for (Eigen::Index r = 0; r < n; ++r) {
          double rhs = -second(r, c);
          if (r == c) rhs += sigma * mu - s.d[r] * s.d[r];
          S(r, c) = 2.0 * rhs / (s.d[r] + s.d[c]);
        }
      Rc[j] = s.G * S * s.G.transpose();
    }
    solve_direction(nt, schur, rp, Rd, Rc, dy, dX, dZ);

    double ap_max = std::numeric_limits<double>::infinity();
    double ad_max = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < nb; ++j) {
      ap_max = std::min(ap_max, max_step(X_[j], dX[j]));
      ad_max = std::min(ad_max, max_step(Z_[j], dZ[j]));
    }
    const double gamma = 0.9 + 0.09 * std::min(ap, ad);
    const double step_p = std::min(1.0, gamma * ap_max);
    const double step_d = std::min(1.0, gamma * ad_max);

    for (std::size_t j = 0; j < nb; ++j) {
      X_[j] += step_p * dX[j];
      Z_[j] += step_d * dZ[j];
      X_[j] = 0.5 * (X_[j] + X_[j].transpose()).eval();
      Z_[j] = 0.5 * (Z_[j] + Z_[j].transpose()).eval();
    }
    y_ += step_d * dy;

    if (std::max(step_p, step_d) < 1e-10) {
      if (++stalled >= 3) {
        ConicSolution out = unscaled(iter + 1);
        out.status = SolveStatus::max_iter;
        out.message = "stalled";
        return out;
      }
    } else {
      stalled = 0;
    }
  }
  ConicSolution out = unscaled(options_.max_iter);
  out.status = SolveStatus::max_iter;
  out.message = "iteration limit reached";
  return out;
}

}  // namespace

ConicSolution solve(const ConicProgram& program, const SolverOptions& options) {
  program.validate();
  if (!(options.tol > 0.0) || options.max_iter < 1)
    throw std::invalid_argument("solve: tol must be > 0 and max_iter >= 1");
  InteriorPoint ipm(program, options);
  return ipm.run();
}

// ---------------------------------------------------------------------------
// Triplet dump

namespace {

void write_functional(const LinearFunctional& f, std::ostream& out) {
  std::size_t nnz = 0;
  for (const auto& t : f.terms)
    for (Eigen::Index j = 0; j < t.coeff.cols(); ++j)
      for (Eigen::Index i = 0; i <= j; ++i)
        if (t.coeff(i, j) != 0.0) ++nnz;
  out << nnz << '\n';
  for (const auto& t : f.terms)
    for (Eigen::Index j = 0; j < t.coeff.cols(); ++j)
      for (Eigen::Index i = 0; i <= j; ++i)
        if (t.coeff(i, j) != 0.0) out << t.block << ' ' << i << ' ' << j << ' ' << t.coeff(i, j) << '\n';
}

LinearFunctional read_functional(std::istream& in, const std::vector<int>& blocks) {
  std::size_t nnz = 0;
  if (!(in >> nnz)) throw std::invalid_argument("read_triplets: missing entry count");
  LinearFunctional f;
  for (std::size_t e = 0; e < nnz; ++e) {
    int blk, i, j;
    double v;
    if (!(in >> blk >> i >> j >> v)) throw std::invalid_argument("read_triplets: truncated entry");
    if (blk < 0 || blk >= static_cast<int>(blocks.size()) || i < 0 || j < 0 ||
        i >= blocks[blk] || j >= blocks[blk])
      throw std::invalid_argument("read_triplets: entry out of range");
    RMat c = RMat::Zero(blocks[blk], blocks[blk]);
    c(i, j) = v;
    c(j, i) = v;
    f.add(blk, std::move(c));
  }
  return f;
}

}  // namespace

void write_triplets(const ConicProgram& program, std::ostream& out) {
  const auto old_precision = out.precision(17);
  out << "irscrb-conic 1\n";
  out << "blocks " << program.blocks.size();
  for (int n : program.blocks) out << ' ' << n;
  out << '\n';
  out << "objective ";
  write_functional(program.objective, out);
  for (const auto& c : program.equalities) {
    out << "eq " << c.bound << ' ';
    write_functional(c.functional, out);
  }
  for (const auto& c : program.inequalities) {
    out << "ineq " << c.bound << ' ';
    write_functional(c.functional, out);
  }
  out << "end\n";
  out.precision(old_precision);
}

ConicProgram read_triplets(std::istream& in) {
  std::string tag;
  int version = 0;
  if (!(in >> tag >> version) || tag != "irscrb-conic" || version != 1)
    throw std::invalid_argument("read_triplets: bad header");
  ConicProgram p;
  std::size_t nb = 0;
  if (!(in >> tag >> nb) || tag != "blocks") throw std::invalid_argument("read_triplets: missing blocks");
  p.blocks.resize(nb);
  for (auto& n : p.blocks)
    if (!(in >> n)) throw std::invalid_argument("read_triplets: truncated block list");
  if (!(in >> tag) || tag != "objective") throw std::invalid_argument("read_triplets: missing objective");
  p.objective = read_functional(in, p.blocks);
  while (in >> tag) {
    if (tag == "end") return p;
    double bound;
    if (!(in >> bound)) throw std::invalid_argument("read_triplets: missing bound");
    LinearConstraint c{read_functional(in, p.blocks), bound};
    if (tag == "eq")
      p.equalities.push_back(std::move(c));
    else if (tag == "ineq")
      p.inequalities.push_back(std::move(c));
    else
      throw std::invalid_argument("read_triplets: unknown section '" + tag + "'");
  }
  throw std::invalid_argument("read_triplets: missing end marker");
}

}  // namespace irscrb
