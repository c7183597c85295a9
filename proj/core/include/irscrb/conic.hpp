// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "irscrb/types.hpp"

namespace irscrb {

/// Symmetric coefficient matrix acting on one PSD block through the
/// Frobenius inner product <coeff, X_block>.
struct BlockCoefficient {
  int block = 0;
  RMat coeff;
};

struct LinearFunctional {
  std::vector<BlockCoefficient> terms;

  double evaluate(const std::vector<RMat>& blocks) const;
  void add(int block, RMat coeff);
};

struct LinearConstraint {
  LinearFunctional functional;
  double bound = 0.0;
};

/// minimize   sum_j <C_j, X_j>
/// subject to <A_i, X> = b_i      (equalities)
///            <G_k, X> <= h_k     (inequalities)
///            X_j PSD, real symmetric, order blocks[j]
///
/// Hermitian data enters through embed_hermitian; an order-1 block is a
/// nonnegative scalar.
struct ConicProgram {
  std::vector<int> blocks;
  LinearFunctional objective;
  std::vector<LinearConstraint> equalities;
  std::vector<LinearConstraint> inequalities;

  int add_block(int order);
  /// Throws std::invalid_argument on bad block indices, asymmetric or
  /// mis-sized coefficients, or an all-zero constraint.
  void validate() const;
};

enum class SolveStatus { optimal, max_iter, infeasible };
const char* to_string(SolveStatus status);

/// Relative residuals; each is nonnegative.
///   primal: equality/inequality violation and cone violation of X
///   dual:   C - A^T y + G^T lambda - Z, plus cone violation of Z and lambda
///   gap:    complementarity <X, Z> + lambda^T (h - G X)
/// normalized by 1 + ||(b, h)||, 1 + ||C|| and 1 + |primal objective|.
struct KktResiduals {
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;
  double max() const { return std::max(primal, std::max(dual, gap)); }
};

struct ConicSolution {
  std::vector<RMat> X;  // primal blocks
  RVec y;               // equality multipliers
  RVec lambda;          // inequality multipliers, >= 0
  std::vector<RMat> Z;  // dual slack blocks
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  SolveStatus status = SolveStatus::max_iter;
  KktResiduals kkt;
  int iterations = 0;
  std::string message;
};

struct SolverOptions {
  double tol = 1e-8;
  int max_iter = 200;
};

ConicSolution solve(const ConicProgram& program, const SolverOptions& options = {});

KktResiduals kkt_residuals(const ConicProgram& program, const ConicSolution& solution);

/// [[Re H, -Im H], [Im H, Re H]]. Throws std::invalid_argument when H is not
/// Hermitian to 1e-10 (relative to its norm).
RMat embed_hermitian(const CMat& H);

/// Inverse of the embedding, averaging the two copies:
/// H = (X11 + X22)/2 + j (X21 - X12)/2.
CMat extract_hermitian(const RMat& X);

/// Coefficient S on an embedded block with <S, embed(H)> = Re tr(B H) for
/// every Hermitian H.
RMat real_part_functional(const CMat& B);

/// Coefficient S with <S, embed(H)> = Im tr(B H).
RMat imag_part_functional(const CMat& B);

/// Sparse-triplet text dump (see README, "Conic program dump format").
void write_triplets(const ConicProgram& program, std::ostream& out);
ConicProgram read_triplets(std::istream& in);

}  // namespace irscrb
