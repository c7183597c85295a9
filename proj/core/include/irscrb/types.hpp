// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace irscrb {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

inline constexpr double kInfiniteCrb = std::numeric_limits<double>::infinity();

/// A computation left its mathematical domain (e.g. a cubic without an
/// admissible root). Distinct from invalid_argument: the inputs were
/// well-formed.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rank condition for estimating the response matrix is violated.
class EstimabilityError : public NumericalError {
 public:
  EstimabilityError(const std::string& what, int deficiency)
      : NumericalError(what), deficiency_(deficiency) {}
  int deficiency() const { return deficiency_; }

 private:
  int deficiency_;
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watts_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }

}  // namespace irscrb
