// deplda/common.h

// Copyright 2026  The deplda Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef DEPLDA_COMMON_H_
#define DEPLDA_COMMON_H_

#include <Eigen/Dense>

#include <numbers>
#include <stdexcept>
#include <string>

namespace deplda {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Malformed or inconsistent input data (bad files, unresolvable ids,
/// degenerate sets).  The CLI maps this to exit status 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A computation produced a non-finite value or a matrix lost definiteness.
/// The CLI maps this to exit status 3.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid combination of options (e.g. partial LN without a local model).
/// The CLI maps this to exit status 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kLog2Pi = 1.8378770664093454835606594728112;  // ln(2*pi)

/// Lower bound on the between-class variances of a fitted global model.
inline constexpr double kEpsilonFloor = 1e-8;

/// Lower bound on any variance handed to LogGaussian.
inline constexpr double kVarianceFloor = 1e-12;

/// Scale of the ridge added to within-class scatter: lambda = kRidgeScale *
/// trace(S_w) / dim.
inline constexpr double kRidgeScale = 1e-6;

/// Univariate Gaussian log-density, evaluated entirely in the log domain.
inline double LogGaussian(double x, double mean, double variance) {
  const double var = variance < kVarianceFloor ? kVarianceFloor : variance;
  const double diff = x - mean;
  return -0.5 * (kLog2Pi + std::log(var) + diff * diff / var);
}

// Returns true if every coefficient is finite.
template <typename Derived>
bool AllFinite(const Eigen::DenseBase<Derived> &m) {
  return m.allFinite();
}

// Adds kRidgeScale * trace(m) / dim to the diagonal of a square matrix.
Matrix AddRidge(const Matrix &m);

}  // namespace deplda

#endif  // DEPLDA_COMMON_H_
