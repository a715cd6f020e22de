// deplda/plda.h

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

#ifndef DEPLDA_PLDA_H_
#define DEPLDA_PLDA_H_

// The global linear-Gaussian model.  After the transform W every class mean
// mu is drawn from N(0, diag(epsilon)) and every sample from N(mu, I).  The
// model is estimated by EM on the unconstrained two-covariance form and then
// simultaneously diagonalized.

#include <span>
#include <vector>

#include "deplda/common.h"
#include "deplda/corpus-io.h"

namespace deplda {

struct GlobalModel {
  Vector mean;       // training mean in the model's input space
  Matrix transform;  // W, d x d
  Vector epsilon;    // between-class variances, descending, >= kEpsilonFloor

  int Dim() const { return static_cast<int>(mean.size()); }

  /// W (v - mean).
  Vector Project(const Vector &v) const;
  VectorSet Project(const VectorSet &set) const;
};

/// Posterior of the class mean given n projected enrollment vectors:
///   mean_j = n eps_j / (n eps_j + 1) * xbar_j,  variance_j = eps_j / (n eps_j + 1).
struct EnrollPosterior {
  Vector mean;
  Vector variance;
  int count = 0;
};

EnrollPosterior ComputeEnrollPosterior(const GlobalModel &model,
                                       std::span<const Vector> projected);
/// Same as above from sufficient statistics.
EnrollPosterior ComputeEnrollPosterior(const GlobalModel &model,
                                       const Vector &projected_mean, int count);

/// log p(x) = sum_j log N(x_j; 0, eps_j + 1) for a projected vector.
double LogMarginal(const GlobalModel &model, const Vector &x);

struct Diagonalization {
  Matrix transform;  // W
  Vector epsilon;    // diag(W sigma_b W^T), descending
};

/// Finds W with W sigma_w W^T = I and W sigma_b W^T = diag(epsilon) by
/// whitening sigma_w and eigendecomposing the whitened sigma_b.  Throws
/// NumericError if sigma_w is not positive definite or either matrix is
/// asymmetric beyond 1e-8 (relative to its largest entry).
Diagonalization SimultaneousDiagonalize(const Matrix &sigma_w,
                                        const Matrix &sigma_b);

/// Log-likelihood entries, one for the initial moment estimate followed by
/// one per EM iteration.
struct EmTrace {
  std::vector<double> log_likelihood;
};

/// Parameters of the two-covariance model: mu ~ N(mean, between),
/// x | mu ~ N(mu, within).
struct TwoCovarianceModel {
  Vector mean;
  Matrix within;
  Matrix between;
};

/// sum_k ln p(x^k_1, ..., x^k_{n_k}) under the two-covariance model, using
/// the exact per-class joint density (latent mean integrated out).
double TwoCovarianceLogLikelihood(const VectorSet &set,
                                  const TwoCovarianceModel &params);

struct GlobalFit {
  GlobalModel model;
  TwoCovarianceModel params;
  EmTrace trace;
};

/// EM on the two-covariance model from moment-scatter initialization, then
/// W/epsilon from SimultaneousDiagonalize(within + ridge, between).
///
/// Requires a fully labeled set with at least two classes.  If the data has
/// no within-class degrees of freedom (every class a singleton) within is
/// initialized to the identity.
GlobalFit FitGlobal(const VectorSet &set, int iterations = 10);

}  // namespace deplda

#endif  // DEPLDA_PLDA_H_
