// core/src/plda.cc

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

#include "deplda/plda.h"

#include <cmath>
#include <string>

namespace deplda {

namespace {

void CheckProjectedDim(const GlobalModel &model, Eigen::Index dim) {
  if (dim != model.Dim())
    throw DataError("vector has dimension " + std::to_string(dim) +
                    ", model has " + std::to_string(model.Dim()));
}

double MaxAbsAsymmetry(const Matrix &m) {
  return (m - m.transpose()).cwiseAbs().maxCoeff();
}

void CheckSymmetric(const Matrix &m, const char *name) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if (MaxAbsAsymmetry(m) > 1e-8 * scale)
    throw NumericError(std::string(name) + " is not symmetric");
}

// Per-class sufficient statistics, centered on the global mean.
struct ClassSummary {
  int count;
  Vector mean;
};

struct Scatter {
  std::vector<ClassSummary> classes;
  Matrix within_scatter;  // sum_k sum_i (x - xbar_k)(x - xbar_k)^T
  double num_samples = 0.0;
};

Scatter Summarize(const VectorSet &set, const Vector &mean) {
  const int dim = set.Dim();
  Scatter s;
  s.within_scatter = Matrix::Zero(dim, dim);
  s.num_samples = static_cast<double>(set.Size());
  s.classes.reserve(set.NumClasses());
  for (std::size_t k = 0; k < set.NumClasses(); k++) {
    const auto &members = set.ClassMembers(k);
    Vector xbar = Vector::Zero(dim);
    for (std::size_t i : members) xbar += set[i].values;
    xbar /= static_cast<double>(members.size());
    for (std::size_t i : members) {
      Vector r = set[i].values - xbar;
      s.within_scatter.noalias() += r * r.transpose();
    }
    s.classes.push_back({static_cast<int>(members.size()), xbar - mean});
  }
  return s;
}

double LogLikelihood(const Scatter &s, const Matrix &within, const Matrix &between) {
  const double dim = static_cast<double>(within.rows());
  Eigen::LLT<Matrix> within_llt(within);
  if (within_llt.info() != Eigen::Success)
    throw NumericError("within-class covariance is not positive definite");
  const double within_logdet =
      2.0 * within_llt.matrixLLT().diagonal().array().log().sum();
  const double within_quad =
      within_llt.solve(s.within_scatter).trace();

  double total = -0.5 * within_quad;
  int cached_n = -1;
  Eigen::LLT<Matrix> combined_llt;
  double combined_logdet = 0.0;
  for (const auto &c : s.classes) {
    if (c.count != cached_n) {
      cached_n = c.count;
      combined_llt.compute(between + within / static_cast<double>(c.count));
      if (combined_llt.info() != Eigen::Success)
        throw NumericError("between + within/n is not positive definite");
      combined_logdet = 2.0 * combined_llt.matrixLLT().diagonal().array().log().sum();
    }
    const double n = static_cast<double>(c.count);
    const double quad = c.mean.dot(combined_llt.solve(c.mean));
    // Density of the class mean plus that of the residuals about it.
    total += -0.5 * (dim * kLog2Pi + combined_logdet + quad);
    total += -0.5 * (n - 1.0) * (dim * kLog2Pi + within_logdet) -
             0.5 * dim * std::log(n);
  }
  return total;
}

Matrix Inverse(const Matrix &spd) {
  Eigen::LLT<Matrix> llt(spd);
  if (llt.info() != Eigen::Success)
    throw NumericError("covariance lost positive definiteness during EM");
  return llt.solve(Matrix::Identity(spd.rows(), spd.cols()));
}

// One EM update of (within, between) with the mean held fixed.
void EmStep(const Scatter &s, Matrix *within, Matrix *between) {
  const int dim = static_cast<int>(within->rows());
  const Matrix within_inv = Inverse(*within);
  const Matrix between_inv = Inverse(*between);

  Matrix within_stats = s.within_scatter;
  Matrix between_stats = Matrix::Zero(dim, dim);
  int cached_n = -1;
  Matrix mixed, gain;
  for (const auto &c : s.classes) {
    const double n = static_cast<double>(c.count);
    if (c.count != cached_n) {
      cached_n = c.count;
      // Posterior covariance of the latent mean and the map from the
      // observed class mean to its posterior mean.
      mixed = Inverse(between_inv + n * within_inv);
      gain = mixed * (n * within_inv);
    }
    const Vector w = gain * c.mean;
    const Vector r = c.mean - w;
    between_stats.noalias() += w * w.transpose();
    between_stats += mixed;
    within_stats.noalias() += n * (r * r.transpose());
    within_stats += n * mixed;
  }
  *within = within_stats / s.num_samples;
  *between = between_stats / static_cast<double>(s.classes.size());
  *within = 0.5 * (*within + within->transpose());
  *between = 0.5 * (*between + between->transpose());
}

}  // namespace

Vector GlobalModel::Project(const Vector &v) const {
  CheckProjectedDim(*this, v.size());
  return transform * (v - mean);
}

VectorSet GlobalModel::Project(const VectorSet &set) const {
  CheckProjectedDim(*this, set.Dim());
  return set.Transform([this](const Vector &v) -> Vector { return transform * (v - mean); });
}

EnrollPosterior ComputeEnrollPosterior(const GlobalModel &model,
                                       std::span<const Vector> projected) {
  if (projected.empty())
    throw DataError("enrollment requires at least one vector");
  Vector sum = Vector::Zero(model.Dim());
  for (const auto &v : projected) {
    CheckProjectedDim(model, v.size());
    sum += v;
  }
  return ComputeEnrollPosterior(model, sum / static_cast<double>(projected.size()),
                                static_cast<int>(projected.size()));
}

EnrollPosterior ComputeEnrollPosterior(const GlobalModel &model,
                                       const Vector &projected_mean, int count) {
  if (count < 1) throw DataError("enrollment requires at least one vector");
  CheckProjectedDim(model, projected_mean.size());
  const double n = static_cast<double>(count);
  EnrollPosterior post;
  post.count = count;
  post.mean.resize(model.Dim());
  post.variance.resize(model.Dim());
  for (int j = 0; j < model.Dim(); j++) {
    const double eps = model.epsilon(j);
    post.mean(j) = n * eps / (n * eps + 1.0) * projected_mean(j);
    post.variance(j) = eps / (n * eps + 1.0);
  }
  return post;
}

double LogMarginal(const GlobalModel &model, const Vector &x) {
  CheckProjectedDim(model, x.size());
  double total = 0.0;
  for (int j = 0; j < model.Dim(); j++)
    total += LogGaussian(x(j), 0.0, model.epsilon(j) + 1.0);
  return total;
}

Diagonalization SimultaneousDiagonalize(const Matrix &sigma_w,
                                        const Matrix &sigma_b) {
  const Eigen::Index dim = sigma_w.rows();
  if (dim == 0 || sigma_w.cols() != dim || sigma_b.rows() != dim ||
      sigma_b.cols() != dim)
    throw NumericError("simultaneous diagonalization needs two d x d matrices");
  CheckSymmetric(sigma_w, "within-class covariance");
  CheckSymmetric(sigma_b, "between-class covariance");

  Eigen::SelfAdjointEigenSolver<Matrix> within_eig(0.5 * (sigma_w + sigma_w.transpose()));
  if (within_eig.info() != Eigen::Success)
    throw NumericError("eigendecomposition of within-class covariance failed");
  const Vector &lambda = within_eig.eigenvalues();
  if (!(lambda(0) > 1e-12 * std::max(1.0, lambda(dim - 1))))
    throw NumericError("within-class covariance is not positive definite");

  // Whitening T with T sigma_w T^T = I.
  const Matrix whiten =
      lambda.cwiseSqrt().cwiseInverse().asDiagonal() * within_eig.eigenvectors().transpose();
  Matrix between_w = whiten * sigma_b * whiten.transpose();
  between_w = 0.5 * (between_w + between_w.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> between_eig(between_w);
  if (between_eig.info() != Eigen::Success)
    throw NumericError("eigendecomposition of whitened between-class covariance failed");

  Diagonalization out;
  out.transform.resize(dim, dim);
  out.epsilon.resize(dim);
  for (Eigen::Index r = 0; r < dim; r++) {
    const Eigen::Index src = dim - 1 - r;
    Vector row = whiten.transpose() * between_eig.eigenvectors().col(src);
    Eigen::Index arg;
    row.cwiseAbs().maxCoeff(&arg);
    if (row(arg) < 0) row = -row;
    out.transform.row(r) = row.transpose();
    out.epsilon(r) = between_eig.eigenvalues()(src);
  }
  return out;
}

double TwoCovarianceLogLikelihood(const VectorSet &set,
                                  const TwoCovarianceModel &params) {
  if (!set.FullyLabeled()) throw DataError("log-likelihood requires labeled data");
  return LogLikelihood(Summarize(set, params.mean), params.within, params.between);
}

GlobalFit FitGlobal(const VectorSet &set, int iterations) {
  if (iterations < 0) throw ConfigError("EM iteration count must be non-negative");
  if (set.Empty()) throw DataError("cannot fit a global model to an empty set");
  if (!set.FullyLabeled())
    throw DataError("global model training requires every record to be labeled");
  if (set.NumClasses() < 2)
    throw DataError("global model training requires at least two classes");

  const int dim = set.Dim();
  GlobalFit fit;
  fit.params.mean = Vector::Zero(dim);
  for (const auto &rec : set.Records()) fit.params.mean += rec.values;
  fit.params.mean /= static_cast<double>(set.Size());

  const Scatter s = Summarize(set, fit.params.mean);
  const double num_classes = static_cast<double>(s.classes.size());

  Matrix within = Matrix::Identity(dim, dim);
  if (s.num_samples > num_classes)
    within = s.within_scatter / (s.num_samples - num_classes);
  Matrix between = Matrix::Zero(dim, dim);
  for (const auto &c : s.classes) between.noalias() += c.mean * c.mean.transpose();
  between /= num_classes;
  within = AddRidge(within);
  between = AddRidge(between);
  if (!(between.trace() > 0.0)) between = Matrix::Identity(dim, dim) * kEpsilonFloor;

  fit.trace.log_likelihood.push_back(LogLikelihood(s, within, between));
  for (int it = 0; it < iterations; it++) {
    EmStep(s, &within, &between);
    const double ll = LogLikelihood(s, within, between);
    if (!std::isfinite(ll))
      throw NumericError("EM log-likelihood became non-finite at iteration " +
                         std::to_string(it + 1));
    fit.trace.log_likelihood.push_back(ll);
  }
  fit.params.within = within;
  fit.params.between = between;

  Diagonalization diag = SimultaneousDiagonalize(AddRidge(within), between);
  fit.model.mean = fit.params.mean;
  fit.model.transform = std::move(diag.transform);
  fit.model.epsilon = diag.epsilon.cwiseMax(kEpsilonFloor);
  if (!fit.model.transform.allFinite() || !fit.model.epsilon.allFinite())
    throw NumericError("global model parameters are not finite");
  return fit;
}

}  // namespace deplda
