// core/src/preprocess.cc

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

#include "deplda/preprocess.h"

#include <cmath>
#include <string>

namespace deplda {

std::string_view ToString(LnMode mode) {
  switch (mode) {
    case LnMode::kNone: return "none";
    case LnMode::kFull: return "full";
    case LnMode::kPartial: return "partial";
  }
  return "none";
}

LnMode ParseLnMode(std::string_view name) {
  if (name == "none") return LnMode::kNone;
  if (name == "full") return LnMode::kFull;
  if (name == "partial") return LnMode::kPartial;
  throw ConfigError("unknown length-normalization mode '" + std::string(name) +
                    "' (expected none, full or partial)");
}

Vector ComputeMean(const VectorSet &set) {
  if (set.Empty()) throw DataError("cannot compute the mean of an empty set");
  Vector sum = Vector::Zero(set.Dim());
  for (const auto &rec : set.Records()) sum += rec.values;
  return sum / static_cast<double>(set.Size());
}

Vector LengthNormalize(const Vector &v) {
  const double norm = v.norm();
  if (!(norm > 0.0)) throw DataError("cannot length-normalize a zero vector");
  return (std::sqrt(static_cast<double>(v.size())) / norm) * v;
}

VectorSet LengthNormalize(const VectorSet &set) {
  return set.Transform([](const Vector &v) { return LengthNormalize(v); });
}

Vector LdaTransform::Apply(const Vector &x) const {
  if (x.size() != InputDim())
    throw DataError("LDA expects dimension " + std::to_string(InputDim()) +
                    ", got " + std::to_string(x.size()));
  return projection * (x - mean);
}

LdaTransform FitLda(const VectorSet &set, int target_dim) {
  const int dim = set.Dim();
  if (target_dim <= 0) throw ConfigError("LDA output dimension must be positive");
  if (target_dim > dim)
    throw ConfigError("LDA output dimension " + std::to_string(target_dim) +
                      " exceeds input dimension " + std::to_string(dim));
  if (!set.FullyLabeled()) throw DataError("LDA requires every record to be labeled");
  if (set.NumClasses() < 2) throw DataError("LDA requires at least two classes");

  const Vector mean = ComputeMean(set);
  Matrix within = Matrix::Zero(dim, dim), between = Matrix::Zero(dim, dim);
  for (std::size_t k = 0; k < set.NumClasses(); k++) {
    const auto &members = set.ClassMembers(k);
    Vector class_mean = Vector::Zero(dim);
    for (std::size_t i : members) class_mean += set[i].values;
    class_mean /= static_cast<double>(members.size());
    for (std::size_t i : members) {
      Vector r = set[i].values - class_mean;
      within.noalias() += r * r.transpose();
    }
    Vector c = class_mean - mean;
    between.noalias() += static_cast<double>(members.size()) * c * c.transpose();
  }
  const double total = static_cast<double>(set.Size());
  within /= total;
  between /= total;
  within = AddRidge(within);

  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> solver(
      between, within, Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
  if (solver.info() != Eigen::Success)
    throw NumericError("LDA generalized eigenproblem did not converge");

  // Eigenvalues come back ascending; take the last target_dim in reverse.
  LdaTransform lda;
  lda.mean = mean;
  lda.projection.resize(target_dim, dim);
  for (int r = 0; r < target_dim; r++) {
    Vector v = solver.eigenvectors().col(dim - 1 - r);
    Eigen::Index arg;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0) v = -v;
    lda.projection.row(r) = v.transpose();
  }
  if (!lda.projection.allFinite()) throw NumericError("LDA projection is not finite");
  return lda;
}

VectorSet ApplyLda(const LdaTransform &lda, const VectorSet &set) {
  if (set.Dim() != lda.InputDim())
    throw DataError("LDA expects dimension " + std::to_string(lda.InputDim()) +
                    ", set has " + std::to_string(set.Dim()));
  return set.Transform([&](const Vector &v) { return lda.Apply(v); });
}

Vector FrontEnd::Apply(const Vector &x) const {
  if (lda) return lda->Apply(x);
  if (mean.size() == 0) return x;
  if (x.size() != mean.size())
    throw DataError("front end expects dimension " + std::to_string(mean.size()) +
                    ", got " + std::to_string(x.size()));
  return x - mean;
}

VectorSet FrontEnd::Apply(const VectorSet &set) const {
  return set.Transform([this](const Vector &v) { return Apply(v); });
}

int FrontEnd::InputDim() const {
  if (lda) return lda->InputDim();
  return static_cast<int>(mean.size());
}

FrontEnd FitFrontEnd(const VectorSet &set, std::optional<int> lda_dim) {
  FrontEnd fe;
  fe.mean = ComputeMean(set);
  if (lda_dim) fe.lda = FitLda(set, *lda_dim);
  return fe;
}

}  // namespace deplda
