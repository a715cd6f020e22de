// core/src/local-model.cc

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

#include "deplda/local-model.h"

#include <ostream>
#include <string>

namespace deplda {

void TrainHistory::WriteCsv(std::ostream &os) const {
  os << "epoch,objective,monitor_eer\n";
  for (const auto &e : epochs)
    os << e.epoch << ',' << FormatDouble(e.objective) << ','
       << FormatDouble(e.monitor_eer) << '\n';
}

LocalModel LocalModel::Identity(int dim) {
  LocalModel m;
  m.m_diag = Vector::Ones(dim);
  return m;
}

LocalObjective::LocalObjective(const GlobalModel &global, const VectorSet &projected) {
  Init(global, projected, projected);
}

LocalObjective::LocalObjective(const GlobalModel &global, const VectorSet &global_side,
                               const VectorSet &local_side) {
  Init(global, global_side, local_side);
}

void LocalObjective::Init(const GlobalModel &global, const VectorSet &global_side,
                          const VectorSet &local_side) {
  if (global_side.Empty() || global_side.NumClasses() == 0)
    throw DataError("local objective needs at least one labeled class");
  if (!global_side.FullyLabeled() || !local_side.FullyLabeled())
    throw DataError("local objective requires every record to be labeled");
  if (global_side.Dim() != global.Dim() || local_side.Dim() != global.Dim())
    throw DataError("local objective: vector dimension " +
                    std::to_string(global_side.Dim()) + " does not match model dimension " +
                    std::to_string(global.Dim()));
  if (global_side.Size() != local_side.Size())
    throw DataError("global-side and local-side sets differ in size");
  for (std::size_t i = 0; i < global_side.Size(); i++) {
    if (global_side[i].utt_id != local_side[i].utt_id ||
        global_side[i].class_id != local_side[i].class_id)
      throw DataError("global-side and local-side sets disagree at " +
                      global_side[i].utt_id);
  }

  dim_ = global.Dim();
  classes_.clear();
  classes_.reserve(global_side.NumClasses());
  for (std::size_t k = 0; k < global_side.NumClasses(); k++) {
    const auto &members = global_side.ClassMembers(k);
    ClassStats c;
    c.count = static_cast<int>(members.size());
    c.samples.resize(dim_, c.count);
    Vector xbar = Vector::Zero(dim_);
    for (int i = 0; i < c.count; i++) {
      xbar += global_side[members[i]].values;
      c.samples.col(i) = local_side[members[i]].values;
    }
    xbar /= static_cast<double>(c.count);
    EnrollPosterior post = ComputeEnrollPosterior(global, xbar, c.count);
    c.prior_mean = std::move(post.mean);
    c.prior_variance = std::move(post.variance);
    c.pred_variance = c.prior_variance.array() + 1.0;
    classes_.push_back(std::move(c));
  }
}

void LocalObjective::CheckDim(const Vector &m_diag) const {
  if (m_diag.size() != dim_)
    throw DataError("m_diag has dimension " + std::to_string(m_diag.size()) +
                    ", objective has " + std::to_string(dim_));
}

double LocalObjective::LogLikelihood(const Vector &m_diag) const {
  CheckDim(m_diag);
  double total = 0.0;
  for (const auto &c : classes_) {
    double class_total = 0.0;
    for (int i = 0; i < c.count; i++)
      for (int j = 0; j < dim_; j++)
        class_total += LogGaussian(m_diag(j) * c.samples(j, i), c.prior_mean(j),
                                   c.pred_variance(j));
    total += class_total;
  }
  return total;
}

double LocalObjective::TiedLogLikelihood(const Vector &m_diag) const {
  CheckDim(m_diag);
  // Per dimension, y = M x over the class is jointly Gaussian with mean c 1
  // and covariance I + v J (v the posterior variance).
  double total = 0.0;
  for (const auto &c : classes_) {
    const double n = static_cast<double>(c.count);
    for (int j = 0; j < dim_; j++) {
      const double v = c.prior_variance(j);
      double sum = 0.0, sumsq = 0.0;
      for (int i = 0; i < c.count; i++) {
        const double r = m_diag(j) * c.samples(j, i) - c.prior_mean(j);
        sum += r;
        sumsq += r * r;
      }
      total += -0.5 * (n * kLog2Pi + std::log1p(n * v) + sumsq -
                       v * sum * sum / (1.0 + n * v));
    }
  }
  return total;
}

Vector LocalObjective::Gradient(const Vector &m_diag) const {
  CheckDim(m_diag);
  Vector grad = Vector::Zero(dim_);
  for (const auto &c : classes_)
    for (int i = 0; i < c.count; i++)
      for (int j = 0; j < dim_; j++) {
        const double x = c.samples(j, i);
        grad(j) -= (m_diag(j) * x - c.prior_mean(j)) * x / c.pred_variance(j);
      }
  return grad;
}

Vector LocalObjective::Gradient(const Vector &m_diag,
                                std::span<const std::size_t> classes) const {
  CheckDim(m_diag);
  Vector grad = Vector::Zero(dim_);
  for (std::size_t k : classes) {
    const auto &c = classes_.at(k);
    for (int i = 0; i < c.count; i++)
      for (int j = 0; j < dim_; j++) {
        const double x = c.samples(j, i);
        grad(j) -= (m_diag(j) * x - c.prior_mean(j)) * x / c.pred_variance(j);
      }
  }
  return grad;
}

Vector LocalObjective::ClosedFormMaximizer() const {
  Vector num = Vector::Zero(dim_), den = Vector::Zero(dim_);
  for (const auto &c : classes_)
    for (int i = 0; i < c.count; i++)
      for (int j = 0; j < dim_; j++) {
        const double x = c.samples(j, i);
        num(j) += c.prior_mean(j) * x / c.pred_variance(j);
        den(j) += x * x / c.pred_variance(j);
      }
  for (int j = 0; j < dim_; j++)
    if (!(den(j) > 0.0))
      throw NumericError("local objective is flat in dimension " + std::to_string(j));
  return num.cwiseQuotient(den);
}

double LocalLogLikelihood(const GlobalModel &global, const Vector &m_diag,
                          const VectorSet &projected) {
  return LocalObjective(global, projected).LogLikelihood(m_diag);
}

double LocalLogLikelihoodTied(const GlobalModel &global, const Vector &m_diag,
                              const VectorSet &projected) {
  return LocalObjective(global, projected).TiedLogLikelihood(m_diag);
}

Vector LocalGradient(const GlobalModel &global, const Vector &m_diag,
                     const VectorSet &projected) {
  return LocalObjective(global, projected).Gradient(m_diag);
}

}  // namespace deplda
