// deplda/local-model.h

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

#ifndef DEPLDA_LOCAL_MODEL_H_
#define DEPLDA_LOCAL_MODEL_H_

// The local model of decoupled PLDA: a diagonal transform M such that
//   p_l(M x | mu) = N(M x; mu, I),
// trained against the class-mean posteriors of the (fixed) global model.
//
// For class k with n_k samples and projected mean xbar_k, integrating mu
// over the global posterior gives, per dimension j,
//   M x_ij ~ N(c_kj, s_kj),  c_kj = n_k eps_j / (n_k eps_j + 1) xbar_kj,
//                            s_kj = 1 + eps_j / (n_k eps_j + 1),
// with every sample treated as an independent test.  The objective is a
// concave quadratic in each m_j.

#include <iosfwd>
#include <span>
#include <vector>

#include "deplda/common.h"
#include "deplda/corpus-io.h"
#include "deplda/plda.h"

namespace deplda {

struct EpochRecord {
  int epoch = 0;  // 0 is the identity initialization, before any update
  double objective = 0.0;
  double monitor_eer = 0.0;
};

struct TrainHistory {
  std::vector<EpochRecord> epochs;

  /// `epoch,objective,monitor_eer` with a header line.
  void WriteCsv(std::ostream &os) const;
};

struct LocalModel {
  Vector m_diag;
  int best_epoch = 0;
  double monitor_eer_at_best = 0.0;
  TrainHistory history;

  int Dim() const { return static_cast<int>(m_diag.size()); }
  static LocalModel Identity(int dim);
};

/// Per-class statistics for the local objective.  The global side supplies
/// the class posteriors (xbar_k, n_k); the local side supplies the samples
/// that go through M.  Both are projected sets with identical ids and labels
/// (they differ only under partial length normalization).
class LocalObjective {
 public:
  LocalObjective(const GlobalModel &global, const VectorSet &projected);
  LocalObjective(const GlobalModel &global, const VectorSet &global_side,
                 const VectorSet &local_side);

  int Dim() const { return dim_; }
  std::size_t NumClasses() const { return classes_.size(); }

  /// Independent-sample objective (sum over every sample of its predictive
  /// log-density).
  double LogLikelihood(const Vector &m_diag) const;
  /// Tied alternative: the product over a class's samples sits inside the
  /// integral over mu.  Only used for comparison.
  double TiedLogLikelihood(const Vector &m_diag) const;

  Vector Gradient(const Vector &m_diag) const;
  /// Gradient over a subset of classes (minibatch).
  Vector Gradient(const Vector &m_diag, std::span<const std::size_t> classes) const;

  /// Per-dimension maximizer of LogLikelihood:
  ///   m_j = sum c_kj x_ij / s_kj / sum x_ij^2 / s_kj.
  Vector ClosedFormMaximizer() const;

 private:
  struct ClassStats {
    int count;
    Matrix samples;         // d x n_k, local side
    Vector prior_mean;      // c_k
    Vector prior_variance;  // eps / (n eps + 1)
    Vector pred_variance;   // s_k = 1 + prior_variance
  };
  void Init(const GlobalModel &global, const VectorSet &global_side,
            const VectorSet &local_side);
  void CheckDim(const Vector &m_diag) const;

  int dim_ = 0;
  std::vector<ClassStats> classes_;
};

double LocalLogLikelihood(const GlobalModel &global, const Vector &m_diag,
                          const VectorSet &projected);
double LocalLogLikelihoodTied(const GlobalModel &global, const Vector &m_diag,
                              const VectorSet &projected);
Vector LocalGradient(const GlobalModel &global, const Vector &m_diag,
                     const VectorSet &projected);

}  // namespace deplda

#endif  // DEPLDA_LOCAL_MODEL_H_
