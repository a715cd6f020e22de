// deplda/local-train.h

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

#ifndef DEPLDA_LOCAL_TRAIN_H_
#define DEPLDA_LOCAL_TRAIN_H_

#include <cstdint>
#include <memory>
#include <random>
#include <vector>

#include "deplda/corpus-io.h"
#include "deplda/local-model.h"
#include "deplda/scoring.h"

namespace deplda {

struct LocalTrainConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps_hat = 1e-8;
  int max_epochs = 100;
  int patience = 5;
  int batch_size = 0;  // classes per update; 0 means full batch
  std::uint64_t seed = 0;
  int num_threads = 1;  // for monitor scoring

  /// Throws ConfigError on out-of-range values.
  void Validate() const;
};

/// Trial list used to pick the epoch with the best EER.  Enrollment and test
/// utterances are looked up in the two vector sets (raw, pre-front-end).
struct MonitorSet {
  TrialList trials;
  EnrollMap enroll_map;
  VectorSet enroll_vectors;
  VectorSet test_vectors;
};

/// Adam ascent on a LocalObjective, starting from the identity.  One call to
/// Epoch() is one pass over the classes: a single full-batch update, or one
/// update per minibatch of classes in a freshly shuffled order.
class LocalOptimizer {
 public:
  LocalOptimizer(const LocalObjective &objective, const LocalTrainConfig &config);
  ~LocalOptimizer();
  LocalOptimizer(const LocalOptimizer &) = delete;
  LocalOptimizer &operator=(const LocalOptimizer &) = delete;

  void Epoch();
  const Vector &MDiag() const { return m_diag_; }
  int EpochsDone() const { return epoch_; }

 private:
  class Adam;
  const LocalObjective &objective_;
  std::unique_ptr<Adam> adam_;
  Vector m_diag_;
  std::vector<std::size_t> order_;
  std::size_t batch_ = 0;
  std::mt19937_64 rng_;
  int epoch_ = 0;
};

/// Adam on the local objective starting from M = I.  Epoch 0 records the
/// identity; each later epoch is one pass of updates (one update when full
/// batch).  The returned model holds the m_diag with the lowest monitor EER
/// (earliest epoch on ties); training stops after `patience` epochs without
/// a strict improvement, or after max_epochs updates.
///
/// `monitor` must be a TrialScorer over the same global model.  Throws
/// NumericError naming the epoch if the objective becomes non-finite.
LocalModel TrainLocal(const LocalObjective &objective,
                      const TrialScorer &monitor,
                      const LocalTrainConfig &config);

/// Convenience wrapper over raw (pre-front-end) training vectors.  The
/// global side of the objective and the monitor's global components receive
/// LN'd vectors when base.ln_mode is full or partial; the local side is LN'd
/// only for full.
LocalModel TrainLocal(const ScorerConfig &base, const VectorSet &train_raw,
                      const MonitorSet &monitor, const LocalTrainConfig &config);

}  // namespace deplda

#endif  // DEPLDA_LOCAL_TRAIN_H_
