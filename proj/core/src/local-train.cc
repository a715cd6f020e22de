// core/src/local-train.cc

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

#include "deplda/local-train.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "deplda/eer.h"

namespace deplda {

void LocalTrainConfig::Validate() const {
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate))
    throw ConfigError("learning rate must be a non-negative finite number");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0))
    throw ConfigError("Adam betas must lie in [0, 1)");
  if (!(eps_hat > 0.0)) throw ConfigError("Adam epsilon must be positive");
  if (max_epochs < 0) throw ConfigError("max epochs must be non-negative");
  if (patience < 1) throw ConfigError("patience must be at least 1");
  if (batch_size < 0) throw ConfigError("batch size must be non-negative");
  if (num_threads < 1) throw ConfigError("thread count must be at least 1");
}

class LocalOptimizer::Adam {
 public:
  Adam(const LocalTrainConfig &config, int dim)
      : config_(config), first_(Vector::Zero(dim)), second_(Vector::Zero(dim)) {}

  // Minimization step on `loss_grad`.
  void Step(const Vector &loss_grad, Vector *params) {
    step_++;
    first_ = config_.beta1 * first_ + (1.0 - config_.beta1) * loss_grad;
    second_ = config_.beta2 * second_ +
              (1.0 - config_.beta2) * loss_grad.cwiseProduct(loss_grad);
    const double c1 = 1.0 - std::pow(config_.beta1, step_);
    const double c2 = 1.0 - std::pow(config_.beta2, step_);
    for (Eigen::Index j = 0; j < params->size(); j++) {
      const double m_hat = first_(j) / c1;
      const double v_hat = second_(j) / c2;
      (*params)(j) -= config_.learning_rate * m_hat / (std::sqrt(v_hat) + config_.eps_hat);
    }
  }

 private:
  LocalTrainConfig config_;
  Vector first_, second_;
  int step_ = 0;
};

LocalOptimizer::LocalOptimizer(const LocalObjective &objective,
                               const LocalTrainConfig &config)
    : objective_(objective),
      adam_(std::make_unique<Adam>(config, objective.Dim())),
      m_diag_(Vector::Ones(objective.Dim())),
      order_(objective.NumClasses()),
      rng_(config.seed) {
  config.Validate();
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  batch_ = config.batch_size == 0
               ? order_.size()
               : std::min<std::size_t>(config.batch_size, order_.size());
}

LocalOptimizer::~LocalOptimizer() = default;

void LocalOptimizer::Epoch() {
  if (batch_ == order_.size()) {
    adam_->Step(-objective_.Gradient(m_diag_), &m_diag_);
  } else {
    std::shuffle(order_.begin(), order_.end(), rng_);
    for (std::size_t start = 0; start < order_.size(); start += batch_) {
      const std::size_t len = std::min(batch_, order_.size() - start);
      adam_->Step(-objective_.Gradient(m_diag_, std::span(order_).subspan(start, len)),
                  &m_diag_);
    }
  }
  epoch_++;
}

LocalModel TrainLocal(const LocalObjective &objective, const TrialScorer &monitor,
                      const LocalTrainConfig &config) {
  config.Validate();
  if (monitor.NumTrials() == 0) throw DataError("monitor trial list is empty");
  const int dim = objective.Dim();
  if (monitor.Config().global.Dim() != dim)
    throw ConfigError("monitor scorer and local objective differ in dimension");

  auto evaluate = [&](const Vector &m_diag, int epoch) {
    EpochRecord rec;
    rec.epoch = epoch;
    rec.objective = objective.LogLikelihood(m_diag);
    if (!std::isfinite(rec.objective) || !m_diag.allFinite())
      throw NumericError("local objective became non-finite at epoch " +
                         std::to_string(epoch));
    const auto scores = monitor.ScoreDeplda(m_diag, config.num_threads);
    rec.monitor_eer = ComputeEer(scores).eer;
    return rec;
  };

  LocalModel best = LocalModel::Identity(dim);
  best.history.epochs.push_back(evaluate(best.m_diag, 0));
  best.monitor_eer_at_best = best.history.epochs.back().monitor_eer;

  LocalOptimizer optimizer(objective, config);
  for (int epoch = 1; epoch <= config.max_epochs; epoch++) {
    optimizer.Epoch();
    const Vector &m_diag = optimizer.MDiag();
    const EpochRecord rec = evaluate(m_diag, epoch);
    best.history.epochs.push_back(rec);
    if (rec.monitor_eer < best.monitor_eer_at_best) {
      best.m_diag = m_diag;
      best.best_epoch = epoch;
      best.monitor_eer_at_best = rec.monitor_eer;
    } else if (epoch - best.best_epoch >= config.patience) {
      break;
    }
  }
  return best;
}

LocalModel TrainLocal(const ScorerConfig &base, const VectorSet &train_raw,
                      const MonitorSet &monitor, const LocalTrainConfig &config) {
  const GlobalModel &global = base.global;
  const VectorSet front = base.frontend.Apply(train_raw);
  const VectorSet normalized =
      base.ln_mode == LnMode::kNone ? front : LengthNormalize(front);
  const VectorSet global_side = global.Project(normalized);
  const VectorSet local_side =
      base.ln_mode == LnMode::kPartial ? global.Project(front) : global_side;
  LocalObjective objective(global, global_side, local_side);

  ScorerConfig monitor_config = base;
  monitor_config.variant = Variant::kDeplda;
  monitor_config.local = LocalModel::Identity(global.Dim());
  TrialScorer scorer(std::move(monitor_config), monitor.enroll_map,
                     monitor.enroll_vectors, monitor.test_vectors, monitor.trials);
  return TrainLocal(objective, scorer, config);
}

}  // namespace deplda
