// core/src/scoring.cc

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

#include "deplda/scoring.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>
#include <unordered_map>

namespace deplda {

namespace {

void CheckDims(const GlobalModel &global, const EnrollPosterior &post,
               const Vector &x_global, const Vector &x_local) {
  const Eigen::Index d = global.Dim();
  if (post.mean.size() != d || post.variance.size() != d || x_global.size() != d ||
      x_local.size() != d)
    throw DataError("score: dimension mismatch with model dimension " +
                    std::to_string(d));
}

// Shared by the plda and deplda paths so that M = I reproduces vanilla
// scores with identical arithmetic.
double NormalizedLikelihood(const GlobalModel &global, const EnrollPosterior &post,
                            const Vector &x_global, const Vector &x_local,
                            const Vector *m_diag) {
  double total = 0.0;
  for (Eigen::Index j = 0; j < global.Dim(); j++) {
    const double predicted = m_diag ? (*m_diag)(j) * x_local(j) : x_local(j);
    total += LogGaussian(predicted, post.mean(j), 1.0 + post.variance(j)) -
             LogGaussian(x_global(j), 0.0, global.epsilon(j) + 1.0);
  }
  return total;
}

// log N(y; 0, I + eps J) for y of length m (exchangeable Gaussian).
double LogJointMarginal(double eps, double sum, double sumsq, double m) {
  return -0.5 * (m * kLog2Pi + std::log1p(m * eps) + sumsq -
                 eps * sum * sum / (1.0 + m * eps));
}

}  // namespace

std::string_view ToString(Variant variant) {
  return variant == Variant::kPlda ? "plda" : "deplda";
}

double ScoreNlPlda(const GlobalModel &global, const EnrollPosterior &posterior,
                   const Vector &x) {
  CheckDims(global, posterior, x, x);
  return NormalizedLikelihood(global, posterior, x, x, nullptr);
}

double ScoreLrPlda(const GlobalModel &global, std::span<const Vector> enroll,
                   const Vector &x) {
  if (enroll.empty()) throw DataError("likelihood ratio needs at least one enrollment vector");
  const Eigen::Index d = global.Dim();
  if (x.size() != d) throw DataError("score: test vector dimension mismatch");
  for (const auto &e : enroll)
    if (e.size() != d) throw DataError("score: enrollment vector dimension mismatch");

  const double n = static_cast<double>(enroll.size());
  double total = 0.0;
  for (Eigen::Index j = 0; j < d; j++) {
    const double eps = global.epsilon(j);
    double sum = 0.0, sumsq = 0.0;
    for (const auto &e : enroll) {
      sum += e(j);
      sumsq += e(j) * e(j);
    }
    const double xj = x(j);
    total += LogJointMarginal(eps, sum + xj, sumsq + xj * xj, n + 1.0) -
             LogJointMarginal(eps, xj, xj * xj, 1.0) -
             LogJointMarginal(eps, sum, sumsq, n);
  }
  return total;
}

double ScoreNlDeplda(const GlobalModel &global, const Vector &m_diag,
                     const EnrollPosterior &posterior, const Vector &x_global,
                     const Vector &x_local) {
  CheckDims(global, posterior, x_global, x_local);
  if (m_diag.size() != global.Dim())
    throw DataError("score: local model dimension mismatch");
  return NormalizedLikelihood(global, posterior, x_global, x_local, &m_diag);
}

void ScorerConfig::Validate() const {
  const int d = global.Dim();
  if (d == 0) throw ConfigError("scorer has no global model");
  if (global.transform.rows() != d || global.transform.cols() != d ||
      global.epsilon.size() != d)
    throw ConfigError("global model blocks are inconsistent");
  if (variant == Variant::kDeplda) {
    if (!local) throw ConfigError("deplda scoring requires a local model");
    if (local->Dim() != d)
      throw ConfigError("local model dimension " + std::to_string(local->Dim()) +
                        " does not match global dimension " + std::to_string(d));
  }
  if (ln_mode == LnMode::kPartial && variant != Variant::kDeplda)
    throw ConfigError("partial length normalization requires deplda scoring");
  const int fe_out = frontend.lda ? frontend.lda->OutputDim()
                                  : static_cast<int>(frontend.mean.size());
  if (fe_out != 0 && fe_out != d)
    throw ConfigError("front end output dimension " + std::to_string(fe_out) +
                      " does not match global dimension " + std::to_string(d));
}

PreparedVector PrepareVector(const ScorerConfig &config, const Vector &raw) {
  const Vector front = config.frontend.Apply(raw);
  switch (config.ln_mode) {
    case LnMode::kNone: {
      Vector p = config.global.Project(front);
      return {p, p};
    }
    case LnMode::kFull: {
      Vector p = config.global.Project(LengthNormalize(front));
      return {p, p};
    }
    case LnMode::kPartial:
      return {config.global.Project(LengthNormalize(front)),
              config.global.Project(front)};
  }
  throw ConfigError("unknown length-normalization mode");
}

TrialScorer::TrialScorer(ScorerConfig config, const EnrollMap &enroll_map,
                         const VectorSet &enroll_vectors,
                         const VectorSet &test_vectors, TrialList trials)
    : config_(std::move(config)), trials_(std::move(trials)) {
  config_.Validate();
  std::unordered_map<std::string, std::size_t> enroll_index, test_index;
  trial_enroll_.reserve(trials_.size());
  trial_test_.reserve(trials_.size());

  for (std::size_t t = 0; t < trials_.size(); t++) {
    const Trial &trial = trials_[t];
    const std::string where = "trial " + std::to_string(t + 1) + " (" +
                              trial.enroll_id + " " + trial.test_id + "): ";
    auto eit = enroll_index.find(trial.enroll_id);
    if (eit == enroll_index.end()) {
      auto mit = enroll_map.find(trial.enroll_id);
      if (mit == enroll_map.end() || mit->second.empty())
        throw DataError(where + "unknown enroll id " + trial.enroll_id);
      std::vector<Vector> projected;
      projected.reserve(mit->second.size());
      for (const auto &utt : mit->second) {
        auto pos = enroll_vectors.Find(utt);
        if (!pos)
          throw DataError(where + "enrollment " + trial.enroll_id +
                          " references unknown utterance " + utt);
        projected.push_back(PrepareVector(config_, enroll_vectors[*pos].values).global_side);
      }
      posteriors_.push_back(ComputeEnrollPosterior(config_.global, projected));
      eit = enroll_index.emplace(trial.enroll_id, posteriors_.size() - 1).first;
    }
    auto tit = test_index.find(trial.test_id);
    if (tit == test_index.end()) {
      auto pos = test_vectors.Find(trial.test_id);
      if (!pos) throw DataError(where + "unknown test utterance " + trial.test_id);
      tests_.push_back(PrepareVector(config_, test_vectors[*pos].values));
      tit = test_index.emplace(trial.test_id, tests_.size() - 1).first;
    }
    trial_enroll_.push_back(eit->second);
    trial_test_.push_back(tit->second);
  }
}

template <typename Fn>
std::vector<ScoredTrial> TrialScorer::ScoreAll(Fn &&fn, int num_threads) const {
  std::vector<ScoredTrial> out(trials_.size());
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t t = begin; t < end; t++) {
      const Trial &trial = trials_[t];
      out[t] = {trial.enroll_id, trial.test_id, trial.label,
                fn(posteriors_[trial_enroll_[t]], tests_[trial_test_[t]])};
    }
  };
  const std::size_t n = trials_.size();
  const std::size_t workers =
      std::clamp<std::size_t>(static_cast<std::size_t>(std::max(num_threads, 1)), 1,
                              std::max<std::size_t>(n / 256, 1));
  if (workers <= 1) {
    work(0, n);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; w++) {
      const std::size_t begin = w * chunk, end = std::min(n, begin + chunk);
      if (begin < end) pool.emplace_back(work, begin, end);
    }
  }
  for (std::size_t t = 0; t < n; t++)
    if (!std::isfinite(out[t].score))
      throw NumericError("non-finite score for trial " + std::to_string(t + 1));
  return out;
}

std::vector<ScoredTrial> TrialScorer::Score(int num_threads) const {
  if (config_.variant == Variant::kDeplda) return ScoreDeplda(config_.local->m_diag, num_threads);
  return ScoreAll(
      [this](const EnrollPosterior &post, const PreparedVector &x) {
        return NormalizedLikelihood(config_.global, post, x.global_side, x.local_side,
                                    nullptr);
      },
      num_threads);
}

std::vector<ScoredTrial> TrialScorer::ScoreDeplda(const Vector &m_diag,
                                                  int num_threads) const {
  if (m_diag.size() != config_.global.Dim())
    throw DataError("score: local model dimension mismatch");
  return ScoreAll(
      [this, &m_diag](const EnrollPosterior &post, const PreparedVector &x) {
        return NormalizedLikelihood(config_.global, post, x.global_side, x.local_side,
                                    &m_diag);
      },
      num_threads);
}

std::vector<ScoredTrial> ScoreTrialset(const ScorerConfig &config,
                                       const EnrollMap &enroll_map,
                                       const VectorSet &enroll_vectors,
                                       const VectorSet &test_vectors,
                                       const TrialList &trials, int num_threads) {
  return TrialScorer(config, enroll_map, enroll_vectors, test_vectors, trials)
      .Score(num_threads);
}

}  // namespace deplda
