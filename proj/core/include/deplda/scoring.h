// deplda/scoring.h

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

#ifndef DEPLDA_SCORING_H_
#define DEPLDA_SCORING_H_

// Trial scoring.  All scores are natural-log normalized likelihoods,
//   log [ int p(x | mu) p(mu | enroll) dmu / p(x) ],
// where for decoupled PLDA the numerator uses the local model on M x while
// enrollment and normalization stay on the global model.
//
// Pipeline order for every vector: front end (center, LDA) -> LN per mode ->
// project with W.

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "deplda/common.h"
#include "deplda/corpus-io.h"
#include "deplda/local-model.h"
#include "deplda/plda.h"
#include "deplda/preprocess.h"

namespace deplda {

enum class Variant { kPlda, kDeplda };

std::string_view ToString(Variant variant);

double ScoreNlPlda(const GlobalModel &global, const EnrollPosterior &posterior,
                   const Vector &x);

/// log p(x, x_1..x_n) - log p(x) - log p(x_1..x_n), each term the exact joint
/// marginal with covariance I + eps J per dimension.  Inputs are projected.
double ScoreLrPlda(const GlobalModel &global, std::span<const Vector> enroll,
                   const Vector &x);

/// x_global feeds the denominator, x_local goes through M in the numerator.
double ScoreNlDeplda(const GlobalModel &global, const Vector &m_diag,
                     const EnrollPosterior &posterior, const Vector &x_global,
                     const Vector &x_local);

struct ScorerConfig {
  Variant variant = Variant::kPlda;
  LnMode ln_mode = LnMode::kNone;
  GlobalModel global;
  std::optional<LocalModel> local;
  FrontEnd frontend;

  /// Throws ConfigError: deplda without a local model, local/global dimension
  /// mismatch, or partial LN with the plda variant.
  void Validate() const;
};

/// A projected vector as seen by the global components and by the local
/// numerator.  They coincide unless ln_mode is partial.
struct PreparedVector {
  Vector global_side;
  Vector local_side;
};

PreparedVector PrepareVector(const ScorerConfig &config, const Vector &raw);

/// Resolves a trial list once (enrollment posteriors and prepared test
/// vectors) so it can be rescored cheaply, e.g. for every training epoch.
class TrialScorer {
 public:
  TrialScorer(ScorerConfig config, const EnrollMap &enroll_map,
              const VectorSet &enroll_vectors, const VectorSet &test_vectors,
              TrialList trials);

  const ScorerConfig &Config() const { return config_; }
  std::size_t NumTrials() const { return trials_.size(); }

  /// Scores with the configured variant and local model.
  std::vector<ScoredTrial> Score(int num_threads = 1) const;
  /// Decoupled scores with an explicit diagonal M.
  std::vector<ScoredTrial> ScoreDeplda(const Vector &m_diag,
                                       int num_threads = 1) const;

 private:
  template <typename Fn>
  std::vector<ScoredTrial> ScoreAll(Fn &&fn, int num_threads) const;

  ScorerConfig config_;
  TrialList trials_;
  std::vector<EnrollPosterior> posteriors_;
  std::vector<PreparedVector> tests_;
  std::vector<std::size_t> trial_enroll_;
  std::vector<std::size_t> trial_test_;
};

std::vector<ScoredTrial> ScoreTrialset(const ScorerConfig &config,
                                       const EnrollMap &enroll_map,
                                       const VectorSet &enroll_vectors,
                                       const VectorSet &test_vectors,
                                       const TrialList &trials,
                                       int num_threads = 1);

}  // namespace deplda

#endif  // DEPLDA_SCORING_H_
