// deplda/synth.h

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

#ifndef DEPLDA_SYNTH_H_
#define DEPLDA_SYNTH_H_

// Synthetic data from the PLDA generative process, optionally with
// Student-t within-class residuals (one chi-square draw per sample shared by
// all dimensions, rescaled so the residual covariance stays I).

#include <cstddef>
#include <cstdint>
#include <string>

#include "deplda/common.h"
#include "deplda/corpus-io.h"

namespace deplda {

enum class SynthFamily { kGaussian, kStudentT };

struct SynthSpec {
  int num_classes = 2;
  int per_class = 1;
  Vector epsilon;  // between-class variances; dimension = epsilon.size()
  SynthFamily family = SynthFamily::kGaussian;
  double dof = 5.0;  // Student-t degrees of freedom, must exceed 4
  std::uint64_t seed = 0;
  std::string class_prefix = "spk";

  int Dim() const { return static_cast<int>(epsilon.size()); }
  /// Throws ConfigError if the spec is unusable.
  void Validate() const;
};

/// Deterministic for a fixed spec.  Ids are `<prefix>NNNNN` for classes and
/// `<class>-NNNN` for utterances.
VectorSet Generate(const SynthSpec &spec);

struct TrialBundle {
  EnrollMap enroll_map;  // keyed by class id
  TrialList trials;      // sorted by (enroll_id, test_id)
  VectorSet enroll_vectors;
  VectorSet test_vectors;
};

/// The first `enroll_per_class` records of each class enroll it; the rest
/// form the test side.  Target and nontarget pairs are drawn without
/// replacement.  Throws DataError if a class has too few samples or a count
/// exceeds the available pairs.
TrialBundle MakeTrials(const VectorSet &set, int enroll_per_class,
                       std::size_t num_targets, std::size_t num_nontargets,
                       std::uint64_t seed);

/// `n` values log-spaced between lo and hi inclusive.
Vector LogSpaced(double lo, double hi, int n);

}  // namespace deplda

#endif  // DEPLDA_SYNTH_H_
