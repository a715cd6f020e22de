// deplda/eer.h

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

#ifndef DEPLDA_EER_H_
#define DEPLDA_EER_H_

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "deplda/corpus-io.h"

namespace deplda {

struct EerResult {
  double eer = 0.0;        // in [0, 1]
  double threshold = 0.0;  // score at the crossing (interpolated)
  std::size_t num_target = 0;
  std::size_t num_nontarget = 0;
};

/// One operating point: trials with score >= threshold are accepted.
struct RocPoint {
  double threshold;
  double false_alarm;
  double miss;
};

/// Operating points at +inf and at every distinct score, in descending
/// threshold order.
std::vector<RocPoint> ComputeRoc(std::span<const double> target,
                                 std::span<const double> nontarget);

/// EER where the piecewise-linear miss/false-alarm curve crosses miss = FA.
/// Throws DataError if either class is empty.
EerResult ComputeEer(std::span<const double> target,
                     std::span<const double> nontarget);
/// Throws DataError on unknown labels or a missing class.
EerResult ComputeEer(std::span<const ScoredTrial> scored);

void WriteRocCsv(const std::vector<RocPoint> &roc, std::ostream &os);

}  // namespace deplda

#endif  // DEPLDA_EER_H_
