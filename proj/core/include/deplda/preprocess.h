// deplda/preprocess.h

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

#ifndef DEPLDA_PREPROCESS_H_
#define DEPLDA_PREPROCESS_H_

#include <optional>
#include <string_view>

#include "deplda/common.h"
#include "deplda/corpus-io.h"

namespace deplda {

enum class LnMode { kNone, kFull, kPartial };

std::string_view ToString(LnMode mode);
/// Accepts "none", "full" and "partial"; throws ConfigError otherwise.
LnMode ParseLnMode(std::string_view name);

/// Arithmetic mean over all records.  Throws DataError on an empty set.
Vector ComputeMean(const VectorSet &set);

/// Returns sqrt(d) * v / |v|, so the output norm is sqrt(d).  Throws
/// DataError for the zero vector.
Vector LengthNormalize(const Vector &v);
VectorSet LengthNormalize(const VectorSet &set);

struct LdaTransform {
  Vector mean;        // training global mean, input space (d)
  Matrix projection;  // p x d, rows sorted by descending eigenvalue

  int InputDim() const { return static_cast<int>(projection.cols()); }
  int OutputDim() const { return static_cast<int>(projection.rows()); }
  /// projection * (x - mean).  Throws DataError on a dimension mismatch.
  Vector Apply(const Vector &x) const;
};

/// Rows of the projection are the top `target_dim` solutions of
///   S_b v = lambda (S_w + ridge I) v,
/// scaled so that v^T (S_w + ridge I) v = 1 and signed so that the
/// largest-magnitude entry of each row is positive.
LdaTransform FitLda(const VectorSet &set, int target_dim);
VectorSet ApplyLda(const LdaTransform &lda, const VectorSet &set);

/// Input-space stage shared by training and scoring: centering by the
/// training mean, optionally followed by LDA.  Length normalization is
/// applied after the front end according to the LnMode in use.
struct FrontEnd {
  Vector mean;                      // empty => no centering
  std::optional<LdaTransform> lda;  // if present its mean is used instead
  bool length_norm = false;         // whether the global model saw LN'd data

  Vector Apply(const Vector &x) const;
  VectorSet Apply(const VectorSet &set) const;
  /// Input dimension, or 0 for a pass-through front end.
  int InputDim() const;
};

/// Centering mean from `set`, plus LDA to `lda_dim` if given.
FrontEnd FitFrontEnd(const VectorSet &set, std::optional<int> lda_dim);

}  // namespace deplda

#endif  // DEPLDA_PREPROCESS_H_
