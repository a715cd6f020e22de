// deplda/corpus-io.h

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

#ifndef DEPLDA_CORPUS_IO_H_
#define DEPLDA_CORPUS_IO_H_

// Whitespace-separated text formats for vector sets, enrollment maps, trial
// lists and score files.  All readers either return a fully validated value
// or throw DataError naming the source and line; nothing is half-built.

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "deplda/common.h"

namespace deplda {

struct UtteranceRecord {
  std::string utt_id;
  std::optional<std::string> class_id;  // absent is written as "-"
  Vector values;
};

/// A labeled collection of fixed-dimension utterance vectors.  Records keep
/// insertion order; classes are indexed in order of first appearance, and
/// that class order is what every per-class reduction iterates over.
class VectorSet {
 public:
  VectorSet() = default;
  explicit VectorSet(int dim) : dim_(dim) {}

  /// Validates and appends.  Throws DataError on a dimension mismatch, a
  /// duplicate or empty utterance id, or non-finite values.
  void Add(UtteranceRecord record);

  int Dim() const { return dim_; }
  std::size_t Size() const { return records_.size(); }
  bool Empty() const { return records_.empty(); }

  const UtteranceRecord &operator[](std::size_t i) const { return records_[i]; }
  const std::vector<UtteranceRecord> &Records() const { return records_; }

  std::size_t NumClasses() const { return class_ids_.size(); }
  const std::vector<std::string> &ClassIds() const { return class_ids_; }
  const std::vector<std::size_t> &ClassMembers(std::size_t k) const {
    return class_members_[k];
  }
  std::optional<std::size_t> FindClass(const std::string &class_id) const;

  std::optional<std::size_t> Find(const std::string &utt_id) const;
  /// Throws DataError if the id is unknown.
  const UtteranceRecord &Get(const std::string &utt_id) const;

  bool FullyLabeled() const { return unlabeled_ == 0; }

  /// Returns a set with the same ids and labels whose values are fn(values).
  VectorSet Transform(const std::function<Vector(const Vector &)> &fn) const;

 private:
  int dim_ = 0;
  std::vector<UtteranceRecord> records_;
  std::unordered_map<std::string, std::size_t> utt_index_;
  std::vector<std::string> class_ids_;
  std::unordered_map<std::string, std::size_t> class_index_;
  std::vector<std::vector<std::size_t>> class_members_;
  std::size_t unlabeled_ = 0;
};

enum class TrialLabel { kTarget, kNontarget, kUnknown };

std::string_view ToString(TrialLabel label);

struct Trial {
  std::string enroll_id;
  std::string test_id;
  TrialLabel label = TrialLabel::kUnknown;
};

using TrialList = std::vector<Trial>;

/// enroll_id -> utterance ids used for enrollment (multi-session allowed).
using EnrollMap = std::map<std::string, std::vector<std::string>>;

struct ScoredTrial {
  std::string enroll_id;
  std::string test_id;
  TrialLabel label = TrialLabel::kUnknown;
  double score = 0.0;
};

// Shortest decimal string that parses back to the same double.
std::string FormatDouble(double value);
// Strict parse of a complete token; returns nullopt on any trailing garbage.
std::optional<double> ParseDouble(std::string_view token);

VectorSet ParseVectors(std::istream &is, const std::string &source);
VectorSet ReadVectors(const std::string &path);
void WriteVectors(const VectorSet &set, std::ostream &os);
void WriteVectors(const VectorSet &set, const std::string &path);

TrialList ParseTrials(std::istream &is, const std::string &source);
TrialList ReadTrials(const std::string &path);
void WriteTrials(const TrialList &trials, std::ostream &os);
void WriteTrials(const TrialList &trials, const std::string &path);

EnrollMap ParseEnrollMap(std::istream &is, const std::string &source);
EnrollMap ReadEnrollMap(const std::string &path);
void WriteEnrollMap(const EnrollMap &map, std::ostream &os);
void WriteEnrollMap(const EnrollMap &map, const std::string &path);

/// Score lines are `<enroll_id> <test_id> <score>` with 17 significant digits.
void WriteScores(const std::vector<ScoredTrial> &scores, std::ostream &os);
void WriteScores(const std::vector<ScoredTrial> &scores, const std::string &path);
std::vector<ScoredTrial> ParseScores(std::istream &is, const std::string &source);
std::vector<ScoredTrial> ReadScores(const std::string &path);

/// Copies labels from `trials` onto `scores` by (enroll_id, test_id).  Throws
/// DataError if a scored pair does not appear in the trial list.
void AttachLabels(const TrialList &trials, std::vector<ScoredTrial> *scores);

}  // namespace deplda

#endif  // DEPLDA_CORPUS_IO_H_
