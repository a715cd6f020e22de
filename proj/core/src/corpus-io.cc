// core/src/corpus-io.cc

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

#include "deplda/corpus-io.h"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

namespace deplda {

namespace {

std::string Where(const std::string &source, std::size_t line) {
  return source + ":" + std::to_string(line) + ": ";
}

std::vector<std::string_view> SplitFields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
      i++;
    std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])))
      i++;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

std::ifstream OpenInput(const std::string &path) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open " + path + " for reading");
  return is;
}

std::ofstream OpenOutput(const std::string &path) {
  std::ofstream os(path);
  if (!os) throw DataError("cannot open " + path + " for writing");
  return os;
}

void CheckWritten(std::ostream &os, const std::string &path) {
  os.flush();
  if (!os) throw DataError("write failed on " + path);
}

// Calls fn(fields, line_number) for every non-blank line.  Handles LF and
// CRLF endings, with or without a final newline.
template <typename Fn>
std::size_t ForEachLine(std::istream &is, Fn &&fn) {
  std::string line;
  std::size_t line_no = 0, used = 0;
  while (std::getline(is, line)) {
    line_no++;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto fields = SplitFields(line);
    if (fields.empty()) continue;
    used++;
    fn(fields, line_no);
  }
  return used;
}

}  // namespace

void VectorSet::Add(UtteranceRecord record) {
  if (record.utt_id.empty()) throw DataError("empty utterance id");
  if (record.values.size() == 0)
    throw DataError("utterance " + record.utt_id + " has no values");
  if (dim_ == 0 && records_.empty()) dim_ = static_cast<int>(record.values.size());
  if (record.values.size() != dim_)
    throw DataError("utterance " + record.utt_id + " has dimension " +
                    std::to_string(record.values.size()) + ", expected " +
                    std::to_string(dim_));
  if (!record.values.allFinite())
    throw DataError("utterance " + record.utt_id + " has non-finite values");
  if (record.class_id && record.class_id->empty())
    throw DataError("utterance " + record.utt_id + " has an empty class id");
  if (utt_index_.count(record.utt_id))
    throw DataError("duplicate utterance id " + record.utt_id);

  const std::size_t pos = records_.size();
  utt_index_.emplace(record.utt_id, pos);
  if (record.class_id) {
    auto [it, inserted] = class_index_.emplace(*record.class_id, class_ids_.size());
    if (inserted) {
      class_ids_.push_back(*record.class_id);
      class_members_.emplace_back();
    }
    class_members_[it->second].push_back(pos);
  } else {
    unlabeled_++;
  }
  records_.push_back(std::move(record));
}

std::optional<std::size_t> VectorSet::FindClass(const std::string &class_id) const {
  auto it = class_index_.find(class_id);
  if (it == class_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> VectorSet::Find(const std::string &utt_id) const {
  auto it = utt_index_.find(utt_id);
  if (it == utt_index_.end()) return std::nullopt;
  return it->second;
}

const UtteranceRecord &VectorSet::Get(const std::string &utt_id) const {
  auto pos = Find(utt_id);
  if (!pos) throw DataError("unknown utterance id " + utt_id);
  return records_[*pos];
}

VectorSet VectorSet::Transform(
    const std::function<Vector(const Vector &)> &fn) const {
  VectorSet out;
  for (const auto &rec : records_)
    out.Add(UtteranceRecord{rec.utt_id, rec.class_id, fn(rec.values)});
  return out;
}

std::string_view ToString(TrialLabel label) {
  switch (label) {
    case TrialLabel::kTarget: return "target";
    case TrialLabel::kNontarget: return "nontarget";
    case TrialLabel::kUnknown: break;
  }
  return "unknown";
}

std::string FormatDouble(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::optional<double> ParseDouble(std::string_view token) {
  double value = 0.0;
  const char *begin = token.data(), *end = token.data() + token.size();
  if (begin != end && *begin == '+') begin++;
  auto res = std::from_chars(begin, end, value);
  if (res.ec != std::errc() || res.ptr != end) return std::nullopt;
  return value;
}

VectorSet ParseVectors(std::istream &is, const std::string &source) {
  VectorSet set;
  std::size_t used = ForEachLine(is, [&](const auto &fields, std::size_t line) {
    if (fields.size() < 3)
      throw DataError(Where(source, line) +
                      "expected <utterance_id> <class_id|-> <v1> ... <vd>");
    UtteranceRecord rec;
    rec.utt_id = std::string(fields[0]);
    if (fields[1] != "-") rec.class_id = std::string(fields[1]);
    rec.values.resize(static_cast<Eigen::Index>(fields.size() - 2));
    for (std::size_t i = 2; i < fields.size(); i++) {
      auto v = ParseDouble(fields[i]);
      if (!v)
        throw DataError(Where(source, line) + "cannot parse number '" +
                        std::string(fields[i]) + "'");
      rec.values(static_cast<Eigen::Index>(i - 2)) = *v;
    }
    try {
      set.Add(std::move(rec));
    } catch (const DataError &e) {
      throw DataError(Where(source, line) + e.what());
    }
  });
  if (used == 0) throw DataError(source + ": empty vector file");
  return set;
}

VectorSet ReadVectors(const std::string &path) {
  auto is = OpenInput(path);
  return ParseVectors(is, path);
}

void WriteVectors(const VectorSet &set, std::ostream &os) {
  if (set.Empty()) throw DataError("refusing to write an empty vector set");
  for (const auto &rec : set.Records()) {
    os << rec.utt_id << ' ' << (rec.class_id ? *rec.class_id : "-");
    for (Eigen::Index j = 0; j < rec.values.size(); j++)
      os << ' ' << FormatDouble(rec.values(j));
    os << '\n';
  }
}

void WriteVectors(const VectorSet &set, const std::string &path) {
  if (set.Empty()) throw DataError("refusing to write an empty vector set");
  auto os = OpenOutput(path);
  WriteVectors(set, os);
  CheckWritten(os, path);
}

TrialList ParseTrials(std::istream &is, const std::string &source) {
  TrialList trials;
  ForEachLine(is, [&](const auto &fields, std::size_t line) {
    if (fields.size() < 2 || fields.size() > 3)
      throw DataError(Where(source, line) +
                      "expected <enroll_id> <test_utterance_id> [target|nontarget]");
    Trial t{std::string(fields[0]), std::string(fields[1]), TrialLabel::kUnknown};
    if (fields.size() == 3) {
      if (fields[2] == "target") {
        t.label = TrialLabel::kTarget;
      } else if (fields[2] == "nontarget") {
        t.label = TrialLabel::kNontarget;
      } else {
        throw DataError(Where(source, line) + "invalid trial label '" +
                        std::string(fields[2]) + "'");
      }
    }
    trials.push_back(std::move(t));
  });
  if (trials.empty()) throw DataError(source + ": empty trial list");
  return trials;
}

TrialList ReadTrials(const std::string &path) {
  auto is = OpenInput(path);
  return ParseTrials(is, path);
}

void WriteTrials(const TrialList &trials, std::ostream &os) {
  for (const auto &t : trials) {
    os << t.enroll_id << ' ' << t.test_id;
    if (t.label != TrialLabel::kUnknown) os << ' ' << ToString(t.label);
    os << '\n';
  }
}

void WriteTrials(const TrialList &trials, const std::string &path) {
  auto os = OpenOutput(path);
  WriteTrials(trials, os);
  CheckWritten(os, path);
}

EnrollMap ParseEnrollMap(std::istream &is, const std::string &source) {
  EnrollMap map;
  ForEachLine(is, [&](const auto &fields, std::size_t line) {
    if (fields.size() < 2)
      throw DataError(Where(source, line) +
                      "expected <enroll_id> <utterance_id> [<utterance_id> ...]");
    std::vector<std::string> utts(fields.begin() + 1, fields.end());
    if (!map.emplace(std::string(fields[0]), std::move(utts)).second)
      throw DataError(Where(source, line) + "duplicate enroll id " +
                      std::string(fields[0]));
  });
  if (map.empty()) throw DataError(source + ": empty enrollment map");
  return map;
}

EnrollMap ReadEnrollMap(const std::string &path) {
  auto is = OpenInput(path);
  return ParseEnrollMap(is, path);
}

void WriteEnrollMap(const EnrollMap &map, std::ostream &os) {
  for (const auto &[id, utts] : map) {
    os << id;
    for (const auto &u : utts) os << ' ' << u;
    os << '\n';
  }
}

void WriteEnrollMap(const EnrollMap &map, const std::string &path) {
  auto os = OpenOutput(path);
  WriteEnrollMap(map, os);
  CheckWritten(os, path);
}

void WriteScores(const std::vector<ScoredTrial> &scores, std::ostream &os) {
  char buf[64];
  for (const auto &s : scores) {
    std::snprintf(buf, sizeof(buf), "%.17g", s.score);
    os << s.enroll_id << ' ' << s.test_id << ' ' << buf << '\n';
  }
}

void WriteScores(const std::vector<ScoredTrial> &scores, const std::string &path) {
  auto os = OpenOutput(path);
  WriteScores(scores, os);
  CheckWritten(os, path);
}

std::vector<ScoredTrial> ParseScores(std::istream &is, const std::string &source) {
  std::vector<ScoredTrial> scores;
  ForEachLine(is, [&](const auto &fields, std::size_t line) {
    if (fields.size() != 3)
      throw DataError(Where(source, line) +
                      "expected <enroll_id> <test_utterance_id> <score>");
    auto v = ParseDouble(fields[2]);
    if (!v || !std::isfinite(*v))
      throw DataError(Where(source, line) + "cannot parse score '" +
                      std::string(fields[2]) + "'");
    scores.push_back({std::string(fields[0]), std::string(fields[1]),
                      TrialLabel::kUnknown, *v});
  });
  if (scores.empty()) throw DataError(source + ": empty score file");
  return scores;
}

std::vector<ScoredTrial> ReadScores(const std::string &path) {
  auto is = OpenInput(path);
  return ParseScores(is, path);
}

void AttachLabels(const TrialList &trials, std::vector<ScoredTrial> *scores) {
  std::map<std::pair<std::string, std::string>, TrialLabel> labels;
  for (const auto &t : trials) labels[{t.enroll_id, t.test_id}] = t.label;
  for (auto &s : *scores) {
    auto it = labels.find({s.enroll_id, s.test_id});
    if (it == labels.end())
      throw DataError("scored pair (" + s.enroll_id + ", " + s.test_id +
                      ") is not in the trial list");
    s.label = it->second;
  }
}

}  // namespace deplda
