// core/src/eer.cc

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

#include "deplda/eer.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <utility>

namespace deplda {

std::vector<RocPoint> ComputeRoc(std::span<const double> target,
                                 std::span<const double> nontarget) {
  std::vector<std::pair<double, bool>> all;
  all.reserve(target.size() + nontarget.size());
  for (double s : target) all.emplace_back(s, true);
  for (double s : nontarget) all.emplace_back(s, false);
  for (const auto &p : all)
    if (std::isnan(p.first)) throw DataError("EER: NaN score");
  std::sort(all.begin(), all.end(),
            [](const auto &a, const auto &b) { return a.first > b.first; });

  const double nt = static_cast<double>(target.size());
  const double nn = static_cast<double>(nontarget.size());
  std::vector<RocPoint> roc;
  roc.push_back({std::numeric_limits<double>::infinity(), 0.0, 1.0});
  std::size_t accepted_target = 0, accepted_nontarget = 0;
  for (std::size_t i = 0; i < all.size();) {
    const double threshold = all[i].first;
    // Ties are accepted together.
    for (; i < all.size() && all[i].first == threshold; i++)
      (all[i].second ? accepted_target : accepted_nontarget)++;
    roc.push_back({threshold, static_cast<double>(accepted_nontarget) / nn,
                   1.0 - static_cast<double>(accepted_target) / nt});
  }
  return roc;
}

EerResult ComputeEer(std::span<const double> target,
                     std::span<const double> nontarget) {
  if (target.empty() || nontarget.empty())
    throw DataError("EER needs at least one target and one nontarget trial");
  const auto roc = ComputeRoc(target, nontarget);

  std::size_t b = 1;
  while (roc[b].miss > roc[b].false_alarm) b++;
  const RocPoint &pa = roc[b - 1], &pb = roc[b];
  const double da = pa.miss - pa.false_alarm;  // > 0
  const double db = pb.miss - pb.false_alarm;  // <= 0
  const double alpha = da / (da - db);

  EerResult res;
  res.eer = pa.false_alarm + alpha * (pb.false_alarm - pa.false_alarm);
  res.threshold = std::isinf(pa.threshold)
                      ? pb.threshold
                      : pa.threshold + alpha * (pb.threshold - pa.threshold);
  res.num_target = target.size();
  res.num_nontarget = nontarget.size();
  return res;
}

EerResult ComputeEer(std::span<const ScoredTrial> scored) {
  std::vector<double> target, nontarget;
  for (const auto &s : scored) {
    switch (s.label) {
      case TrialLabel::kTarget: target.push_back(s.score); break;
      case TrialLabel::kNontarget: nontarget.push_back(s.score); break;
      case TrialLabel::kUnknown:
        throw DataError("EER: trial (" + s.enroll_id + ", " + s.test_id +
                        ") has no target/nontarget label");
    }
  }
  return ComputeEer(target, nontarget);
}

void WriteRocCsv(const std::vector<RocPoint> &roc, std::ostream &os) {
  os << "threshold,false_alarm,miss\n";
  for (const auto &p : roc)
    os << FormatDouble(p.threshold) << ',' << FormatDouble(p.false_alarm) << ','
       << FormatDouble(p.miss) << '\n';
}

}  // namespace deplda
