// core/src/synth.cc

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

#include "deplda/synth.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <tuple>
#include <unordered_set>

namespace deplda {

void SynthSpec::Validate() const {
  if (num_classes < 2) throw ConfigError("synthetic data needs at least two classes");
  if (per_class < 1) throw ConfigError("synthetic data needs at least one sample per class");
  if (epsilon.size() == 0) throw ConfigError("synthetic data needs a positive dimension");
  if (!epsilon.allFinite() || (epsilon.array() <= 0.0).any())
    throw ConfigError("between-class variances must be positive and finite");
  if (family == SynthFamily::kStudentT && !(dof > 4.0))
    throw ConfigError("Student-t degrees of freedom must exceed 4");
  if (class_prefix.empty()) throw ConfigError("class prefix must be non-empty");
}

VectorSet Generate(const SynthSpec &spec) {
  spec.Validate();
  const int dim = spec.Dim();
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::chi_squared_distribution<double> chi2(spec.dof);
  const Vector between_sd = spec.epsilon.cwiseSqrt();

  VectorSet set(dim);
  char buf[32];
  for (int k = 0; k < spec.num_classes; k++) {
    Vector mu(dim);
    for (int j = 0; j < dim; j++) mu(j) = between_sd(j) * normal(rng);
    std::snprintf(buf, sizeof(buf), "%05d", k);
    const std::string class_id = spec.class_prefix + buf;
    for (int i = 0; i < spec.per_class; i++) {
      Vector x(dim);
      for (int j = 0; j < dim; j++) x(j) = normal(rng);
      if (spec.family == SynthFamily::kStudentT) {
        // z sqrt(nu / g) is t_nu; the extra sqrt((nu - 2) / nu) restores unit
        // variance.
        const double g = chi2(rng);
        x *= std::sqrt((spec.dof - 2.0) / g);
      }
      x += mu;
      std::snprintf(buf, sizeof(buf), "-%04d", i);
      set.Add({class_id + buf, class_id, std::move(x)});
    }
  }
  return set;
}

TrialBundle MakeTrials(const VectorSet &set, int enroll_per_class,
                       std::size_t num_targets, std::size_t num_nontargets,
                       std::uint64_t seed) {
  if (enroll_per_class < 1) throw DataError("enroll_per_class must be at least 1");
  if (!set.FullyLabeled()) throw DataError("trial generation needs labeled vectors");
  if (set.NumClasses() < 2) throw DataError("trial generation needs at least two classes");

  TrialBundle out;
  out.enroll_vectors = VectorSet(set.Dim());
  out.test_vectors = VectorSet(set.Dim());
  const std::size_t num_classes = set.NumClasses();
  std::vector<std::size_t> test_class;  // class of each test-side record
  std::vector<std::vector<std::size_t>> class_tests(num_classes);
  for (std::size_t k = 0; k < num_classes; k++) {
    const auto &members = set.ClassMembers(k);
    if (members.size() <= static_cast<std::size_t>(enroll_per_class))
      throw DataError("class " + set.ClassIds()[k] + " has " +
                      std::to_string(members.size()) + " samples; need more than " +
                      std::to_string(enroll_per_class));
    auto &utts = out.enroll_map[set.ClassIds()[k]];
    for (std::size_t i = 0; i < members.size(); i++) {
      const auto &rec = set[members[i]];
      if (i < static_cast<std::size_t>(enroll_per_class)) {
        utts.push_back(rec.utt_id);
        out.enroll_vectors.Add(rec);
      } else {
        class_tests[k].push_back(out.test_vectors.Size());
        test_class.push_back(k);
        out.test_vectors.Add(rec);
      }
    }
  }

  const std::size_t num_test = out.test_vectors.Size();
  const std::size_t target_avail = num_test;
  std::size_t nontarget_avail = 0;
  for (std::size_t k = 0; k < num_classes; k++)
    nontarget_avail += num_test - class_tests[k].size();
  if (num_targets > target_avail)
    throw DataError("requested " + std::to_string(num_targets) +
                    " target trials but only " + std::to_string(target_avail) +
                    " are available");
  if (num_nontargets > nontarget_avail)
    throw DataError("requested " + std::to_string(num_nontargets) +
                    " nontarget trials but only " + std::to_string(nontarget_avail) +
                    " are available");

  std::mt19937_64 rng(seed);
  auto add = [&](std::size_t k, std::size_t t, TrialLabel label) {
    out.trials.push_back({set.ClassIds()[k], out.test_vectors[t].utt_id, label});
  };

  // Each test utterance forms exactly one target pair with its own class.
  std::vector<std::size_t> targets(num_test);
  for (std::size_t t = 0; t < num_test; t++) targets[t] = t;
  std::shuffle(targets.begin(), targets.end(), rng);
  for (std::size_t i = 0; i < num_targets; i++)
    add(test_class[targets[i]], targets[i], TrialLabel::kTarget);

  if (2 * num_nontargets > nontarget_avail) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    pairs.reserve(nontarget_avail);
    for (std::size_t k = 0; k < num_classes; k++)
      for (std::size_t t = 0; t < num_test; t++)
        if (test_class[t] != k) pairs.emplace_back(k, t);
    std::shuffle(pairs.begin(), pairs.end(), rng);
    for (std::size_t i = 0; i < num_nontargets; i++)
      add(pairs[i].first, pairs[i].second, TrialLabel::kNontarget);
  } else {
    std::uniform_int_distribution<std::size_t> pick_class(0, num_classes - 1);
    std::uniform_int_distribution<std::size_t> pick_test(0, num_test - 1);
    std::unordered_set<std::size_t> seen;
    while (seen.size() < num_nontargets) {
      const std::size_t k = pick_class(rng), t = pick_test(rng);
      if (test_class[t] == k) continue;
      if (seen.insert(k * num_test + t).second) add(k, t, TrialLabel::kNontarget);
    }
  }

  std::sort(out.trials.begin(), out.trials.end(), [](const Trial &a, const Trial &b) {
    return std::tie(a.enroll_id, a.test_id) < std::tie(b.enroll_id, b.test_id);
  });
  return out;
}

Vector LogSpaced(double lo, double hi, int n) {
  if (n < 1) throw ConfigError("LogSpaced needs n >= 1");
  if (!(lo > 0.0 && hi > 0.0)) throw ConfigError("LogSpaced needs positive bounds");
  Vector out(n);
  if (n == 1) {
    out(0) = lo;
    return out;
  }
  const double step = std::log(hi / lo) / (n - 1);
  for (int i = 0; i < n; i++) out(i) = lo * std::exp(step * i);
  out(n - 1) = hi;
  return out;
}

}  // namespace deplda
