// benchmarks/deplda-bench.cc

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

#include <benchmark/benchmark.h>

#include "deplda/eer.h"
#include "deplda/local-model.h"
#include "deplda/local-train.h"
#include "deplda/plda.h"
#include "deplda/scoring.h"
#include "deplda/synth.h"

namespace deplda {
namespace {

VectorSet Data(int k, int n, int d, std::uint64_t seed, const std::string &prefix = "spk") {
  SynthSpec spec;
  spec.num_classes = k;
  spec.per_class = n;
  spec.epsilon = LogSpaced(0.5, 8.0, d);
  spec.family = SynthFamily::kStudentT;
  spec.seed = seed;
  spec.class_prefix = prefix;
  return Generate(spec);
}

void BM_FitGlobal(benchmark::State &state) {
  const VectorSet train = Data(300, 10, static_cast<int>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(FitGlobal(train, 10));
}
BENCHMARK(BM_FitGlobal)->Arg(8)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_ScoreTrials(benchmark::State &state) {
  const int d = static_cast<int>(state.range(0));
  const int threads = static_cast<int>(state.range(1));
  const VectorSet train = Data(300, 10, d, 2);
  const TrialBundle b = MakeTrials(Data(100, 30, d, 3, "ev"), 3, 2000, 20000, 4);
  ScorerConfig c;
  c.frontend = FitFrontEnd(train, std::nullopt);
  c.global = FitGlobal(c.frontend.Apply(train)).model;
  c.variant = Variant::kDeplda;
  c.local = LocalModel::Identity(d);
  const TrialScorer scorer(c, b.enroll_map, b.enroll_vectors, b.test_vectors, b.trials);
  for (auto _ : state) benchmark::DoNotOptimize(scorer.Score(threads));
  state.SetItemsProcessed(state.iterations() * b.trials.size());
}
BENCHMARK(BM_ScoreTrials)->Args({8, 1})->Args({128, 1})->Args({128, 4})->Unit(benchmark::kMillisecond);

void BM_LocalGradient(benchmark::State &state) {
  const int d = static_cast<int>(state.range(0));
  const VectorSet train = Data(300, 10, d, 5);
  const GlobalFit fit = FitGlobal(train);
  const LocalObjective obj(fit.model, fit.model.Project(train));
  const Vector m = Vector::Constant(d, 0.97);
  for (auto _ : state) benchmark::DoNotOptimize(obj.Gradient(m));
}
BENCHMARK(BM_LocalGradient)->Arg(8)->Arg(128);

void BM_ComputeEer(benchmark::State &state) {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> normal;
  std::vector<double> t(state.range(0)), n(state.range(0) * 10);
  for (auto &s : t) s = normal(rng) + 2.0;
  for (auto &s : n) s = normal(rng);
  for (auto _ : state) benchmark::DoNotOptimize(ComputeEer(t, n));
  state.SetItemsProcessed(state.iterations() * (t.size() + n.size()));
}
BENCHMARK(BM_ComputeEer)->Arg(1000)->Arg(100000);

}  // namespace
}  // namespace deplda

BENCHMARK_MAIN();
