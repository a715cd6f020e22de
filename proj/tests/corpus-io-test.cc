// tests/corpus-io-test.cc

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

#include <cstring>
#include <random>
#include <sstream>

#include "deplda/corpus-io.h"
#include "deplda/model-io.h"
#include "doctest.h"

namespace deplda {

namespace {

VectorSet Parse(const std::string &text) {
  std::istringstream is(text);
  return ParseVectors(is, "vec");
}

bool BitEqual(double a, double b) { return std::memcmp(&a, &b, sizeof(a)) == 0; }

VectorSet RoundTrip(const VectorSet &set) {
  std::ostringstream os;
  WriteVectors(set, os);
  return Parse(os.str());
}

std::string ErrorOf(const std::function<void()> &fn) {
  try {
    fn();
  } catch (const std::exception &e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("vectors: labeled and placeholder records") {
  const VectorSet set = Parse("u1 spkA 1.0 2.0\nu2 - 0.5 0.5");
  REQUIRE(set.Size() == 2);
  CHECK(set.Dim() == 2);
  CHECK(set[0].utt_id == "u1");
  CHECK(*set[0].class_id == "spkA");
  CHECK(set[0].values(0) == 1.0);
  CHECK(set[0].values(1) == 2.0);
  CHECK_FALSE(set[1].class_id.has_value());
  CHECK(set.NumClasses() == 1);
  CHECK_FALSE(set.FullyLabeled());
}

TEST_CASE("vectors: diagnostics carry line numbers") {
  CHECK(ErrorOf([] { Parse("u1 a 1 2\nu2 a 1 2 3\n"); }).find("vec:2:") != std::string::npos);
  CHECK(ErrorOf([] { Parse("u1 a 1\n\nu1 b 2\n"); }).find("vec:3:") != std::string::npos);
  CHECK(ErrorOf([] { Parse("u1 a 1 x\n"); }).find("vec:1:") != std::string::npos);
  CHECK(ErrorOf([] { Parse("u1 a 1 nan\n"); }).find("vec:1:") != std::string::npos);
  CHECK(ErrorOf([] { Parse("u1 a\n"); }).find("vec:1:") != std::string::npos);
  CHECK_THROWS_AS(Parse(""), DataError);
  CHECK_THROWS_AS(Parse("\n\n"), DataError);
  CHECK_THROWS_AS(ReadVectors("/nonexistent/file.txt"), DataError);
}

TEST_CASE("vectors: CRLF and missing trailing newline") {
  const VectorSet set = Parse("u1 a 1 2\r\nu2 a 3 4");
  REQUIRE(set.Size() == 2);
  CHECK(set[1].values(1) == 4.0);
}

TEST_CASE("vectors: bit-exact round trip") {
  VectorSet set(3);
  set.Add({"a", "k", Vector{{0.1, 0.2, 1e-300}}});
  set.Add({"b", std::nullopt, Vector{{-0.0, 5e-324, 1.7976931348623157e308}}});
  const VectorSet back = RoundTrip(set);
  REQUIRE(back.Size() == 2);
  for (std::size_t i = 0; i < 2; i++)
    for (int j = 0; j < 3; j++) CHECK(BitEqual(back[i].values(j), set[i].values(j)));
  CHECK_FALSE(back[1].class_id.has_value());

  std::ostringstream os;
  CHECK_THROWS_AS(WriteVectors(VectorSet(2), os), DataError);
}

TEST_CASE("vectors: randomized round trip property") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> dim_dist(1, 12);
  std::uniform_real_distribution<double> exponent(-300, 300);
  std::uniform_real_distribution<double> mant(-1, 1);
  for (int trial = 0; trial < 100; trial++) {
    const int d = dim_dist(rng);
    VectorSet set(d);
    for (int i = 0; i < 20; i++) {
      Vector v(d);
      for (int j = 0; j < d; j++) v(j) = mant(rng) * std::pow(10.0, exponent(rng));
      std::optional<std::string> cls;
      if (i % 3) cls = "c" + std::to_string(i % 4);
      set.Add({"u" + std::to_string(i), cls, v});
    }
    const VectorSet back = RoundTrip(set);
    REQUIRE(back.Size() == set.Size());
    for (std::size_t i = 0; i < set.Size(); i++) {
      CHECK(back[i].class_id == set[i].class_id);
      for (int j = 0; j < d; j++) REQUIRE(BitEqual(back[i].values(j), set[i].values(j)));
    }
  }
}

TEST_CASE("vectors: set invariants") {
  VectorSet set(2);
  CHECK_THROWS_AS(set.Add({"u", "a", Vector{{1.0}}}), DataError);
  CHECK_THROWS_AS(set.Add({"", "a", Vector{{1.0, 2.0}}}), DataError);
  CHECK_THROWS_AS(set.Add({"u", "a", Vector{{1.0, INFINITY}}}), DataError);
  set.Add({"u", "a", Vector{{1.0, 2.0}}});
  CHECK_THROWS_AS(set.Add({"u", "b", Vector{{1.0, 2.0}}}), DataError);
  set.Add({"v", "b", Vector{{1.0, 2.0}}});
  set.Add({"w", "a", Vector{{1.0, 2.0}}});
  CHECK(set.NumClasses() == 2);
  CHECK(set.ClassMembers(*set.FindClass("a")) == std::vector<std::size_t>{0, 2});
  CHECK(set.Get("v").class_id == "b");
  CHECK_THROWS_AS(set.Get("zz"), DataError);
}

TEST_CASE("trials: labels, optional field and invalid label") {
  std::istringstream is("spkA u9 target\nspkA u8 nontarget\nspkA u9\n");
  const TrialList trials = ParseTrials(is, "t");
  REQUIRE(trials.size() == 3);
  CHECK(trials[0].label == TrialLabel::kTarget);
  CHECK(trials[1].label == TrialLabel::kNontarget);
  CHECK(trials[2].label == TrialLabel::kUnknown);
  CHECK(trials[1].test_id == "u8");

  std::istringstream bad("spkA u9 target\nspkA u9 maybe\n");
  CHECK(ErrorOf([&] { ParseTrials(bad, "t"); }).find("t:2:") != std::string::npos);
  std::istringstream empty("");
  CHECK_THROWS_AS(ParseTrials(empty, "t"), DataError);

  std::ostringstream os;
  WriteTrials(trials, os);
  std::istringstream again(os.str());
  const TrialList back = ParseTrials(again, "t");
  REQUIRE(back.size() == trials.size());
  for (std::size_t i = 0; i < trials.size(); i++) {
    CHECK(back[i].enroll_id == trials[i].enroll_id);
    CHECK(back[i].test_id == trials[i].test_id);
    CHECK(back[i].label == trials[i].label);
  }
}

TEST_CASE("enroll map and scores round trip") {
  std::istringstream is("spkA u1 u2 u3\nspkB u4\n");
  const EnrollMap map = ParseEnrollMap(is, "e");
  CHECK(map.at("spkA") == std::vector<std::string>{"u1", "u2", "u3"});
  std::ostringstream os;
  WriteEnrollMap(map, os);
  std::istringstream again(os.str());
  CHECK(ParseEnrollMap(again, "e") == map);
  std::istringstream dup("a u1\na u2\n");
  CHECK_THROWS_AS(ParseEnrollMap(dup, "e"), DataError);
  std::istringstream lonely("a\n");
  CHECK_THROWS_AS(ParseEnrollMap(lonely, "e"), DataError);

  std::vector<ScoredTrial> scores = {{"a", "x", TrialLabel::kUnknown, 0.1},
                                     {"b", "y", TrialLabel::kUnknown, -1.0 / 3.0}};
  std::ostringstream so;
  WriteScores(scores, so);
  std::istringstream si(so.str());
  const auto back = ParseScores(si, "s");
  REQUIRE(back.size() == 2);
  CHECK(BitEqual(back[1].score, scores[1].score));

  TrialList trials = {{"a", "x", TrialLabel::kTarget}, {"b", "y", TrialLabel::kNontarget}};
  auto labeled = back;
  AttachLabels(trials, &labeled);
  CHECK(labeled[0].label == TrialLabel::kTarget);
  CHECK(labeled[1].label == TrialLabel::kNontarget);
  trials.pop_back();
  CHECK_THROWS_AS(AttachLabels(trials, &labeled), DataError);
}

TEST_CASE("doubles: shortest round trip formatting") {
  CHECK(FormatDouble(0.1) == "0.1");
  CHECK(FormatDouble(1e-300) == "1e-300");
  CHECK(ParseDouble("+2.5") == 2.5);
  CHECK_FALSE(ParseDouble("2.5x").has_value());
  CHECK_FALSE(ParseDouble("").has_value());
}

TEST_CASE("model io: global model round trip") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  GlobalModel model;
  model.mean = Vector(4);
  model.transform = Matrix(4, 4);
  for (int i = 0; i < 4; i++) {
    model.mean(i) = normal(rng);
    for (int j = 0; j < 4; j++) model.transform(i, j) = normal(rng);
  }
  model.epsilon = Vector{{4.1, 2.0 / 3.0, 0.1, 1e-8}};
  FrontEnd fe;
  fe.mean = Vector{{0.1, 0.2, 0.3, 0.4}};
  fe.length_norm = true;

  std::stringstream ss;
  SaveModel(model, fe, ss);
  const GlobalModelBundle back = LoadGlobalModel(ss, "g");
  CHECK(back.model.mean == model.mean);
  CHECK(back.model.transform == model.transform);
  CHECK(back.model.epsilon == model.epsilon);
  CHECK(back.frontend.mean == fe.mean);
  CHECK(back.frontend.length_norm);
  CHECK_FALSE(back.frontend.lda.has_value());
}

TEST_CASE("model io: global model with LDA front end") {
  GlobalModel model;
  model.mean = Vector::Zero(2);
  model.transform = Matrix::Identity(2, 2);
  model.epsilon = Vector{{2.0, 1.0}};
  FrontEnd fe;
  LdaTransform lda;
  lda.mean = Vector{{1.0, 2.0, 3.0}};
  lda.projection = Matrix{{0.1, 0.2, 0.3}, {0.4, 0.5, 0.6}};
  fe.lda = lda;
  std::stringstream ss;
  SaveModel(model, fe, ss);
  const GlobalModelBundle back = LoadGlobalModel(ss, "g");
  REQUIRE(back.frontend.lda.has_value());
  CHECK(back.frontend.lda->projection == lda.projection);
  CHECK(back.frontend.lda->mean == lda.mean);
  CHECK(back.frontend.InputDim() == 3);

  std::stringstream ls;
  SaveModel(lda, ls);
  const LdaTransform lback = LoadLdaTransform(ls, "l");
  CHECK(lback.projection == lda.projection);
  CHECK(lback.mean == lda.mean);
}

TEST_CASE("model io: local model round trip") {
  LocalModel model;
  model.m_diag = Vector{{0.9, 1.0 / 3.0, 1.1}};
  model.best_epoch = 7;
  model.monitor_eer_at_best = 0.0625;
  model.history.epochs = {{0, -10.5, 0.1}, {1, -10.25, 0.0625}};
  std::stringstream ss;
  SaveModel(model, ss);
  const LocalModel back = LoadLocalModel(ss, "l");
  CHECK(back.m_diag == model.m_diag);
  CHECK(back.best_epoch == 7);
  CHECK(back.monitor_eer_at_best == 0.0625);
  REQUIRE(back.history.epochs.size() == 2);
  CHECK(back.history.epochs[1].objective == -10.25);

  std::ostringstream csv;
  back.history.WriteCsv(csv);
  CHECK(csv.str() == "epoch,objective,monitor_eer\n0,-10.5,0.1\n1,-10.25,0.0625\n");
}

TEST_CASE("model io: malformed files") {
  const std::string good =
      "deplda-model 1\nkind global\ndim 2\nmean 2 0 0\nW 4 1 0 0 1\nepsilon 2 2 1\n"
      "length_norm 1 0\n";
  {
    std::istringstream is(good);
    CHECK(LoadGlobalModel(is, "g").model.epsilon(0) == 2.0);
  }
  {
    std::istringstream is("deplda-model 1\nkind global\ndim 2\nmean 2 0 0\nW 3 1 0 0\n"
                          "epsilon 2 2 1\nlength_norm 1 0\n");
    CHECK_THROWS_AS(LoadGlobalModel(is, "g"), DataError);
  }
  {
    std::istringstream is("deplda-model 1\nkind global\ndim 2\nmean 2 0 0\nW 4 1 0 0\n"
                          "epsilon 2 2 1\nlength_norm 1 0\n");
    CHECK_THROWS_AS(LoadGlobalModel(is, "g"), DataError);
  }
  {
    std::istringstream is("deplda-model 9\nkind global\ndim 2\n");
    const std::string msg = ErrorOf([&] { LoadGlobalModel(is, "g"); });
    CHECK(msg.find("expected 1") != std::string::npos);
  }
  {
    std::istringstream is(good);
    CHECK_THROWS_AS(LoadLocalModel(is, "g"), DataError);
  }
  {
    std::istringstream is("deplda-model 1\nkind global\ndim 2\nmean 2 0 0\nmean 2 0 0\n");
    CHECK_THROWS_AS(LoadGlobalModel(is, "g"), DataError);
  }
}

}  // namespace deplda
