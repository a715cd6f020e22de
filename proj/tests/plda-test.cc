// tests/plda-test.cc

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

#include <random>

#include "common/oracles.h"
#include "deplda/plda.h"
#include "deplda/synth.h"
#include "doctest.h"

namespace deplda {

namespace {

double MaxAbs(const Matrix &m) { return m.cwiseAbs().maxCoeff(); }

double MaxOffDiagonal(const Matrix &m) {
  Matrix off = m;
  off.diagonal().setZero();
  return MaxAbs(off);
}

bool IsSignedPermutation(const Matrix &w, double tol) {
  const Matrix a = w.cwiseAbs();
  for (int i = 0; i < a.rows(); i++) {
    if (std::abs(a.row(i).maxCoeff() - 1.0) > tol) return false;
    if (std::abs(a.row(i).sum() - 1.0) > tol) return false;
    if (std::abs(a.col(i).sum() - 1.0) > tol) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("diagonalize: already diagonal inputs") {
  const Diagonalization r =
      SimultaneousDiagonalize(Matrix::Identity(2, 2), Vector{{2.0, 3.0}}.asDiagonal());
  CHECK(r.epsilon(0) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(r.epsilon(1) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(IsSignedPermutation(r.transform, 1e-12));
}

TEST_CASE("diagonalize: one-dimensional") {
  const Diagonalization r = SimultaneousDiagonalize(Matrix{{4.0}}, Matrix{{8.0}});
  CHECK(std::abs(r.transform(0, 0)) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(r.epsilon(0) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("diagonalize: definiteness and symmetry gates") {
  const Matrix singular{{1.0, 0.0}, {0.0, 0.0}};
  const Matrix b = Matrix::Identity(2, 2);
  CHECK_THROWS_AS(SimultaneousDiagonalize(singular, b), NumericError);
  const Diagonalization r = SimultaneousDiagonalize(AddRidge(singular), b);
  CHECK(r.epsilon.allFinite());
  CHECK_THROWS(SimultaneousDiagonalize(Matrix{{1.0, 0.5}, {0.0, 1.0}}, b));
}

TEST_CASE("diagonalize: residuals on random scatters") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 50; trial++) {
    const int d = 1 + trial % 16;
    const Matrix sw = testing::RandomSpd(d, rng), sb = testing::RandomSpd(d, rng, 0.0);
    const Diagonalization r = SimultaneousDiagonalize(sw, sb);
    const Matrix w = r.transform;
    CHECK(MaxAbs(w * sw * w.transpose() - Matrix::Identity(d, d)) < 1e-8);
    const Matrix tb = w * sb * w.transpose();
    CHECK(MaxOffDiagonal(tb) < 1e-8);
    CHECK((tb.diagonal() - r.epsilon).cwiseAbs().maxCoeff() < 1e-8);
    for (int j = 1; j < d; j++) CHECK(r.epsilon(j - 1) >= r.epsilon(j));
  }
}

TEST_CASE("project: examples") {
  GlobalModel m = testing::DiagonalModel({1.0, 2.0});
  m.mean = Vector{{0.5, -1.0}};
  m.transform = Matrix{{2.0, 0.0}, {1.0, 1.0}};
  CHECK(m.Project(m.mean) == Vector::Zero(2));
  const GlobalModel id = testing::DiagonalModel({1.0, 2.0});
  CHECK(id.Project(Vector{{3.0, -4.0}}) == Vector{{3.0, -4.0}});
  CHECK_THROWS_AS(id.Project(Vector{{1.0}}), DataError);
}

TEST_CASE("enroll posterior: worked values") {
  const GlobalModel m = testing::DiagonalModel({2.0});
  const Vector one{{1.0}};
  const EnrollPosterior p1 = ComputeEnrollPosterior(m, std::vector<Vector>{one});
  CHECK(p1.mean(0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(p1.variance(0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  const EnrollPosterior p2 = ComputeEnrollPosterior(m, std::vector<Vector>{one, one});
  CHECK(p2.mean(0) == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(p2.variance(0) == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(p2.count == 2);
  CHECK_THROWS_AS(ComputeEnrollPosterior(m, std::vector<Vector>{}), DataError);
  CHECK_THROWS_AS(ComputeEnrollPosterior(m, one, 0), DataError);

  const GlobalModel tiny = testing::DiagonalModel({kEpsilonFloor});
  const EnrollPosterior pt = ComputeEnrollPosterior(tiny, Vector{{3.0}}, 5);
  CHECK(std::abs(pt.mean(0)) <= kEpsilonFloor * 5 * 3.0);
  CHECK(pt.variance(0) <= kEpsilonFloor);
}

TEST_CASE("enroll posterior: shrinkage closed form") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.01, 10.0);
  for (int trial = 0; trial < 200; trial++) {
    const double eps = u(rng), xbar = u(rng) - 5.0;
    const int n = 1 + trial % 50;
    const GlobalModel m = testing::DiagonalModel({eps});
    const EnrollPosterior p = ComputeEnrollPosterior(m, Vector{{xbar}}, n);
    CHECK(std::abs(p.mean(0) - xbar) ==
          doctest::Approx(std::abs(xbar) / (n * eps + 1.0)).epsilon(1e-12));
    CHECK(p.variance(0) > 0.0);
    CHECK(p.variance(0) <= eps);
  }
}

TEST_CASE("log marginal: worked values and quadrature") {
  const GlobalModel m = testing::DiagonalModel({2.0});
  CHECK(LogMarginal(m, Vector{{0.5}}) == doctest::Approx(-1.5099113442053942).epsilon(1e-14));
  CHECK(LogMarginal(m, Vector{{0.0}}) == doctest::Approx(-1.4682446775387274).epsilon(1e-14));
  for (double eps : {0.1, 1.0, 2.0, 7.5})
    for (double x : {-3.0, -0.2, 0.0, 0.5, 2.5}) {
      const double ref = testing::QuadLogMarginal(eps, x);
      CHECK(std::abs(LogMarginal(testing::DiagonalModel({eps}), Vector{{x}}) - ref) < 1e-6);
    }
  const GlobalModel two = testing::DiagonalModel({2.0, 0.7});
  CHECK(LogMarginal(two, Vector{{0.5, -1.0}}) ==
        doctest::Approx(LogMarginal(m, Vector{{0.5}}) +
                        LogMarginal(testing::DiagonalModel({0.7}), Vector{{-1.0}}))
            .epsilon(1e-14));
  CHECK_THROWS_AS(LogMarginal(two, Vector{{0.5}}), DataError);
}

TEST_CASE("two-covariance log-likelihood matches dense joint Gaussian") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 10; trial++) {
    const int d = 1 + trial % 4;
    TwoCovarianceModel p;
    p.mean = Vector::Random(d);
    p.within = testing::RandomSpd(d, rng);
    p.between = testing::RandomSpd(d, rng);
    const VectorSet set =
        testing::SampleTwoCovariance(p.mean, p.within, p.between, 6, {1, 3, 4, 2}, trial);
    const double ref = testing::DenseTwoCovarianceLogLikelihood(set, p);
    CHECK(TwoCovarianceLogLikelihood(set, p) == doctest::Approx(ref).epsilon(1e-11));
  }
}

TEST_CASE("fit global: epsilon recovery and monotone EM on model-matched data") {
  SynthSpec spec;
  spec.num_classes = 500;
  spec.per_class = 10;
  spec.epsilon = Vector{{4.0, 2.0, 1.0, 0.5}};
  spec.family = SynthFamily::kGaussian;
  for (std::uint64_t seed : {1, 2, 3}) {
    spec.seed = seed;
    const GlobalFit fit = FitGlobal(Generate(spec), 10);
    REQUIRE(fit.trace.log_likelihood.size() == 11);
    for (std::size_t i = 1; i < fit.trace.log_likelihood.size(); i++) {
      const double prev = fit.trace.log_likelihood[i - 1];
      CHECK(fit.trace.log_likelihood[i] >= prev - 1e-9 * std::abs(prev));
    }
    for (int j = 0; j < 4; j++) {
      // Sampling error of a variance from K class means.
      const double rel = std::abs(fit.model.epsilon(j) / spec.epsilon(j) - 1.0);
      const double se = std::sqrt(2.0 / spec.num_classes) *
                        (spec.epsilon(j) + 1.0 / spec.per_class) / spec.epsilon(j);
      CHECK(rel <= 4 * se);
      WARN_MESSAGE(rel <= 0.10, "seed " << seed << " dim " << j << " relative error " << rel);
    }
  }
  spec.num_classes = 5000;
  spec.seed = 4;
  const GlobalFit big = FitGlobal(Generate(spec), 10);
  for (int j = 0; j < 4; j++)
    CHECK(std::abs(big.model.epsilon(j) / spec.epsilon(j) - 1.0) <= 0.10);
}

TEST_CASE("fit global: trace is the exact log-likelihood of the fitted parameters") {
  std::mt19937_64 rng(4);
  const Matrix within = testing::RandomSpd(3, rng), between = testing::RandomSpd(3, rng);
  const VectorSet set = testing::SampleTwoCovariance(Vector{{1.0, -2.0, 0.5}}, within,
                                                     between, 40, {2, 5, 9, 1}, 99);
  const GlobalFit fit = FitGlobal(set, 5);
  const double dense = testing::DenseTwoCovarianceLogLikelihood(set, fit.params);
  CHECK(fit.trace.log_likelihood.back() == doctest::Approx(dense).epsilon(1e-10));
}

TEST_CASE("fit global: transformed scatters on held-out data") {
  std::mt19937_64 rng(8);
  const Matrix within = testing::RandomSpd(3, rng, 0.5), between = testing::RandomSpd(3, rng);
  const Vector offset{{3.0, 0.0, -1.0}};
  const VectorSet train = testing::SampleTwoCovariance(offset, within, between, 2000, {8}, 1);
  const VectorSet held = testing::SampleTwoCovariance(offset, within, between, 2000, {8}, 2);
  const GlobalFit fit = FitGlobal(train, 10);
  const GlobalModel &m = fit.model;
  const Matrix w = m.transform;
  CHECK(MaxAbs(w * within * w.transpose() - Matrix::Identity(3, 3)) < 0.1);
  const Matrix tb = w * between * w.transpose();
  CHECK(MaxOffDiagonal(tb) < 0.1 * m.epsilon.maxCoeff());
  CHECK(((tb.diagonal() - m.epsilon).array().abs() / m.epsilon.array()).maxCoeff() < 0.1);

  const VectorSet proj = m.Project(held);
  Matrix wscatter = Matrix::Zero(3, 3);
  for (std::size_t k = 0; k < proj.NumClasses(); k++) {
    Vector mu = Vector::Zero(3);
    for (auto i : proj.ClassMembers(k)) mu += proj[i].values;
    mu /= proj.ClassMembers(k).size();
    for (auto i : proj.ClassMembers(k)) {
      const Vector r = proj[i].values - mu;
      wscatter += r * r.transpose();
    }
  }
  wscatter /= static_cast<double>(proj.Size() - proj.NumClasses());
  CHECK(MaxAbs(wscatter - Matrix::Identity(3, 3)) < 0.1);
}

TEST_CASE("fit global: whitened diagonal data gives a signed permutation") {
  const Vector eps{{0.5, 3.0, 1.5}};
  const VectorSet set = testing::SampleTwoCovariance(
      Vector::Zero(3), Matrix::Identity(3, 3), Matrix(eps.asDiagonal()), 5000, {20}, 3);
  const GlobalFit fit = FitGlobal(set, 10);
  CHECK(IsSignedPermutation(fit.model.transform, 0.1));
  CHECK(fit.model.epsilon(0) == doctest::Approx(3.0).epsilon(0.1));
  CHECK(fit.model.epsilon(2) == doctest::Approx(0.5).epsilon(0.1));
}

TEST_CASE("fit global: errors") {
  VectorSet one(2);
  one.Add({"a", "k", Vector{{1.0, 2.0}}});
  one.Add({"b", "k", Vector{{1.5, 2.0}}});
  CHECK_THROWS_AS(FitGlobal(one), DataError);
  VectorSet unlabeled = one;
  unlabeled.Add({"c", std::nullopt, Vector{{0.0, 0.0}}});
  CHECK_THROWS_AS(FitGlobal(unlabeled), DataError);
  CHECK_THROWS_AS(FitGlobal(VectorSet(2)), DataError);
}

TEST_CASE("fit global: unbalanced classes and epsilon floor") {
  std::mt19937_64 rng(6);
  const VectorSet set = testing::SampleTwoCovariance(
      Vector::Zero(2), Matrix::Identity(2, 2), Matrix{{2.0, 0.0}, {0.0, 1e-14}}, 50,
      {1, 2, 30}, 5);
  const GlobalFit fit = FitGlobal(set, 10);
  CHECK((fit.model.epsilon.array() >= kEpsilonFloor).all());
  CHECK(fit.model.epsilon(0) >= fit.model.epsilon(1));
}

}  // namespace deplda
