// Copyright 2026 The dualctl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dualctl/linalg.h"

#include <cmath>
#include <limits>

#include "doctest.h"

#include "dualctl/errors.h"

namespace dualctl {
namespace {

Eigen::MatrixXd GaussianMatrix(int n, Rng& rng) {
  Eigen::MatrixXd m(n, n);
  for (int c = 0; c < n; ++c) m.col(c) = StandardNormalVector(n, rng);
  return m;
}

double SpectralNuclear(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m.transpose() * m);
  return eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
}

TEST_CASE("nuclear norm of small fixed matrices") {
  CHECK(NuclearNorm(Eigen::MatrixXd::Identity(2, 2)) == doctest::Approx(2.0));
  Eigen::MatrixXd d = Eigen::Vector2d(3.0, -4.0).asDiagonal();
  CHECK(NuclearNorm(d) == doctest::Approx(7.0));
  CHECK(NuclearNorm(Eigen::MatrixXd::Constant(1, 1, -2.5)) == 2.5);
  CHECK(NuclearNorm(Eigen::MatrixXd::Zero(3, 3)) == 0.0);
}

TEST_CASE("nuclear norm of a random 3x3 against spectral and sampling oracles") {
  Rng rng(3);
  const Eigen::MatrixXd m = GaussianMatrix(3, rng);
  const double value = NuclearNorm(m);
  CHECK(std::abs(value - SpectralNuclear(m)) <= 1e-9 * (1.0 + value));
  double best = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < 100000; ++k) {
    best = std::max(best, FrobeniusInner(HaarOrthogonal(3, rng), m));
  }
  CHECK(best <= value + 1e-9);
  CHECK(best >= 0.99 * value);
}

TEST_CASE("nuclear norm rejects non-finite input") {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(2, 2);
  m(0, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(NuclearNorm(m), NumericalError);
}

TEST_CASE("procrustes fixed cases") {
  const ProcrustesResult id = ProcrustesMax(Eigen::MatrixXd::Identity(3, 3), 1.0);
  CHECK(id.value == doctest::Approx(3.0));
  CHECK((id.argmax.matrix - Eigen::MatrixXd::Identity(3, 3)).norm() < 1e-12);

  Eigen::MatrixXd d = Eigen::Vector2d(3.0, -4.0).asDiagonal();
  const ProcrustesResult p = ProcrustesMax(d, 2.0);
  CHECK(p.value == doctest::Approx(14.0));
  Eigen::MatrixXd expected = Eigen::Vector2d(2.0, -2.0).asDiagonal();
  CHECK((p.argmax.matrix - expected).norm() < 1e-12);
  CHECK(p.argmax.scale == 2.0);
}

TEST_CASE("procrustes dominance over sampled feasible matrices") {
  Rng rng(44);
  const Eigen::MatrixXd m = GaussianMatrix(4, rng);
  const ProcrustesResult p = ProcrustesMax(m, 1.5);
  CHECK(std::abs(FrobeniusInner(p.argmax.matrix, m) - p.value) <=
        1e-9 * (1.0 + std::abs(p.value)));
  CHECK(p.argmax.IsValid());
  for (int k = 0; k < 10000; ++k) {
    const double other = FrobeniusInner(1.5 * HaarOrthogonal(4, rng), m);
    REQUIRE(other <= p.value + 1e-9 * (1.0 + p.value));
  }
}

TEST_CASE("procrustes value equals alpha times nuclear norm") {
  Rng rng(8);
  for (int k = 0; k < 200; ++k) {
    const int n = 1 + k % 12;
    const Eigen::MatrixXd m = GaussianMatrix(n, rng);
    const ProcrustesResult p = ProcrustesMax(m, 0.7);
    CHECK(std::abs(p.value - 0.7 * SpectralNuclear(m)) <= 1e-9 * (1.0 + p.value));
    CHECK(p.argmax.IsValid());
  }
}

TEST_CASE("procrustes on the 1x1 zero matrix picks +alpha") {
  const ProcrustesResult p = ProcrustesMax(Eigen::MatrixXd::Zero(1, 1), 2.0);
  CHECK(p.value == 0.0);
  CHECK(p.argmax.matrix(0, 0) == 2.0);
}

TEST_CASE("haar orthogonal matrices") {
  Rng rng(1);
  int plus = 0;
  for (int k = 0; k < 2000; ++k) {
    const Eigen::MatrixXd q = HaarOrthogonal(1, rng);
    CHECK(std::abs(std::abs(q(0, 0)) - 1.0) < 1e-15);
    plus += q(0, 0) > 0;
  }
  CHECK(plus > 900);
  CHECK(plus < 1100);

  Rng a(99), b(99);
  CHECK(HaarOrthogonal(3, a) == HaarOrthogonal(3, b));

  for (int n : {2, 5, 10}) {
    const Eigen::MatrixXd q = HaarOrthogonal(n, rng);
    CHECK((q.transpose() * q - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(std::abs(std::abs(q.determinant()) - 1.0) < 1e-9);
  }
}

TEST_CASE("haar symmetry: mean of Q11 for n=10") {
  Rng rng(2024);
  const int samples = 10000;
  double sum = 0.0, sum_sq = 0.0;
  for (int k = 0; k < samples; ++k) {
    const double v = HaarOrthogonal(10, rng)(0, 0);
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / samples;
  const double se = std::sqrt((sum_sq / samples - mean * mean) / samples);
  CHECK(std::abs(mean) <= 3.0 * se);
  // E[Q11^2] = 1/n for Haar.
  CHECK(sum_sq / samples == doctest::Approx(0.1).epsilon(0.05));
}

TEST_CASE("unit sphere samples") {
  Rng rng(5);
  for (int k = 0; k < 100; ++k) {
    const Eigen::VectorXd v = UnitSphereSample(1, rng);
    CHECK(std::abs(std::abs(v(0)) - 1.0) < 1e-15);
  }
  const int samples = 100000;
  Eigen::Vector2d sum = Eigen::Vector2d::Zero();
  for (int k = 0; k < samples; ++k) sum += UnitSphereSample(2, rng);
  // Each coordinate has variance 1/2.
  const double se = std::sqrt(0.5 / samples);
  CHECK(std::abs(sum(0) / samples) <= 3.0 * se);
  CHECK(std::abs(sum(1) / samples) <= 3.0 * se);
  for (int k = 0; k < 1000; ++k) {
    CHECK(std::abs(UnitSphereSample(5, rng).norm() - 1.0) <= 1e-12);
  }
}

TEST_CASE("symmetric psd test and splitmix") {
  Eigen::MatrixXd m(2, 2);
  m << 2, 1, 1, 2;
  CHECK(IsSymmetricPsd(m));
  m(0, 1) = 3;
  CHECK_FALSE(IsSymmetricPsd(m));
  m << 1, 2, 2, 1;
  CHECK_FALSE(IsSymmetricPsd(m));
  CHECK(SplitMix64(1) != SplitMix64(2));
  CHECK(SplitMix64(7) == SplitMix64(7));
}

}  // namespace
}  // namespace dualctl
