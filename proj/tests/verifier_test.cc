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

#include "dualctl/verifier.h"

#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"

#include "dualctl/errors.h"
#include "test_util.h"

namespace dualctl {
namespace {

using testing::Rel;

Eigen::MatrixXd Scalar(double v) { return Eigen::MatrixXd::Constant(1, 1, v); }

// lhs for n = 1 by brute force over an (m, s) grid.
double ScalarLhsGrid(double x, double y1, double y2, double y3, double g,
                     double alpha) {
  const double span = 4.0 * alpha * std::abs(x) + 2.0;
  double best = std::numeric_limits<double>::infinity();
  const int nm = 801, ns = 801;
  for (int i = 0; i < nm; ++i) {
    const double m = -span + 2.0 * span * i / (nm - 1);
    for (int j = 0; j < ns; ++j) {
      const double s = m * m + 2.0 * span * span * j / (ns - 1);
      double worst = -std::numeric_limits<double>::infinity();
      for (double a : {alpha, -alpha}) {
        for (int sign : {1, -1}) {
          const double y = y1 * a + sign * y2 + sign * y3 * a;
          worst = std::max(worst, a * a * x * x + 2.0 * sign * a * x * m + s + y);
          worst = std::max(worst, (g + 2.0) * a * a * x * x - g * s);
        }
      }
      best = std::min(best, worst);
    }
  }
  return best;
}

TEST_CASE("identity holds with no information") {
  Rng rng(51);
  for (int n : {1, 2, 3}) {
    const Eigen::VectorXd x = StandardNormalVector(n, rng);
    const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(n, n);
    const Theorem3Report r = CheckTheorem3(x, zero, zero, zero, 2.0, 1.5);
    CHECK(r.rhs == doctest::Approx(2.0 * 2.25 * x.squaredNorm()));
    CHECK(std::abs(r.residual) < 1e-6 * (1.0 + r.rhs));
  }
}

TEST_CASE("identity holds at the origin") {
  Rng rng(52);
  for (int k = 0; k < 5; ++k) {
    const Eigen::MatrixXd y1 = Scalar(StandardNormalVector(1, rng)(0));
    const Eigen::MatrixXd y2 = Scalar(StandardNormalVector(1, rng)(0));
    const Eigen::MatrixXd y3 = Scalar(StandardNormalVector(1, rng)(0));
    const Theorem3Report r =
        CheckTheorem3(Eigen::VectorXd::Zero(1), y1, y2, y3, 3.0, 1.0);
    double y_max = -std::numeric_limits<double>::infinity();
    for (double a : {1.0, -1.0}) {
      for (int sign : {1, -1}) {
        y_max = std::max(y_max, y1(0, 0) * a + sign * y2(0, 0) + sign * y3(0, 0) * a);
      }
    }
    CHECK(r.rhs == doctest::Approx(y_max));
    CHECK(std::abs(r.residual) < 1e-6 * (1.0 + r.rhs));
  }
}

TEST_CASE("identity fails on a scalar sign-only instance") {
  // x = 1, alpha = 1, g = 1, Y2 = 3: every input leaves the i = +1 branch
  // at 4 + 2|m| + s, so lhs = 4 while rhs = 3.
  const Theorem3Report r = CheckTheorem3(Eigen::VectorXd::Ones(1), Scalar(0.0),
                                         Scalar(3.0), Scalar(0.0), 1.0, 1.0);
  CHECK(r.rhs == doctest::Approx(3.0));
  CHECK(r.lhs == doctest::Approx(4.0).epsilon(1e-6));
  CHECK(r.residual == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("scalar lhs matches a grid search") {
  const auto instances = SampleTheorem3Instances(40, 53, 1);
  int checked = 0;
  for (const Theorem3Instance& in : instances) {
    if (checked == 6) break;
    ++checked;
    const Theorem3Report r =
        CheckTheorem3(in.x, in.y1, in.y2, in.y3, in.g, in.alpha);
    const double grid = ScalarLhsGrid(in.x(0), in.y1(0, 0), in.y2(0, 0),
                                      in.y3(0, 0), in.g, in.alpha);
    // The grid only over-estimates the minimum.
    CHECK(r.lhs <= grid + 1e-9 * (1.0 + std::abs(grid)));
    CHECK(r.lhs >= grid - 1e-2 * (1.0 + std::abs(grid)));
    CHECK(r.lhs >= r.rhs - 1e-9 * (1.0 + std::abs(r.rhs)));
  }
}

TEST_CASE("instance sampler") {
  const auto a = SampleTheorem3Instances(50, 54);
  const auto b = SampleTheorem3Instances(50, 54);
  REQUIRE(a.size() == 50);
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].x == b[k].x);
    CHECK(a[k].y3 == b[k].y3);
    CHECK(a[k].x.size() >= 1);
    CHECK(a[k].x.size() <= 3);
    CHECK(a[k].g >= 0.1);
    CHECK(a[k].g <= 10.0);
  }
}

TEST_CASE("Bellman operator at empty data") {
  Rng rng(55);
  for (int n : {1, 2}) {
    const ProblemParams p = ProblemParams::AtCriticalGain(n, 1.0);
    const Eigen::VectorXd x = StandardNormalVector(n, rng);
    const GameState st = GameState::Initial(x);
    const BellmanEvaluation e = ApplyBellmanNumeric(ValueFunction::kClosedForm, st, p);
    const double expected = 0.5 * (p.gamma() * p.gamma() + 1.0) * x.squaredNorm();
    CHECK(Rel(e.value, expected) < 1e-6);
    const std::vector<GameState> states = {st};
    const BellmanReport report = CheckBellmanFixedPoint(states, p);
    CHECK(report.max_abs_residual < 1e-6);
  }
}

TEST_CASE("Bellman stage agrees with the policy objective") {
  const ProblemParams p = ProblemParams::AtCriticalGain(1, 1.0);
  const double scale = 1.0 - 1.0 / (p.gamma() * p.gamma());
  const auto states = SampleStates(p, 8, 56);
  for (const GameState& st : states) {
    const BellmanEvaluation e = ApplyBellmanNumeric(ValueFunction::kClosedForm, st, p);
    const NumericPolicy num = PolicyNumeric(st, p);
    const double staged = scale * (e.value - st.x.squaredNorm());
    CHECK(Rel(staged, num.objective) < 1e-6);
  }
}

TEST_CASE("Bellman checks reject unsupported setups") {
  const ProblemParams off = ProblemParams::Create(1, 1.0, 4.0);
  const std::vector<GameState> one = {GameState::Initial(Eigen::VectorXd::Ones(1))};
  CHECK_THROWS(CheckBellmanFixedPoint(one, off));
  const ProblemParams big = ProblemParams::AtCriticalGain(4, 1.0);
  const std::vector<GameState> four = {GameState::Initial(Eigen::VectorXd::Ones(4))};
  CHECK_THROWS(CheckBellmanFixedPoint(four, big));
}

TEST_CASE("value iteration from empty data") {
  const ProblemParams p = ProblemParams::AtCriticalGain(1, 1.0);
  const std::vector<GameState> states = {GameState::Initial(Eigen::VectorXd::Ones(1))};
  const ValueIterationReport r = CheckValueIterationMonotone(states, p, 2);
  REQUIRE(r.samples.size() == 1);
  const ValueIterationSample& s = r.samples[0];
  REQUIRE(s.iterates.size() == 3);
  CHECK(s.iterates[0] == doctest::Approx(0.0));
  CHECK(s.iterates[1] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(s.first_iterate_closed_form == doctest::Approx(1.0));
  CHECK(s.monotone);
  CHECK(s.below_v_star);
  CHECK(s.v_star == doctest::Approx(2.0 + std::sqrt(2.0)));
  // t_1 = 2 here, so the stated bound asks for V^(1) >= 2 and fails; with
  // t_0 = 0 in its place it holds.
  CHECK(s.lower_bounds[0] == doctest::Approx(2.0));
  CHECK_FALSE(s.above_lower_bound);
  CHECK(s.above_shifted_lower_bound);
  CHECK(r.t_values[1] == doctest::Approx(2.0));
  CHECK_THROWS(CheckValueIterationMonotone(states, p, 3));
}

TEST_CASE("gamma threshold scan") {
  const std::vector<double> alphas = {0.5, 1.0, 2.0};
  const GammaThresholdReport r = CheckGammaThreshold(alphas, kDefaultGammaRatios, 200000);
  CHECK(r.all_pass);
  CHECK(r.cases.size() == 15);
  for (const GammaThresholdCase& c : r.cases) {
    CHECK(c.expected_finite == (c.gamma_ratio >= 1.0));
    CHECK(c.scan.diverged == !c.expected_finite);
    if (!c.expected_finite) CHECK(std::isnan(c.t_limit));
  }
}

TEST_CASE("state sampler is deterministic and bounded") {
  const ProblemParams p = ProblemParams::AtCriticalGain(2, 1.0);
  const auto a = SampleStates(p, 20, 57);
  const auto b = SampleStates(p, 20, 57);
  REQUIRE(a.size() == 20);
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].x == b[k].x);
    CHECK(a[k].z == b[k].z);
    CHECK(a[k].x.norm() >= 0.1 - 1e-12);
    CHECK(a[k].x.norm() <= 10.0 + 1e-12);
    CHECK(IsSymmetricPsd(a[k].z));
  }
}

TEST_CASE("policy cross-validation bookkeeping") {
  const ProblemParams p = ProblemParams::AtCriticalGain(1, 1.0);
  const auto states = SampleStates(p, 10, 58);
  const CrossValidationReport r = CrossValidatePolicy(states, p);
  CHECK(r.samples.size() == 10);
  int informative = 0, ce = 0;
  for (const PolicySample& s : r.samples) {
    informative += s.informative;
    ce += s.mode == Mode::kCertaintyEquivalence;
    CHECK(s.ce_gap >= -1e-9);
  }
  CHECK(r.informative_count == informative);
  CHECK(r.ce_count == ce);
  for (int c : r.match_counts) CHECK(c <= informative);
}

}  // namespace
}  // namespace dualctl
