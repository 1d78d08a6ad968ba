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

#ifndef DUALCTL_VERIFIER_H_
#define DUALCTL_VERIFIER_H_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dualctl/controller.h"
#include "dualctl/game_model.h"

namespace dualctl {

inline constexpr int kDefaultCheckBudget = 20000;

// ---------------------------------------------------------------------------
// Exploration/exploitation min-max identity.
//
//   lhs = min over random u of max over (A, i) of
//           max{ E|Ax + iu|^2 + y(A, i), (g + 2)|Ax|^2 - g E|u|^2 }
//   rhs = max over (A, i) of max{ y(A, i), 2 alpha^2 |x|^2 }
//
// lhs >= rhs always holds; the claimed identity is lhs = rhs.

struct Theorem3Report {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;  // lhs - rhs
  Eigen::VectorXd minimizer_mean;
  double minimizer_second_moment = 0.0;
  bool converged = false;
  std::string warning;
};

Theorem3Report CheckTheorem3(const Eigen::VectorXd& x,
                             const Eigen::MatrixXd& y1,
                             const Eigen::MatrixXd& y2,
                             const Eigen::MatrixXd& y3, double g, double alpha,
                             int budget = kDefaultCheckBudget);

// Random instance: n uniform on {1, .., max_n}, x standard normal, alpha
// from {0.5, 1, 2}, g log-uniform on [0.1, 10], Y = (Y1, Y2, Y3) Gaussian
// with a log-uniform scale on [0.1, 10] alpha^2 |x|^2 so that both regimes
// occur.
struct Theorem3Instance {
  Eigen::VectorXd x;
  Eigen::MatrixXd y1;
  Eigen::MatrixXd y2;
  Eigen::MatrixXd y3;
  double g = 0.0;
  double alpha = 0.0;
};

std::vector<Theorem3Instance> SampleTheorem3Instances(int count,
                                                      std::uint64_t seed,
                                                      int max_n = 3);

// ---------------------------------------------------------------------------
// Numeric Bellman operator
//   F V(x, Z) = |x|^2 + min_u max_v V(v, Z + E[s s^T]),  s = (-v, x, u),
// for value functions that are maxima of quadratic pieces, so the inner
// maximum over v has a closed form per piece. The adversary answers the
// realized input.

enum class ValueFunction {
  kTerminal,      // V^(0) = -gamma^2 min W
  kFirstIterate,  // V^(1) = max V1
  kClosedForm,    // V* = max{V1, V0 with t*}
};

struct BellmanEvaluation {
  double value = 0.0;
  Eigen::VectorXd mean;
  double second_moment = 0.0;
  bool converged = false;
};

BellmanEvaluation ApplyBellmanNumeric(ValueFunction v, const GameState& state,
                                      const ProblemParams& params,
                                      int budget = kDefaultCheckBudget);

struct BellmanSample {
  double v_star = 0.0;
  double f_v_star = 0.0;
  // (F V* - V*) / (1 + |V*|)
  double residual = 0.0;
  bool converged = false;
};

struct BellmanReport {
  std::vector<BellmanSample> samples;
  double max_abs_residual = 0.0;
};

// Requires the critical gain and n <= 3.
BellmanReport CheckBellmanFixedPoint(std::span<const GameState> states,
                                     const ProblemParams& params,
                                     int budget = kDefaultCheckBudget);

// ---------------------------------------------------------------------------
// Value iteration V^(k+1) = F V^(k) from V^(0) = -gamma^2 min W.

struct ValueIterationSample {
  std::vector<double> iterates;  // V^(0) .. V^(K)
  double first_iterate_closed_form = 0.0;
  double v_star = 0.0;
  // max over scenarios of max{V0 with t_N, V1}, for N = 1 .. K.
  std::vector<double> lower_bounds;
  bool monotone = false;
  bool below_v_star = false;
  bool above_lower_bound = false;
  // Diagnostic only: the same bound with t_{N-1} in place of t_N.
  std::vector<double> shifted_lower_bounds;
  bool above_shifted_lower_bound = false;
};

struct ValueIterationReport {
  int depth = 0;
  double tolerance = 0.0;
  std::vector<double> t_values;  // t_0 .. t_K
  std::vector<ValueIterationSample> samples;
  bool all_pass = false;
};

// n = 1 only; depth 1 or 2. Deeper iterates are not maxima of quadratic
// pieces, so the closed-form inner maximum no longer applies.
ValueIterationReport CheckValueIterationMonotone(
    std::span<const GameState> states, const ProblemParams& params, int depth,
    double tolerance = 1e-2, int budget = kDefaultCheckBudget);

// ---------------------------------------------------------------------------
// Feasibility threshold scan of the t-recursion.

struct GammaThresholdCase {
  double alpha = 0.0;
  double gamma_ratio = 0.0;  // gamma / gamma*
  double gamma = 0.0;
  double gamma_star = 0.0;
  double t_limit = 0.0;  // NaN below gamma*
  TScan scan;
  bool expected_finite = false;
  bool pass = false;
};

struct GammaThresholdReport {
  long long steps = 0;
  std::vector<GammaThresholdCase> cases;
  bool all_pass = false;
};

inline constexpr std::array<double, 5> kDefaultGammaRatios = {0.9, 0.99, 1.0,
                                                              1.01, 1.5};

// For gamma >= gamma*: no escape and sup t_k <= t_limit (1e-9 relative).
// For gamma < gamma*: t_k reaches gamma^2 within the step budget.
GammaThresholdReport CheckGammaThreshold(
    std::span<const double> alphas,
    std::span<const double> gamma_ratios = kDefaultGammaRatios,
    long long steps = 1000000);

// ---------------------------------------------------------------------------
// Closed-form policy against the numeric minimizer of PolicyObjective.

struct PolicySample {
  Mode mode = Mode::kCertaintyEquivalence;
  double y_max = 0.0;
  double numeric_objective = 0.0;
  // PolicyObjective at each exploration-mean sign, in
  // kAllExplorationMeanSigns order.
  std::array<double, 4> sign_objective{};
  std::array<bool, 4> sign_matches{};
  // Exploration with a nonzero mean scale, so the signs are distinguishable.
  bool informative = false;
  // Certainty-equivalence regime: closed-form objective minus numeric.
  double ce_gap = 0.0;
};

struct CrossValidationReport {
  double tolerance = 0.0;
  std::vector<PolicySample> samples;
  std::array<int, 4> match_counts{};
  // Informative samples where a sign attains the smallest objective of the
  // four (within tolerance), whether or not it matches the numeric minimum.
  std::array<int, 4> best_of_four_counts{};
  int informative_count = 0;
  int ce_count = 0;
  double max_ce_gap = 0.0;
  bool ce_pass = false;
  // Signs that match on every informative sample.
  std::vector<ExplorationMeanSign> winners;
  bool ambiguous = true;
  // Index of the first informative sample no sign matches, or -1.
  int first_unmatched_sample = -1;
  bool pass = false;
};

// Requires the critical gain and n <= 3.
CrossValidationReport CrossValidatePolicy(std::span<const GameState> states,
                                          const ProblemParams& params,
                                          int budget = kDefaultCheckBudget,
                                          double tolerance = 1e-3);

// ---------------------------------------------------------------------------
// Random information states: Z from 0..max_triples closed-loop steps of the
// closed-form controller under Gaussian noise and a hidden random scenario;
// x then redrawn with a normal direction and |x| uniform on [min, max].

struct StateSamplerOptions {
  int max_triples = 20;
  double noise_std = 0.1;
  double min_norm = 0.1;
  double max_norm = 10.0;
};

std::vector<GameState> SampleStates(const ProblemParams& params, int count,
                                    std::uint64_t seed,
                                    const StateSamplerOptions& options = {});

}  // namespace dualctl

#endif  // DUALCTL_VERIFIER_H_
