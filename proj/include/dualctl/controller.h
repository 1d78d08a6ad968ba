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

#ifndef DUALCTL_CONTROLLER_H_
#define DUALCTL_CONTROLLER_H_

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "dualctl/game_model.h"
#include "dualctl/linalg.h"

namespace dualctl {

// y(A, i) = <Y1, A> + i tr(Y2) + i <Y3, A>, the data-dependent part of the
// branch-1 payoff after scaling the Bellman stage by (1 - gamma^-2). Built
// from Z so that y(A, i) + c_const = -g W(A, i):
//   Y1 = -2g Z12,  Y2 = -2g Z13,  Y3 = -2g Z32,  c_const = -g (tr Z11 +
//   alpha^2 tr Z22 + tr Z33),  g = gamma^2 - 1.
// Larger y means the scenario explains the data better. The sign-averaged
// branch keeps <Y1, A> (see PolicyObjective).
struct InfoFunctional {
  Eigen::MatrixXd y1;
  Eigen::MatrixXd y2;
  Eigen::MatrixXd y3;
  double c_const = 0.0;
  double g = 0.0;

  double Evaluate(const Eigen::MatrixXd& a, int sign) const;
};

// Valid for any feasible gamma.
InfoFunctional BuildFunctional(const GameState& state,
                               const ProblemParams& params);

// Same functional, restricted to the critical gain where the closed-form law
// applies. Checks (1 - gamma^-2) / (1/t* - gamma^-2) = g + 2 to 1e-9 and
// throws UnsupportedConfiguration otherwise.
InfoFunctional ExtractFunctional(const GameState& state,
                                 const ProblemParams& params);

// (1 - gamma^-2) / (1/t* - gamma^-2): weight of alpha^2|x|^2 in the scaled
// sign-averaged branch. Equals g + 2 at the critical gain.
double BranchZeroWeight(const ProblemParams& params);

struct ScenarioSelection {
  Scenario scenario;
  double y_max = 0.0;
};

// argmax over (A, i) of y: for each sign, i tr Y2 + Procrustes(Y1 + i Y3).
// Ties keep sign +1.
ScenarioSelection SelectScenario(const InfoFunctional& f,
                                 const ProblemParams& params);

enum class Mode { kCertaintyEquivalence, kExploration };

const char* ModeName(Mode mode);

// Candidate signs for the exploration mean E u = kappa * A_hat x with
// |kappa| = y_max / (2 alpha^2 |x|^2).
enum class ExplorationMeanSign {
  kMinus,      // kappa = -r
  kPlus,       // kappa = +r
  kMinusHatI,  // kappa = -i_hat r
  kPlusHatI,   // kappa = +i_hat r
};

inline constexpr ExplorationMeanSign kAllExplorationMeanSigns[] = {
    ExplorationMeanSign::kMinus, ExplorationMeanSign::kPlus,
    ExplorationMeanSign::kMinusHatI, ExplorationMeanSign::kPlusHatI};

const char* ExplorationMeanSignName(ExplorationMeanSign sign);

// -i_hat r is the only choice that meets the certainty-equivalence law
// -i_hat A_hat x at the mode threshold.
inline constexpr ExplorationMeanSign kShippedExplorationMeanSign =
    ExplorationMeanSign::kMinusHatI;

struct ControlDecision {
  Mode mode = Mode::kCertaintyEquivalence;
  Eigen::VectorXd mean;        // E u
  double second_moment = 0.0;  // E |u|^2
  Scenario witness;
  double y_max = 0.0;

  // second_moment >= |mean|^2 up to a relative slack.
  bool IsValid(double tolerance = 1e-12) const;
};

// Closed-form minimax input at the critical gain:
//   y_max >= 2 alpha^2 |x|^2: u = -i_hat A_hat x (deterministic);
//   otherwise: E|u|^2 = alpha^2 |x|^2, E u = kappa A_hat x.
// x = 0 gives u = 0. Off the critical gain this defers to PolicyNumeric.
ControlDecision Decide(const GameState& state, const ProblemParams& params,
                       ExplorationMeanSign mean_sign =
                           kShippedExplorationMeanSign);

// Realizes the decision: the mean itself, or mean + r xi with xi uniform on
// the unit sphere and r^2 = E|u|^2 - |E u|^2.
Eigen::VectorXd SampleInput(const ControlDecision& decision, Rng& rng);

// Scaled stage payoff (1 - gamma^-2) (F_u V*(x, Z) - |x|^2) for a random input
// with E u = mean and E|u|^2 = second_moment, where the adversary answers
// the realized input:
//   max_i [ E|A x + i u|^2 + y(A, i) ] + c_const          (branch 1)
//   w0 alpha^2 |x|^2 - g E|u|^2 + <Y1, A> + c_const      (branch 0)
// maximized over A, with w0 = BranchZeroWeight.
double PolicyObjective(const GameState& state, const ProblemParams& params,
                       const Eigen::VectorXd& mean, double second_moment);

// An affine function of the second moment s.
struct MomentPiece {
  double intercept = 0.0;
  double slope = 0.0;
};

// min over s >= s_min of max_p (intercept_p + slope_p s), exact. Writes the
// smallest minimizing s to *argmin when non-null.
double MinimizeOverSecondMoment(std::span<const MomentPiece> pieces,
                                double s_min, double* argmin = nullptr);

using MomentPieceFunction =
    std::function<std::vector<MomentPiece>(const Eigen::VectorXd& mean)>;

struct MomentSearchResult {
  Eigen::VectorXd mean;
  double second_moment = 0.0;
  double value = 0.0;
  int evaluations = 0;
  bool converged = false;
};

// Minimizes max_p (intercept_p(m) + slope_p(m) s) over m and s >= |m|^2:
// Nelder-Mead over m from each start, s eliminated exactly. The budget is
// shared across starts.
MomentSearchResult MinimizeOverMoments(const MomentPieceFunction& pieces,
                                       std::span<const Eigen::VectorXd> starts,
                                       double initial_step, int budget);

struct NumericPolicy {
  ControlDecision decision;
  double objective = 0.0;
  bool converged = false;
  int evaluations = 0;
};

// Reference policy: numerically minimizes PolicyObjective. Multi-start from
// m = 0, m = -+ i_hat A_hat x and seeded perturbations. Requires n <= 8.
NumericPolicy PolicyNumeric(const GameState& state, const ProblemParams& params,
                            int budget = 20000);

// Scenario with the smallest residual sum W(A, i) on the recorded data.
Scenario EstimateParameters(const GameState& state,
                            const ProblemParams& params);

}  // namespace dualctl

#endif  // DUALCTL_CONTROLLER_H_
