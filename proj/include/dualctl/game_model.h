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

#ifndef DUALCTL_GAME_MODEL_H_
#define DUALCTL_GAME_MODEL_H_

#include <vector>

#include <Eigen/Dense>

#include "dualctl/linalg.h"

namespace dualctl {

// Smallest gain level for which the game has finite value:
// alpha + sqrt(1 + alpha^2).
double CriticalGain(double alpha);

// Smaller root of (gamma^2 - t)(t - 1) = gamma^2 alpha^2, the limit of the
// t-recursion from t_0 = 0. NaN when gamma < CriticalGain(alpha).
double TRecursionLimit(double alpha, double gamma);

// Problem constants. Derived quantities are computed once at construction.
class ProblemParams {
 public:
  // Requires n >= 1, alpha > 0, gamma > 0.
  static ProblemParams Create(int n, double alpha, double gamma);
  static ProblemParams AtCriticalGain(int n, double alpha);

  int n() const { return n_; }
  double alpha() const { return alpha_; }
  double gamma() const { return gamma_; }
  double gamma_star() const { return gamma_star_; }
  // g = gamma^2 - 1.
  double g() const { return gamma_ * gamma_ - 1.0; }
  // Smaller root of (gamma^2 - t)(t - 1) = gamma^2 alpha^2; NaN when
  // infeasible. Equals (gamma*^2 + 1) / 2 at the critical gain.
  double t_star() const { return t_star_; }

  // gamma >= gamma*. Both tests use a 1e-12 relative slack so that
  // gamma = CriticalGain(alpha) is classified feasible by each.
  bool feasible() const;
  // The equivalent test (gamma - alpha)^2 >= alpha^2 + 1.
  bool feasible_by_square_test() const;
  bool at_critical_gain(double relative_tolerance = 1e-12) const;

 private:
  ProblemParams(int n, double alpha, double gamma);

  int n_;
  double alpha_;
  double gamma_;
  double gamma_star_;
  double t_star_;
};

// Stacked data vector is (-x_next, x, u).
struct DataTriple {
  Eigen::VectorXd x_next;
  Eigen::VectorXd x;
  Eigen::VectorXd u;

  Eigen::VectorXd Stacked() const;
};

// Information state: current x and the 3n x 3n data matrix Z, whose n x n
// blocks are indexed (1, 2, 3) = (-x_next, x, u).
struct GameState {
  Eigen::VectorXd x;
  Eigen::MatrixXd z;

  GameState() = default;
  GameState(Eigen::VectorXd x_in, Eigen::MatrixXd z_in);
  static GameState Initial(const Eigen::VectorXd& x0);

  int dimension() const { return static_cast<int>(x.size()); }

  // One-based block indices, as in Z_{12}.
  Eigen::Block<const Eigen::MatrixXd> Block(int row, int col) const {
    const int n = dimension();
    return z.block((row - 1) * n, (col - 1) * n, n, n);
  }

  // Z += s s^T with s the stacked triple; x is left unchanged.
  void AddTriple(const DataTriple& triple);
  // Records the triple and moves to triple.x_next.
  void Advance(const DataTriple& triple);
};

// A feasible parameter pair: A with A A^T = alpha^2 I and B = sign * I.
struct Scenario {
  ScaledOrthogonal a;
  int sign = 1;

  Eigen::MatrixXd B() const;
};

// Scenario-independent pieces of Z used by the closed-form maximizations.
// With W(A, i) = WeightedNormSq:
//   W(A, i) = SignFreeConstant + 2<A, Z12> + 2i tr Z13 + 2i <A, Z32>
// for A A^T = alpha^2 I.
struct DataSummary {
  double trace11 = 0.0;
  double trace22 = 0.0;
  double trace33 = 0.0;
  double trace13 = 0.0;
  Eigen::MatrixXd z12;
  Eigen::MatrixXd z32;

  // tr Z11 + alpha^2 tr Z22 + tr Z33.
  double SignFreeConstant(double alpha) const {
    return trace11 + alpha * alpha * trace22 + trace33;
  }
};
DataSummary Summarize(const GameState& state);

// trace([I A iI] Z [I A iI]^T), i.e. the sum of squared residuals
// |x_next - A x - i u|^2 over the recorded data.
double WeightedNormSq(const Eigen::MatrixXd& z, const Scenario& scenario);

// |x|^2 - gamma^2 ||[I A B]^T||_Z^2.
double V1(const GameState& state, const Scenario& scenario,
          const ProblemParams& params);

// t |x|^2 - (gamma^2 / 2) sum over i = +-1 of ||[I A iB]^T||_Z^2. The sum
// removes every sign-linear term, so the scenario sign does not matter.
double V0(const GameState& state, const Scenario& scenario, double t_coeff,
          const ProblemParams& params);

struct VStarResult {
  double value = 0.0;
  Scenario scenario;
  // 1: the single-scenario branch V1; 0: the sign-averaged branch V0.
  int branch = 0;
};

// max over scenarios and branches of V1 and V0 (with t = t_star), each
// branch maximized over A in closed form. Ties go to branch 0. Throws
// InfeasibleError when gamma < gamma*.
VStarResult VStar(const GameState& state, const ProblemParams& params);

struct TSequence {
  std::vector<double> values;  // t_0, t_1, ...
  bool diverged = false;
  // Index of the first t_k >= gamma^2, or -1.
  int divergence_index = -1;
};

// t_{k+1} = 1 + gamma^2 alpha^2 / (gamma^2 - t_k), t_0 = 0. Stops early at
// the first t_k >= gamma^2 (the next denominator is not positive). With
// alpha = 0 the fraction vanishes identically, t_k = 1 for k >= 1, and only
// t_k > gamma^2 counts as divergence.
TSequence TRecursion(double alpha, double gamma, int steps);
TSequence TRecursion(const ProblemParams& params, int steps);

// Streaming form for long scans; keeps only summary statistics.
struct TScan {
  double max_value = 0.0;
  double last_value = 0.0;
  bool diverged = false;
  long long divergence_step = -1;
  long long steps_run = 0;
};
TScan ScanTRecursion(double alpha, double gamma, long long steps);

// sup over v of t|v|^2 - gamma^2 |p - v|^2 equals this gain times |p|^2.
// Requires 0 <= t < gamma^2.
double CompletedSquareGain(double t, double gamma);

struct InnerMax {
  Eigen::VectorXd v;
  double value = 0.0;
};

// Maximizes |v|^2 - gamma^2 |pred - v|^2: v = pred gamma^2 / (gamma^2 - 1),
// value |pred|^2 / (1 - gamma^-2). Requires gamma > 1.
InnerMax AdversaryResponseBranch1(const Eigen::VectorXd& pred,
                                  const ProblemParams& params);

// Maximizes t|v|^2 - gamma^2 |ax - v|^2: v = ax gamma^2 / (gamma^2 - t),
// value |ax|^2 / (1/t - 1/gamma^2). Throws UnboundedMaximization when
// t >= gamma^2.
InnerMax AdversaryResponseBranch0(const Eigen::VectorXd& ax, double t_coeff,
                                  const ProblemParams& params);

}  // namespace dualctl

#endif  // DUALCTL_GAME_MODEL_H_
