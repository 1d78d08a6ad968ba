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

#include "dualctl/game_model.h"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "dualctl/errors.h"

namespace dualctl {

double CriticalGain(double alpha) { return alpha + std::sqrt(1.0 + alpha * alpha); }

namespace {

constexpr double kFeasibilitySlack = 1e-12;

// Smaller root of t^2 - (gamma^2 + 1) t + gamma^2 (1 + alpha^2) = 0, written
// as 2c / (b + sqrt(disc)) to avoid cancellation. The discriminant factors as
// ((gamma - alpha)^2 - (1 + alpha^2)) (gamma^2 - 1 + 2 gamma alpha); a tiny
// margin within the feasibility slack is rounding at the critical gain and
// snaps to zero, so t* = (gamma^2 + 1) / 2 there.
double SmallerRoot(double alpha, double gamma) {
  const double g2 = gamma * gamma;
  const double b = g2 + 1.0;
  const double c = g2 * (1.0 + alpha * alpha);
  const double margin = (gamma - alpha) * (gamma - alpha) - (1.0 + alpha * alpha);
  if (margin < -kFeasibilitySlack * (1.0 + alpha * alpha)) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  const double snapped =
      margin <= kFeasibilitySlack * (1.0 + alpha * alpha) ? 0.0 : margin;
  const double disc = snapped * (g2 - 1.0 + 2.0 * gamma * alpha);
  return 2.0 * c / (b + std::sqrt(disc));
}

}  // namespace

double TRecursionLimit(double alpha, double gamma) {
  return SmallerRoot(alpha, gamma);
}

ProblemParams::ProblemParams(int n, double alpha, double gamma)
    : n_(n),
      alpha_(alpha),
      gamma_(gamma),
      gamma_star_(CriticalGain(alpha)),
      t_star_(SmallerRoot(alpha, gamma)) {}

ProblemParams ProblemParams::Create(int n, double alpha, double gamma) {
  if (n < 1) throw std::invalid_argument("ProblemParams: n must be >= 1");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("ProblemParams: alpha must be positive");
  }
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument("ProblemParams: gamma must be positive");
  }
  return ProblemParams(n, alpha, gamma);
}

ProblemParams ProblemParams::AtCriticalGain(int n, double alpha) {
  return Create(n, alpha, CriticalGain(alpha));
}

bool ProblemParams::feasible() const {
  return gamma_ >= gamma_star_ * (1.0 - kFeasibilitySlack);
}

bool ProblemParams::feasible_by_square_test() const {
  const double lhs = (gamma_ - alpha_) * (gamma_ - alpha_);
  const double rhs = alpha_ * alpha_ + 1.0;
  return lhs >= rhs * (1.0 - 4.0 * kFeasibilitySlack);
}

bool ProblemParams::at_critical_gain(double relative_tolerance) const {
  return std::abs(gamma_ - gamma_star_) <= relative_tolerance * gamma_star_;
}

Eigen::VectorXd DataTriple::Stacked() const {
  const auto n = x.size();
  if (x_next.size() != n || u.size() != n) {
    throw std::invalid_argument("DataTriple: dimension mismatch");
  }
  Eigen::VectorXd s(3 * n);
  s << -x_next, x, u;
  return s;
}

GameState::GameState(Eigen::VectorXd x_in, Eigen::MatrixXd z_in)
    : x(std::move(x_in)), z(std::move(z_in)) {
  const auto n = x.size();
  if (z.rows() != 3 * n || z.cols() != 3 * n) {
    throw std::invalid_argument("GameState: Z must be 3n x 3n");
  }
}

GameState GameState::Initial(const Eigen::VectorXd& x0) {
  const auto n = x0.size();
  return GameState(x0, Eigen::MatrixXd::Zero(3 * n, 3 * n));
}

void GameState::AddTriple(const DataTriple& triple) {
  if (triple.x.size() != x.size()) {
    throw std::invalid_argument("GameState::AddTriple: dimension mismatch");
  }
  const Eigen::VectorXd s = triple.Stacked();
  z.selfadjointView<Eigen::Lower>().rankUpdate(s);
  z.triangularView<Eigen::StrictlyUpper>() = z.transpose();
}

void GameState::Advance(const DataTriple& triple) {
  AddTriple(triple);
  x = triple.x_next;
}

Eigen::MatrixXd Scenario::B() const {
  const int n = a.dimension();
  return static_cast<double>(sign) * Eigen::MatrixXd::Identity(n, n);
}

DataSummary Summarize(const GameState& state) {
  DataSummary s;
  s.trace11 = state.Block(1, 1).trace();
  s.trace22 = state.Block(2, 2).trace();
  s.trace33 = state.Block(3, 3).trace();
  s.trace13 = state.Block(1, 3).trace();
  s.z12 = state.Block(1, 2);
  s.z32 = state.Block(3, 2);
  return s;
}

double WeightedNormSq(const Eigen::MatrixXd& z, const Scenario& scenario) {
  const Eigen::MatrixXd& a = scenario.a.matrix;
  const auto n = a.rows();
  if (a.cols() != n || z.rows() != 3 * n || z.cols() != 3 * n) {
    throw std::invalid_argument("WeightedNormSq: dimension mismatch");
  }
  const double i = scenario.sign;
  const auto z11 = z.block(0, 0, n, n);
  const auto z12 = z.block(0, n, n, n);
  const auto z13 = z.block(0, 2 * n, n, n);
  const auto z22 = z.block(n, n, n, n);
  const auto z32 = z.block(2 * n, n, n, n);
  const auto z33 = z.block(2 * n, 2 * n, n, n);
  // Cross terms: tr(Z12 A^T) + tr(A Z21) = 2<A, Z12>, and likewise for the
  // (1,3) and (2,3) pairs.
  return z11.trace() + (a * z22 * a.transpose()).trace() + i * i * z33.trace() +
         2.0 * FrobeniusInner(a, z12) + 2.0 * i * z13.trace() +
         2.0 * i * FrobeniusInner(a, z32);
}

double V1(const GameState& state, const Scenario& scenario,
          const ProblemParams& params) {
  const double g2 = params.gamma() * params.gamma();
  return state.x.squaredNorm() - g2 * WeightedNormSq(state.z, scenario);
}

double V0(const GameState& state, const Scenario& scenario, double t_coeff,
          const ProblemParams& params) {
  if (t_coeff < 0.0) throw std::invalid_argument("V0: t_coeff must be >= 0");
  const double g2 = params.gamma() * params.gamma();
  Scenario plus = scenario;
  plus.sign = 1;
  Scenario minus = scenario;
  minus.sign = -1;
  const double avg =
      0.5 * (WeightedNormSq(state.z, plus) + WeightedNormSq(state.z, minus));
  return t_coeff * state.x.squaredNorm() - g2 * avg;
}

VStarResult VStar(const GameState& state, const ProblemParams& params) {
  if (!params.feasible()) {
    throw InfeasibleError("VStar: gamma = " + std::to_string(params.gamma()) +
                          " is below gamma* = " +
                          std::to_string(params.gamma_star()));
  }
  const double alpha = params.alpha();
  const double g2 = params.gamma() * params.gamma();
  const DataSummary data = Summarize(state);
  const double c0 = data.SignFreeConstant(alpha);
  const double xx = state.x.squaredNorm();

  VStarResult best;
  const ProcrustesResult avg = ProcrustesMax(-2.0 * g2 * data.z12, alpha);
  best.value = params.t_star() * xx - g2 * c0 + avg.value;
  best.scenario = {avg.argmax, 1};
  best.branch = 0;

  for (int sign : {1, -1}) {
    const ProcrustesResult p =
        ProcrustesMax(-2.0 * g2 * (data.z12 + sign * data.z32), alpha);
    const double value =
        xx - g2 * (c0 + 2.0 * sign * data.trace13) + p.value;
    if (value > best.value) {
      best.value = value;
      best.scenario = {p.argmax, sign};
      best.branch = 1;
    }
  }
  return best;
}

namespace {

bool Escaped(double t, double g2, double numerator) {
  return numerator > 0.0 ? t >= g2 : t > g2;
}

}  // namespace

TSequence TRecursion(double alpha, double gamma, int steps) {
  if (steps < 0) throw std::invalid_argument("TRecursion: steps must be >= 0");
  const double g2 = gamma * gamma;
  const double numerator = g2 * alpha * alpha;
  TSequence seq;
  seq.values.reserve(static_cast<std::size_t>(steps) + 1);
  double t = 0.0;
  seq.values.push_back(t);
  for (int k = 0; k < steps; ++k) {
    if (Escaped(t, g2, numerator)) {
      seq.diverged = true;
      seq.divergence_index = k;
      return seq;
    }
    t = numerator > 0.0 ? 1.0 + numerator / (g2 - t) : 1.0;
    seq.values.push_back(t);
  }
  if (Escaped(t, g2, numerator)) {
    seq.diverged = true;
    seq.divergence_index = steps;
  }
  return seq;
}

TSequence TRecursion(const ProblemParams& params, int steps) {
  return TRecursion(params.alpha(), params.gamma(), steps);
}

TScan ScanTRecursion(double alpha, double gamma, long long steps) {
  const double g2 = gamma * gamma;
  const double numerator = g2 * alpha * alpha;
  TScan scan;
  double t = 0.0;
  for (long long k = 0; k < steps; ++k) {
    if (Escaped(t, g2, numerator)) {
      scan.diverged = true;
      scan.divergence_step = k;
      break;
    }
    t = numerator > 0.0 ? 1.0 + numerator / (g2 - t) : 1.0;
    scan.max_value = std::max(scan.max_value, t);
    scan.steps_run = k + 1;
  }
  if (!scan.diverged && Escaped(t, g2, numerator)) {
    scan.diverged = true;
    scan.divergence_step = scan.steps_run;
  }
  scan.last_value = t;
  return scan;
}

double CompletedSquareGain(double t, double gamma) {
  const double g2 = gamma * gamma;
  if (!(t < g2)) {
    throw UnboundedMaximization(
        "CompletedSquareGain: t >= gamma^2, supremum over v is infinite");
  }
  if (t < 0.0) throw std::invalid_argument("CompletedSquareGain: t < 0");
  return t * g2 / (g2 - t);
}

InnerMax AdversaryResponseBranch1(const Eigen::VectorXd& pred,
                                  const ProblemParams& params) {
  const double g2 = params.gamma() * params.gamma();
  if (!(g2 > 1.0)) {
    throw UnboundedMaximization("AdversaryResponseBranch1: requires gamma > 1");
  }
  return {pred * (g2 / (g2 - 1.0)), pred.squaredNorm() * g2 / (g2 - 1.0)};
}

InnerMax AdversaryResponseBranch0(const Eigen::VectorXd& ax, double t_coeff,
                                  const ProblemParams& params) {
  const double g2 = params.gamma() * params.gamma();
  if (!(t_coeff < g2)) {
    throw UnboundedMaximization(
        "AdversaryResponseBranch0: t >= gamma^2, supremum over v is infinite");
  }
  if (!(t_coeff > 0.0)) {
    throw std::invalid_argument("AdversaryResponseBranch0: t must be > 0");
  }
  return {ax * (g2 / (g2 - t_coeff)), ax.squaredNorm() * CompletedSquareGain(t_coeff, params.gamma())};
}

}  // namespace dualctl
