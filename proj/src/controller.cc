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

#include "dualctl/controller.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "dualctl/errors.h"
#include "dualctl/nelder_mead.h"

namespace dualctl {

double InfoFunctional::Evaluate(const Eigen::MatrixXd& a, int sign) const {
  return FrobeniusInner(y1, a) + sign * y2.trace() + sign * FrobeniusInner(y3, a);
}

InfoFunctional BuildFunctional(const GameState& state,
                               const ProblemParams& params) {
  if (state.dimension() != params.n()) {
    throw std::invalid_argument("BuildFunctional: dimension mismatch");
  }
  const double g = params.g();
  const DataSummary data = Summarize(state);
  InfoFunctional f;
  f.g = g;
  f.y1 = -2.0 * g * data.z12;
  f.y2 = -2.0 * g * state.Block(1, 3);
  f.y3 = -2.0 * g * data.z32;
  f.c_const = -g * data.SignFreeConstant(params.alpha());
  return f;
}

double BranchZeroWeight(const ProblemParams& params) {
  if (!params.feasible()) {
    throw InfeasibleError("BranchZeroWeight: gamma below gamma*");
  }
  const double inv_g2 = 1.0 / (params.gamma() * params.gamma());
  return (1.0 - inv_g2) / (1.0 / params.t_star() - inv_g2);
}

InfoFunctional ExtractFunctional(const GameState& state,
                                 const ProblemParams& params) {
  if (!params.at_critical_gain()) {
    throw UnsupportedConfiguration(
        "ExtractFunctional: the closed-form law requires gamma = gamma*");
  }
  const double weight = BranchZeroWeight(params);
  if (std::abs(weight - (params.g() + 2.0)) > 1e-9 * (params.g() + 2.0)) {
    throw InvariantViolation(
        "ExtractFunctional: branch-0 weight differs from g + 2");
  }
  return BuildFunctional(state, params);
}

ScenarioSelection SelectScenario(const InfoFunctional& f,
                                 const ProblemParams& params) {
  ScenarioSelection best;
  bool have = false;
  for (int sign : {1, -1}) {
    const ProcrustesResult p = ProcrustesMax(f.y1 + sign * f.y3, params.alpha());
    const double value = sign * f.y2.trace() + p.value;
    if (!have || value > best.y_max) {
      best.y_max = value;
      best.scenario = {p.argmax, sign};
      have = true;
    }
  }
  return best;
}

const char* ModeName(Mode mode) {
  return mode == Mode::kCertaintyEquivalence ? "certainty_equivalence"
                                             : "exploration";
}

const char* ExplorationMeanSignName(ExplorationMeanSign sign) {
  switch (sign) {
    case ExplorationMeanSign::kMinus:
      return "minus";
    case ExplorationMeanSign::kPlus:
      return "plus";
    case ExplorationMeanSign::kMinusHatI:
      return "minus_i_hat";
    case ExplorationMeanSign::kPlusHatI:
      return "plus_i_hat";
  }
  return "unknown";
}

bool ControlDecision::IsValid(double tolerance) const {
  const double mm = mean.squaredNorm();
  return second_moment >= mm - tolerance * (1.0 + mm);
}

ControlDecision Decide(const GameState& state, const ProblemParams& params,
                       ExplorationMeanSign mean_sign) {
  if (!params.at_critical_gain()) {
    return PolicyNumeric(state, params).decision;
  }
  const InfoFunctional f = ExtractFunctional(state, params);
  const ScenarioSelection sel = SelectScenario(f, params);
  const int n = state.dimension();
  const double alpha = params.alpha();
  const double xx = state.x.squaredNorm();

  ControlDecision d;
  d.witness = sel.scenario;
  d.y_max = sel.y_max;
  if (xx == 0.0) {
    d.mode = Mode::kCertaintyEquivalence;
    d.mean = Eigen::VectorXd::Zero(n);
    d.second_moment = 0.0;
    return d;
  }

  const Eigen::VectorXd ax = sel.scenario.a.matrix * state.x;
  const double threshold = 2.0 * alpha * alpha * xx;
  if (sel.y_max >= threshold) {
    d.mode = Mode::kCertaintyEquivalence;
    d.mean = -static_cast<double>(sel.scenario.sign) * ax;
    d.second_moment = d.mean.squaredNorm();
    return d;
  }

  const double r = sel.y_max / threshold;
  const double i_hat = sel.scenario.sign;
  double kappa = 0.0;
  switch (mean_sign) {
    case ExplorationMeanSign::kMinus:
      kappa = -r;
      break;
    case ExplorationMeanSign::kPlus:
      kappa = r;
      break;
    case ExplorationMeanSign::kMinusHatI:
      kappa = -i_hat * r;
      break;
    case ExplorationMeanSign::kPlusHatI:
      kappa = i_hat * r;
      break;
  }
  d.mode = Mode::kExploration;
  d.mean = kappa * ax;
  d.second_moment = alpha * alpha * xx;
  return d;
}

Eigen::VectorXd SampleInput(const ControlDecision& decision, Rng& rng) {
  if (!decision.IsValid(1e-9)) {
    throw InvariantViolation("SampleInput: second moment below |mean|^2");
  }
  if (decision.mode == Mode::kCertaintyEquivalence) return decision.mean;
  const double spread =
      std::max(0.0, decision.second_moment - decision.mean.squaredNorm());
  const int n = static_cast<int>(decision.mean.size());
  return decision.mean + std::sqrt(spread) * UnitSphereSample(n, rng);
}

namespace {

std::vector<MomentPiece> PolicyPieces(const InfoFunctional& f,
                                      const Eigen::VectorXd& x, double alpha,
                                      double branch0_weight,
                                      double y1_nuclear,
                                      const Eigen::VectorXd& mean) {
  const double xx = x.squaredNorm();
  std::vector<MomentPiece> pieces;
  pieces.reserve(3);
  for (int sign : {1, -1}) {
    // E|Ax + iu|^2 = alpha^2|x|^2 + 2i <m x^T, A> + s.
    const Eigen::MatrixXd coeff =
        f.y1 + sign * f.y3 + (2.0 * sign) * mean * x.transpose();
    pieces.push_back({alpha * alpha * xx + f.c_const + sign * f.y2.trace() +
                          alpha * NuclearNorm(coeff),
                      1.0});
  }
  pieces.push_back({branch0_weight * alpha * alpha * xx + f.c_const +
                        alpha * y1_nuclear,
                    -f.g});
  return pieces;
}

}  // namespace

double PolicyObjective(const GameState& state, const ProblemParams& params,
                       const Eigen::VectorXd& mean, double second_moment) {
  const InfoFunctional f = BuildFunctional(state, params);
  const auto pieces =
      PolicyPieces(f, state.x, params.alpha(), BranchZeroWeight(params),
                   NuclearNorm(f.y1), mean);
  double value = -std::numeric_limits<double>::infinity();
  for (const MomentPiece& p : pieces) {
    value = std::max(value, p.intercept + p.slope * second_moment);
  }
  return value;
}

double MinimizeOverSecondMoment(std::span<const MomentPiece> pieces,
                                double s_min, double* argmin) {
  if (pieces.empty()) {
    throw std::invalid_argument("MinimizeOverSecondMoment: no pieces");
  }
  auto eval = [&](double s) {
    double v = -std::numeric_limits<double>::infinity();
    for (const MomentPiece& p : pieces) v = std::max(v, p.intercept + p.slope * s);
    return v;
  };
  double max_slope = -std::numeric_limits<double>::infinity();
  for (const MomentPiece& p : pieces) max_slope = std::max(max_slope, p.slope);
  if (max_slope < 0.0) {
    if (argmin) *argmin = std::numeric_limits<double>::infinity();
    return -std::numeric_limits<double>::infinity();
  }

  double best_s = s_min;
  double best_v = eval(s_min);
  for (std::size_t p = 0; p < pieces.size(); ++p) {
    for (std::size_t q = p + 1; q < pieces.size(); ++q) {
      const double ds = pieces[p].slope - pieces[q].slope;
      if (ds == 0.0) continue;
      const double s = (pieces[q].intercept - pieces[p].intercept) / ds;
      if (!(s > s_min) || !std::isfinite(s)) continue;
      const double v = eval(s);
      if (v < best_v || (v == best_v && s < best_s)) {
        best_v = v;
        best_s = s;
      }
    }
  }
  if (argmin) *argmin = best_s;
  return best_v;
}

MomentSearchResult MinimizeOverMoments(const MomentPieceFunction& pieces,
                                       std::span<const Eigen::VectorXd> starts,
                                       double initial_step, int budget) {
  if (starts.empty()) {
    throw std::invalid_argument("MinimizeOverMoments: no start points");
  }
  auto objective = [&](const Eigen::VectorXd& m) {
    const auto ps = pieces(m);
    return MinimizeOverSecondMoment(ps, m.squaredNorm());
  };

  NelderMeadOptions options;
  options.initial_step = initial_step;
  options.max_evaluations =
      std::max(50, budget / static_cast<int>(starts.size()));

  MomentSearchResult result;
  result.value = std::numeric_limits<double>::infinity();
  for (const Eigen::VectorXd& start : starts) {
    const NelderMeadResult r = NelderMeadMinimize(objective, start, options);
    result.evaluations += r.evaluations;
    if (r.value < result.value) {
      result.value = r.value;
      result.mean = r.point;
      result.converged = r.converged;
    }
  }
  const auto ps = pieces(result.mean);
  result.value = MinimizeOverSecondMoment(ps, result.mean.squaredNorm(),
                                          &result.second_moment);
  return result;
}

NumericPolicy PolicyNumeric(const GameState& state, const ProblemParams& params,
                            int budget) {
  const int n = state.dimension();
  if (n > 8) {
    throw UnsupportedConfiguration("PolicyNumeric: reference policy needs n <= 8");
  }
  const InfoFunctional f = BuildFunctional(state, params);
  const ScenarioSelection sel = SelectScenario(f, params);
  const double alpha = params.alpha();
  const double weight = BranchZeroWeight(params);
  const double y1_nuclear = NuclearNorm(f.y1);

  NumericPolicy out;
  out.decision.witness = sel.scenario;
  out.decision.y_max = sel.y_max;
  const double x_norm = state.x.norm();
  if (x_norm == 0.0) {
    // Every piece is independent of m when x = 0; u = 0 is a minimizer.
    out.decision.mode = Mode::kCertaintyEquivalence;
    out.decision.mean = Eigen::VectorXd::Zero(n);
    out.decision.second_moment = 0.0;
    out.objective = PolicyObjective(state, params, out.decision.mean, 0.0);
    out.converged = true;
    return out;
  }

  const Eigen::VectorXd ce = -static_cast<double>(sel.scenario.sign) *
                             (sel.scenario.a.matrix * state.x);
  std::vector<Eigen::VectorXd> starts = {Eigen::VectorXd::Zero(n), ce, -ce};
  Rng rng(0x5EEDULL + static_cast<std::uint64_t>(n));
  for (int k = 0; k < 3; ++k) {
    starts.push_back(0.5 * alpha * x_norm * StandardNormalVector(n, rng));
  }
  const MomentPieceFunction pieces = [&](const Eigen::VectorXd& m) {
    return PolicyPieces(f, state.x, alpha, weight, y1_nuclear, m);
  };
  const MomentSearchResult r =
      MinimizeOverMoments(pieces, starts, 0.5 * alpha * x_norm, budget);

  out.decision.mean = r.mean;
  out.decision.second_moment = r.second_moment;
  const double mm = r.mean.squaredNorm();
  out.decision.mode = r.second_moment > mm + 1e-9 * (1.0 + mm)
                          ? Mode::kExploration
                          : Mode::kCertaintyEquivalence;
  out.objective = r.value;
  out.converged = r.converged;
  out.evaluations = r.evaluations;
  return out;
}

Scenario EstimateParameters(const GameState& state,
                            const ProblemParams& params) {
  const DataSummary data = Summarize(state);
  Scenario best;
  double best_value = -std::numeric_limits<double>::infinity();
  for (int sign : {1, -1}) {
    // -W(A, i) = -const - 2<A, Z12 + i Z32> - 2i tr Z13.
    const ProcrustesResult p =
        ProcrustesMax(-2.0 * (data.z12 + sign * data.z32), params.alpha());
    const double value = p.value - 2.0 * sign * data.trace13;
    if (value > best_value) {
      best_value = value;
      best = {p.argmax, sign};
    }
  }
  return best;
}

}  // namespace dualctl
