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

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "dualctl/adversary.h"
#include "dualctl/errors.h"

namespace dualctl {
namespace {

// Start points for moment searches: m = 0, m = -+ i_hat A_hat x and three
// seeded perturbations of scale alpha |x|.
std::vector<Eigen::VectorXd> MomentStarts(const Eigen::VectorXd& x,
                                          const Scenario& hint, double alpha) {
  const int n = static_cast<int>(x.size());
  const Eigen::VectorXd ce = -static_cast<double>(hint.sign) * (hint.a.matrix * x);
  std::vector<Eigen::VectorXd> starts = {Eigen::VectorXd::Zero(n), ce, -ce};
  Rng rng(0xC0FFEEULL + static_cast<std::uint64_t>(n));
  for (int k = 0; k < 3; ++k) {
    starts.push_back(0.5 * alpha * x.norm() * StandardNormalVector(n, rng));
  }
  return starts;
}

double StepFor(const Eigen::VectorXd& x, double alpha) {
  return std::max(0.5 * alpha * x.norm(), 1e-6);
}

}  // namespace

Theorem3Report CheckTheorem3(const Eigen::VectorXd& x,
                             const Eigen::MatrixXd& y1,
                             const Eigen::MatrixXd& y2,
                             const Eigen::MatrixXd& y3, double g, double alpha,
                             int budget) {
  const int n = static_cast<int>(x.size());
  if (n > 4) throw UnsupportedConfiguration("CheckTheorem3: needs n <= 4");
  if (!(g > 0.0)) throw std::invalid_argument("CheckTheorem3: g must be > 0");
  const ProblemParams params = ProblemParams::AtCriticalGain(n, alpha);

  InfoFunctional f;
  f.y1 = y1;
  f.y2 = y2;
  f.y3 = y3;
  f.g = g;
  const ScenarioSelection sel = SelectScenario(f, params);
  const double xx = x.squaredNorm();
  const double ax2 = alpha * alpha * xx;

  Theorem3Report report;
  report.rhs = std::max(sel.y_max, 2.0 * ax2);

  const MomentPieceFunction pieces = [&](const Eigen::VectorXd& m) {
    std::vector<MomentPiece> ps;
    ps.reserve(3);
    for (int sign : {1, -1}) {
      const Eigen::MatrixXd coeff = y1 + sign * y3 + (2.0 * sign) * m * x.transpose();
      ps.push_back({ax2 + sign * y2.trace() + alpha * NuclearNorm(coeff), 1.0});
    }
    ps.push_back({(g + 2.0) * ax2, -g});
    return ps;
  };
  const auto starts = MomentStarts(x, sel.scenario, alpha);
  const MomentSearchResult r =
      MinimizeOverMoments(pieces, starts, StepFor(x, alpha), budget);
  report.lhs = r.value;
  report.residual = report.lhs - report.rhs;
  report.minimizer_mean = r.mean;
  report.minimizer_second_moment = r.second_moment;
  report.converged = r.converged;
  if (!r.converged) report.warning = "optimizer budget exhausted";
  return report;
}

std::vector<Theorem3Instance> SampleTheorem3Instances(int count,
                                                      std::uint64_t seed,
                                                      int max_n) {
  if (max_n < 1) throw std::invalid_argument("SampleTheorem3Instances: max_n");
  std::vector<Theorem3Instance> out;
  for (int idx = 0; idx < count; ++idx) {
    Rng rng(SplitMix64(seed + static_cast<std::uint64_t>(idx)));
    std::uniform_int_distribution<int> dim(1, max_n);
    std::uniform_int_distribution<int> pick(0, 2);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    Theorem3Instance inst;
    const int n = dim(rng);
    inst.alpha = std::array<double, 3>{0.5, 1.0, 2.0}[pick(rng)];
    inst.g = std::pow(10.0, unit(rng));
    inst.x = StandardNormalVector(n, rng);
    const double scale = std::pow(10.0, unit(rng)) * inst.alpha * inst.alpha *
                         inst.x.squaredNorm() / n;
    auto gaussian = [&]() {
      Eigen::MatrixXd m(n, n);
      for (int c = 0; c < n; ++c) m.col(c) = StandardNormalVector(n, rng);
      return m;
    };
    inst.y1 = scale * gaussian();
    inst.y2 = scale * gaussian();
    inst.y3 = scale * gaussian();
    out.push_back(std::move(inst));
  }
  return out;
}

BellmanEvaluation ApplyBellmanNumeric(ValueFunction v, const GameState& state,
                                      const ProblemParams& params, int budget) {
  struct Piece {
    double t;
    bool averaged;
  };
  std::vector<Piece> family;
  switch (v) {
    case ValueFunction::kTerminal:
      family = {{0.0, false}};
      break;
    case ValueFunction::kFirstIterate:
      family = {{1.0, false}};
      break;
    case ValueFunction::kClosedForm:
      if (!params.feasible()) {
        throw InfeasibleError("ApplyBellmanNumeric: gamma below gamma*");
      }
      family = {{1.0, false}, {params.t_star(), true}};
      break;
  }

  const double alpha = params.alpha();
  const double gamma = params.gamma();
  const double g2 = gamma * gamma;
  const DataSummary data = Summarize(state);
  const double c0 = data.SignFreeConstant(alpha);
  const Eigen::VectorXd& x = state.x;
  const double ax2 = alpha * alpha * x.squaredNorm();
  const double averaged_nuclear = NuclearNorm(-2.0 * g2 * data.z12);

  // Per piece, after the closed-form maximum over v (gain k = t g2/(g2 - t)):
  //   single sign i: -g2 W(A, i) + k E|Ax + iu|^2
  //   averaged:      -g2 W_bar(A) + k |Ax|^2 - g2 E|u|^2
  // and the maximum over A is a Procrustes problem.
  const MomentPieceFunction pieces = [&](const Eigen::VectorXd& m) {
    std::vector<MomentPiece> ps;
    for (const Piece& p : family) {
      const double k = CompletedSquareGain(p.t, gamma);
      if (p.averaged) {
        ps.push_back({-g2 * c0 + k * ax2 + alpha * averaged_nuclear, -g2});
        continue;
      }
      for (int sign : {1, -1}) {
        const Eigen::MatrixXd coeff = -2.0 * g2 * (data.z12 + sign * data.z32) +
                                      (2.0 * sign * k) * m * x.transpose();
        ps.push_back({-g2 * (c0 + 2.0 * sign * data.trace13) + k * ax2 +
                          alpha * NuclearNorm(coeff),
                      k});
      }
    }
    return ps;
  };

  const Scenario hint = EstimateParameters(state, params);
  const auto starts = MomentStarts(x, hint, alpha);
  const MomentSearchResult r =
      MinimizeOverMoments(pieces, starts, StepFor(x, alpha), budget);
  BellmanEvaluation out;
  out.value = x.squaredNorm() + r.value;
  out.mean = r.mean;
  out.second_moment = r.second_moment;
  out.converged = r.converged;
  return out;
}

BellmanReport CheckBellmanFixedPoint(std::span<const GameState> states,
                                     const ProblemParams& params, int budget) {
  if (!params.at_critical_gain()) {
    throw UnsupportedConfiguration(
        "CheckBellmanFixedPoint: requires gamma = gamma*");
  }
  BellmanReport report;
  for (const GameState& state : states) {
    if (state.dimension() > 3) {
      throw UnsupportedConfiguration("CheckBellmanFixedPoint: needs n <= 3");
    }
    BellmanSample s;
    s.v_star = VStar(state, params).value;
    const BellmanEvaluation fv =
        ApplyBellmanNumeric(ValueFunction::kClosedForm, state, params, budget);
    s.f_v_star = fv.value;
    s.converged = fv.converged;
    s.residual = (s.f_v_star - s.v_star) / (1.0 + std::abs(s.v_star));
    report.max_abs_residual =
        std::max(report.max_abs_residual, std::abs(s.residual));
    report.samples.push_back(s);
  }
  return report;
}

namespace {

std::vector<Scenario> ScalarScenarios(double alpha) {
  std::vector<Scenario> out;
  for (double a : {alpha, -alpha}) {
    for (int sign : {1, -1}) {
      Scenario s;
      s.a.scale = alpha;
      s.a.matrix = Eigen::MatrixXd::Constant(1, 1, a);
      s.sign = sign;
      out.push_back(s);
    }
  }
  return out;
}

}  // namespace

ValueIterationReport CheckValueIterationMonotone(
    std::span<const GameState> states, const ProblemParams& params, int depth,
    double tolerance, int budget) {
  if (params.n() != 1) {
    throw UnsupportedConfiguration("CheckValueIterationMonotone: needs n = 1");
  }
  if (depth < 1 || depth > 2) {
    throw UnsupportedConfiguration(
        "CheckValueIterationMonotone: depth must be 1 or 2");
  }
  const double g2 = params.gamma() * params.gamma();
  const auto scenarios = ScalarScenarios(params.alpha());

  ValueIterationReport report;
  report.depth = depth;
  report.tolerance = tolerance;
  report.t_values = TRecursion(params, depth).values;
  report.all_pass = true;
  for (const GameState& state : states) {
    ValueIterationSample s;
    double min_w = std::numeric_limits<double>::infinity();
    double first_closed = -std::numeric_limits<double>::infinity();
    for (const Scenario& sc : scenarios) {
      min_w = std::min(min_w, WeightedNormSq(state.z, sc));
      first_closed = std::max(first_closed, V1(state, sc, params));
    }
    s.iterates.push_back(-g2 * min_w);
    s.iterates.push_back(
        ApplyBellmanNumeric(ValueFunction::kTerminal, state, params, budget)
            .value);
    if (depth >= 2) {
      s.iterates.push_back(ApplyBellmanNumeric(ValueFunction::kFirstIterate,
                                               state, params, budget)
                               .value);
    }
    s.first_iterate_closed_form = first_closed;
    s.v_star = VStar(state, params).value;

    auto slack = [&](double v) { return tolerance * (1.0 + std::abs(v)); };
    s.monotone = true;
    for (std::size_t k = 1; k < s.iterates.size(); ++k) {
      if (s.iterates[k - 1] > s.iterates[k] + slack(s.iterates[k])) {
        s.monotone = false;
      }
    }
    s.below_v_star = s.iterates.back() <= s.v_star + slack(s.v_star);
    s.above_lower_bound = true;
    for (int k = 1; k <= depth; ++k) {
      double lower = -std::numeric_limits<double>::infinity();
      for (const Scenario& sc : scenarios) {
        lower = std::max({lower, V0(state, sc, report.t_values[k], params),
                          V1(state, sc, params)});
      }
      s.lower_bounds.push_back(lower);
      if (s.iterates[k] < lower - slack(lower)) s.above_lower_bound = false;
    }
    s.above_shifted_lower_bound = true;
    for (int k = 1; k <= depth; ++k) {
      double lower = -std::numeric_limits<double>::infinity();
      for (const Scenario& sc : scenarios) {
        lower = std::max({lower, V0(state, sc, report.t_values[k - 1], params),
                          V1(state, sc, params)});
      }
      s.shifted_lower_bounds.push_back(lower);
      if (s.iterates[k] < lower - slack(lower)) {
        s.above_shifted_lower_bound = false;
      }
    }
    report.all_pass =
        report.all_pass && s.monotone && s.below_v_star && s.above_lower_bound;
    report.samples.push_back(std::move(s));
  }
  return report;
}

GammaThresholdReport CheckGammaThreshold(std::span<const double> alphas,
                                         std::span<const double> gamma_ratios,
                                         long long steps) {
  GammaThresholdReport report;
  report.steps = steps;
  report.all_pass = true;
  for (double alpha : alphas) {
    if (alpha < 0.0) {
      throw std::invalid_argument("CheckGammaThreshold: alpha must be >= 0");
    }
    for (double ratio : gamma_ratios) {
      GammaThresholdCase c;
      c.alpha = alpha;
      c.gamma_ratio = ratio;
      c.gamma_star = CriticalGain(alpha);
      c.gamma = ratio * c.gamma_star;
      c.t_limit = TRecursionLimit(alpha, c.gamma);
      c.expected_finite = ratio >= 1.0;
      c.scan = ScanTRecursion(alpha, c.gamma, steps);
      if (c.expected_finite) {
        c.pass = !c.scan.diverged && std::isfinite(c.t_limit) &&
                 c.scan.max_value <= c.t_limit * (1.0 + 1e-9);
      } else {
        c.pass = c.scan.diverged;
      }
      report.all_pass = report.all_pass && c.pass;
      report.cases.push_back(c);
    }
  }
  return report;
}

CrossValidationReport CrossValidatePolicy(std::span<const GameState> states,
                                          const ProblemParams& params,
                                          int budget, double tolerance) {
  if (!params.at_critical_gain()) {
    throw UnsupportedConfiguration("CrossValidatePolicy: requires gamma = gamma*");
  }
  CrossValidationReport report;
  report.tolerance = tolerance;
  for (std::size_t idx = 0; idx < states.size(); ++idx) {
    const GameState& state = states[idx];
    if (state.dimension() > 3) {
      throw UnsupportedConfiguration("CrossValidatePolicy: needs n <= 3");
    }
    PolicySample s;
    const NumericPolicy numeric = PolicyNumeric(state, params, budget);
    s.numeric_objective = numeric.objective;
    const double slack = tolerance * (1.0 + std::abs(numeric.objective));
    for (std::size_t k = 0; k < 4; ++k) {
      const ControlDecision d = Decide(state, params, kAllExplorationMeanSigns[k]);
      s.mode = d.mode;
      s.y_max = d.y_max;
      s.sign_objective[k] =
          PolicyObjective(state, params, d.mean, d.second_moment);
      s.sign_matches[k] = s.sign_objective[k] <= numeric.objective + slack;
    }
    const double xx = state.x.squaredNorm();
    if (s.mode == Mode::kCertaintyEquivalence) {
      s.ce_gap = s.sign_objective[0] - numeric.objective;
      report.max_ce_gap = std::max(report.max_ce_gap, s.ce_gap /
                                   (1.0 + std::abs(numeric.objective)));
      ++report.ce_count;
    } else {
      const double scale = s.y_max / (2.0 * params.alpha() * params.alpha() * xx);
      s.informative = scale > 1e-9;
    }
    if (s.informative) {
      ++report.informative_count;
      const double best = *std::min_element(s.sign_objective.begin(),
                                            s.sign_objective.end());
      for (std::size_t k = 0; k < 4; ++k) {
        if (s.sign_objective[k] <= best + tolerance * (1.0 + std::abs(best))) {
          ++report.best_of_four_counts[k];
        }
      }
      bool any = false;
      for (std::size_t k = 0; k < 4; ++k) {
        if (s.sign_matches[k]) {
          ++report.match_counts[k];
          any = true;
        }
      }
      if (!any && report.first_unmatched_sample < 0) {
        report.first_unmatched_sample = static_cast<int>(idx);
      }
    }
    report.samples.push_back(s);
  }
  for (std::size_t k = 0; k < 4; ++k) {
    if (report.informative_count > 0 &&
        report.match_counts[k] == report.informative_count) {
      report.winners.push_back(kAllExplorationMeanSigns[k]);
    }
  }
  report.ambiguous = report.winners.size() != 1;
  report.ce_pass = report.max_ce_gap <= tolerance;
  report.pass = !report.ambiguous && report.ce_pass;
  return report;
}

std::vector<GameState> SampleStates(const ProblemParams& params, int count,
                                    std::uint64_t seed,
                                    const StateSamplerOptions& options) {
  std::vector<GameState> states;
  states.reserve(static_cast<std::size_t>(std::max(0, count)));
  const int n = params.n();
  for (int idx = 0; idx < count; ++idx) {
    Rng rng(SplitMix64(seed + static_cast<std::uint64_t>(idx)));
    const Scenario truth = DrawScenario(params, rng);
    GameState state = GameState::Initial(StandardNormalVector(n, rng));
    std::uniform_int_distribution<int> steps(0, options.max_triples);
    const int j = steps(rng);
    for (int t = 0; t < j; ++t) {
      const ControlDecision d = Decide(state, params);
      const Eigen::VectorXd u = SampleInput(d, rng);
      const Eigen::VectorXd w = options.noise_std * StandardNormalVector(n, rng);
      const Eigen::VectorXd next =
          truth.a.matrix * state.x + truth.sign * u + w;
      state.Advance({next, state.x, u});
    }
    std::uniform_real_distribution<double> norm(options.min_norm,
                                                options.max_norm);
    state.x = norm(rng) * UnitSphereSample(n, rng);
    states.push_back(std::move(state));
  }
  return states;
}

}  // namespace dualctl
