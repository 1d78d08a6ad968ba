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

#include "dualctl/adversary.h"

#include <stdexcept>

#include "dualctl/nelder_mead.h"

namespace dualctl {

AdversaryKind AdversaryKind::Gaussian(double std) {
  if (!(std > 0.0)) {
    throw std::invalid_argument("AdversaryKind::Gaussian: std must be > 0");
  }
  return {Type::kGaussian, std, {}};
}

std::string AdversaryKind::Name() const {
  switch (type) {
    case Type::kWorstCase:
      return "worst_case";
    case Type::kGaussian:
      return "gaussian";
    case Type::kZero:
      return "zero";
    case Type::kConstant:
      return "constant";
  }
  return "unknown";
}

Scenario DrawScenario(const ProblemParams& params, Rng& rng) {
  Scenario s;
  s.a.scale = params.alpha();
  s.a.matrix = params.alpha() * HaarOrthogonal(params.n(), rng);
  std::bernoulli_distribution coin(0.5);
  s.sign = coin(rng) ? 1 : -1;
  return s;
}

WorstCaseMove WorstCaseNextState(const GameState& state,
                                 const Eigen::VectorXd& u_realized,
                                 const Scenario& scenario,
                                 const ProblemParams& params) {
  const Eigen::VectorXd ax = scenario.a.matrix * state.x;
  const Eigen::VectorXd pred = ax + scenario.sign * u_realized;

  auto score = [&](const Eigen::VectorXd& v) {
    GameState next = state;
    next.AddTriple({v, state.x, u_realized});
    next.x = v;
    return VStar(next, params).value;
  };

  WorstCaseMove move;
  const Eigen::VectorXd v1 = AdversaryResponseBranch1(pred, params).v;
  const Eigen::VectorXd v0 =
      AdversaryResponseBranch0(ax, params.t_star(), params).v;
  move.branch1_candidate_score = score(v1);
  move.branch0_candidate_score = score(v0);
  const bool first = move.branch1_candidate_score >= move.branch0_candidate_score;
  move.v = first ? v1 : v0;
  move.score = first ? move.branch1_candidate_score : move.branch0_candidate_score;

  NelderMeadOptions options;
  options.max_evaluations = 200;
  options.max_restarts = 1;
  options.initial_step = 0.1 * (1.0 + move.v.norm());
  const NelderMeadResult polished = NelderMeadMinimize(
      [&](const Eigen::VectorXd& v) { return -score(v); }, move.v, options);
  move.polish_evaluations = polished.evaluations;
  if (-polished.value > move.score) {
    move.score = -polished.value;
    move.v = polished.point;
  }
  return move;
}

Eigen::VectorXd NextDisturbance(const AdversaryKind& kind,
                                const GameState& state,
                                const Eigen::VectorXd& u_realized,
                                const Scenario& scenario,
                                const ProblemParams& params, Rng& rng) {
  const int n = state.dimension();
  switch (kind.type) {
    case AdversaryKind::Type::kZero:
      return Eigen::VectorXd::Zero(n);
    case AdversaryKind::Type::kGaussian:
      return kind.std * StandardNormalVector(n, rng);
    case AdversaryKind::Type::kConstant:
      if (kind.constant.size() != n) {
        throw std::invalid_argument("NextDisturbance: constant has wrong size");
      }
      return kind.constant;
    case AdversaryKind::Type::kWorstCase: {
      const WorstCaseMove move =
          WorstCaseNextState(state, u_realized, scenario, params);
      return move.v - scenario.a.matrix * state.x -
             scenario.sign * u_realized;
    }
  }
  throw std::logic_error("NextDisturbance: unknown adversary kind");
}

}  // namespace dualctl
