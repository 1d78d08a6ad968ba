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

#ifndef DUALCTL_ADVERSARY_H_
#define DUALCTL_ADVERSARY_H_

#include <string>

#include <Eigen/Dense>

#include "dualctl/game_model.h"
#include "dualctl/linalg.h"

namespace dualctl {

struct AdversaryKind {
  enum class Type { kWorstCase, kGaussian, kZero, kConstant };

  Type type = Type::kZero;
  double std = 0.0;          // kGaussian, > 0
  Eigen::VectorXd constant;  // kConstant

  static AdversaryKind WorstCase() { return {Type::kWorstCase, 0.0, {}}; }
  static AdversaryKind Gaussian(double std);
  static AdversaryKind Zero() { return {Type::kZero, 0.0, {}}; }
  static AdversaryKind Constant(Eigen::VectorXd w) {
    return {Type::kConstant, 0.0, std::move(w)};
  }

  std::string Name() const;
};

// Hidden parameters for one episode: A = alpha * Haar, sign uniform.
Scenario DrawScenario(const ProblemParams& params, Rng& rng);

struct WorstCaseMove {
  Eigen::VectorXd v;  // next state
  double score = 0.0;
  double branch1_candidate_score = 0.0;
  double branch0_candidate_score = 0.0;
  int polish_evaluations = 0;
};

// Scores a candidate next state v by V*(v, Z + triple(v, x, u)). Candidates
// are the completed-square maximizers for both branches under the true
// scenario; the better one is polished by Nelder-Mead (at most 200
// evaluations) and only accepted if it scores higher.
WorstCaseMove WorstCaseNextState(const GameState& state,
                                 const Eigen::VectorXd& u_realized,
                                 const Scenario& scenario,
                                 const ProblemParams& params);

// Disturbance w for the realized input; the next state is A x + i u + w.
Eigen::VectorXd NextDisturbance(const AdversaryKind& kind,
                                const GameState& state,
                                const Eigen::VectorXd& u_realized,
                                const Scenario& scenario,
                                const ProblemParams& params, Rng& rng);

}  // namespace dualctl

#endif  // DUALCTL_ADVERSARY_H_
