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

#ifndef DUALCTL_NELDER_MEAD_H_
#define DUALCTL_NELDER_MEAD_H_

#include <functional>

#include <Eigen/Dense>

namespace dualctl {

struct NelderMeadOptions {
  int max_evaluations = 2000;
  // Edge length of the initial simplex around the start point.
  double initial_step = 0.1;
  // Stop when the spread of simplex values and the simplex diameter are both
  // below these.
  double value_tolerance = 1e-13;
  double point_tolerance = 1e-11;
  // Rebuild the simplex around the best point after convergence, until a
  // restart fails to improve or the budget runs out.
  int max_restarts = 4;
};

struct NelderMeadResult {
  Eigen::VectorXd point;
  double value = 0.0;
  int evaluations = 0;
  bool converged = false;
};

using Objective = std::function<double(const Eigen::VectorXd&)>;

// Derivative-free minimization with the standard reflection (1), expansion
// (2), contraction (1/2) and shrink (1/2) coefficients.
NelderMeadResult NelderMeadMinimize(const Objective& f,
                                    const Eigen::VectorXd& start,
                                    const NelderMeadOptions& options = {});

}  // namespace dualctl

#endif  // DUALCTL_NELDER_MEAD_H_
