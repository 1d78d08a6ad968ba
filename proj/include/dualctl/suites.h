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

#ifndef DUALCTL_SUITES_H_
#define DUALCTL_SUITES_H_

#include <cstdint>
#include <string>
#include <vector>

#include "dualctl/output.h"

namespace dualctl {

// Verification suites shared by the CLI and the acceptance binary.
//   thm3     min-max identity on random (x, Y, g), n in {1, 2, 3}
//   bellman  |F V* - V*| <= 1e-2 (1 + |V*|), n in {1, 2}
//   vi       depth-2 value-iteration sandwich, n = 1
//   gamma    t-recursion threshold, alpha in {0.25, 0.5, 1, 2, 4}
//   policy   closed-form policy against the numeric minimizer, n = 1
inline const std::vector<std::string> kSuiteNames = {"thm3", "bellman", "vi",
                                                     "gamma", "policy"};

struct SuiteOptions {
  // <= 0 selects the suite default (100, 100, 30, -, 100).
  int samples = 0;
  std::uint64_t seed = 2026;
  int budget = kDefaultCheckBudget;
  long long gamma_steps = 1000000;
};

struct SuiteResult {
  std::string name;
  bool pass = false;
  std::string summary;  // one line
  Json report;
};

// Throws std::invalid_argument for an unknown suite name.
SuiteResult RunSuite(const std::string& name, const SuiteOptions& options);

}  // namespace dualctl

#endif  // DUALCTL_SUITES_H_
