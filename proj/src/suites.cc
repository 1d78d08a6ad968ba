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

#include "dualctl/suites.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "dualctl/verifier.h"

namespace dualctl {
namespace {

std::string Format(const char* fmt, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), fmt, a, b, c);
  return buf;
}

int OrDefault(int samples, int fallback) {
  return samples > 0 ? samples : fallback;
}

SuiteResult Theorem3Suite(const SuiteOptions& o) {
  const int count = OrDefault(o.samples, 100);
  const auto instances = SampleTheorem3Instances(count, o.seed);
  SuiteResult r{"thm3", true, "", Json::object()};
  Json samples = Json::array();
  double worst = 0.0;
  int failures = 0;
  for (const Theorem3Instance& inst : instances) {
    const Theorem3Report rep = CheckTheorem3(inst.x, inst.y1, inst.y2, inst.y3,
                                             inst.g, inst.alpha, o.budget);
    const double rel = std::abs(rep.residual) / (1.0 + std::abs(rep.rhs));
    worst = std::max(worst, rel);
    if (rel > 1e-3) ++failures;
    Json j = ToJson(rep);
    j["n"] = inst.x.size();
    j["relative_residual"] = rel;
    samples.push_back(j);
  }
  r.pass = failures == 0;
  r.report["tolerance"] = 1e-3;
  r.report["failures"] = failures;
  r.report["max_relative_residual"] = worst;
  r.report["samples"] = samples;
  r.summary = std::to_string(failures) + "/" + std::to_string(count) +
              " instances outside 1e-3" +
              Format(", max |lhs-rhs|/(1+|rhs|) = %.3g", worst);
  return r;
}

SuiteResult BellmanSuite(const SuiteOptions& o) {
  const int count = OrDefault(o.samples, 100);
  SuiteResult r{"bellman", true, "", Json::object()};
  double worst = 0.0;
  int failures = 0;
  Json parts = Json::array();
  for (int n : {1, 2}) {
    const int share = n == 1 ? (count + 1) / 2 : count / 2;
    if (share == 0) continue;
    const ProblemParams params = ProblemParams::AtCriticalGain(n, 1.0);
    const auto states = SampleStates(params, share, o.seed + 101 * n);
    const BellmanReport rep = CheckBellmanFixedPoint(states, params, o.budget);
    worst = std::max(worst, rep.max_abs_residual);
    for (const BellmanSample& s : rep.samples) {
      if (std::abs(s.residual) > 1e-2) ++failures;
    }
    Json j = ToJson(rep);
    j["n"] = n;
    parts.push_back(j);
  }
  r.pass = failures == 0;
  r.report["tolerance"] = 1e-2;
  r.report["failures"] = failures;
  r.report["max_abs_residual"] = worst;
  r.report["by_dimension"] = parts;
  r.summary = std::to_string(failures) + "/" + std::to_string(count) +
              " states outside 1e-2" +
              Format(", max |FV*-V*|/(1+|V*|) = %.3g", worst);
  return r;
}

SuiteResult ValueIterationSuite(const SuiteOptions& o) {
  const int count = OrDefault(o.samples, 30);
  const ProblemParams params = ProblemParams::AtCriticalGain(1, 1.0);
  const auto states = SampleStates(params, count, o.seed + 7);
  const ValueIterationReport rep =
      CheckValueIterationMonotone(states, params, 2, 1e-2, o.budget);
  int monotone = 0, below = 0, above = 0, shifted = 0;
  for (const auto& s : rep.samples) {
    shifted += s.above_shifted_lower_bound;
    monotone += s.monotone;
    below += s.below_v_star;
    above += s.above_lower_bound;
  }
  SuiteResult r{"vi", rep.all_pass, "", ToJson(rep)};
  r.summary = "monotone " + std::to_string(monotone) + "/" +
              std::to_string(count) + ", <= V* " + std::to_string(below) +
              "/" + std::to_string(count) + ", >= lower bound " +
              std::to_string(above) + "/" + std::to_string(count) +
              " (with t_{N-1}: " + std::to_string(shifted) + "/" +
              std::to_string(count) + ")";
  return r;
}

SuiteResult GammaSuite(const SuiteOptions& o) {
  const std::vector<double> alphas = {0.25, 0.5, 1.0, 2.0, 4.0};
  const GammaThresholdReport rep =
      CheckGammaThreshold(alphas, kDefaultGammaRatios, o.gamma_steps);
  int passed = 0;
  for (const auto& c : rep.cases) passed += c.pass;
  SuiteResult r{"gamma", rep.all_pass, "", ToJson(rep)};
  r.summary = std::to_string(passed) + "/" + std::to_string(rep.cases.size()) +
              " (alpha, gamma) cases behave as predicted over " +
              std::to_string(rep.steps) + " steps";
  return r;
}

SuiteResult PolicySuite(const SuiteOptions& o) {
  const int count = OrDefault(o.samples, 100);
  const ProblemParams params = ProblemParams::AtCriticalGain(1, 1.0);
  const auto states = SampleStates(params, count, o.seed + 13);
  const CrossValidationReport rep =
      CrossValidatePolicy(states, params, o.budget, 1e-3);
  SuiteResult r{"policy", rep.pass, "", ToJson(rep)};
  std::string counts, best;
  for (std::size_t k = 0; k < 4; ++k) {
    if (!counts.empty()) counts += ' ';
    if (!best.empty()) best += ' ';
    counts += ExplorationMeanSignName(kAllExplorationMeanSigns[k]);
    counts += '=' + std::to_string(rep.match_counts[k]);
    best += ExplorationMeanSignName(kAllExplorationMeanSigns[k]);
    best += '=' + std::to_string(rep.best_of_four_counts[k]);
  }
  r.summary = "informative " + std::to_string(rep.informative_count) +
              ", matches numeric [" + counts + "], best of four [" + best +
              "], winners " +
              std::to_string(rep.winners.size()) +
              Format(", CE gap %.3g", rep.max_ce_gap);
  return r;
}

}  // namespace

SuiteResult RunSuite(const std::string& name, const SuiteOptions& options) {
  if (name == "thm3") return Theorem3Suite(options);
  if (name == "bellman") return BellmanSuite(options);
  if (name == "vi") return ValueIterationSuite(options);
  if (name == "gamma") return GammaSuite(options);
  if (name == "policy") return PolicySuite(options);
  throw std::invalid_argument("unknown suite '" + name + "'");
}

}  // namespace dualctl
