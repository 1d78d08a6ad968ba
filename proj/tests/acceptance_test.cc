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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dualctl/experiment.h"
#include "dualctl/game_model.h"
#include "dualctl/linalg.h"
#include "dualctl/suites.h"

namespace dualctl {
namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Fmt(const char* fmt, double a, double b = 0, double c = 0,
                double d = 0) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), fmt, a, b, c, d);
  return buf;
}

Outcome FromSuite(const std::string& name) {
  const SuiteResult r = RunSuite(name, SuiteOptions{});
  return {r.pass, r.summary};
}

Outcome EmptyDataValue() {
  Rng rng(11);
  double worst = 0.0;
  for (double alpha : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    for (int n = 1; n <= 10; ++n) {
      const ProblemParams params = ProblemParams::AtCriticalGain(n, alpha);
      for (int k = 0; k < 5; ++k) {
        const Eigen::VectorXd x = StandardNormalVector(n, rng);
        const double expected = 0.5 *
                                (params.gamma() * params.gamma() + 1.0) *
                                x.squaredNorm();
        const double got = VStar(GameState::Initial(x), params).value;
        worst = std::max(worst, std::abs(got - expected) / std::abs(expected));
      }
    }
  }
  // alpha = 1: gamma* = 1 + sqrt(2), coefficient 2 + sqrt(2).
  const ProblemParams unit = ProblemParams::AtCriticalGain(1, 1.0);
  const double coeff =
      VStar(GameState::Initial(Eigen::VectorXd::Ones(1)), unit).value;
  const double coeff_err = std::abs(coeff - 3.414213562373095) / 3.414213562373095;
  return {worst <= 1e-12 && coeff_err <= 1e-12,
          Fmt("max relative error %.3g over 250 states; alpha=1 coefficient "
              "%.15g",
              worst, coeff)};
}

Outcome Synchronization() {
  std::string detail;
  bool pass = true;
  for (auto [n, seeds, slack] : {std::tuple{10, 20, 5}, std::tuple{100, 10, 10}}) {
    int synced = 0;
    int slowdown_runs = 0;
    int rated = 0;
    double before = 0.0, after = 0.0;
    for (int s = 0; s < seeds; ++s) {
      const SyncRecord rec = RunSyncExample(n, kDefaultSyncNoise, 0, 1000 + s);
      if (rec.sync_step >= 0 && rec.sync_step <= n + slack) ++synced;
      if (rec.sync_step > 0) {
        ++rated;
        before += rec.rate_before;
        after += rec.rate_after;
        slowdown_runs += rec.slowdown;
      }
    }
    const bool steps_ok = 10 * synced >= 9 * seeds;
    const bool slow_ok = rated > 0 && after <= before;
    pass = pass && steps_ok && slow_ok;
    if (!detail.empty()) detail += "; ";
    detail += "n=" + std::to_string(n) + ": synced by n+" +
              std::to_string(slack) + " in " + std::to_string(synced) + "/" +
              std::to_string(seeds) +
              Fmt(", mean error decrease per step %.3g before vs %.3g after",
                  rated ? before / rated : 0.0, rated ? after / rated : 0.0) +
              " (" + std::to_string(slowdown_runs) + "/" +
              std::to_string(rated) + " runs slower)";
  }
  return {pass, detail};
}

Outcome GainAudit() {
  std::string detail;
  bool pass = true;
  const std::vector<AdversaryKind> kinds = {
      AdversaryKind::Zero(), AdversaryKind::Gaussian(0.5),
      AdversaryKind::Constant(Eigen::VectorXd::Constant(1, 0.1)),
      AdversaryKind::WorstCase()};
  for (const AdversaryKind& kind : kinds) {
    ExperimentConfig c;
    c.n = 1;
    c.alpha = 1.0;
    c.horizon = 30;
    c.adversary = kind;
    c.seed = 77;
    c.runs = 10000;
    c.x0 = Eigen::VectorXd::Ones(1);
    const GainAuditReport r = RunGainAudit(c);
    pass = pass && r.pass;
    if (!detail.empty()) detail += "; ";
    detail += r.adversary + Fmt(" %.4g+-%.2g", r.mean_peak, r.standard_error);
    if (!r.pass) detail += " (worst seed " + std::to_string(r.max_peak_seed) + ")";
  }
  return {pass, detail + Fmt(" vs bound %.6g", 2.0 + std::sqrt(2.0))};
}

Outcome Procrustes() {
  Rng rng(5);
  std::uniform_int_distribution<int> dim(1, 20);
  std::uniform_real_distribution<double> scale(0.1, 4.0);
  double worst_value = 0.0, worst_orth = 0.0, worst_dominance = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const int n = dim(rng);
    const double alpha = scale(rng);
    Eigen::MatrixXd m(n, n);
    for (int c = 0; c < n; ++c) m.col(c) = StandardNormalVector(n, rng);
    const ProcrustesResult p = ProcrustesMax(m, alpha);
    // Independent value: trace of sqrt(M^T M) from a symmetric eigensolve.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m.transpose() * m);
    const double nuclear = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
    const double tol_scale = 1.0 + alpha * nuclear;
    worst_value = std::max(
        {worst_value, std::abs(p.value - alpha * nuclear) / tol_scale,
         std::abs(FrobeniusInner(p.argmax.matrix, m) - p.value) / tol_scale});
    const Eigen::MatrixXd gram = p.argmax.matrix * p.argmax.matrix.transpose();
    worst_orth = std::max(
        worst_orth, (gram - alpha * alpha * Eigen::MatrixXd::Identity(n, n))
                            .cwiseAbs()
                            .maxCoeff() /
                        (alpha * alpha));
    for (int s = 0; s < 5; ++s) {
      const double other = FrobeniusInner(alpha * HaarOrthogonal(n, rng), m);
      worst_dominance = std::max(worst_dominance, (other - p.value) / tol_scale);
    }
  }
  return {worst_value <= 1e-9 && worst_orth <= 1e-9 && worst_dominance <= 1e-9,
          Fmt("value error %.3g, orthogonality error %.3g, worst dominance "
              "excess %.3g",
              worst_value, worst_orth, worst_dominance)};
}

}  // namespace
}  // namespace dualctl

int main() {
  using dualctl::Outcome;
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"1 gamma-threshold", [] { return dualctl::FromSuite("gamma"); }},
      {"2 empty-data-value", dualctl::EmptyDataValue},
      {"3 exploration-identity", [] { return dualctl::FromSuite("thm3"); }},
      {"4 bellman-fixed-point", [] { return dualctl::FromSuite("bellman"); }},
      {"5 value-iteration-sandwich", [] { return dualctl::FromSuite("vi"); }},
      {"6 synchronization", dualctl::Synchronization},
      {"7 gain-audit", dualctl::GainAudit},
      {"8 procrustes", dualctl::Procrustes},
      {"9 policy-cross-validation", [] { return dualctl::FromSuite("policy"); }},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start)
                            .count();
    std::printf("%s %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", c.name,
                o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d/%zu criteria passed\n",
              static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
