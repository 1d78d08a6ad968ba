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

// Command-line front end: simulate, sync, verify, sweep-gamma, audit-gain.
// Exit codes: 0 success, 1 failed check, 2 usage error.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "dualctl/experiment.h"
#include "dualctl/output.h"
#include "dualctl/suites.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

int Simulate(const std::string& config_path) {
  const dualctl::ExperimentConfig config =
      dualctl::LoadExperimentConfig(config_path);
  const auto records = dualctl::RunExperiment(config);
  dualctl::EmitOutputs(records, config.output_dir);
  int diverged = 0;
  for (const auto& r : records) diverged += r.diverged;
  std::printf("simulated %d run(s), %d diverged; outputs in %s\n", config.runs,
              diverged, config.output_dir.c_str());
  return kExitOk;
}

int Sync(int n, double noise, int horizon, std::uint64_t seed,
         const std::string& output_dir) {
  const dualctl::SyncRecord rec =
      dualctl::RunSyncExample(n, noise, horizon, seed);
  dualctl::EmitSyncOutputs(rec, output_dir);
  std::printf("n=%d sync_step=%d noise_floor=%.3g rate_before=%.4g "
              "rate_after=%.4g slowdown=%s; outputs in %s\n",
              rec.n, rec.sync_step, rec.noise_floor, rec.rate_before,
              rec.rate_after, rec.slowdown ? "yes" : "no", output_dir.c_str());
  return kExitOk;
}

int Verify(const std::string& suite, const dualctl::SuiteOptions& options,
           const std::string& report_path) {
  std::vector<std::string> names =
      suite == "all" ? dualctl::kSuiteNames : std::vector<std::string>{suite};
  bool all_pass = true;
  dualctl::Json report;
  for (const std::string& name : names) {
    const dualctl::SuiteResult r = dualctl::RunSuite(name, options);
    std::printf("%s %s: %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                r.summary.c_str());
    std::fflush(stdout);
    all_pass = all_pass && r.pass;
    dualctl::Json entry;
    entry["pass"] = r.pass;
    entry["summary"] = r.summary;
    entry["report"] = r.report;
    report[name] = entry;
  }
  if (!report_path.empty()) {
    dualctl::WriteTextFile(report_path, report.dump(2) + "\n");
  }
  return all_pass ? kExitOk : kExitFailed;
}

int SweepGamma(double alpha, int points, long long steps) {
  const double gamma_star = dualctl::CriticalGain(alpha);
  std::printf("gamma_ratio,gamma,feasible,t_limit,max_t,diverged,"
              "divergence_step\n");
  for (int k = 0; k < points; ++k) {
    // Log-spaced on [0.5, 2] gamma*.
    const double ratio =
        points == 1 ? 1.0
                    : std::pow(2.0, -1.0 + 2.0 * k / static_cast<double>(points - 1));
    const double gamma = ratio * gamma_star;
    const dualctl::TScan scan = dualctl::ScanTRecursion(alpha, gamma, steps);
    const double limit = dualctl::TRecursionLimit(alpha, gamma);
    std::printf("%.6g,%.10g,%d,%.10g,%.10g,%d,%lld\n", ratio, gamma,
                std::isfinite(limit) ? 1 : 0, limit, scan.max_value,
                scan.diverged ? 1 : 0,
                static_cast<long long>(scan.divergence_step));
  }
  return kExitOk;
}

int AuditGain(const std::string& config_path) {
  dualctl::ExperimentConfig config = dualctl::LoadExperimentConfig(config_path);
  const dualctl::GainAuditReport r = dualctl::RunGainAudit(config);
  std::printf("%s gain audit (%s, %d runs): mean peak %.6g +- %.3g vs bound "
              "%.6g, margin %.3g, worst seed %llu\n",
              r.pass ? "PASS" : "FAIL", r.adversary.c_str(), r.runs,
              r.mean_peak, r.standard_error, r.bound, r.margin,
              static_cast<unsigned long long>(r.max_peak_seed));
  return r.pass ? kExitOk : kExitFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimax dual control: simulation and verification"};
  app.require_subcommand(1);

  std::string config_path;
  auto* simulate = app.add_subcommand("simulate", "Run episodes from a config");
  simulate->add_option("--config", config_path, "JSON config")->required();

  int sync_n = 10;
  double sync_noise = dualctl::kDefaultSyncNoise;
  int sync_horizon = 0;
  std::uint64_t sync_seed = 1;
  std::string sync_out = "sync_out";
  auto* sync = app.add_subcommand("sync", "Two-chain synchronization example");
  sync->add_option("--n", sync_n, "Dimension")->check(CLI::Range(1, 200));
  sync->add_option("--noise", sync_noise, "Noise standard deviation")
      ->check(CLI::NonNegativeNumber);
  sync->add_option("--horizon", sync_horizon, "Steps (default 4n)");
  sync->add_option("--seed", sync_seed, "Seed");
  sync->add_option("--output-dir", sync_out, "Output directory");

  std::string suite = "all";
  dualctl::SuiteOptions suite_options;
  std::string report_path;
  auto* verify = app.add_subcommand("verify", "Numeric verification suites");
  verify->add_option("--suite", suite, "Suite")
      ->check(CLI::IsMember({"all", "thm3", "bellman", "vi", "gamma", "policy"}));
  verify->add_option("--samples", suite_options.samples,
                     "Samples per suite (default per suite)");
  verify->add_option("--seed", suite_options.seed, "Seed");
  verify->add_option("--budget", suite_options.budget,
                     "Optimizer evaluations per check")
      ->check(CLI::PositiveNumber);
  verify->add_option("--report", report_path, "Write a JSON report here");

  double sweep_alpha = 1.0;
  int sweep_points = 21;
  long long sweep_steps = 1000000;
  auto* sweep = app.add_subcommand("sweep-gamma", "Scan the t-recursion over gamma");
  sweep->add_option("--alpha", sweep_alpha, "Scale of A")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--points", sweep_points, "Grid points on [0.5, 2] gamma*")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--steps", sweep_steps, "Recursion steps per point")
      ->check(CLI::PositiveNumber);

  std::string audit_config;
  auto* audit = app.add_subcommand("audit-gain", "Monte-Carlo gain-bound audit");
  audit->add_option("--config", audit_config, "JSON config")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*simulate) return Simulate(config_path);
    if (*sync) return Sync(sync_n, sync_noise, sync_horizon, sync_seed, sync_out);
    if (*verify) return Verify(suite, suite_options, report_path);
    if (*sweep) return SweepGamma(sweep_alpha, sweep_points, sweep_steps);
    if (*audit) return AuditGain(audit_config);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailed;
  }
  return kExitUsage;
}
