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

#ifndef DUALCTL_EXPERIMENT_H_
#define DUALCTL_EXPERIMENT_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dualctl/adversary.h"
#include "dualctl/controller.h"
#include "dualctl/game_model.h"
#include "dualctl/linalg.h"

namespace dualctl {

enum class PolicyKind { kClosedForm, kNumeric };

struct ExperimentConfig {
  int n = 1;
  double alpha = 1.0;
  // Empty means gamma*.
  std::optional<double> gamma;
  int horizon = 20;
  AdversaryKind adversary = AdversaryKind::Zero();
  // Extra Gaussian process noise added on top of the adversary's move.
  double noise_std = 0.0;
  std::uint64_t seed = 0;
  int runs = 1;
  PolicyKind policy = PolicyKind::kClosedForm;
  std::string output_dir = ".";
  // Initial state; empty means a standard normal draw.
  std::optional<Eigen::VectorXd> x0;

  double ResolvedGamma() const;
  ProblemParams Params() const;
  // Throws std::invalid_argument on a bad field.
  void Validate() const;
};

// Parses a JSON document. Unknown keys and malformed values throw
// std::invalid_argument with the offending key.
ExperimentConfig ParseExperimentConfig(const std::string& json_text);
ExperimentConfig LoadExperimentConfig(const std::string& path);

struct StepRecord {
  int t = 0;
  Eigen::VectorXd x;
  Eigen::VectorXd u;
  Eigen::VectorXd w;
  Mode mode = Mode::kCertaintyEquivalence;
  double y_max = 0.0;
  double est_error = 0.0;  // |A_hat - A_true|_F
  double stage_cost = 0.0;  // |x|^2 - gamma^2 |w|^2
  double running_cost = 0.0;
};

struct TrajectoryRecord {
  int run = 0;
  std::uint64_t seed = 0;
  Scenario truth;
  double gamma = 0.0;
  std::vector<StepRecord> steps;
  Eigen::VectorXd x_final;
  Eigen::MatrixXd z_final;
  bool diverged = false;
  int divergence_step = -1;

  double PeakRunningCost() const;
};

// Per-run stream: SplitMix64(seed + 0x9E3779B97F4A7C15 * (run + 1)).
std::uint64_t RunSeed(std::uint64_t seed, int run);

// One closed-loop episode. The hidden scenario, x0 (if unset) and all
// randomness come from rng. A non-finite or huge state ends the episode
// with diverged = true.
TrajectoryRecord RunEpisode(const ExperimentConfig& config, Rng& rng);

// All runs of a config with per-run streams.
std::vector<TrajectoryRecord> RunExperiment(const ExperimentConfig& config);

// Two chains y+ = A y and z+ = A z + B u + w with A orthogonal (alpha = 1),
// driven through x = z - y.
struct SyncRecord {
  int n = 0;
  double noise_std = 0.0;
  std::uint64_t seed = 0;
  std::vector<double> norm_y;
  std::vector<double> norm_z;
  std::vector<double> norm_x;
  std::vector<double> est_error;
  TrajectoryRecord trajectory;
  double noise_floor = 0.0;  // 10 noise_std sqrt(n)
  int sync_step = -1;        // first t with |x_t| below the floor, or -1
  // Mean per-step decrease of the 5-step smoothed estimate error.
  double rate_before = 0.0;
  double rate_after = 0.0;
  bool slowdown = false;  // rate_after <= rate_before
};

inline constexpr double kDefaultSyncNoise = 0.01;

// horizon <= 0 selects 4n.
SyncRecord RunSyncExample(int n, double noise_std, int horizon,
                          std::uint64_t seed);

// Trailing moving average; the first window - 1 entries average what exists.
std::vector<double> SmoothTrailing(const std::vector<double>& values,
                                   int window);

struct GainAuditReport {
  std::string adversary;
  int runs = 0;
  double bound = 0.0;  // (gamma*^2 + 1) / 2 |x0|^2
  double mean_peak = 0.0;
  double standard_error = 0.0;
  double max_peak = 0.0;
  std::uint64_t max_peak_seed = 0;
  double margin = 0.0;  // bound + 3 SE - mean_peak
  bool pass = false;
};

// Requires gamma = gamma* and a given x0.
GainAuditReport RunGainAudit(const ExperimentConfig& config);

}  // namespace dualctl

#endif  // DUALCTL_EXPERIMENT_H_
