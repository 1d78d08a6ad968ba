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

#include "dualctl/experiment.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "dualctl/errors.h"

namespace dualctl {
namespace {

using nlohmann::json;

constexpr double kDivergenceNorm = 1e100;

using LongVector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

void RejectUnknownKeys(const json& obj, const std::set<std::string>& allowed,
                       const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) {
      throw std::invalid_argument("config: unknown key '" + where + it.key() +
                                  "'");
    }
  }
}

Eigen::VectorXd ParseVector(const json& j, const std::string& key) {
  if (!j.is_array()) {
    throw std::invalid_argument("config: '" + key + "' must be an array");
  }
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) {
      throw std::invalid_argument("config: '" + key + "' must hold numbers");
    }
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

double Number(const json& j, const std::string& key) {
  if (!j.is_number()) {
    throw std::invalid_argument("config: '" + key + "' must be a number");
  }
  return j.get<double>();
}

int Integer(const json& j, const std::string& key) {
  if (!j.is_number_integer()) {
    throw std::invalid_argument("config: '" + key + "' must be an integer");
  }
  return j.get<int>();
}

AdversaryKind ParseAdversary(const json& j) {
  if (j.is_string()) {
    json obj = {{"kind", j}};
    return ParseAdversary(obj);
  }
  if (!j.is_object()) {
    throw std::invalid_argument("config: 'adversary' must be an object");
  }
  RejectUnknownKeys(j, {"kind", "std", "vector"}, "adversary.");
  if (!j.contains("kind") || !j["kind"].is_string()) {
    throw std::invalid_argument("config: 'adversary.kind' is required");
  }
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "zero") return AdversaryKind::Zero();
  if (kind == "worst_case") return AdversaryKind::WorstCase();
  if (kind == "gaussian") {
    if (!j.contains("std")) {
      throw std::invalid_argument("config: 'adversary.std' is required");
    }
    return AdversaryKind::Gaussian(Number(j["std"], "adversary.std"));
  }
  if (kind == "constant") {
    if (!j.contains("vector")) {
      throw std::invalid_argument("config: 'adversary.vector' is required");
    }
    return AdversaryKind::Constant(ParseVector(j["vector"], "adversary.vector"));
  }
  throw std::invalid_argument("config: unknown adversary kind '" + kind + "'");
}

double FrobeniusError(const Scenario& estimate, const Scenario& truth) {
  return (estimate.a.matrix - truth.a.matrix).norm();
}

bool Diverged(const Eigen::VectorXd& v) {
  return !v.allFinite() || v.norm() > kDivergenceNorm;
}

}  // namespace

double ExperimentConfig::ResolvedGamma() const {
  return gamma.has_value() ? *gamma : CriticalGain(alpha);
}

ProblemParams ExperimentConfig::Params() const {
  if (!gamma.has_value()) return ProblemParams::AtCriticalGain(n, alpha);
  return ProblemParams::Create(n, alpha, *gamma);
}

void ExperimentConfig::Validate() const {
  if (n < 1) throw std::invalid_argument("config: n must be >= 1");
  if (!(alpha > 0.0)) throw std::invalid_argument("config: alpha must be > 0");
  if (gamma.has_value() && !(*gamma > 0.0)) {
    throw std::invalid_argument("config: gamma must be > 0 or \"star\"");
  }
  if (horizon < 1) throw std::invalid_argument("config: horizon must be >= 1");
  if (runs < 1) throw std::invalid_argument("config: runs must be >= 1");
  if (!(noise_std >= 0.0)) {
    throw std::invalid_argument("config: noise_std must be >= 0");
  }
  if (adversary.type == AdversaryKind::Type::kConstant &&
      adversary.constant.size() != n) {
    throw std::invalid_argument("config: adversary.vector must have length n");
  }
  if (x0.has_value() && x0->size() != n) {
    throw std::invalid_argument("config: x0 must have length n");
  }
  if (policy == PolicyKind::kNumeric && n > 8) {
    throw std::invalid_argument("config: numeric policy needs n <= 8");
  }
}

ExperimentConfig ParseExperimentConfig(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  if (!j.is_object()) {
    throw std::invalid_argument("config: top level must be an object");
  }
  RejectUnknownKeys(j,
                    {"n", "alpha", "gamma", "horizon", "adversary", "noise_std",
                     "seed", "runs", "policy", "output_dir", "x0"},
                    "");
  ExperimentConfig c;
  if (j.contains("n")) c.n = Integer(j["n"], "n");
  if (j.contains("alpha")) c.alpha = Number(j["alpha"], "alpha");
  if (j.contains("gamma")) {
    const json& g = j["gamma"];
    if (g.is_string()) {
      if (g.get<std::string>() != "star") {
        throw std::invalid_argument("config: 'gamma' must be \"star\" or a number");
      }
    } else {
      c.gamma = Number(g, "gamma");
    }
  }
  if (j.contains("horizon")) c.horizon = Integer(j["horizon"], "horizon");
  if (j.contains("adversary")) c.adversary = ParseAdversary(j["adversary"]);
  if (j.contains("noise_std")) c.noise_std = Number(j["noise_std"], "noise_std");
  if (j.contains("seed")) {
    if (!j["seed"].is_number_integer()) {
      throw std::invalid_argument("config: 'seed' must be an integer");
    }
    c.seed = j["seed"].is_number_unsigned()
                 ? j["seed"].get<std::uint64_t>()
                 : static_cast<std::uint64_t>(j["seed"].get<std::int64_t>());
  }
  if (j.contains("runs")) c.runs = Integer(j["runs"], "runs");
  if (j.contains("policy")) {
    if (!j["policy"].is_string()) {
      throw std::invalid_argument("config: 'policy' must be a string");
    }
    const std::string p = j["policy"].get<std::string>();
    if (p == "closed_form") {
      c.policy = PolicyKind::kClosedForm;
    } else if (p == "numeric") {
      c.policy = PolicyKind::kNumeric;
    } else {
      throw std::invalid_argument("config: unknown policy '" + p + "'");
    }
  }
  if (j.contains("output_dir")) {
    if (!j["output_dir"].is_string()) {
      throw std::invalid_argument("config: 'output_dir' must be a string");
    }
    c.output_dir = j["output_dir"].get<std::string>();
  }
  if (j.contains("x0")) c.x0 = ParseVector(j["x0"], "x0");
  c.Validate();
  return c;
}

ExperimentConfig LoadExperimentConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseExperimentConfig(buffer.str());
}

double TrajectoryRecord::PeakRunningCost() const {
  if (steps.empty()) return 0.0;
  double peak = -std::numeric_limits<double>::infinity();
  for (const StepRecord& s : steps) peak = std::max(peak, s.running_cost);
  return peak;
}

std::uint64_t RunSeed(std::uint64_t seed, int run) {
  return SplitMix64(seed +
                    0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(run + 1));
}

namespace {

// Shared loop for RunEpisode and the synchronization example.
TrajectoryRecord Simulate(const ExperimentConfig& config,
                          const ProblemParams& params, const Scenario& truth,
                          const Eigen::VectorXd& x0, Rng& rng) {
  TrajectoryRecord rec;
  rec.truth = truth;
  rec.gamma = params.gamma();
  const long double g2 = static_cast<long double>(params.gamma()) *
                        static_cast<long double>(params.gamma());
  GameState state = GameState::Initial(x0);
  long double running = 0.0L;
  for (int t = 0; t < config.horizon; ++t) {
    StepRecord step;
    step.t = t;
    step.x = state.x;
    ControlDecision d;
    if (config.policy == PolicyKind::kNumeric) {
      d = PolicyNumeric(state, params).decision;
    } else {
      d = Decide(state, params);
    }
    step.mode = d.mode;
    step.y_max = d.y_max;
    step.est_error = FrobeniusError(d.witness, truth);
    step.u = SampleInput(d, rng);
    Eigen::VectorXd w =
        NextDisturbance(config.adversary, state, step.u, truth, params, rng);
    if (config.noise_std > 0.0) {
      w += config.noise_std * StandardNormalVector(params.n(), rng);
    }
    const Eigen::VectorXd next =
        truth.a.matrix * state.x + truth.sign * step.u + w;
    // Costs are charged for the disturbance the stored trajectory actually
    // realizes, in extended precision: adversarial runs can reach states
    // near 1e8 whose running cost cancels back to O(1).
    const LongVector w_exact = next.cast<long double>() -
                               truth.a.matrix.cast<long double>() *
                                   state.x.cast<long double>() -
                               static_cast<long double>(truth.sign) *
                                   step.u.cast<long double>();
    step.w = w_exact.cast<double>();
    const long double stage = state.x.cast<long double>().squaredNorm() -
                              g2 * w_exact.squaredNorm();
    running += stage;
    step.stage_cost = static_cast<double>(stage);
    step.running_cost = static_cast<double>(running);
    rec.steps.push_back(step);
    if (Diverged(next) || !std::isfinite(static_cast<double>(running))) {
      rec.diverged = true;
      rec.divergence_step = t;
      break;
    }
    state.Advance({next, state.x, step.u});
  }
  rec.x_final = state.x;
  rec.z_final = state.z;
  return rec;
}

}  // namespace

TrajectoryRecord RunEpisode(const ExperimentConfig& config, Rng& rng) {
  config.Validate();
  const ProblemParams params = config.Params();
  const Scenario truth = DrawScenario(params, rng);
  const Eigen::VectorXd x0 = config.x0.has_value()
                                 ? *config.x0
                                 : StandardNormalVector(params.n(), rng);
  return Simulate(config, params, truth, x0, rng);
}

std::vector<TrajectoryRecord> RunExperiment(const ExperimentConfig& config) {
  std::vector<TrajectoryRecord> out;
  for (int run = 0; run < config.runs; ++run) {
    const std::uint64_t seed = RunSeed(config.seed, run);
    Rng rng(seed);
    TrajectoryRecord rec = RunEpisode(config, rng);
    rec.run = run;
    rec.seed = seed;
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<double> SmoothTrailing(const std::vector<double>& values,
                                   int window) {
  if (window < 1) throw std::invalid_argument("SmoothTrailing: window < 1");
  std::vector<double> out(values.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    sum += values[i];
    if (i >= static_cast<std::size_t>(window)) sum -= values[i - window];
    const std::size_t count = std::min<std::size_t>(i + 1, window);
    out[i] = sum / static_cast<double>(count);
  }
  return out;
}

SyncRecord RunSyncExample(int n, double noise_std, int horizon,
                          std::uint64_t seed) {
  if (n < 1 || n > 200) {
    throw std::invalid_argument("RunSyncExample: n must be in [1, 200]");
  }
  if (!(noise_std >= 0.0)) {
    throw std::invalid_argument("RunSyncExample: noise_std must be >= 0");
  }
  ExperimentConfig config;
  config.n = n;
  config.alpha = 1.0;
  config.horizon = horizon > 0 ? horizon : 4 * n;
  config.noise_std = noise_std;
  config.seed = seed;
  const ProblemParams params = config.Params();

  Rng rng(RunSeed(seed, 0));
  const Scenario truth = DrawScenario(params, rng);
  const Eigen::VectorXd y0 = StandardNormalVector(n, rng);
  const Eigen::VectorXd z0 = StandardNormalVector(n, rng);

  SyncRecord rec;
  rec.n = n;
  rec.noise_std = noise_std;
  rec.seed = seed;
  rec.trajectory = Simulate(config, params, truth, z0 - y0, rng);
  rec.trajectory.seed = RunSeed(seed, 0);

  // y never sees the input, so z = y + x step by step.
  Eigen::VectorXd y = y0;
  for (const StepRecord& s : rec.trajectory.steps) {
    rec.norm_y.push_back(y.norm());
    rec.norm_z.push_back((y + s.x).norm());
    rec.norm_x.push_back(s.x.norm());
    rec.est_error.push_back(s.est_error);
    y = truth.a.matrix * y;
  }
  rec.noise_floor = 10.0 * noise_std * std::sqrt(static_cast<double>(n));
  for (std::size_t t = 0; t < rec.norm_x.size(); ++t) {
    if (rec.norm_x[t] < rec.noise_floor) {
      rec.sync_step = static_cast<int>(t);
      break;
    }
  }
  const std::vector<double> smooth = SmoothTrailing(rec.est_error, 5);
  const int last = static_cast<int>(smooth.size()) - 1;
  if (rec.sync_step > 0 && rec.sync_step < last) {
    const int s = rec.sync_step;
    rec.rate_before = (smooth[0] - smooth[s]) / s;
    rec.rate_after = (smooth[s] - smooth[last]) / (last - s);
    rec.slowdown = rec.rate_after <= rec.rate_before;
  }
  return rec;
}

GainAuditReport RunGainAudit(const ExperimentConfig& config) {
  config.Validate();
  const ProblemParams params = config.Params();
  if (!params.at_critical_gain()) {
    throw UnsupportedConfiguration("RunGainAudit: requires gamma = gamma*");
  }
  if (!config.x0.has_value()) {
    throw std::invalid_argument("RunGainAudit: x0 must be given");
  }
  GainAuditReport report;
  report.adversary = config.adversary.Name();
  report.runs = config.runs;
  report.bound = 0.5 * (params.gamma() * params.gamma() + 1.0) *
                 config.x0->squaredNorm();
  double sum = 0.0;
  double sum_sq = 0.0;
  report.max_peak = -std::numeric_limits<double>::infinity();
  for (int run = 0; run < config.runs; ++run) {
    const std::uint64_t seed = RunSeed(config.seed, run);
    Rng rng(seed);
    const TrajectoryRecord rec = RunEpisode(config, rng);
    const double peak = rec.PeakRunningCost();
    sum += peak;
    sum_sq += peak * peak;
    if (peak > report.max_peak) {
      report.max_peak = peak;
      report.max_peak_seed = seed;
    }
  }
  const double runs = static_cast<double>(config.runs);
  report.mean_peak = sum / runs;
  const double var =
      config.runs > 1
          ? std::max(0.0, (sum_sq - runs * report.mean_peak * report.mean_peak) /
                              (runs - 1.0))
          : 0.0;
  report.standard_error = std::sqrt(var / runs);
  report.margin = report.bound + 3.0 * report.standard_error - report.mean_peak;
  report.pass = report.margin >= 0.0;
  return report;
}

}  // namespace dualctl
