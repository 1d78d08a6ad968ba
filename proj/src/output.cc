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

#include "dualctl/output.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace dualctl {
namespace {

// Shortest round-trip decimal; locale independent.
std::string Num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// JSON has no inf/nan; encode them as null.
Json JsonNum(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

Json JsonVector(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(JsonNum(v(i)));
  return out;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b"};

}  // namespace

std::string TrajectoryCsv(const TrajectoryRecord& record) {
  std::string out = kTrajectoryCsvHeader;
  out += '\n';
  for (const StepRecord& s : record.steps) {
    out += std::to_string(s.t);
    for (double v : {s.x.norm(), s.u.norm(), s.w.norm()}) {
      out += ',';
      out += Num(v);
    }
    out += ',';
    out += ModeName(s.mode);
    for (double v : {s.y_max, s.est_error, s.stage_cost, s.running_cost}) {
      out += ',';
      out += Num(v);
    }
    out += '\n';
  }
  return out;
}

std::string SvgPlot(const std::vector<Series>& series, const std::string& title,
                    bool log_y) {
  constexpr double kWidth = 640, kHeight = 360, kLeft = 60, kRight = 140,
                   kTop = 30, kBottom = 40;
  std::size_t len = 0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  double min_pos = std::numeric_limits<double>::infinity();
  for (const Series& s : series) {
    len = std::max(len, s.values.size());
    for (double v : s.values) {
      if (!std::isfinite(v)) continue;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      if (v > 0) min_pos = std::min(min_pos, v);
    }
  }
  auto map_y = [&](double v) {
    if (!log_y) return v;
    return std::log10(std::max(v, min_pos));
  };
  double y_lo = 0.0, y_hi = 1.0;
  if (std::isfinite(lo)) {
    if (log_y && !std::isfinite(min_pos)) log_y = false;
    y_lo = map_y(lo);
    y_hi = map_y(hi);
    if (y_hi - y_lo < 1e-12) {
      y_lo -= 0.5;
      y_hi += 0.5;
    }
  }
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  const double x_span = len > 1 ? static_cast<double>(len - 1) : 1.0;

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + Num(kWidth) +
         "\" height=\"" + Num(kHeight) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"" + Num(kLeft) + "\" y=\"20\" font-size=\"14\">" + title +
         "</text>\n";
  out += "<rect x=\"" + Num(kLeft) + "\" y=\"" + Num(kTop) + "\" width=\"" +
         Num(plot_w) + "\" height=\"" + Num(plot_h) +
         "\" fill=\"none\" stroke=\"black\"/>\n";
  char label[64];
  std::snprintf(label, sizeof(label), "%s%.3g", log_y ? "1e" : "", y_hi);
  out += "<text x=\"4\" y=\"" + Num(kTop + 10) + "\" font-size=\"10\">" +
         label + "</text>\n";
  std::snprintf(label, sizeof(label), "%s%.3g", log_y ? "1e" : "", y_lo);
  out += "<text x=\"4\" y=\"" + Num(kTop + plot_h) + "\" font-size=\"10\">" +
         label + "</text>\n";
  out += "<text x=\"" + Num(kLeft + plot_w / 2) + "\" y=\"" +
         Num(kHeight - 10) + "\" font-size=\"12\">t</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const Series& s = series[k];
    const char* color = kPalette[k % (sizeof(kPalette) / sizeof(kPalette[0]))];
    std::string points;
    for (std::size_t i = 0; i < s.values.size(); ++i) {
      if (!std::isfinite(s.values[i])) continue;
      const double px = kLeft + plot_w * static_cast<double>(i) / x_span;
      const double py =
          kTop + plot_h * (1.0 - (map_y(s.values[i]) - y_lo) / (y_hi - y_lo));
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", px, py);
      points += buf;
    }
    if (!points.empty()) points.pop_back();
    out += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
           "\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
    out += "<text x=\"" + Num(kWidth - kRight + 8) + "\" y=\"" +
           Num(kTop + 14.0 * (k + 1)) + "\" font-size=\"11\" fill=\"" + color +
           "\">" + s.name + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

void WriteTextFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

namespace {

std::string JoinPath(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

void EnsureDirectory(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw std::runtime_error("cannot create directory '" + dir +
                             "': " + ec.message());
  }
}

}  // namespace

void EmitOutputs(const std::vector<TrajectoryRecord>& records,
                 const std::string& output_dir, bool log_y) {
  EnsureDirectory(output_dir);
  std::vector<Series> series;
  Json runs = Json::array();
  for (const TrajectoryRecord& r : records) {
    WriteTextFile(JoinPath(output_dir, "trajectory_" + std::to_string(r.run) +
                                           ".csv"),
                  TrajectoryCsv(r));
    Series s{"run " + std::to_string(r.run), {}};
    for (const StepRecord& step : r.steps) s.values.push_back(step.x.norm());
    series.push_back(std::move(s));
    runs.push_back(ToJson(r));
  }
  WriteTextFile(JoinPath(output_dir, "plot.svg"),
                SvgPlot(series, "|x_t|", log_y));
  Json report;
  report["runs"] = runs;
  WriteTextFile(JoinPath(output_dir, "report.json"), report.dump(2) + "\n");
}

void EmitSyncOutputs(const SyncRecord& record, const std::string& output_dir) {
  EnsureDirectory(output_dir);
  WriteTextFile(JoinPath(output_dir, "trajectory_0.csv"),
                TrajectoryCsv(record.trajectory));
  const std::vector<Series> series = {{"|y_t|", record.norm_y},
                                      {"|z_t|", record.norm_z},
                                      {"|x_t|", record.norm_x},
                                      {"estimate error", record.est_error}};
  WriteTextFile(JoinPath(output_dir, "plot.svg"),
                SvgPlot(series, "synchronization, n = " +
                                    std::to_string(record.n),
                        true));
  WriteTextFile(JoinPath(output_dir, "report.json"),
                ToJson(record).dump(2) + "\n");
}

Json ToJson(const TrajectoryRecord& r) {
  Json j;
  j["run"] = r.run;
  j["seed"] = r.seed;
  j["gamma"] = JsonNum(r.gamma);
  j["true_sign"] = r.truth.sign;
  j["steps"] = r.steps.size();
  j["diverged"] = r.diverged;
  j["divergence_step"] = r.divergence_step;
  j["peak_running_cost"] = JsonNum(r.PeakRunningCost());
  j["final_running_cost"] =
      JsonNum(r.steps.empty() ? 0.0 : r.steps.back().running_cost);
  j["x_final"] = JsonVector(r.x_final);
  return j;
}

Json ToJson(const SyncRecord& r) {
  Json j;
  j["n"] = r.n;
  j["noise_std"] = JsonNum(r.noise_std);
  j["seed"] = r.seed;
  j["horizon"] = r.norm_x.size();
  j["noise_floor"] = JsonNum(r.noise_floor);
  j["sync_step"] = r.sync_step;
  j["rate_before"] = JsonNum(r.rate_before);
  j["rate_after"] = JsonNum(r.rate_after);
  j["slowdown"] = r.slowdown;
  j["final_est_error"] =
      JsonNum(r.est_error.empty() ? 0.0 : r.est_error.back());
  return j;
}

Json ToJson(const GainAuditReport& r) {
  Json j;
  j["adversary"] = r.adversary;
  j["runs"] = r.runs;
  j["bound"] = JsonNum(r.bound);
  j["mean_peak"] = JsonNum(r.mean_peak);
  j["standard_error"] = JsonNum(r.standard_error);
  j["max_peak"] = JsonNum(r.max_peak);
  j["max_peak_seed"] = r.max_peak_seed;
  j["margin"] = JsonNum(r.margin);
  j["pass"] = r.pass;
  return j;
}

Json ToJson(const Theorem3Report& r) {
  Json j;
  j["lhs"] = JsonNum(r.lhs);
  j["rhs"] = JsonNum(r.rhs);
  j["residual"] = JsonNum(r.residual);
  j["minimizer_mean"] = JsonVector(r.minimizer_mean);
  j["minimizer_second_moment"] = JsonNum(r.minimizer_second_moment);
  j["converged"] = r.converged;
  j["warning"] = r.warning;
  return j;
}

Json ToJson(const BellmanReport& r) {
  Json j;
  j["max_abs_residual"] = JsonNum(r.max_abs_residual);
  Json samples = Json::array();
  for (const BellmanSample& s : r.samples) {
    Json e;
    e["v_star"] = JsonNum(s.v_star);
    e["f_v_star"] = JsonNum(s.f_v_star);
    e["residual"] = JsonNum(s.residual);
    e["converged"] = s.converged;
    samples.push_back(e);
  }
  j["samples"] = samples;
  return j;
}

Json ToJson(const ValueIterationReport& r) {
  Json j;
  j["depth"] = r.depth;
  j["tolerance"] = JsonNum(r.tolerance);
  Json t = Json::array();
  for (double v : r.t_values) t.push_back(JsonNum(v));
  j["t_values"] = t;
  j["all_pass"] = r.all_pass;
  Json samples = Json::array();
  for (const ValueIterationSample& s : r.samples) {
    Json e;
    Json it = Json::array();
    for (double v : s.iterates) it.push_back(JsonNum(v));
    e["iterates"] = it;
    e["first_iterate_closed_form"] = JsonNum(s.first_iterate_closed_form);
    e["v_star"] = JsonNum(s.v_star);
    Json lb = Json::array();
    for (double v : s.lower_bounds) lb.push_back(JsonNum(v));
    e["lower_bounds"] = lb;
    e["monotone"] = s.monotone;
    e["below_v_star"] = s.below_v_star;
    e["above_lower_bound"] = s.above_lower_bound;
    Json shifted = Json::array();
    for (double v : s.shifted_lower_bounds) shifted.push_back(JsonNum(v));
    e["shifted_lower_bounds"] = shifted;
    e["above_shifted_lower_bound"] = s.above_shifted_lower_bound;
    samples.push_back(e);
  }
  j["samples"] = samples;
  return j;
}

Json ToJson(const GammaThresholdReport& r) {
  Json j;
  j["steps"] = r.steps;
  j["all_pass"] = r.all_pass;
  Json cases = Json::array();
  for (const GammaThresholdCase& c : r.cases) {
    Json e;
    e["alpha"] = JsonNum(c.alpha);
    e["gamma_ratio"] = JsonNum(c.gamma_ratio);
    e["gamma"] = JsonNum(c.gamma);
    e["gamma_star"] = JsonNum(c.gamma_star);
    e["t_limit"] = JsonNum(c.t_limit);
    e["max_t"] = JsonNum(c.scan.max_value);
    e["diverged"] = c.scan.diverged;
    e["divergence_step"] = c.scan.divergence_step;
    e["expected_finite"] = c.expected_finite;
    e["pass"] = c.pass;
    cases.push_back(e);
  }
  j["cases"] = cases;
  return j;
}

Json ToJson(const CrossValidationReport& r) {
  Json j;
  j["tolerance"] = JsonNum(r.tolerance);
  j["samples"] = r.samples.size();
  j["informative"] = r.informative_count;
  j["certainty_equivalence"] = r.ce_count;
  j["max_ce_gap"] = JsonNum(r.max_ce_gap);
  j["ce_pass"] = r.ce_pass;
  Json counts;
  for (std::size_t k = 0; k < 4; ++k) {
    counts[ExplorationMeanSignName(kAllExplorationMeanSigns[k])] =
        r.match_counts[k];
  }
  j["match_counts"] = counts;
  Json best;
  for (std::size_t k = 0; k < 4; ++k) {
    best[ExplorationMeanSignName(kAllExplorationMeanSigns[k])] =
        r.best_of_four_counts[k];
  }
  j["best_of_four_counts"] = best;
  Json winners = Json::array();
  for (ExplorationMeanSign s : r.winners) {
    winners.push_back(ExplorationMeanSignName(s));
  }
  j["winners"] = winners;
  j["ambiguous"] = r.ambiguous;
  j["first_unmatched_sample"] = r.first_unmatched_sample;
  j["pass"] = r.pass;
  return j;
}

}  // namespace dualctl
