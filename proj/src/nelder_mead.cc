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

#include "dualctl/nelder_mead.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace dualctl {
namespace {

struct Vertex {
  Eigen::VectorXd point;
  double value;
};

class Simplex {
 public:
  Simplex(const Objective& f, int budget) : f_(f), budget_(budget) {}

  double Eval(const Eigen::VectorXd& x) {
    ++evaluations_;
    const double v = f_(x);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  }

  bool Exhausted() const { return evaluations_ >= budget_; }
  int evaluations() const { return evaluations_; }

  // Returns true on convergence, false when the budget ran out.
  bool Run(const Eigen::VectorXd& start, double start_value, double step,
           const NelderMeadOptions& options, Vertex* best) {
    const int n = static_cast<int>(start.size());
    std::vector<Vertex> v;
    v.push_back({start, start_value});
    for (int i = 0; i < n && !Exhausted(); ++i) {
      Eigen::VectorXd p = start;
      p(i) += step;
      v.push_back({p, Eval(p)});
    }
    if (static_cast<int>(v.size()) < n + 1) {
      *best = *std::min_element(v.begin(), v.end(), ByValue);
      return false;
    }

    bool converged = false;
    while (!Exhausted()) {
      std::sort(v.begin(), v.end(), ByValue);
      double diameter = 0.0;
      for (int i = 1; i <= n; ++i) {
        diameter = std::max(diameter, (v[i].point - v[0].point).norm());
      }
      if (std::abs(v[n].value - v[0].value) <=
              options.value_tolerance * (1.0 + std::abs(v[0].value)) &&
          diameter <= options.point_tolerance * (1.0 + v[0].point.norm())) {
        converged = true;
        break;
      }

      Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
      for (int i = 0; i < n; ++i) centroid += v[i].point;
      centroid /= n;

      const Eigen::VectorXd reflected = centroid + (centroid - v[n].point);
      const double fr = Eval(reflected);
      if (fr < v[0].value) {
        const Eigen::VectorXd expanded =
            centroid + 2.0 * (centroid - v[n].point);
        const double fe = Eval(expanded);
        v[n] = fe < fr ? Vertex{expanded, fe} : Vertex{reflected, fr};
        continue;
      }
      if (fr < v[n - 1].value) {
        v[n] = {reflected, fr};
        continue;
      }
      const bool outside = fr < v[n].value;
      const Eigen::VectorXd contracted =
          outside ? Eigen::VectorXd(centroid + 0.5 * (reflected - centroid))
                  : Eigen::VectorXd(centroid + 0.5 * (v[n].point - centroid));
      const double fc = Eval(contracted);
      if (fc < std::min(fr, v[n].value)) {
        v[n] = {contracted, fc};
        continue;
      }
      for (int i = 1; i <= n && !Exhausted(); ++i) {
        v[i].point = v[0].point + 0.5 * (v[i].point - v[0].point);
        v[i].value = Eval(v[i].point);
      }
    }
    *best = *std::min_element(v.begin(), v.end(), ByValue);
    return converged;
  }

 private:
  static bool ByValue(const Vertex& a, const Vertex& b) {
    return a.value < b.value;
  }

  const Objective& f_;
  int budget_;
  int evaluations_ = 0;
};

}  // namespace

NelderMeadResult NelderMeadMinimize(const Objective& f,
                                    const Eigen::VectorXd& start,
                                    const NelderMeadOptions& options) {
  Simplex simplex(f, std::max(1, options.max_evaluations));
  Vertex best{start, simplex.Eval(start)};
  NelderMeadResult result;
  if (start.size() == 0) {
    result.point = start;
    result.value = best.value;
    result.evaluations = simplex.evaluations();
    result.converged = true;
    return result;
  }

  double step = options.initial_step;
  bool converged = false;
  for (int restart = 0; restart <= options.max_restarts; ++restart) {
    Vertex found = best;
    converged = simplex.Run(best.point, best.value, step, options, &found);
    const double gain = best.value - found.value;
    if (found.value < best.value) best = found;
    if (!converged || simplex.Exhausted()) break;
    if (restart > 0 &&
        gain <= options.value_tolerance * (1.0 + std::abs(best.value))) {
      break;
    }
    step = std::max(options.initial_step * 1e-3,
                    0.1 * std::max(step, 1e-8));
  }
  result.point = best.point;
  result.value = best.value;
  result.evaluations = simplex.evaluations();
  result.converged = converged;
  return result;
}

}  // namespace dualctl
