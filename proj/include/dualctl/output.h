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

#ifndef DUALCTL_OUTPUT_H_
#define DUALCTL_OUTPUT_H_

#include <string>
#include <vector>

#include "json.hpp"

#include "dualctl/experiment.h"
#include "dualctl/verifier.h"

namespace dualctl {

// Insertion-ordered, so serialized key order is stable.
using Json = nlohmann::ordered_json;

inline constexpr char kTrajectoryCsvHeader[] =
    "t,norm_x,norm_u,norm_w,mode,y_max,est_error,stage_cost,running_cost";

// CSV text for one record: header plus one row per step, '\n' terminated.
std::string TrajectoryCsv(const TrajectoryRecord& record);

struct Series {
  std::string name;
  std::vector<double> values;  // indexed by step
};

// Plain polyline chart. With log_y, nonpositive values are clamped to the
// smallest positive value present.
std::string SvgPlot(const std::vector<Series>& series, const std::string& title,
                    bool log_y);

// Writes text to path; throws std::runtime_error naming the path on failure.
void WriteTextFile(const std::string& path, const std::string& text);

// Writes trajectory_<run>.csv per record, plot.svg of |x_t| for every run,
// and report.json with per-run summaries. Creates output_dir if needed.
void EmitOutputs(const std::vector<TrajectoryRecord>& records,
                 const std::string& output_dir, bool log_y = true);

// Writes trajectory_0.csv, plot.svg (|y|, |z|, |x|, estimate error) and
// report.json for the synchronization example.
void EmitSyncOutputs(const SyncRecord& record, const std::string& output_dir);

Json ToJson(const TrajectoryRecord& record);  // summary, without steps
Json ToJson(const SyncRecord& record);
Json ToJson(const GainAuditReport& report);
Json ToJson(const Theorem3Report& report);
Json ToJson(const BellmanReport& report);
Json ToJson(const ValueIterationReport& report);
Json ToJson(const GammaThresholdReport& report);
Json ToJson(const CrossValidationReport& report);

}  // namespace dualctl

#endif  // DUALCTL_OUTPUT_H_
