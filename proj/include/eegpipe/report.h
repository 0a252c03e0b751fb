// Copyright 2026 The eegpipe Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef EEGPIPE_REPORT_H_
#define EEGPIPE_REPORT_H_

#include <span>
#include <string>

#include "eegpipe/scoring.h"

namespace eegpipe {

// JSON document with counts, percentages and FA/24h. `extra` is merged in as
// a "config" object (for example, config hashes) when non-empty JSON.
std::string ScoreReportJson(const ScoreReport& report,
                            const std::string& extra_json = "");

// "threshold,fpr,tpr" with one row per point.
std::string RocCsv(std::span<const RocPoint> points);

// Self-contained SVG line plot of tpr against fpr.
std::string RocSvg(std::span<const RocPoint> points,
                   const std::string& title = "ROC");

}  // namespace eegpipe

#endif  // EEGPIPE_REPORT_H_
