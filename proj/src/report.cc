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

#include "eegpipe/report.h"

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "json.hpp"

namespace eegpipe {

std::string ScoreReportJson(const ScoreReport& report,
                            const std::string& extra_json) {
  nlohmann::ordered_json j;
  j["events"] = {{"tp", report.events.tp},
                 {"fp", report.events.fp},
                 {"reference_count", report.events.ref_count},
                 {"hypothesis_count", report.events.hyp_count}};
  j["epochs"] = {{"tp", report.epochs.tp},
                 {"fp", report.epochs.fp},
                 {"tn", report.epochs.tn},
                 {"fn", report.epochs.fn},
                 {"epoch_seconds", 1.0}};
  j["total_duration_seconds"] = report.total_duration;
  j["sensitivity_percent"] = report.Sensitivity();
  j["specificity_percent"] = report.Specificity();
  j["specificity_basis"] = "1 s epochs, majority coverage";
  j["fa_per_24h"] = report.FaPer24h();
  if (!report.roc.empty()) {
    nlohmann::ordered_json roc = nlohmann::ordered_json::array();
    for (const RocPoint& p : report.roc) {
      roc.push_back(
          {{"threshold", p.threshold}, {"fpr", p.fpr}, {"tpr", p.tpr}});
    }
    j["roc"] = roc;
    j["roc_area"] = RocArea(report.roc);
  }
  if (!extra_json.empty()) {
    j["config"] = nlohmann::ordered_json::parse(extra_json, nullptr, false);
  }
  return j.dump(2) + "\n";
}

std::string RocCsv(std::span<const RocPoint> points) {
  std::string out = "threshold,fpr,tpr\n";
  for (const RocPoint& p : points) {
    absl::StrAppendFormat(&out, "%.17g,%.17g,%.17g\n", p.threshold, p.fpr,
                          p.tpr);
  }
  return out;
}

std::string RocSvg(std::span<const RocPoint> points, const std::string& title) {
  constexpr double kSize = 400.0;
  constexpr double kMargin = 40.0;
  const auto x = [&](double fpr) { return kMargin + fpr * kSize; };
  const auto y = [&](double tpr) { return kMargin + (1.0 - tpr) * kSize; };
  std::string out = absl::StrFormat(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\">\n",
      static_cast<int>(kSize + 2 * kMargin),
      static_cast<int>(kSize + 2 * kMargin));
  absl::StrAppendFormat(&out,
                        "<rect x=\"%g\" y=\"%g\" width=\"%g\" height=\"%g\" "
                        "fill=\"none\" stroke=\"black\"/>\n",
                        kMargin, kMargin, kSize, kSize);
  absl::StrAppendFormat(&out,
                        "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" "
                        "stroke=\"gray\" stroke-dasharray=\"4\"/>\n",
                        x(0), y(0), x(1), y(1));
  std::string path = absl::StrFormat("%.2f,%.2f", x(0), y(0));
  for (const RocPoint& p : points) {
    absl::StrAppendFormat(&path, " %.2f,%.2f", x(p.fpr), y(p.tpr));
  }
  absl::StrAppendFormat(&path, " %.2f,%.2f", x(1), y(1));
  absl::StrAppend(&out, "<polyline fill=\"none\" stroke=\"blue\" points=\"",
                  path, "\"/>\n");
  absl::StrAppendFormat(&out,
                        "<text x=\"%g\" y=\"%g\" font-size=\"14\">%s</text>\n",
                        kMargin, kMargin - 12, title);
  absl::StrAppendFormat(&out,
                        "<text x=\"%g\" y=\"%g\" font-size=\"12\">FPR</text>\n",
                        kMargin + kSize / 2, kSize + 2 * kMargin - 10);
  absl::StrAppendFormat(&out,
                        "<text x=\"4\" y=\"%g\" font-size=\"12\">TPR</text>\n",
                        kMargin + kSize / 2);
  absl::StrAppend(&out, "</svg>\n");
  return out;
}

}  // namespace eegpipe
