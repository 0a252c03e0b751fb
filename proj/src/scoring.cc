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

#include "eegpipe/scoring.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "absl/strings/str_cat.h"
#include "eegpipe/status_macros.h"

namespace eegpipe {

namespace {

struct Endpoint {
  double time;
  bool open;
  bool is_ref;
  size_t id;
};

std::vector<std::pair<double, double>> MergedUnion(const EventList& events) {
  std::vector<std::pair<double, double>> out;
  for (const Event& e : events.events()) {
    if (!out.empty() && e.start <= out.back().second) {
      out.back().second = std::max(out.back().second, e.stop);
    } else {
      out.emplace_back(e.start, e.stop);
    }
  }
  return out;
}

}  // namespace

absl::StatusOr<OverlapCounts> OvlpScore(const EventList& ref,
                                        const EventList& hyp) {
  if (ref.total_duration() != hyp.total_duration()) {
    return absl::InvalidArgumentError(
        absl::StrCat("reference duration ", ref.total_duration(),
                     " != hypothesis duration ", hyp.total_duration()));
  }
  std::vector<Endpoint> points;
  points.reserve(2 * (ref.size() + hyp.size()));
  for (size_t i = 0; i < ref.size(); ++i) {
    points.push_back({ref.events()[i].start, true, true, i});
    points.push_back({ref.events()[i].stop, false, true, i});
  }
  for (size_t i = 0; i < hyp.size(); ++i) {
    points.push_back({hyp.events()[i].start, true, false, i});
    points.push_back({hyp.events()[i].stop, false, false, i});
  }
  // Closings sort before openings at the same instant so touching intervals
  // are never simultaneously active.
  std::sort(points.begin(), points.end(),
            [](const Endpoint& a, const Endpoint& b) {
              if (a.time != b.time) return a.time < b.time;
              return a.open < b.open;
            });

  std::vector<bool> ref_hit(ref.size(), false);
  std::vector<bool> hyp_hit(hyp.size(), false);
  int64_t active[2] = {0, 0};   // [hyp, ref]
  std::set<size_t> pending[2];  // active and not yet hit
  for (const Endpoint& p : points) {
    const int self = p.is_ref ? 1 : 0;
    const int other = 1 - self;
    std::vector<bool>& self_hit = p.is_ref ? ref_hit : hyp_hit;
    std::vector<bool>& other_hit = p.is_ref ? hyp_hit : ref_hit;
    if (p.open) {
      ++active[self];
      if (active[other] > 0) {
        self_hit[p.id] = true;
        for (size_t id : pending[other]) other_hit[id] = true;
        pending[other].clear();
      } else {
        pending[self].insert(p.id);
      }
    } else {
      --active[self];
      pending[self].erase(p.id);
    }
  }

  OverlapCounts c;
  c.ref_count = static_cast<int64_t>(ref.size());
  c.hyp_count = static_cast<int64_t>(hyp.size());
  c.tp = std::count(ref_hit.begin(), ref_hit.end(), true);
  c.fp = std::count(hyp_hit.begin(), hyp_hit.end(), false);
  return c;
}

absl::StatusOr<double> FaPer24h(int64_t fp, double total_duration) {
  if (!(total_duration > 0.0)) {
    return absl::InvalidArgumentError("total duration must be positive");
  }
  return static_cast<double>(fp) * kSecondsPerDay / total_duration;
}

double EpochCounts::Specificity() const {
  const int64_t negatives = tn + fp;
  return negatives == 0
             ? 1.0
             : static_cast<double>(tn) / static_cast<double>(negatives);
}

std::vector<bool> EpochMask(const EventList& events, double epoch,
                            double overlap_fraction) {
  const size_t n =
      static_cast<size_t>(std::floor(events.total_duration() / epoch + 1e-9));
  const auto merged = MergedUnion(events);
  std::vector<bool> mask(n, false);
  size_t k = 0;
  for (size_t e = 0; e < n; ++e) {
    const double lo = e * epoch;
    const double hi = lo + epoch;
    while (k < merged.size() && merged[k].second <= lo) ++k;
    double covered = 0.0;
    for (size_t j = k; j < merged.size() && merged[j].first < hi; ++j) {
      covered += std::min(hi, merged[j].second) - std::max(lo, merged[j].first);
    }
    mask[e] = covered > overlap_fraction * epoch;
  }
  return mask;
}

std::vector<double> EpochLabels(const EventList& events, size_t epochs,
                                double overlap_fraction) {
  const std::vector<bool> mask = EpochMask(events, 1.0, overlap_fraction);
  std::vector<double> labels(epochs, 0.0);
  for (size_t e = 0; e < epochs && e < mask.size(); ++e) {
    labels[e] = mask[e] ? 1.0 : 0.0;
  }
  return labels;
}

absl::StatusOr<EpochCounts> EpochConfusion(const EventList& ref,
                                           const EventList& hyp, double epoch) {
  if (ref.total_duration() != hyp.total_duration()) {
    return absl::InvalidArgumentError(
        "reference and hypothesis durations differ");
  }
  if (!(epoch > 0.0)) return absl::InvalidArgumentError("epoch must be > 0");
  const std::vector<bool> r = EpochMask(ref, epoch);
  const std::vector<bool> h = EpochMask(hyp, epoch);
  EpochCounts c;
  for (size_t e = 0; e < r.size(); ++e) {
    if (r[e]) {
      (h[e] ? c.tp : c.fn)++;
    } else {
      (h[e] ? c.fp : c.tn)++;
    }
  }
  return c;
}

double ScoreReport::Sensitivity() const {
  return events.ref_count == 0
             ? 0.0
             : 100.0 * static_cast<double>(events.tp) / events.ref_count;
}

double ScoreReport::FaPer24h() const {
  return total_duration > 0.0 ? events.fp * kSecondsPerDay / total_duration
                              : 0.0;
}

absl::StatusOr<ScoreReport> Score(std::span<const ScoredPair> pairs) {
  ScoreReport report;
  for (const ScoredPair& p : pairs) {
    ASSIGN_OR_RETURN(OverlapCounts o, OvlpScore(*p.ref, *p.hyp));
    ASSIGN_OR_RETURN(EpochCounts e, EpochConfusion(*p.ref, *p.hyp));
    report.events.tp += o.tp;
    report.events.fp += o.fp;
    report.events.ref_count += o.ref_count;
    report.events.hyp_count += o.hyp_count;
    report.epochs.tp += e.tp;
    report.epochs.fp += e.fp;
    report.epochs.tn += e.tn;
    report.epochs.fn += e.fn;
    report.total_duration += p.ref->total_duration();
  }
  return report;
}

absl::StatusOr<std::vector<OperatingPoint>> ThresholdSweep(
    std::span<const RecordingPosteriors> recordings,
    const PostprocessConfig& base, std::span<const double> thresholds) {
  if (thresholds.empty()) {
    return absl::InvalidArgumentError("empty threshold grid");
  }
  for (size_t i = 0; i < thresholds.size(); ++i) {
    if (!(thresholds[i] >= 0.0 && thresholds[i] <= 1.0)) {
      return absl::InvalidArgumentError("thresholds must lie in [0, 1]");
    }
    if (i > 0 && thresholds[i] > thresholds[i - 1]) {
      return absl::InvalidArgumentError("thresholds must be sorted descending");
    }
  }
  std::vector<OperatingPoint> points;
  points.reserve(thresholds.size());
  for (double theta : thresholds) {
    PostprocessConfig cfg = base;
    cfg.threshold = theta;
    std::vector<EventList> hyps;
    hyps.reserve(recordings.size());
    for (const auto& rec : recordings) {
      ASSIGN_OR_RETURN(
          EventList hyp,
          ToEvents(rec.posteriors, cfg, rec.reference->total_duration()));
      hyps.push_back(std::move(hyp));
    }
    std::vector<ScoredPair> pairs;
    for (size_t i = 0; i < recordings.size(); ++i) {
      pairs.push_back({recordings[i].reference, &hyps[i]});
    }
    ASSIGN_OR_RETURN(ScoreReport report, Score(pairs));
    points.push_back({theta, std::move(report)});
  }
  return points;
}

absl::StatusOr<std::vector<RocPoint>> RocSweep(
    std::span<const RecordingPosteriors> recordings,
    const PostprocessConfig& base, std::span<const double> thresholds) {
  ASSIGN_OR_RETURN(std::vector<OperatingPoint> points,
                   ThresholdSweep(recordings, base, thresholds));
  std::vector<RocPoint> roc;
  roc.reserve(points.size());
  for (const OperatingPoint& p : points) {
    roc.push_back({p.threshold, p.report.epochs.FalsePositiveRate(),
                   p.report.Sensitivity() / 100.0});
  }
  return roc;
}

std::vector<double> DefaultThresholdGrid(int n) {
  std::vector<double> grid(n);
  for (int i = 0; i < n; ++i) {
    grid[i] = n == 1 ? 0.5 : 1.0 - static_cast<double>(i) / (n - 1);
  }
  return grid;
}

double RocArea(std::span<const RocPoint> points) {
  std::vector<std::pair<double, double>> pts = {{0.0, 0.0}, {1.0, 1.0}};
  for (const auto& p : points) pts.emplace_back(p.fpr, p.tpr);
  std::sort(pts.begin(), pts.end());
  double area = 0.0;
  for (size_t i = 1; i < pts.size(); ++i) {
    area += (pts[i].first - pts[i - 1].first) *
            (pts[i].second + pts[i - 1].second) / 2.0;
  }
  return area;
}

absl::StatusOr<double> EpochAuc(std::span<const double> scores,
                                std::span<const double> labels) {
  if (scores.size() != labels.size()) {
    return absl::InvalidArgumentError("scores and labels differ in length");
  }
  std::vector<size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return scores[a] < scores[b]; });
  // Mid-ranks over tie groups.
  double rank_sum = 0.0;
  double positives = 0.0;
  for (size_t i = 0; i < order.size();) {
    size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const double mid_rank = (i + 1 + j) / 2.0;
    for (size_t k = i; k < j; ++k) {
      if (labels[order[k]] > 0.5) {
        rank_sum += mid_rank;
        positives += 1.0;
      }
    }
    i = j;
  }
  const double negatives = static_cast<double>(scores.size()) - positives;
  if (positives == 0.0 || negatives == 0.0) {
    return absl::InvalidArgumentError("AUC needs both classes");
  }
  return (rank_sum - positives * (positives + 1) / 2.0) /
         (positives * negatives);
}

}  // namespace eegpipe
