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

// Brute-force reference implementations shared by the unit tests and the
// acceptance suite.
#ifndef EEGPIPE_TESTS_ORACLES_H_
#define EEGPIPE_TESTS_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "eegpipe/events.h"
#include "eegpipe/features.h"
#include "eegpipe/network.h"
#include "eegpipe/scoring.h"

namespace eegpipe {

inline EventList Events(std::vector<std::pair<double, double>> spans,
                        double duration) {
  std::vector<Event> events;
  for (auto [a, b] : spans) events.push_back({a, b, kSeizureLabel});
  return *EventList::Create(std::move(events), duration);
}

// Intervals on a quarter-second grid so every coverage sum below is exact.
inline EventList RandomEvents(std::mt19937_64& rng, double duration) {
  std::uniform_int_distribution<int> count(0, 50);
  std::uniform_int_distribution<int> start(0,
                                           static_cast<int>(duration * 4) - 1);
  std::uniform_int_distribution<int> length(1, 40);
  std::vector<std::pair<double, double>> spans;
  const int n = count(rng);
  for (int i = 0; i < n; ++i) {
    const int a = start(rng);
    const int b = std::min(a + length(rng), static_cast<int>(duration * 4));
    spans.emplace_back(a / 4.0, b / 4.0);
  }
  return Events(spans, duration);
}

inline OverlapCounts PairwiseOracle(const EventList& ref,
                                    const EventList& hyp) {
  const auto overlaps = [](const Event& a, const Event& b) {
    return std::min(a.stop, b.stop) - std::max(a.start, b.start) > 0.0;
  };
  OverlapCounts c;
  c.ref_count = ref.size();
  c.hyp_count = hyp.size();
  for (const Event& r : ref.events()) {
    bool hit = false;
    for (const Event& h : hyp.events()) hit = hit || overlaps(r, h);
    c.tp += hit;
  }
  for (const Event& h : hyp.events()) {
    bool hit = false;
    for (const Event& r : ref.events()) hit = hit || overlaps(r, h);
    c.fp += !hit;
  }
  return c;
}

// Marks quarter-second cells, then labels each epoch by counting cells.
inline std::vector<bool> EpochOracle(const EventList& events) {
  const int epochs = static_cast<int>(events.total_duration());
  std::vector<bool> cell(epochs * 4, false);
  for (const Event& e : events.events()) {
    for (int k = static_cast<int>(e.start * 4);
         k < static_cast<int>(e.stop * 4); ++k) {
      if (k < static_cast<int>(cell.size())) cell[k] = true;
    }
  }
  std::vector<bool> out(epochs);
  for (int e = 0; e < epochs; ++e) {
    int covered = 0;
    for (int k = 0; k < 4; ++k) covered += cell[4 * e + k];
    out[e] = covered > 2;
  }
  return out;
}

inline FeatureTensor RandomFeatures(size_t epochs, int channels,
                                    uint64_t seed) {
  std::vector<std::string> labels;
  for (int c = 0; c < channels; ++c) labels.push_back("C" + std::to_string(c));
  FeatureTensor t(epochs, labels, static_cast<double>(epochs), 0);
  std::mt19937_64 rng(seed);
  std::normal_distribution<float> nd;
  for (size_t e = 0; e < epochs; ++e)
    for (int f = 0; f < kFramesPerEpoch; ++f)
      for (int c = 0; c < channels; ++c)
        for (int k = 0; k < kFeatureDim; ++k) t.at(e, f, c, k) = nd(rng);
  return t;
}

// Largest relative error between analytic gradients and central differences
// (step 1e-5) over every parameter. Biases are moved off zero first.
inline absl::StatusOr<double> WorstGradientError(
    const Network& net, const FeatureTensor& x, std::span<const double> labels,
    uint64_t init_seed, std::optional<uint64_t> dropout_seed) {
  Weights w = net.Initialize(init_seed);
  std::mt19937_64 rng(init_seed + 100);
  std::uniform_real_distribution<double> ud(-0.3, 0.3);
  for (auto& t : w.params.tensors())
    if (t.shape.size() == 1)
      for (double& v : t.values) v += ud(rng);
  auto lg = net.Gradient(x, 0, labels.size(), labels, w, dropout_seed);
  if (!lg.ok()) return lg.status();
  const double h = 1e-5;
  double worst = 0.0;
  for (size_t t = 0; t < w.params.size(); ++t) {
    for (size_t i = 0; i < w.params[t].values.size(); ++i) {
      Weights plus = w, minus = w;
      plus.params[t].values[i] += h;
      minus.params[t].values[i] -= h;
      auto lp = net.Gradient(x, 0, labels.size(), labels, plus, dropout_seed);
      auto lm = net.Gradient(x, 0, labels.size(), labels, minus, dropout_seed);
      if (!lp.ok()) return lp.status();
      if (!lm.ok()) return lm.status();
      const double numeric = (lp->loss - lm->loss) / (2 * h);
      const double analytic = lg->grad[t].values[i];
      const double rel =
          std::abs(numeric - analytic) /
          std::max({std::abs(numeric), std::abs(analytic), 1e-7});
      worst = std::max(worst, rel);
    }
  }
  return worst;
}

}  // namespace eegpipe

#endif  // EEGPIPE_TESTS_ORACLES_H_
