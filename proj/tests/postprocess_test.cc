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

#include "eegpipe/postprocess.h"

#include <random>
#include <vector>

#include "gtest/gtest.h"

namespace eegpipe {
namespace {

PostprocessConfig NoSmoothing() {
  PostprocessConfig cfg;
  cfg.median_width = 1;
  return cfg;
}

TEST(ToEventsTest, SteadyRunBecomesOneEvent) {
  PostprocessConfig cfg = NoSmoothing();
  cfg.min_duration = 3;
  auto events = ToEvents(std::vector<double>(5, 0.9), cfg);
  ASSERT_TRUE(events.ok());
  ASSERT_EQ(events->size(), 1u);
  EXPECT_EQ(events->events()[0].start, 0.0);
  EXPECT_EQ(events->events()[0].stop, 5.0);
  EXPECT_EQ(events->events()[0].label, kSeizureLabel);
}

TEST(ToEventsTest, ShortBlipIsDropped) {
  PostprocessConfig cfg = NoSmoothing();
  cfg.min_duration = 2;
  auto events = ToEvents(std::vector<double>{0.1, 0.1, 0.9, 0.1, 0.1}, cfg);
  ASSERT_TRUE(events.ok());
  EXPECT_TRUE(events->empty());
}

TEST(ToEventsTest, NearbyRunsMerge) {
  PostprocessConfig cfg = NoSmoothing();
  cfg.merge_gap = 1;
  auto events = ToEvents(
      std::vector<double>{0.9, 0.9, 0.9, 0.1, 0.9, 0.9, 0.9, 0.1, 0.1}, cfg);
  ASSERT_TRUE(events.ok());
  ASSERT_EQ(events->size(), 1u);
  EXPECT_EQ(events->events()[0].start, 0.0);
  EXPECT_EQ(events->events()[0].stop, 7.0);
}

TEST(ToEventsTest, ThresholdExtremes) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  std::vector<double> p(100);
  for (double& v : p) v = u(rng);
  PostprocessConfig cfg;
  cfg.threshold = 0.0;
  cfg.min_duration = 0.0;
  auto all = ToEvents(p, cfg);
  ASSERT_TRUE(all.ok());
  ASSERT_EQ(all->size(), 1u);
  EXPECT_EQ(all->events()[0].start, 0.0);
  EXPECT_EQ(all->events()[0].stop, 100.0);
  cfg.threshold = 1.0;
  p[10] = 1.0;
  auto none = ToEvents(p, cfg);
  ASSERT_TRUE(none.ok());
  EXPECT_TRUE(none->empty());
}

TEST(ToEventsTest, OutputIsDisjointSortedAndLongEnough) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> p(300);
    for (double& v : p) v = u(rng);
    PostprocessConfig cfg;
    cfg.threshold = u(rng);
    cfg.min_duration = trial % 5;
    cfg.merge_gap = trial % 3;
    auto events = ToEvents(p, cfg);
    ASSERT_TRUE(events.ok());
    for (size_t i = 0; i < events->size(); ++i) {
      const Event& e = events->events()[i];
      EXPECT_GE(e.stop - e.start, cfg.min_duration);
      if (i > 0) EXPECT_LT(events->events()[i - 1].stop, e.start);
    }
  }
}

TEST(PositiveEpochsTest, MonotoneInThreshold) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> p(500);
  for (double& v : p) v = u(rng);
  PostprocessConfig cfg;
  std::vector<bool> previous(p.size(), false);
  for (int i = 100; i >= 0; --i) {
    cfg.threshold = i / 100.0;
    const std::vector<bool> mask = PositiveEpochs(p, cfg);
    for (size_t e = 0; e < p.size(); ++e) {
      if (previous[e]) EXPECT_TRUE(mask[e]);
    }
    previous = mask;
  }
}

TEST(MedianSmoothTest, ReplicatesEdges) {
  EXPECT_EQ(MedianSmooth(std::vector<double>{5, 1, 9, 2, 2}, 3),
            (std::vector<double>{5, 5, 2, 2, 2}));
  EXPECT_EQ(MedianSmooth(std::vector<double>{3, 1}, 1),
            (std::vector<double>{3, 1}));
}

TEST(PostprocessConfigTest, Validation) {
  PostprocessConfig cfg;
  cfg.median_width = 4;
  EXPECT_FALSE(cfg.Validate().ok());
  cfg = PostprocessConfig();
  cfg.threshold = 1.5;
  EXPECT_FALSE(cfg.Validate().ok());
  EXPECT_FALSE(ToEvents(std::vector<double>{}, PostprocessConfig()).ok());
  auto parsed = PostprocessConfig::Parse("threshold = 0.25\nmerge_gap = 2\n");
  ASSERT_TRUE(parsed.ok());
  EXPECT_EQ(parsed->threshold, 0.25);
  EXPECT_EQ(parsed->merge_gap, 2.0);
  EXPECT_FALSE(PostprocessConfig::Parse("bogus = 1\n").ok());
}

}  // namespace
}  // namespace eegpipe
