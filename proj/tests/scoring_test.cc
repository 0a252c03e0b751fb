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
#include <random>
#include <vector>

#include "eegpipe/events.h"
#include "eegpipe/postprocess.h"
#include "gtest/gtest.h"
#include "oracles.h"

namespace eegpipe {
namespace {

TEST(OvlpScoreTest, PartialOverlapIsHit) {
  auto c = OvlpScore(Events({{10, 20}}, 60), Events({{15, 30}}, 60));
  ASSERT_TRUE(c.ok());
  EXPECT_EQ(c->tp, 1);
  EXPECT_EQ(c->fp, 0);
}

TEST(OvlpScoreTest, OneHypothesisCreditsSeveralReferences) {
  auto c = OvlpScore(Events({{10, 20}, {40, 50}}, 60), Events({{15, 45}}, 60));
  ASSERT_TRUE(c.ok());
  EXPECT_EQ(c->tp, 2);
  EXPECT_EQ(c->fp, 0);
}

TEST(OvlpScoreTest, TouchingIsNotOverlap) {
  auto c = OvlpScore(Events({{10, 20}}, 60), Events({{20, 30}}, 60));
  ASSERT_TRUE(c.ok());
  EXPECT_EQ(c->tp, 0);
  EXPECT_EQ(c->fp, 1);
}

TEST(OvlpScoreTest, MismatchedDurationsFail) {
  EXPECT_FALSE(OvlpScore(Events({}, 60), Events({}, 61)).ok());
}

TEST(OvlpScoreTest, MatchesPairwiseOracle) {
  std::mt19937_64 rng(20260101);
  for (int trial = 0; trial < 1000; ++trial) {
    const EventList ref = RandomEvents(rng, 120);
    const EventList hyp = RandomEvents(rng, 120);
    auto c = OvlpScore(ref, hyp);
    ASSERT_TRUE(c.ok());
    const OverlapCounts want = PairwiseOracle(ref, hyp);
    ASSERT_EQ(c->tp, want.tp) << "trial " << trial;
    ASSERT_EQ(c->fp, want.fp) << "trial " << trial;
  }
}

TEST(OvlpScoreTest, PermutationInvariant) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const EventList ref = RandomEvents(rng, 60);
    const EventList hyp = RandomEvents(rng, 60);
    std::vector<Event> shuffled = hyp.events();
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    // Create sorts by start; ties keep the shuffled order.
    auto a = OvlpScore(ref, hyp);
    auto b = OvlpScore(ref, *EventList::Create(shuffled, 60));
    ASSERT_TRUE(a.ok() && b.ok());
    EXPECT_EQ(a->tp, b->tp);
    EXPECT_EQ(a->fp, b->fp);
  }
}

TEST(OvlpScoreTest, AddingOverlappingHypothesisIsMonotone) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const EventList ref = RandomEvents(rng, 60);
    if (ref.empty()) continue;
    const EventList hyp = RandomEvents(rng, 60);
    const Event& target = ref.events()[trial % ref.size()];
    std::vector<Event> more = hyp.events();
    more.push_back({target.start, target.stop, kSeizureLabel});
    auto before = OvlpScore(ref, hyp);
    auto after = OvlpScore(ref, *EventList::Create(more, 60));
    ASSERT_TRUE(before.ok() && after.ok());
    EXPECT_GE(after->tp, before->tp);
    EXPECT_EQ(after->fp, before->fp);
  }
}

TEST(FaPer24hTest, Scaling) {
  EXPECT_EQ(*FaPer24h(2, 12 * 3600.0), 4.0);
  EXPECT_EQ(*FaPer24h(0, 3600.0), 0.0);
  EXPECT_EQ(*FaPer24h(23, 24 * 3600.0), 23.0);
  EXPECT_FALSE(FaPer24h(1, 0.0).ok());
}

TEST(EpochConfusionTest, IdenticalListsHavePerfectSpecificity) {
  const EventList ref = Events({{2, 7.5}, {20, 30}}, 40);
  auto c = EpochConfusion(ref, ref);
  ASSERT_TRUE(c.ok());
  EXPECT_EQ(c->fp, 0);
  EXPECT_EQ(c->fn, 0);
  EXPECT_EQ(c->Specificity(), 1.0);
}

TEST(EpochConfusionTest, FullHypothesisOverEmptyReference) {
  auto c = EpochConfusion(Events({}, 30), Events({{0, 30}}, 30));
  ASSERT_TRUE(c.ok());
  EXPECT_EQ(c->fp, 30);
  EXPECT_EQ(c->Specificity(), 0.0);
}

TEST(EpochConfusionTest, MajorityRuleIsStrict) {
  // Exactly half an epoch covered is not positive.
  const std::vector<bool> mask =
      EpochMask(Events({{0.5, 1.0}, {1.25, 2.0}}, 3));
  EXPECT_EQ(mask, (std::vector<bool>{false, true, false}));
}

TEST(EpochConfusionTest, MatchesCellOracle) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 1000; ++trial) {
    const EventList ref = RandomEvents(rng, 90);
    const EventList hyp = RandomEvents(rng, 90);
    auto c = EpochConfusion(ref, hyp);
    ASSERT_TRUE(c.ok());
    const std::vector<bool> r = EpochOracle(ref), h = EpochOracle(hyp);
    EpochCounts want;
    for (size_t e = 0; e < r.size(); ++e) {
      if (r[e] && h[e]) ++want.tp;
      if (!r[e] && h[e]) ++want.fp;
      if (!r[e] && !h[e]) ++want.tn;
      if (r[e] && !h[e]) ++want.fn;
    }
    ASSERT_EQ(c->tp, want.tp);
    ASSERT_EQ(c->fp, want.fp);
    ASSERT_EQ(c->tn, want.tn);
    ASSERT_EQ(c->fn, want.fn);
  }
}

TEST(ScoreTest, AggregatesAcrossRecordings) {
  const EventList r1 = Events({{10, 20}}, 100);
  const EventList h1 = Events({{12, 14}, {50, 55}}, 100);
  const EventList r2 = Events({{0, 5}}, 50);
  const EventList h2 = Events({}, 50);
  const std::vector<ScoredPair> pairs = {{&r1, &h1}, {&r2, &h2}};
  auto report = Score(pairs);
  ASSERT_TRUE(report.ok());
  EXPECT_EQ(report->events.tp, 1);
  EXPECT_EQ(report->events.fp, 1);
  EXPECT_EQ(report->events.ref_count, 2);
  EXPECT_EQ(report->Sensitivity(), 50.0);
  EXPECT_EQ(report->total_duration, 150.0);
  EXPECT_EQ(report->FaPer24h(), 86400.0 / 150.0);
}

TEST(RocSweepTest, EndpointsAndMonotoneFpr) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> posteriors(200);
  for (double& p : posteriors) p = u(rng);
  const EventList ref = Events({{20, 40}, {120, 150}}, 200);
  const std::vector<RecordingPosteriors> recs = {{posteriors, &ref}};
  const std::vector<double> grid = DefaultThresholdGrid(51);
  auto roc = RocSweep(recs, PostprocessConfig(), grid);
  ASSERT_TRUE(roc.ok());
  ASSERT_EQ(roc->size(), grid.size());
  EXPECT_EQ(roc->front().threshold, 1.0);
  EXPECT_EQ(roc->front().tpr, 0.0);
  EXPECT_EQ(roc->front().fpr, 0.0);
  EXPECT_EQ(roc->back().threshold, 0.0);
  EXPECT_EQ(roc->back().tpr, 1.0);
  EXPECT_DOUBLE_EQ(roc->back().fpr, 1.0);
  for (size_t i = 1; i < roc->size(); ++i) {
    EXPECT_GE((*roc)[i].fpr, (*roc)[i - 1].fpr);
  }
}

TEST(RocSweepTest, RejectsBadGrids) {
  const EventList ref = Events({}, 10);
  const std::vector<double> posteriors(10, 0.5);
  const std::vector<RecordingPosteriors> recs = {{posteriors, &ref}};
  EXPECT_FALSE(RocSweep(recs, PostprocessConfig(), {}).ok());
  const std::vector<double> ascending = {0.1, 0.2};
  EXPECT_FALSE(RocSweep(recs, PostprocessConfig(), ascending).ok());
}

TEST(RocAreaTest, Trapezoids) {
  const std::vector<RocPoint> perfect = {{0.5, 0.0, 1.0}};
  EXPECT_DOUBLE_EQ(RocArea(perfect), 1.0);
  EXPECT_DOUBLE_EQ(RocArea({}), 0.5);
  const std::vector<RocPoint> mid = {{0.5, 0.5, 0.75}};
  EXPECT_DOUBLE_EQ(RocArea(mid), 0.5 * 0.75 / 2 + 0.5 * (0.75 + 1.0) / 2);
}

TEST(EpochAucTest, MatchesPairCounting) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> level(0, 5);
  std::bernoulli_distribution coin(0.3);
  std::vector<double> scores(300), labels(300);
  for (size_t i = 0; i < scores.size(); ++i) {
    scores[i] = level(rng) / 5.0;
    labels[i] = coin(rng) ? 1.0 : 0.0;
  }
  double wins = 0.0, pairs = 0.0;
  for (size_t i = 0; i < scores.size(); ++i) {
    for (size_t j = 0; j < scores.size(); ++j) {
      if (labels[i] == 1.0 && labels[j] == 0.0) {
        pairs += 1.0;
        wins += scores[i] > scores[j]    ? 1.0
                : scores[i] == scores[j] ? 0.5
                                         : 0.0;
      }
    }
  }
  auto auc = EpochAuc(scores, labels);
  ASSERT_TRUE(auc.ok());
  EXPECT_NEAR(*auc, wins / pairs, 1e-12);
  const std::vector<double> one_class(10, 1.0);
  EXPECT_FALSE(EpochAuc(one_class, one_class).ok());
}

}  // namespace
}  // namespace eegpipe
