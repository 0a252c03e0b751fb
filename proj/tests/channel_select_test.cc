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

#include "eegpipe/channel_select.h"

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "eegpipe/montage.h"
#include "gtest/gtest.h"

namespace eegpipe {
namespace {

DifferentialRecording Tcp22() {
  std::vector<std::string> labels = DefaultTcpMontage().ChannelLabels();
  std::vector<std::vector<double>> samples;
  for (size_t c = 0; c < labels.size(); ++c) {
    samples.push_back({static_cast<double>(c), -static_cast<double>(c)});
  }
  return *DifferentialRecording::Create(labels, samples, 1.0);
}

std::set<std::string> Members(const std::string& name) {
  auto cfg = Preset(name);
  EXPECT_TRUE(cfg.ok()) << name;
  return std::set<std::string>(cfg->members.begin(), cfg->members.end());
}

bool Touches(const std::string& channel, const std::string& electrode) {
  const size_t dash = channel.find('-');
  return channel.substr(0, dash) == electrode ||
         channel.substr(dash + 1) == electrode;
}

TEST(PresetTest, Cardinalities) {
  const std::vector<std::pair<std::string, size_t>> expected = {
      {"ch22", 22},    {"ch20", 20},  {"ch16", 16},    {"ch8", 8},
      {"ch4", 4},      {"ch2", 2},    {"ch22+Ax", 22}, {"ch18+Ax", 18},
      {"ch10+Ax", 10}, {"ch6+Ax", 6}, {"ch4+Ax", 4}};
  for (const auto& [name, size] : expected) {
    auto cfg = Preset(name);
    ASSERT_TRUE(cfg.ok()) << name;
    EXPECT_EQ(cfg->size(), size) << name;
    EXPECT_EQ(cfg->name, name);
  }
}

TEST(PresetTest, Ch20DropsEarChannels) {
  std::set<std::string> want = Members("ch22");
  want.erase(kAxLeft);
  want.erase(kAxRight);
  EXPECT_EQ(Members("ch20"), want);
}

TEST(PresetTest, Ch16DropsFrontalPolar) {
  std::set<std::string> want = Members("ch20");
  for (const char* c : {"FP1-F7", "FP2-F8", "FP1-F3", "FP2-F4"}) {
    ASSERT_EQ(want.erase(c), 1u) << c;
  }
  EXPECT_EQ(Members("ch16"), want);
  EXPECT_EQ(want.size(), 16u);
}

TEST(PresetTest, AxVariantsDifferByEarChannels) {
  const std::vector<std::pair<std::string, std::string>> pairs = {
      {"ch22+Ax", "ch20"},
      {"ch18+Ax", "ch16"},
      {"ch10+Ax", "ch8"},
      {"ch6+Ax", "ch4"},
      {"ch4+Ax", "ch2"}};
  for (const auto& [with, without] : pairs) {
    std::set<std::string> diff;
    const std::set<std::string> a = Members(with), b = Members(without);
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                        std::inserter(diff, diff.end()));
    EXPECT_EQ(diff, (std::set<std::string>{kAxLeft, kAxRight})) << with;
    EXPECT_TRUE(std::includes(a.begin(), a.end(), b.begin(), b.end()));
    EXPECT_TRUE(Preset(with)->includes_ax);
  }
}

TEST(PresetTest, StatedConstraints) {
  for (const char* name : {"ch20", "ch16", "ch8", "ch4", "ch2", "ch18+Ax",
                           "ch10+Ax", "ch6+Ax", "ch4+Ax"}) {
    const std::set<std::string> members = Members(name);
    EXPECT_TRUE(
        std::any_of(members.begin(), members.end(),
                    [](const std::string& c) { return Touches(c, "CZ"); }))
        << name;
  }
  for (const char* name : {"ch16", "ch8", "ch4", "ch2"}) {
    for (const std::string& c : Members(name)) {
      EXPECT_FALSE(Touches(c, "FP1") || Touches(c, "FP2")) << name << " " << c;
    }
  }
  for (const char* name : {"ch4", "ch2"}) {
    int occipital = 0;
    for (const std::string& c : Members(name)) {
      occipital += Touches(c, "O1") || Touches(c, "O2");
    }
    EXPECT_EQ(occipital, 1) << name;
  }
}

TEST(PresetTest, MembersFollowMontageOrder) {
  const std::vector<std::string> tcp = DefaultTcpMontage().ChannelLabels();
  for (const std::string& name : PresetRegistry::Default().Names()) {
    auto cfg = Preset(name);
    ASSERT_TRUE(cfg.ok());
    std::vector<size_t> index;
    for (const std::string& m : cfg->members) {
      index.push_back(std::find(tcp.begin(), tcp.end(), m) - tcp.begin());
      EXPECT_LT(index.back(), tcp.size()) << m;
    }
    EXPECT_TRUE(std::is_sorted(index.begin(), index.end())) << name;
  }
}

TEST(PresetTest, UnknownName) {
  auto cfg = Preset("ch7");
  ASSERT_FALSE(cfg.ok());
  EXPECT_NE(cfg.status().message().find("unknown preset"), std::string::npos);
}

TEST(PresetTest, Overrides) {
  PresetRegistry registry = PresetRegistry::Default();
  ASSERT_TRUE(registry
                  .LoadOverrides("# custom\nmine: T3-T5, c3-cz\n"
                                 "ch2: C3-CZ, T5-O1\n")
                  .ok());
  auto mine = registry.Get("mine");
  ASSERT_TRUE(mine.ok());
  EXPECT_EQ(mine->members, (std::vector<std::string>{"T3-T5", "C3-CZ"}));
  EXPECT_EQ(registry.Get("ch2")->members,
            (std::vector<std::string>{"C3-CZ", "T5-O1"}));
  EXPECT_FALSE(registry.LoadOverrides("broken line\n").ok());
}

TEST(SelectTest, IdentityAndCardinality) {
  const DifferentialRecording rec = Tcp22();
  auto same = Select(rec, *Preset("ch22"));
  ASSERT_TRUE(same.ok());
  EXPECT_EQ(same->labels(), rec.labels());
  for (size_t c = 0; c < rec.channel_count(); ++c) {
    EXPECT_EQ(same->samples(c), rec.samples(c));
  }
  auto two = Select(rec, *Preset("ch2"));
  ASSERT_TRUE(two.ok());
  EXPECT_EQ(two->channel_count(), 2u);
  EXPECT_EQ(two->labels(), Preset("ch2")->members);
}

TEST(SelectTest, Idempotent) {
  const ChannelConfig cfg = *Preset("ch8");
  auto once = Select(Tcp22(), cfg);
  ASSERT_TRUE(once.ok());
  auto twice = Select(*once, cfg);
  ASSERT_TRUE(twice.ok());
  EXPECT_EQ(twice->labels(), once->labels());
  for (size_t c = 0; c < once->channel_count(); ++c) {
    EXPECT_EQ(twice->samples(c), once->samples(c));
  }
}

TEST(SelectTest, MissingMember) {
  auto rec20 = Select(Tcp22(), *Preset("ch20"));
  ASSERT_TRUE(rec20.ok());
  EXPECT_FALSE(Select(*rec20, *Preset("ch22")).ok());
}

}  // namespace
}  // namespace eegpipe
