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

#include "eegpipe/edf.h"

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "absl/strings/str_cat.h"
#include "gtest/gtest.h"

namespace eegpipe {
namespace {

struct RawSignal {
  std::string label;
  int physical_min, physical_max, digital_min, digital_max, samples_per_record;
};

std::string Field(const std::string& text, size_t width) {
  std::string out = text;
  out.resize(width, ' ');
  return out;
}

// Lays out an EDF file field by field, independently of the writer.
std::string BuildEdf(const std::vector<RawSignal>& signals,
                     const std::vector<std::vector<int16_t>>& records,
                     int record_duration = 1) {
  const size_t ns = signals.size();
  std::string out;
  out += Field("0", 8);
  out += Field("patient", 80);
  out += Field("recording", 80);
  out += Field("01.01.00", 8);
  out += Field("00.00.00", 8);
  out += Field(absl::StrCat(256 + 256 * ns), 8);
  out += Field("", 44);
  out += Field(absl::StrCat(records.size()), 8);
  out += Field(absl::StrCat(record_duration), 8);
  out += Field(absl::StrCat(ns), 4);
  for (const auto& s : signals) out += Field(s.label, 16);
  for (size_t i = 0; i < ns; ++i) out += Field("", 80);
  for (size_t i = 0; i < ns; ++i) out += Field("uV", 8);
  for (const auto& s : signals) out += Field(absl::StrCat(s.physical_min), 8);
  for (const auto& s : signals) out += Field(absl::StrCat(s.physical_max), 8);
  for (const auto& s : signals) out += Field(absl::StrCat(s.digital_min), 8);
  for (const auto& s : signals) out += Field(absl::StrCat(s.digital_max), 8);
  for (size_t i = 0; i < ns; ++i) out += Field("", 80);
  for (const auto& s : signals) {
    out += Field(absl::StrCat(s.samples_per_record), 8);
  }
  for (size_t i = 0; i < ns; ++i) out += Field("", 32);
  for (const auto& record : records) {
    for (int16_t v : record) {
      const auto u = static_cast<uint16_t>(v);
      out.push_back(static_cast<char>(u & 0xff));
      out.push_back(static_cast<char>(u >> 8));
    }
  }
  return out;
}

TEST(ParseEdfTest, IdentityCalibration) {
  const std::string bytes =
      BuildEdf({{"C3", -100, 100, -100, 100, 2}}, {{0, 50}});
  auto edf = ParseEdf(bytes);
  ASSERT_TRUE(edf.ok()) << edf.status();
  EXPECT_EQ(edf->Physical(0), (std::vector<double>{0.0, 50.0}));
  EXPECT_EQ(edf->SampleRate(0), 2.0);
  auto again = WriteEdf(*edf);
  ASSERT_TRUE(again.ok());
  EXPECT_EQ(*again, bytes);
}

TEST(ParseEdfTest, FullRangeCalibrationOfZero) {
  // -100 + (0 - (-32768)) * 200 / 65535 = 100 / 65535.
  const std::string bytes =
      BuildEdf({{"C3", -100, 100, -32768, 32767, 1}}, {{0}});
  auto edf = ParseEdf(bytes);
  ASSERT_TRUE(edf.ok());
  EXPECT_NEAR(edf->Physical(0)[0], 0.0015259021896696422, 1e-15);
}

TEST(ParseEdfTest, TwoSignalsThreeRecords) {
  const std::vector<RawSignal> signals = {{"FP1", -500, 500, -2048, 2047, 3},
                                          {"F7", -200, 200, -32768, 32767, 2}};
  const std::vector<std::vector<int16_t>> records = {
      {1, 2, 3, -4, 5}, {-2048, 0, 2047, 32767, -32768}, {7, 8, 9, 10, 11}};
  const std::string bytes = BuildEdf(signals, records);
  auto edf = ParseEdf(bytes);
  ASSERT_TRUE(edf.ok()) << edf.status();
  EXPECT_EQ(edf->header.HeaderBytes(), 768);
  EXPECT_EQ(edf->digital[0],
            (std::vector<int16_t>{1, 2, 3, -2048, 0, 2047, 7, 8, 9}));
  EXPECT_EQ(edf->digital[1],
            (std::vector<int16_t>{-4, 5, 32767, -32768, 10, 11}));
  auto written = WriteEdf(*edf);
  ASSERT_TRUE(written.ok());
  EXPECT_EQ(*written, bytes);
}

TEST(ParseEdfTest, TruncatedRecord) {
  std::string bytes =
      BuildEdf({{"C3", -100, 100, -100, 100, 4}}, {{1, 2, 3, 4}});
  bytes.resize(bytes.size() - 3);
  auto edf = ParseEdf(bytes);
  ASSERT_FALSE(edf.ok());
  EXPECT_NE(edf.status().message().find("truncated data record"),
            std::string::npos);
}

TEST(ParseEdfTest, NonNumericField) {
  std::string bytes = BuildEdf({{"C3", -100, 100, -100, 100, 1}}, {{1}});
  bytes.replace(236, 8, Field("abc", 8));  // record count
  auto edf = ParseEdf(bytes);
  ASSERT_FALSE(edf.ok());
  EXPECT_NE(edf.status().message().find("non-numeric"), std::string::npos);
}

TEST(ParseEdfTest, DigitalRangeMustIncrease) {
  const std::string bytes = BuildEdf({{"C3", -100, 100, 100, 100, 1}}, {{1}});
  EXPECT_FALSE(ParseEdf(bytes).ok());
}

TEST(ParseEdfTest, ShortHeader) { EXPECT_FALSE(ParseEdf("0       ").ok()); }

TEST(EdfRecordingTest, MixedRatesRejected) {
  const std::string bytes = BuildEdf(
      {{"C3", -100, 100, -100, 100, 2}, {"C4", -100, 100, -100, 100, 1}},
      {{1, 2, 3}});
  auto edf = ParseEdf(bytes);
  ASSERT_TRUE(edf.ok());
  auto rec = edf->ToRecording();
  ASSERT_FALSE(rec.ok());
  EXPECT_NE(rec.status().message().find("mixed sample rates"),
            std::string::npos);
  const std::vector<std::string> one = {"c4"};
  auto single = edf->ToRecording(one);
  ASSERT_TRUE(single.ok());
  EXPECT_EQ(single->labels(), (std::vector<std::string>{"C4"}));
}

TEST(WriteEdfTest, RejectsOutOfRangeSample) {
  auto rec = Recording::Create({"C3"}, {{0.0, 101.0}}, 2.0);
  ASSERT_TRUE(rec.ok());
  EdfHeader header;
  header.record_count = 1;
  SignalDescriptor s;
  s.label = "C3";
  s.physical_min = -100;
  s.physical_max = 100;
  s.samples_per_record = 2;
  header.signals = {s};
  auto bytes = WriteEdf(*rec, header);
  ASSERT_FALSE(bytes.ok());
  EXPECT_EQ(bytes.status().code(), absl::StatusCode::kOutOfRange);
}

TEST(WriteEdfTest, RandomRoundTrips) {
  std::mt19937_64 rng(424242);
  std::uniform_int_distribution<int> signal_count(1, 4), record_count(1, 5),
      spr(1, 40), value(-32768, 32767);
  for (int trial = 0; trial < 100; ++trial) {
    EdfFile file;
    const int ns = signal_count(rng);
    file.header.record_count = record_count(rng);
    file.header.record_duration = 1.0;
    for (int s = 0; s < ns; ++s) {
      SignalDescriptor d;
      d.label = absl::StrCat("S", s);
      d.physical_min = -250.5;
      d.physical_max = 250.5;
      d.samples_per_record = spr(rng);
      file.header.signals.push_back(d);
      std::vector<int16_t> samples(d.samples_per_record *
                                   file.header.record_count);
      for (auto& v : samples) v = static_cast<int16_t>(value(rng));
      file.digital.push_back(samples);
    }
    auto bytes = WriteEdf(file);
    ASSERT_TRUE(bytes.ok());
    auto parsed = ParseEdf(*bytes);
    ASSERT_TRUE(parsed.ok()) << parsed.status();
    ASSERT_EQ(parsed->digital, file.digital) << "trial " << trial;
    for (int s = 0; s < ns; ++s) {
      EXPECT_EQ(parsed->digital[s].size(),
                static_cast<size_t>(file.header.record_count *
                                    file.header.signals[s].samples_per_record));
    }
  }
}

TEST(WriteEdfTest, PhysicalRoundTripWithinOneStep) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> noise(0.0, 30.0);
  std::vector<std::vector<double>> samples(3, std::vector<double>(500));
  for (auto& ch : samples) {
    for (double& v : ch) v = noise(rng);
  }
  auto rec = Recording::Create({"FP1", "F7", "T3"}, samples, 250.0);
  ASSERT_TRUE(rec.ok());
  auto header = DefaultHeaderFor(*rec);
  ASSERT_TRUE(header.ok());
  auto bytes = WriteEdf(*rec, *header);
  ASSERT_TRUE(bytes.ok()) << bytes.status();
  auto edf = ParseEdf(*bytes);
  ASSERT_TRUE(edf.ok());
  auto back = edf->ToRecording();
  ASSERT_TRUE(back.ok());
  EXPECT_EQ(back->labels(), rec->labels());
  EXPECT_EQ(back->sample_rate(), 250.0);
  for (size_t c = 0; c < 3; ++c) {
    const double step = header->signals[c].Gain();
    for (size_t i = 0; i < 500; ++i) {
      EXPECT_LE(std::abs(back->samples(c)[i] - samples[c][i]), step);
    }
  }
}

TEST(RecordingTest, Validation) {
  EXPECT_FALSE(Recording::Create({"A"}, {{1.0}, {2.0}}, 1.0).ok());
  EXPECT_FALSE(Recording::Create({"A", "B"}, {{1.0}, {2.0, 3.0}}, 1.0).ok());
  EXPECT_FALSE(Recording::Create({"A"}, {{1.0}}, 0.0).ok());
}

}  // namespace
}  // namespace eegpipe
