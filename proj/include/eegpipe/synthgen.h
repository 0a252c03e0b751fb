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

#ifndef EEGPIPE_SYNTHGEN_H_
#define EEGPIPE_SYNTHGEN_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "eegpipe/edf.h"
#include "eegpipe/events.h"

namespace eegpipe {

// 10-20 electrodes written by the generator, including both ear references.
const std::vector<std::string>& SynthElectrodes();

struct FootprintEntry {
  std::string electrode;
  double weight = 1.0;
};

struct SynthConfig {
  double duration = 3600.0;     // seconds
  double sample_rate = 250.0;   // Hz
  double background_uv = 20.0;  // RMS of the pink background
  double burst_rate_per_hour = 12.0;
  double burst_min_seconds = 10.0;
  double burst_max_seconds = 40.0;
  double burst_frequency_hz = 3.0;
  double gain = 3.0;  // burst amplitude in units of background_uv
  std::vector<FootprintEntry> footprint = {
      {"F7", 0.5}, {"T3", 1.0}, {"T5", 0.5}};
  uint64_t seed = 1;

  absl::Status Validate() const;
  std::string Canonical() const;
  // Keys match the field names; footprint is "F7:0.5,T3:1,T5:0.5".
  static absl::StatusOr<SynthConfig> Parse(absl::string_view text);
};

struct SynthOutput {
  Recording recording;
  EventList events;
};

// Seizure intervals from a renewal process with exponential gaps.
absl::StatusOr<EventList> SampleBurstIntervals(const SynthConfig& cfg);

// One period of the spike-and-wave template at phase in [0, 1).
double SpikeWave(double phase);

absl::StatusOr<SynthOutput> Generate(const SynthConfig& cfg);

}  // namespace eegpipe

#endif  // EEGPIPE_SYNTHGEN_H_
