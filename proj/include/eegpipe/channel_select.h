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

#ifndef EEGPIPE_CHANNEL_SELECT_H_
#define EEGPIPE_CHANNEL_SELECT_H_

#include <map>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "eegpipe/montage.h"

namespace eegpipe {

// The two ear-referenced TCP channels, collectively "A_x".
inline constexpr char kAxLeft[] = "A1-T3";
inline constexpr char kAxRight[] = "T4-A2";

struct ChannelConfig {
  std::string name;
  std::vector<std::string> members;  // montage channel labels, in order
  bool includes_ax = false;

  size_t size() const { return members.size(); }
};

// Named channel subsets. Built-ins:
//   ch22             full TCP montage (includes A_x)
//   ch20             ch22 without A1-T3 and T4-A2
//   ch16             ch20 without the four FP1/FP2 channels
//   ch8, ch4, ch2    CZ-anchored reduced sets; ch4/ch2 keep one occipital
//   chN+Ax           ch(N-2) plus A1-T3 and T4-A2, for N in {18, 10, 6, 4}
// Members are kept in montage order.
class PresetRegistry {
 public:
  static PresetRegistry Default();

  // "name: channel, channel, ..." lines; '#' comments. Entries replace
  // built-ins of the same name.
  absl::Status LoadOverrides(absl::string_view text);

  absl::StatusOr<ChannelConfig> Get(absl::string_view name) const;
  std::vector<std::string> Names() const;

 private:
  std::map<std::string, ChannelConfig, std::less<>> presets_;
};

// Convenience for PresetRegistry::Default().Get(name).
absl::StatusOr<ChannelConfig> Preset(absl::string_view name);

// Output channels follow cfg order; samples are copied unchanged.
absl::StatusOr<DifferentialRecording> Select(const DifferentialRecording& rec,
                                             const ChannelConfig& cfg);

}  // namespace eegpipe

#endif  // EEGPIPE_CHANNEL_SELECT_H_
