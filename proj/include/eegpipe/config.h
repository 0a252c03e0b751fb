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

#ifndef EEGPIPE_CONFIG_H_
#define EEGPIPE_CONFIG_H_

#include <cstdint>
#include <map>
#include <string>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"

namespace eegpipe {

// Flat string map parsed from either "key = value" lines ('#' comments) or a
// flat JSON object. Lookups record which keys were consumed so callers can
// reject unknown keys.
class KeyValueConfig {
 public:
  static absl::StatusOr<KeyValueConfig> Parse(absl::string_view text);

  bool Has(absl::string_view key) const;
  absl::Status GetInt(absl::string_view key, int& out);
  absl::Status GetInt64(absl::string_view key, int64_t& out);
  absl::Status GetUint64(absl::string_view key, uint64_t& out);
  absl::Status GetDouble(absl::string_view key, double& out);
  absl::Status GetString(absl::string_view key, std::string& out);
  absl::Status GetBool(absl::string_view key, bool& out);
  // Fails naming the first key never read by a getter.
  absl::Status CheckAllConsumed() const;

  const std::map<std::string, std::string, std::less<>>& entries() const {
    return entries_;
  }

 private:
  std::map<std::string, std::string, std::less<>> entries_;
  std::map<std::string, bool, std::less<>> consumed_;
};

}  // namespace eegpipe

#endif  // EEGPIPE_CONFIG_H_
