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

#include "eegpipe/config.h"

#include "absl/status/status.h"
#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "json.hpp"

namespace eegpipe {

absl::StatusOr<KeyValueConfig> KeyValueConfig::Parse(absl::string_view text) {
  KeyValueConfig cfg;
  absl::string_view trimmed = absl::StripAsciiWhitespace(text);
  if (!trimmed.empty() && trimmed.front() == '{') {
    nlohmann::json doc = nlohmann::json::parse(trimmed, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
      return absl::InvalidArgumentError("config is not a JSON object");
    }
    for (const auto& [key, value] : doc.items()) {
      if (value.is_string()) {
        cfg.entries_[key] = value.get<std::string>();
      } else if (value.is_primitive()) {
        cfg.entries_[key] = value.dump();
      } else {
        return absl::InvalidArgumentError(
            absl::StrCat("config key ", key, ": nested values unsupported"));
      }
    }
  } else {
    int line_no = 0;
    for (absl::string_view raw : absl::StrSplit(text, '\n')) {
      ++line_no;
      absl::string_view line = raw;
      if (size_t hash = line.find('#'); hash != absl::string_view::npos) {
        line = line.substr(0, hash);
      }
      line = absl::StripAsciiWhitespace(line);
      if (line.empty()) continue;
      size_t eq = line.find('=');
      if (eq == absl::string_view::npos) {
        return absl::InvalidArgumentError(
            absl::StrCat("config line ", line_no, ": expected key = value"));
      }
      std::string key(absl::StripAsciiWhitespace(line.substr(0, eq)));
      if (key.empty()) {
        return absl::InvalidArgumentError(
            absl::StrCat("config line ", line_no, ": empty key"));
      }
      if (cfg.entries_.count(key) != 0) {
        return absl::InvalidArgumentError(
            absl::StrCat("config line ", line_no, ": duplicate key ", key));
      }
      cfg.entries_[key] =
          std::string(absl::StripAsciiWhitespace(line.substr(eq + 1)));
    }
  }
  for (const auto& [key, value] : cfg.entries_) cfg.consumed_[key] = false;
  return cfg;
}

bool KeyValueConfig::Has(absl::string_view key) const {
  return entries_.find(key) != entries_.end();
}

#define EEGPIPE_KV_GETTER(Name, Type, Parser)                                  \
  absl::Status KeyValueConfig::Name(absl::string_view key, Type& out) {        \
    auto it = entries_.find(key);                                              \
    if (it == entries_.end()) return absl::OkStatus();                         \
    consumed_.find(key)->second = true;                                        \
    if (!Parser(it->second, &out)) {                                           \
      return absl::InvalidArgumentError(                                       \
          absl::StrCat("config key ", key, ": bad value '", it->second, "'")); \
    }                                                                          \
    return absl::OkStatus();                                                   \
  }

EEGPIPE_KV_GETTER(GetInt, int, absl::SimpleAtoi)
EEGPIPE_KV_GETTER(GetInt64, int64_t, absl::SimpleAtoi)
EEGPIPE_KV_GETTER(GetUint64, uint64_t, absl::SimpleAtoi)
EEGPIPE_KV_GETTER(GetDouble, double, absl::SimpleAtod)
EEGPIPE_KV_GETTER(GetBool, bool, absl::SimpleAtob)

#undef EEGPIPE_KV_GETTER

absl::Status KeyValueConfig::GetString(absl::string_view key,
                                       std::string& out) {
  auto it = entries_.find(key);
  if (it == entries_.end()) return absl::OkStatus();
  consumed_.find(key)->second = true;
  out = it->second;
  return absl::OkStatus();
}

absl::Status KeyValueConfig::CheckAllConsumed() const {
  for (const auto& [key, used] : consumed_) {
    if (!used) {
      return absl::InvalidArgumentError(
          absl::StrCat("unknown config key ", key));
    }
  }
  return absl::OkStatus();
}

}  // namespace eegpipe
