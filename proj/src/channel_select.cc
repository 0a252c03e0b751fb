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

#include "absl/status/status.h"
#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"

namespace eegpipe {

namespace {

bool IsAx(absl::string_view label) {
  return label == kAxLeft || label == kAxRight;
}

// Keeps montage order so spatial neighbours stay adjacent on the CNN grid.
ChannelConfig FromTcp(std::string name, const std::set<std::string>& keep) {
  ChannelConfig cfg;
  cfg.name = std::move(name);
  for (const std::string& label : DefaultTcpMontage().ChannelLabels()) {
    if (keep.count(label)) {
      cfg.members.push_back(label);
      cfg.includes_ax = cfg.includes_ax || IsAx(label);
    }
  }
  return cfg;
}

}  // namespace

PresetRegistry PresetRegistry::Default() {
  const std::vector<std::string> tcp = DefaultTcpMontage().ChannelLabels();
  std::set<std::string> ch22(tcp.begin(), tcp.end());

  std::set<std::string> ch20 = ch22;
  ch20.erase(kAxLeft);
  ch20.erase(kAxRight);

  std::set<std::string> ch16 = ch20;
  for (const char* fp : {"FP1-F7", "FP2-F8", "FP1-F3", "FP2-F4"}) {
    ch16.erase(fp);
  }

  const std::set<std::string> ch8 = {"F7-T3", "T3-T5", "F8-T4", "T4-T6",
                                     "C3-CZ", "CZ-C4", "P3-O1", "P4-O2"};
  const std::set<std::string> ch4 = {"C3-CZ", "CZ-C4", "T3-T5", "T5-O1"};
  const std::set<std::string> ch2 = {"C3-CZ", "P3-O1"};

  auto with_ax = [](std::set<std::string> s) {
    s.insert(kAxLeft);
    s.insert(kAxRight);
    return s;
  };

  PresetRegistry r;
  for (ChannelConfig cfg :
       {FromTcp("ch22", ch22), FromTcp("ch20", ch20), FromTcp("ch16", ch16),
        FromTcp("ch8", ch8), FromTcp("ch4", ch4), FromTcp("ch2", ch2),
        FromTcp("ch18+Ax", with_ax(ch16)), FromTcp("ch10+Ax", with_ax(ch8)),
        FromTcp("ch6+Ax", with_ax(ch4)), FromTcp("ch4+Ax", with_ax(ch2))}) {
    r.presets_[cfg.name] = cfg;
  }
  ChannelConfig ch22_ax = r.presets_["ch22"];
  ch22_ax.name = "ch22+Ax";
  r.presets_[ch22_ax.name] = ch22_ax;
  return r;
}

absl::Status PresetRegistry::LoadOverrides(absl::string_view text) {
  int line_no = 0;
  for (absl::string_view raw : absl::StrSplit(text, '\n')) {
    ++line_no;
    absl::string_view line = raw;
    if (size_t hash = line.find('#'); hash != absl::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = absl::StripAsciiWhitespace(line);
    if (line.empty()) continue;
    size_t colon = line.find(':');
    if (colon == absl::string_view::npos) {
      return absl::InvalidArgumentError(absl::StrCat(
          "preset line ", line_no, ": expected 'name: channel, ...'"));
    }
    ChannelConfig cfg;
    cfg.name = std::string(absl::StripAsciiWhitespace(line.substr(0, colon)));
    std::set<std::string> seen;
    for (absl::string_view m :
         absl::StrSplit(line.substr(colon + 1), ',', absl::SkipWhitespace())) {
      std::string label = absl::AsciiStrToUpper(absl::StripAsciiWhitespace(m));
      if (!seen.insert(label).second) {
        return absl::InvalidArgumentError(
            absl::StrCat("preset ", cfg.name, ": duplicate channel ", label));
      }
      cfg.includes_ax = cfg.includes_ax || IsAx(label);
      cfg.members.push_back(std::move(label));
    }
    if (cfg.name.empty() || cfg.members.empty()) {
      return absl::InvalidArgumentError(
          absl::StrCat("preset line ", line_no, ": empty name or member list"));
    }
    presets_[cfg.name] = std::move(cfg);
  }
  return absl::OkStatus();
}

absl::StatusOr<ChannelConfig> PresetRegistry::Get(
    absl::string_view name) const {
  auto it = presets_.find(name);
  if (it == presets_.end()) {
    return absl::NotFoundError(absl::StrCat("unknown preset ", name));
  }
  return it->second;
}

std::vector<std::string> PresetRegistry::Names() const {
  std::vector<std::string> out;
  for (const auto& [name, cfg] : presets_) out.push_back(name);
  return out;
}

absl::StatusOr<ChannelConfig> Preset(absl::string_view name) {
  static const PresetRegistry* registry =
      new PresetRegistry(PresetRegistry::Default());
  return registry->Get(name);
}

absl::StatusOr<DifferentialRecording> Select(const DifferentialRecording& rec,
                                             const ChannelConfig& cfg) {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> samples;
  for (const std::string& member : cfg.members) {
    auto it = std::find_if(rec.labels().begin(), rec.labels().end(),
                           [&](const std::string& l) {
                             return absl::EqualsIgnoreCase(l, member);
                           });
    if (it == rec.labels().end()) {
      return absl::NotFoundError(absl::StrCat("channel ", member, " of preset ",
                                              cfg.name,
                                              " absent from recording"));
    }
    labels.push_back(*it);
    samples.push_back(
        rec.samples(static_cast<size_t>(it - rec.labels().begin())));
  }
  return DifferentialRecording::Create(std::move(labels), std::move(samples),
                                       rec.sample_rate());
}

}  // namespace eegpipe
