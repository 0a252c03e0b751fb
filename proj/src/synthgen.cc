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

#include "eegpipe/synthgen.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "eegpipe/config.h"
#include "eegpipe/network.h"
#include "eegpipe/status_macros.h"

namespace eegpipe {

namespace {

constexpr uint64_t kBackgroundStream = 0x6261636b;
constexpr uint64_t kBurstStream = 0x62757273;

// Paul Kellet's refined pink filter applied to white Gaussian noise,
// rescaled to unit RMS.
std::vector<double> PinkNoise(size_t n, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> white(0.0, 1.0);
  double b0 = 0, b1 = 0, b2 = 0, b3 = 0, b4 = 0, b5 = 0, b6 = 0;
  std::vector<double> out(n);
  double sum_sq = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double w = white(rng);
    b0 = 0.99886 * b0 + w * 0.0555179;
    b1 = 0.99332 * b1 + w * 0.0750759;
    b2 = 0.96900 * b2 + w * 0.1538520;
    b3 = 0.86650 * b3 + w * 0.3104856;
    b4 = 0.55000 * b4 + w * 0.5329522;
    b5 = -0.7616 * b5 - w * 0.0168980;
    out[i] = b0 + b1 + b2 + b3 + b4 + b5 + b6 + w * 0.5362;
    b6 = w * 0.115926;
    sum_sq += out[i] * out[i];
  }
  const double rms = n > 0 ? std::sqrt(sum_sq / n) : 1.0;
  if (rms > 0.0) {
    for (double& v : out) v /= rms;
  }
  return out;
}

}  // namespace

const std::vector<std::string>& SynthElectrodes() {
  static const auto* const kElectrodes = new std::vector<std::string>{
      "FP1", "FP2", "F7", "F3", "FZ", "F4", "F8", "A1", "T3", "C3", "CZ",
      "C4",  "T4",  "A2", "T5", "P3", "PZ", "P4", "T6", "O1", "O2"};
  return *kElectrodes;
}

absl::Status SynthConfig::Validate() const {
  if (!(duration > 0.0))
    return absl::InvalidArgumentError("duration must be > 0");
  if (!(sample_rate > 0.0)) {
    return absl::InvalidArgumentError("sample_rate must be > 0");
  }
  if (!(background_uv >= 0.0)) {
    return absl::InvalidArgumentError("background_uv must be >= 0");
  }
  if (!(burst_rate_per_hour >= 0.0)) {
    return absl::InvalidArgumentError("burst_rate_per_hour must be >= 0");
  }
  if (!(burst_min_seconds > 0.0) || !(burst_max_seconds >= burst_min_seconds)) {
    return absl::InvalidArgumentError(
        "burst durations must satisfy 0 < min <= max");
  }
  if (!(burst_frequency_hz > 0.0)) {
    return absl::InvalidArgumentError("burst_frequency_hz must be > 0");
  }
  if (!(gain >= 0.0)) return absl::InvalidArgumentError("gain must be >= 0");
  if (footprint.empty())
    return absl::InvalidArgumentError("footprint is empty");
  const auto& known = SynthElectrodes();
  for (const FootprintEntry& f : footprint) {
    if (std::find(known.begin(), known.end(), f.electrode) == known.end()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "footprint electrode ", f.electrode, " is not a 10-20 electrode"));
    }
  }
  return absl::OkStatus();
}

std::string SynthConfig::Canonical() const {
  std::string fp;
  for (const FootprintEntry& f : footprint) {
    absl::StrAppend(&fp, fp.empty() ? "" : ",", f.electrode, ":",
                    absl::StrFormat("%.17g", f.weight));
  }
  return absl::StrFormat(
      "duration=%.17g\nsample_rate=%.17g\nbackground_uv=%.17g\n"
      "burst_rate_per_hour=%.17g\nburst_min_seconds=%.17g\n"
      "burst_max_seconds=%.17g\nburst_frequency_hz=%.17g\ngain=%.17g\n"
      "footprint=%s\nseed=%d\n",
      duration, sample_rate, background_uv, burst_rate_per_hour,
      burst_min_seconds, burst_max_seconds, burst_frequency_hz, gain, fp, seed);
}

absl::StatusOr<SynthConfig> SynthConfig::Parse(absl::string_view text) {
  ASSIGN_OR_RETURN(KeyValueConfig kv, KeyValueConfig::Parse(text));
  SynthConfig cfg;
  const auto get = [&](absl::string_view key, double& out) -> absl::Status {
    return kv.Has(key) ? kv.GetDouble(key, out) : absl::OkStatus();
  };
  RETURN_IF_ERROR(get("duration", cfg.duration));
  RETURN_IF_ERROR(get("sample_rate", cfg.sample_rate));
  RETURN_IF_ERROR(get("background_uv", cfg.background_uv));
  RETURN_IF_ERROR(get("burst_rate_per_hour", cfg.burst_rate_per_hour));
  RETURN_IF_ERROR(get("burst_min_seconds", cfg.burst_min_seconds));
  RETURN_IF_ERROR(get("burst_max_seconds", cfg.burst_max_seconds));
  RETURN_IF_ERROR(get("burst_frequency_hz", cfg.burst_frequency_hz));
  RETURN_IF_ERROR(get("gain", cfg.gain));
  if (kv.Has("seed")) RETURN_IF_ERROR(kv.GetUint64("seed", cfg.seed));
  if (kv.Has("footprint")) {
    std::string text_fp;
    RETURN_IF_ERROR(kv.GetString("footprint", text_fp));
    cfg.footprint.clear();
    for (absl::string_view item :
         absl::StrSplit(text_fp, ',', absl::SkipWhitespace())) {
      std::vector<absl::string_view> parts = absl::StrSplit(item, ':');
      FootprintEntry entry;
      entry.electrode =
          absl::AsciiStrToUpper(absl::StripAsciiWhitespace(parts[0]));
      if (parts.size() > 2 ||
          (parts.size() == 2 &&
           !absl::SimpleAtod(absl::StripAsciiWhitespace(parts[1]),
                             &entry.weight))) {
        return absl::InvalidArgumentError(
            absl::StrCat("bad footprint entry '", item, "'"));
      }
      cfg.footprint.push_back(entry);
    }
  }
  RETURN_IF_ERROR(kv.CheckAllConsumed());
  RETURN_IF_ERROR(cfg.Validate());
  return cfg;
}

absl::StatusOr<EventList> SampleBurstIntervals(const SynthConfig& cfg) {
  RETURN_IF_ERROR(cfg.Validate());
  std::vector<Event> events;
  if (cfg.burst_rate_per_hour > 0.0) {
    std::mt19937_64 rng(MixSeed(cfg.seed, kBurstStream));
    std::exponential_distribution<double> gap(cfg.burst_rate_per_hour / 3600.0);
    std::uniform_real_distribution<double> length(cfg.burst_min_seconds,
                                                  cfg.burst_max_seconds);
    double t = 0.0;
    while (true) {
      const double start = t + gap(rng);
      const double stop = start + length(rng);
      if (stop > cfg.duration) break;
      events.push_back({start, stop, kSeizureLabel});
      t = stop;
    }
  }
  return EventList::Create(std::move(events), cfg.duration);
}

double SpikeWave(double phase) {
  const double spike = std::exp(-std::pow((phase - 0.08) / 0.025, 2.0));
  const double wave = -std::sin(2.0 * M_PI * (phase - 0.15)) * 0.6;
  const double saw = 1.0 - 2.0 * phase;
  return 1.5 * spike + wave + 0.4 * saw;
}

absl::StatusOr<SynthOutput> Generate(const SynthConfig& cfg) {
  RETURN_IF_ERROR(cfg.Validate());
  ASSIGN_OR_RETURN(EventList events, SampleBurstIntervals(cfg));
  const auto n =
      static_cast<size_t>(std::llround(cfg.duration * cfg.sample_rate));
  const auto& labels = SynthElectrodes();
  std::vector<std::vector<double>> samples(labels.size());
  const uint64_t background_seed = MixSeed(cfg.seed, kBackgroundStream);
  for (size_t e = 0; e < labels.size(); ++e) {
    samples[e] = PinkNoise(n, MixSeed(background_seed, e));
    for (double& v : samples[e]) v *= cfg.background_uv;
  }
  if (cfg.gain > 0.0) {
    const double amplitude = cfg.gain * cfg.background_uv;
    for (const Event& ev : events.events()) {
      const auto first =
          static_cast<size_t>(std::ceil(ev.start * cfg.sample_rate));
      const auto last = std::min(
          n, static_cast<size_t>(std::ceil(ev.stop * cfg.sample_rate)));
      for (size_t i = first; i < last; ++i) {
        const double t = i / cfg.sample_rate - ev.start;
        double cycles = t * cfg.burst_frequency_hz;
        const double value = amplitude * SpikeWave(cycles - std::floor(cycles));
        for (const FootprintEntry& f : cfg.footprint) {
          const size_t idx =
              std::find(labels.begin(), labels.end(), f.electrode) -
              labels.begin();
          samples[idx][i] += f.weight * value;
        }
      }
    }
  }
  ASSIGN_OR_RETURN(Recording rec, Recording::Create(labels, std::move(samples),
                                                    cfg.sample_rate));
  return SynthOutput{std::move(rec), std::move(events)};
}

}  // namespace eegpipe
