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

#include "eegpipe/features.h"

#include <algorithm>
#include <cmath>
#include <memory>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "eegpipe/binary_io.h"
#include "eegpipe/config.h"
#include "eegpipe/dsp.h"
#include "eegpipe/parallel.h"
#include "eegpipe/status_macros.h"

namespace eegpipe {

namespace {

constexpr char kFeatureMagic[] = "EEGPFEAT";
constexpr uint32_t kFeatureVersion = 1;

// Window-length dependent state shared by all frames of a channel.
class LfccAnalyzer {
 public:
  LfccAnalyzer(size_t window_len, double sample_rate, const FeatureConfig& cfg)
      : cfg_(cfg),
        fft_len_(NextPowerOfTwo(window_len)),
        subframe_len_(std::max<size_t>(
            1, static_cast<size_t>(
                   std::llround(sample_rate * cfg.subframe_duration)))),
        hamming_(HammingWindow(window_len)),
        filterbank_(cfg.filterbank_size, fft_len_, sample_rate) {}

  std::vector<double> LogEnergies(std::span<const double> window) const {
    std::vector<double> tapered(window.size());
    for (size_t i = 0; i < window.size(); ++i) {
      tapered[i] = window[i] * hamming_[i];
    }
    std::vector<double> energies =
        filterbank_.Apply(PowerSpectrum(tapered, fft_len_));
    for (double& e : energies) e = std::log(std::max(e, cfg_.fft_floor));
    return energies;
  }

  BaseFeatures Compute(std::span<const double> window) const {
    BaseFeatures out{};
    double energy = 0.0;
    for (double x : window) energy += x * x;
    out[0] = std::log(energy + cfg_.fft_floor);

    const std::vector<double> cepstra =
        DctII(LogEnergies(window), 1, cfg_.cepstral_count);
    for (int j = 0; j < cfg_.cepstral_count; ++j) out[1 + j] = cepstra[j];

    // Spread of subframe log energies across the window.
    double lo = 0.0;
    double hi = 0.0;
    const size_t count = std::max<size_t>(1, window.size() / subframe_len_);
    for (size_t s = 0; s < count; ++s) {
      double e = 0.0;
      const size_t end = std::min(window.size(), (s + 1) * subframe_len_);
      for (size_t i = s * subframe_len_; i < end; ++i) {
        e += window[i] * window[i];
      }
      const double le = std::log(e + cfg_.fft_floor);
      if (s == 0 || le < lo) lo = le;
      if (s == 0 || le > hi) hi = le;
    }
    out[kBaseFeatureCount - 1] = hi - lo;
    return out;
  }

 private:
  FeatureConfig cfg_;
  size_t fft_len_;
  size_t subframe_len_;
  std::vector<double> hamming_;
  LinearFilterbank filterbank_;
};

}  // namespace

absl::Status FeatureConfig::Validate() const {
  if (!(frame_duration > 0.0) || !(window_duration >= frame_duration)) {
    return absl::InvalidArgumentError(
        "require window_duration >= frame_duration > 0");
  }
  if (std::fabs(kFramesPerEpoch * frame_duration - 1.0) > 1e-9) {
    return absl::InvalidArgumentError(
        "frame_duration must give 10 frames per 1 s epoch");
  }
  if (cepstral_count < 1 || cepstral_count >= filterbank_size) {
    return absl::InvalidArgumentError(
        "require 1 <= cepstral_count < filterbank_size");
  }
  if (cepstral_count != kBaseFeatureCount - 2) {
    return absl::InvalidArgumentError(
        "cepstral_count must be 7 for the 26-dim layout");
  }
  if (!(fft_floor > 0.0)) {
    return absl::InvalidArgumentError("fft_floor must be positive");
  }
  if (delta_window < 3 || delta_window % 2 == 0) {
    return absl::InvalidArgumentError("delta_window must be odd and >= 3");
  }
  if (!(subframe_duration > 0.0)) {
    return absl::InvalidArgumentError("subframe_duration must be positive");
  }
  return absl::OkStatus();
}

std::string FeatureConfig::Canonical() const {
  return absl::StrFormat(
      "frame_duration=%.17g\nwindow_duration=%.17g\ncepstral_count=%d\n"
      "filterbank_size=%d\nfft_floor=%.17g\ndelta_window=%d\n"
      "subframe_duration=%.17g\ncomposition=%d\nwindow=hamming\n",
      frame_duration, window_duration, cepstral_count, filterbank_size,
      fft_floor, delta_window, subframe_duration,
      static_cast<int>(composition));
}

uint64_t FeatureConfig::Hash() const { return Fnv1a64(Canonical()); }

absl::StatusOr<FeatureConfig> FeatureConfig::Parse(absl::string_view text) {
  ASSIGN_OR_RETURN(KeyValueConfig kv, KeyValueConfig::Parse(text));
  FeatureConfig cfg;
  RETURN_IF_ERROR(kv.GetDouble("frame_duration", cfg.frame_duration));
  RETURN_IF_ERROR(kv.GetDouble("window_duration", cfg.window_duration));
  RETURN_IF_ERROR(kv.GetInt("cepstral_count", cfg.cepstral_count));
  RETURN_IF_ERROR(kv.GetInt("filterbank_size", cfg.filterbank_size));
  RETURN_IF_ERROR(kv.GetDouble("fft_floor", cfg.fft_floor));
  RETURN_IF_ERROR(kv.GetInt("delta_window", cfg.delta_window));
  RETURN_IF_ERROR(kv.GetDouble("subframe_duration", cfg.subframe_duration));
  std::string composition;
  RETURN_IF_ERROR(kv.GetString("composition", composition));
  if (composition == "drop_delta_delta_log_energy") {
    cfg.composition = FeatureComposition::kDropDeltaDeltaLogEnergy;
  } else if (!composition.empty() &&
             composition != "drop_delta_delta_differential_energy") {
    return absl::InvalidArgumentError(
        absl::StrCat("unknown composition ", composition));
  }
  RETURN_IF_ERROR(kv.CheckAllConsumed());
  RETURN_IF_ERROR(cfg.Validate());
  return cfg;
}

absl::StatusOr<FrameGeometry> FrameGeometry::For(double sample_rate,
                                                 const FeatureConfig& cfg) {
  RETURN_IF_ERROR(cfg.Validate());
  FrameGeometry g;
  g.step = sample_rate * cfg.frame_duration;
  g.window_len =
      static_cast<size_t>(std::llround(sample_rate * cfg.window_duration));
  if (g.step < 1.0 || g.window_len < 1) {
    return absl::InvalidArgumentError(
        absl::StrFormat("sample rate %g Hz too low for %g s frames",
                        sample_rate, cfg.frame_duration));
  }
  g.lead = 0.5 * (cfg.window_duration - cfg.frame_duration) * sample_rate;
  g.fft_len = NextPowerOfTwo(g.window_len);
  g.subframe_len = std::max<size_t>(
      1,
      static_cast<size_t>(std::llround(sample_rate * cfg.subframe_duration)));
  return g;
}

size_t FrameGeometry::FrameCount(size_t samples) const {
  return static_cast<size_t>(std::floor(samples / step + 1e-9));
}

int64_t FrameGeometry::WindowStart(size_t frame) const {
  return static_cast<int64_t>(std::floor(frame * step - lead + 1e-9));
}

absl::StatusOr<std::vector<std::vector<double>>> FrameSignal(
    std::span<const double> samples, double sample_rate,
    const FeatureConfig& cfg) {
  if (samples.empty()) return absl::InvalidArgumentError("empty signal");
  ASSIGN_OR_RETURN(FrameGeometry g, FrameGeometry::For(sample_rate, cfg));
  const size_t frames = g.FrameCount(samples.size());
  std::vector<std::vector<double>> windows(frames,
                                           std::vector<double>(g.window_len));
  const int64_t n = static_cast<int64_t>(samples.size());
  for (size_t t = 0; t < frames; ++t) {
    const int64_t start = g.WindowStart(t);
    for (size_t i = 0; i < g.window_len; ++i) {
      const int64_t s = start + static_cast<int64_t>(i);
      windows[t][i] = (s >= 0 && s < n) ? samples[s] : 0.0;
    }
  }
  return windows;
}

absl::StatusOr<std::vector<double>> FilterbankLogEnergies(
    std::span<const double> window, double sample_rate,
    const FeatureConfig& cfg) {
  if (window.size() < 2) {
    return absl::InvalidArgumentError("window shorter than 2 samples");
  }
  return LfccAnalyzer(window.size(), sample_rate, cfg).LogEnergies(window);
}

absl::StatusOr<BaseFeatures> LfccFrame(std::span<const double> window,
                                       double sample_rate,
                                       const FeatureConfig& cfg) {
  if (window.size() < 2) {
    return absl::InvalidArgumentError("window shorter than 2 samples");
  }
  RETURN_IF_ERROR(cfg.Validate());
  return LfccAnalyzer(window.size(), sample_rate, cfg).Compute(window);
}

std::vector<std::vector<double>> Deltas(
    const std::vector<std::vector<double>>& seq, const FeatureConfig& cfg) {
  const int half = (cfg.delta_window - 1) / 2;
  double denom = 0.0;
  for (int k = 1; k <= half; ++k) denom += k * k;
  denom *= 2.0;
  const int64_t len = static_cast<int64_t>(seq.size());
  std::vector<std::vector<double>> out(seq.size());
  for (int64_t t = 0; t < len; ++t) {
    out[t].assign(seq[t].size(), 0.0);
    for (int k = 1; k <= half; ++k) {
      const auto& ahead = seq[std::min(len - 1, t + k)];
      const auto& behind = seq[std::max<int64_t>(0, t - k)];
      for (size_t d = 0; d < out[t].size(); ++d) {
        out[t][d] += k * (ahead[d] - behind[d]);
      }
    }
    for (double& v : out[t]) v /= denom;
  }
  return out;
}

absl::StatusOr<std::array<double, kFeatureDim>> Assemble(
    std::span<const double> base, std::span<const double> d1,
    std::span<const double> d2, FeatureComposition composition) {
  if (base.size() != kBaseFeatureCount || d1.size() != kBaseFeatureCount ||
      d2.size() != kBaseFeatureCount) {
    return absl::InvalidArgumentError(
        absl::StrCat("expected 9/9/9 feature entries, got ", base.size(), "/",
                     d1.size(), "/", d2.size()));
  }
  const size_t dropped =
      composition == FeatureComposition::kDropDeltaDeltaDifferentialEnergy
          ? kBaseFeatureCount - 1
          : 0;
  std::array<double, kFeatureDim> out{};
  size_t k = 0;
  for (double v : base) out[k++] = v;
  for (double v : d1) out[k++] = v;
  for (size_t i = 0; i < d2.size(); ++i) {
    if (i != dropped) out[k++] = d2[i];
  }
  return out;
}

absl::StatusOr<std::vector<std::array<double, kFeatureDim>>> ChannelFeatures(
    std::span<const double> samples, double sample_rate,
    const FeatureConfig& cfg) {
  ASSIGN_OR_RETURN(auto windows, FrameSignal(samples, sample_rate, cfg));
  if (windows.empty()) {
    return absl::InvalidArgumentError("signal shorter than one frame");
  }
  if (windows.front().size() < 2) {
    return absl::InvalidArgumentError("window shorter than 2 samples");
  }
  LfccAnalyzer analyzer(windows.front().size(), sample_rate, cfg);
  std::vector<std::vector<double>> base(windows.size());
  for (size_t t = 0; t < windows.size(); ++t) {
    BaseFeatures b = analyzer.Compute(windows[t]);
    base[t].assign(b.begin(), b.end());
  }
  const auto d1 = Deltas(base, cfg);
  const auto d2 = Deltas(d1, cfg);
  std::vector<std::array<double, kFeatureDim>> out(base.size());
  for (size_t t = 0; t < base.size(); ++t) {
    ASSIGN_OR_RETURN(out[t], Assemble(base[t], d1[t], d2[t], cfg.composition));
  }
  return out;
}

FeatureTensor::FeatureTensor(size_t epochs,
                             std::vector<std::string> channel_labels,
                             double duration_seconds, uint64_t config_hash)
    : epochs_(epochs),
      labels_(std::move(channel_labels)),
      duration_seconds_(duration_seconds),
      config_hash_(config_hash),
      values_(epochs * kFramesPerEpoch * labels_.size() * kFeatureDim, 0.0f) {}

std::string FeatureTensor::Serialize() const {
  ByteWriter w;
  w.PutRaw(kFeatureMagic);
  w.PutU32(kFeatureVersion);
  w.PutU32(static_cast<uint32_t>(epochs_));
  w.PutU32(kFramesPerEpoch);
  w.PutU32(static_cast<uint32_t>(labels_.size()));
  w.PutU32(kFeatureDim);
  w.PutU64(config_hash_);
  w.PutF64(duration_seconds_);
  for (const auto& l : labels_) w.PutString(l);
  for (float v : values_) w.PutF32(v);
  return w.Release();
}

absl::StatusOr<FeatureTensor> FeatureTensor::Parse(absl::string_view bytes) {
  ByteReader r(bytes);
  ASSIGN_OR_RETURN(absl::string_view magic, r.GetRaw(8));
  if (magic != kFeatureMagic) {
    return absl::InvalidArgumentError("not a feature tensor file");
  }
  ASSIGN_OR_RETURN(uint32_t version, r.GetU32());
  if (version != kFeatureVersion) {
    return absl::InvalidArgumentError(
        absl::StrCat("unsupported feature file version ", version));
  }
  ASSIGN_OR_RETURN(uint32_t epochs, r.GetU32());
  ASSIGN_OR_RETURN(uint32_t frames, r.GetU32());
  ASSIGN_OR_RETURN(uint32_t channels, r.GetU32());
  ASSIGN_OR_RETURN(uint32_t dims, r.GetU32());
  if (frames != kFramesPerEpoch || dims != kFeatureDim || channels == 0) {
    return absl::InvalidArgumentError(absl::StrCat(
        "unexpected feature layout ", frames, "x", channels, "x", dims));
  }
  ASSIGN_OR_RETURN(uint64_t hash, r.GetU64());
  ASSIGN_OR_RETURN(double duration, r.GetF64());
  std::vector<std::string> labels(channels);
  for (auto& l : labels) {
    ASSIGN_OR_RETURN(l, r.GetString());
  }
  FeatureTensor t(epochs, std::move(labels), duration, hash);
  if (r.remaining() != t.values_.size() * 4) {
    return absl::DataLossError("feature payload size mismatch");
  }
  for (float& v : t.values_) {
    ASSIGN_OR_RETURN(v, r.GetF32());
  }
  return t;
}

std::string FeatureTensor::ToCsv() const {
  std::string out = "epoch,frame,channel";
  for (int k = 0; k < kFeatureDim; ++k) absl::StrAppend(&out, ",f", k);
  out += "\n";
  for (size_t e = 0; e < epochs_; ++e) {
    for (size_t f = 0; f < kFramesPerEpoch; ++f) {
      for (size_t c = 0; c < labels_.size(); ++c) {
        absl::StrAppend(&out, e, ",", f, ",", labels_[c]);
        for (size_t k = 0; k < kFeatureDim; ++k) {
          absl::StrAppend(&out, ",", absl::StrFormat("%.9g", at(e, f, c, k)));
        }
        out += "\n";
      }
    }
  }
  return out;
}

absl::StatusOr<FeatureTensor> ExtractFeatures(const DifferentialRecording& rec,
                                              const FeatureConfig& cfg,
                                              int threads) {
  RETURN_IF_ERROR(cfg.Validate());
  if (rec.sample_count() == 0)
    return absl::InvalidArgumentError("empty signal");
  const double duration = rec.duration_seconds();
  const size_t epochs = static_cast<size_t>(std::floor(duration + 1e-9));
  if (epochs == 0) {
    return absl::InvalidArgumentError("recording shorter than one epoch");
  }
  FeatureTensor tensor(epochs, rec.labels(), duration, cfg.Hash());
  std::vector<absl::Status> status(rec.channel_count());
  ParallelFor(rec.channel_count(), threads, [&](size_t c) {
    auto frames = ChannelFeatures(rec.samples(c), rec.sample_rate(), cfg);
    if (!frames.ok()) {
      status[c] = frames.status();
      return;
    }
    for (size_t e = 0; e < epochs; ++e) {
      for (size_t f = 0; f < kFramesPerEpoch; ++f) {
        const auto& v = (*frames)[e * kFramesPerEpoch + f];
        for (size_t k = 0; k < kFeatureDim; ++k) {
          tensor.at(e, f, c, k) = static_cast<float>(v[k]);
        }
      }
    }
  });
  for (const auto& s : status) RETURN_IF_ERROR(s);
  return tensor;
}

}  // namespace eegpipe
