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

#include "eegpipe/network.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "eegpipe/binary_io.h"
#include "eegpipe/config.h"
#include "eegpipe/status_macros.h"

namespace eegpipe {

namespace {

constexpr int kKernel = 3;
constexpr int kGates = 4;  // i, f, g, o
constexpr char kCheckpointMagic[] = "EEGPCKPT";
constexpr uint32_t kCheckpointVersion = 2;

double Sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double Elu(double x) { return x > 0 ? x : std::expm1(x); }
double EluGrad(double pre) { return pre > 0 ? 1.0 : std::exp(pre); }

double UniformUnit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

absl::Status CheckFinite(std::span<const double> v, absl::string_view layer) {
  for (double x : v) {
    if (!std::isfinite(x)) {
      return absl::InternalError(
          absl::StrCat("non-finite activation in ", layer));
    }
  }
  return absl::OkStatus();
}

// Inverted dropout mask; empty when disabled.
std::vector<double> DropoutMask(size_t n, double rate, std::mt19937_64* rng) {
  if (rng == nullptr || rate <= 0.0) return {};
  std::vector<double> mask(n);
  const double keep_scale = 1.0 / (1.0 - rate);
  for (double& m : mask) m = UniformUnit(*rng) >= rate ? keep_scale : 0.0;
  return mask;
}

void ApplyMask(std::vector<double>& v, const std::vector<double>& mask) {
  if (mask.empty()) return;
  for (size_t i = 0; i < v.size(); ++i) v[i] *= mask[i];
}

// Parameter tensor indices within Network::Layout().
struct ParamIndex {
  explicit ParamIndex(int conv_layers) : layers(conv_layers) {}
  size_t ConvWeight(int l) const { return 2 * l; }
  size_t ConvBias(int l) const { return 2 * l + 1; }
  size_t DenseWeight() const { return 2 * layers; }
  size_t DenseBias() const { return 2 * layers + 1; }
  size_t LstmInput(int dir) const { return 2 * layers + 2 + 3 * dir; }
  size_t LstmHidden(int dir) const { return 2 * layers + 3 + 3 * dir; }
  size_t LstmBias(int dir) const { return 2 * layers + 4 + 3 * dir; }
  size_t OutputWeight() const { return 2 * layers + 8; }
  size_t OutputBias() const { return 2 * layers + 9; }
  int layers;
};

absl::StatusOr<ShapePlan> TryPlan(int channels, int layers,
                                  const NetworkSpec& spec, bool preserve) {
  ShapePlan plan;
  plan.channels = channels;
  int h = channels;
  int w = kFramesPerEpoch;
  for (int l = 0; l < layers; ++l) {
    LayerShape s;
    s.in_h = h;
    s.in_w = w;
    auto conv_axis = [&](int extent, int& pad, int& out,
                         absl::string_view axis) -> absl::Status {
      if (spec.padding == Padding::kSame || (preserve && extent < kKernel)) {
        pad = 1;
        out = extent;
        return absl::OkStatus();
      }
      if (extent < kKernel) {
        return absl::InvalidArgumentError(absl::StrFormat(
            "layer %d: %s axis of extent %d too small for valid 3x3 "
            "convolution",
            l + 1, axis, extent));
      }
      pad = 0;
      out = extent - (kKernel - 1);
      return absl::OkStatus();
    };
    RETURN_IF_ERROR(conv_axis(h, s.pad_h, s.conv_h, "channel"));
    RETURN_IF_ERROR(conv_axis(w, s.pad_w, s.conv_w, "frame"));

    const bool pool_h_ok =
        s.conv_h / 2 >= std::max(1, spec.min_pooled_channels);
    const bool pool_w_ok = s.conv_w / 2 >= 1;
    if (!pool_h_ok && !preserve) {
      return absl::InvalidArgumentError(
          absl::StrFormat("layer %d: cannot 2x2-pool channel axis of extent %d",
                          l + 1, s.conv_h));
    }
    if (!pool_w_ok && !preserve) {
      return absl::InvalidArgumentError(
          absl::StrFormat("layer %d: cannot 2x2-pool frame axis of extent %d",
                          l + 1, s.conv_w));
    }
    s.pool_h = pool_h_ok ? 2 : 1;
    s.pool_w = pool_w_ok ? 2 : 1;
    s.out_h = s.conv_h / s.pool_h;
    s.out_w = s.conv_w / s.pool_w;
    h = s.out_h;
    w = s.out_w;
    plan.layers.push_back(s);
  }
  return plan;
}

}  // namespace

uint64_t MixSeed(uint64_t a, uint64_t b) {
  uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

absl::string_view AdaptationName(Adaptation a) {
  switch (a) {
    case Adaptation::kStrict:
      return "strict";
    case Adaptation::kPreserveDims:
      return "preserve_dims";
    case Adaptation::kDropLayers:
      return "drop_layers";
  }
  return "unknown";
}

absl::StatusOr<Adaptation> ParseAdaptation(absl::string_view name) {
  if (name == "strict" || name == "none") return Adaptation::kStrict;
  if (name == "preserve_dims") return Adaptation::kPreserveDims;
  if (name == "drop_layers") return Adaptation::kDropLayers;
  return absl::InvalidArgumentError(absl::StrCat("unknown adaptation ", name));
}

absl::Status NetworkSpec::Validate() const {
  if (conv_layers < 1 || conv_layers > 3) {
    return absl::InvalidArgumentError("conv_layers must be 1, 2 or 3");
  }
  if (conv_kernels < 1 || dense_units < 1 || lstm_hidden < 1) {
    return absl::InvalidArgumentError(
        "conv_kernels, dense_units and lstm_hidden must be >= 1");
  }
  if (!(dropout >= 0.0 && dropout < 1.0)) {
    return absl::InvalidArgumentError("dropout must be in [0, 1)");
  }
  if (min_pooled_channels < 1) {
    return absl::InvalidArgumentError("min_pooled_channels must be >= 1");
  }
  return absl::OkStatus();
}

std::string NetworkSpec::Canonical() const {
  return absl::StrFormat(
      "adaptation=%s\nconv_kernels=%d\nconv_layers=%d\ndense_units=%d\n"
      "dropout=%.17g\nlstm_hidden=%d\nmin_pooled_channels=%d\npadding=%s\n",
      AdaptationName(adaptation), conv_kernels, conv_layers, dense_units,
      dropout, lstm_hidden, min_pooled_channels,
      padding == Padding::kSame ? "same" : "valid");
}

uint64_t NetworkSpec::Hash() const { return Fnv1a64(Canonical()); }

absl::StatusOr<NetworkSpec> NetworkSpec::Parse(absl::string_view text) {
  ASSIGN_OR_RETURN(KeyValueConfig kv, KeyValueConfig::Parse(text));
  NetworkSpec spec;
  RETURN_IF_ERROR(kv.GetInt("conv_layers", spec.conv_layers));
  RETURN_IF_ERROR(kv.GetInt("conv_kernels", spec.conv_kernels));
  RETURN_IF_ERROR(kv.GetDouble("dropout", spec.dropout));
  RETURN_IF_ERROR(kv.GetInt("dense_units", spec.dense_units));
  RETURN_IF_ERROR(kv.GetInt("conv1d_units", spec.dense_units));
  RETURN_IF_ERROR(kv.GetInt("lstm_hidden", spec.lstm_hidden));
  RETURN_IF_ERROR(kv.GetInt("min_pooled_channels", spec.min_pooled_channels));
  std::string adaptation(AdaptationName(spec.adaptation));
  RETURN_IF_ERROR(kv.GetString("adaptation", adaptation));
  ASSIGN_OR_RETURN(spec.adaptation, ParseAdaptation(adaptation));
  std::string padding = "same";
  RETURN_IF_ERROR(kv.GetString("padding", padding));
  if (padding == "same") {
    spec.padding = Padding::kSame;
  } else if (padding == "valid") {
    spec.padding = Padding::kValid;
  } else {
    return absl::InvalidArgumentError(
        absl::StrCat("unknown padding ", padding));
  }
  RETURN_IF_ERROR(kv.CheckAllConsumed());
  RETURN_IF_ERROR(spec.Validate());
  return spec;
}

int ShapePlan::FlatSize(int kernels) const {
  if (layers.empty()) return 0;
  return kernels * layers.back().out_h * layers.back().out_w;
}

std::string ShapePlan::ToString() const {
  std::vector<std::string> dims;
  dims.push_back(absl::StrCat("(", channels, ",", kFramesPerEpoch, ")"));
  for (const auto& s : layers) {
    dims.push_back(absl::StrCat("(", s.out_h, ",", s.out_w, ")"));
  }
  return absl::StrJoin(dims, "->");
}

absl::StatusOr<ShapePlan> ComputeShapePlan(int channels,
                                           const NetworkSpec& spec) {
  RETURN_IF_ERROR(spec.Validate());
  if (channels < 1) {
    return absl::InvalidArgumentError("channel count must be >= 1");
  }
  switch (spec.adaptation) {
    case Adaptation::kStrict:
      return TryPlan(channels, spec.conv_layers, spec, false);
    case Adaptation::kPreserveDims:
      return TryPlan(channels, spec.conv_layers, spec, true);
    case Adaptation::kDropLayers: {
      absl::Status last;
      for (int layers = spec.conv_layers; layers >= 1; --layers) {
        auto plan = TryPlan(channels, layers, spec, false);
        if (plan.ok()) return plan;
        last = plan.status();
      }
      return absl::InvalidArgumentError(
          absl::StrCat("no conv depth supports ", channels,
                       " channels with strict pooling: ", last.message()));
    }
  }
  return absl::InternalError("unreachable");
}

void Parameters::Add(std::string name, std::vector<int> shape) {
  size_t n = 1;
  for (int d : shape) n *= static_cast<size_t>(d);
  tensors_.push_back(
      {std::move(name), std::move(shape), std::vector<double>(n, 0.0)});
}

const NamedTensor* Parameters::Find(absl::string_view name) const {
  for (const auto& t : tensors_) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

NamedTensor* Parameters::Find(absl::string_view name) {
  for (auto& t : tensors_) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

size_t Parameters::ParameterCount() const {
  size_t n = 0;
  for (const auto& t : tensors_) n += t.values.size();
  return n;
}

Parameters Parameters::ZerosLike() const {
  Parameters p = *this;
  p.SetZero();
  return p;
}

void Parameters::SetZero() {
  for (auto& t : tensors_) std::fill(t.values.begin(), t.values.end(), 0.0);
}

void Parameters::Accumulate(const Parameters& other) {
  for (size_t i = 0; i < tensors_.size(); ++i) {
    auto& dst = tensors_[i].values;
    const auto& src = other.tensors_[i].values;
    for (size_t k = 0; k < dst.size(); ++k) dst[k] += src[k];
  }
}

void Parameters::Scale(double factor) {
  for (auto& t : tensors_) {
    for (double& v : t.values) v *= factor;
  }
}

bool Parameters::SameLayout(const Parameters& other) const {
  if (tensors_.size() != other.tensors_.size()) return false;
  for (size_t i = 0; i < tensors_.size(); ++i) {
    if (tensors_[i].name != other.tensors_[i].name ||
        tensors_[i].shape != other.tensors_[i].shape) {
      return false;
    }
  }
  return true;
}

// Activations of one segment, kept for the backward pass.
struct Network::Pass {
  size_t epochs = 0;
  // [epoch][layer]; input[e][l] feeds conv layer l, input[e][L] is the
  // flattened CNN output after dropout.
  std::vector<std::vector<std::vector<double>>> input;
  std::vector<std::vector<std::vector<double>>> pre;
  std::vector<std::vector<std::vector<double>>> act;
  std::vector<std::vector<std::vector<int>>> argmax;
  std::vector<std::vector<std::vector<double>>> mask;
  std::vector<std::vector<double>> dense_pre;
  std::vector<std::vector<double>> dense_out;
  std::vector<std::vector<double>> dense_mask;
  // [direction][epoch]: gate activations (i, f, g, o), cell and hidden state.
  std::vector<std::vector<std::vector<double>>> gates;
  std::vector<std::vector<std::vector<double>>> cell;
  std::vector<std::vector<std::vector<double>>> hidden;
  std::vector<std::vector<double>> concat;  // after dropout
  std::vector<std::vector<double>> concat_mask;
  std::vector<double> posterior;
};

absl::StatusOr<Network> Network::Create(const NetworkSpec& spec, int channels) {
  ASSIGN_OR_RETURN(ShapePlan plan, ComputeShapePlan(channels, spec));
  return Network(spec, std::move(plan));
}

Parameters Network::Layout() const {
  Parameters p;
  int planes = kFeatureDim;
  const int k = spec_.conv_kernels;
  for (int l = 0; l < plan_.conv_layers(); ++l) {
    p.Add(absl::StrCat("conv", l + 1, ".weight"),
          {k, planes, kKernel, kKernel});
    p.Add(absl::StrCat("conv", l + 1, ".bias"), {k});
    planes = k;
  }
  const int flat = plan_.FlatSize(k);
  const int u = spec_.dense_units;
  const int h = spec_.lstm_hidden;
  p.Add("dense.weight", {u, flat});
  p.Add("dense.bias", {u});
  for (const char* dir : {"lstm_fwd", "lstm_bwd"}) {
    p.Add(absl::StrCat(dir, ".w_input"), {kGates * h, u});
    p.Add(absl::StrCat(dir, ".w_hidden"), {kGates * h, h});
    p.Add(absl::StrCat(dir, ".bias"), {kGates * h});
  }
  p.Add("output.weight", {2 * h});
  p.Add("output.bias", {1});
  return p;
}

Weights Network::Initialize(uint64_t seed) const {
  Weights w;
  w.params = Layout();
  std::mt19937_64 rng(seed);
  const ParamIndex idx(plan_.conv_layers());
  const int h = spec_.lstm_hidden;
  for (size_t t = 0; t < w.params.size(); ++t) {
    NamedTensor& tensor = w.params[t];
    if (tensor.shape.size() < 2 && t != idx.OutputWeight()) {
      continue;  // biases start at zero
    }
    size_t fan_in = 1;
    for (size_t d = 1; d < tensor.shape.size(); ++d) fan_in *= tensor.shape[d];
    if (t == idx.OutputWeight()) fan_in = tensor.shape[0];
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    for (double& v : tensor.values) v = (2.0 * UniformUnit(rng) - 1.0) * bound;
  }
  for (int dir = 0; dir < 2; ++dir) {
    auto& bias = w.params[idx.LstmBias(dir)].values;
    for (int j = 0; j < h; ++j) bias[h + j] = 1.0;
  }
  w.adam_m = w.params.ZerosLike();
  w.adam_v = w.params.ZerosLike();
  return w;
}

absl::Status Network::Validate(const FeatureTensor& features, size_t first,
                               size_t count, const Weights& weights) const {
  if (features.channels() != static_cast<size_t>(plan_.channels)) {
    return absl::InvalidArgumentError(
        absl::StrCat("feature tensor has ", features.channels(),
                     " channels, network expects ", plan_.channels));
  }
  if (count == 0 || first + count > features.epochs()) {
    return absl::InvalidArgumentError(
        absl::StrCat("segment [", first, ", ", first + count, ") outside ",
                     features.epochs(), " epochs"));
  }
  if (!weights.params.SameLayout(Layout())) {
    return absl::InvalidArgumentError(
        "weights do not match the network's parameter layout");
  }
  if (weights.norm.mean.size() != kFeatureDim ||
      weights.norm.scale.size() != kFeatureDim) {
    return absl::InvalidArgumentError("bad input normalisation size");
  }
  return absl::OkStatus();
}

absl::Status Network::RunForward(const FeatureTensor& features, size_t first,
                                 const Weights& weights,
                                 std::optional<uint64_t> dropout_seed,
                                 Pass& pass) const {
  const size_t epochs = pass.epochs;
  const int layers = plan_.conv_layers();
  const int kernels = spec_.conv_kernels;
  const int units = spec_.dense_units;
  const int hid = spec_.lstm_hidden;
  const ParamIndex idx(layers);
  const Parameters& p = weights.params;

  std::optional<std::mt19937_64> rng;
  if (dropout_seed.has_value()) rng.emplace(*dropout_seed);
  std::mt19937_64* rng_ptr = rng ? &*rng : nullptr;
  const double rate = spec_.dropout;

  pass.input.assign(epochs, std::vector<std::vector<double>>(layers + 1));
  pass.pre.assign(epochs, std::vector<std::vector<double>>(layers));
  pass.act.assign(epochs, std::vector<std::vector<double>>(layers));
  pass.argmax.assign(epochs, std::vector<std::vector<int>>(layers));
  pass.mask.assign(epochs, std::vector<std::vector<double>>(layers));
  pass.dense_pre.assign(epochs, {});
  pass.dense_out.assign(epochs, {});
  pass.dense_mask.assign(epochs, {});

  const int channels = plan_.channels;
  for (size_t e = 0; e < epochs; ++e) {
    // Input planes [feature][channel][frame], standardised.
    std::vector<double>& x = pass.input[e][0];
    x.resize(static_cast<size_t>(kFeatureDim) * channels * kFramesPerEpoch);
    for (int k = 0; k < kFeatureDim; ++k) {
      for (int c = 0; c < channels; ++c) {
        for (int f = 0; f < kFramesPerEpoch; ++f) {
          x[(k * channels + c) * kFramesPerEpoch + f] =
              (features.at(first + e, f, c, k) - weights.norm.mean[k]) *
              weights.norm.scale[k];
        }
      }
    }

    int planes = kFeatureDim;
    for (int l = 0; l < layers; ++l) {
      const LayerShape& s = plan_.layers[l];
      const std::vector<double>& in = pass.input[e][l];
      const auto& wt = p[idx.ConvWeight(l)].values;
      const auto& bias = p[idx.ConvBias(l)].values;
      std::vector<double>& pre = pass.pre[e][l];
      pre.assign(static_cast<size_t>(kernels) * s.conv_h * s.conv_w, 0.0);
      for (int k = 0; k < kernels; ++k) {
        double* out = &pre[static_cast<size_t>(k) * s.conv_h * s.conv_w];
        std::fill(out, out + s.conv_h * s.conv_w, bias[k]);
        for (int q = 0; q < planes; ++q) {
          const double* src = &in[static_cast<size_t>(q) * s.in_h * s.in_w];
          for (int ky = 0; ky < kKernel; ++ky) {
            const int y0 = std::max(0, s.pad_h - ky);
            const int y1 = std::min(s.conv_h, s.in_h + s.pad_h - ky);
            for (int kx = 0; kx < kKernel; ++kx) {
              const double wv =
                  wt[((static_cast<size_t>(k) * planes + q) * kKernel + ky) *
                         kKernel +
                     kx];
              const int x0 = std::max(0, s.pad_w - kx);
              const int x1 = std::min(s.conv_w, s.in_w + s.pad_w - kx);
              for (int y = y0; y < y1; ++y) {
                const ptrdiff_t base =
                    static_cast<ptrdiff_t>(y + ky - s.pad_h) * s.in_w -
                    s.pad_w + kx;
                double* dst = out + y * s.conv_w;
                for (int xx = x0; xx < x1; ++xx) dst[xx] += wv * src[base + xx];
              }
            }
          }
        }
      }
      RETURN_IF_ERROR(CheckFinite(pre, absl::StrCat("conv", l + 1)));

      std::vector<double>& act = pass.act[e][l];
      act.resize(pre.size());
      for (size_t i = 0; i < pre.size(); ++i) act[i] = Elu(pre[i]);

      std::vector<double>& pooled = pass.input[e][l + 1];
      std::vector<int>& arg = pass.argmax[e][l];
      pooled.resize(static_cast<size_t>(kernels) * s.out_h * s.out_w);
      arg.resize(pooled.size());
      for (int k = 0; k < kernels; ++k) {
        for (int oy = 0; oy < s.out_h; ++oy) {
          for (int ox = 0; ox < s.out_w; ++ox) {
            int best = -1;
            double best_v = 0.0;
            for (int dy = 0; dy < s.pool_h; ++dy) {
              for (int dx = 0; dx < s.pool_w; ++dx) {
                const int i = (k * s.conv_h + oy * s.pool_h + dy) * s.conv_w +
                              ox * s.pool_w + dx;
                if (best < 0 || act[i] > best_v) {
                  best = i;
                  best_v = act[i];
                }
              }
            }
            const size_t o =
                (static_cast<size_t>(k) * s.out_h + oy) * s.out_w + ox;
            pooled[o] = best_v;
            arg[o] = best;
          }
        }
      }
      pass.mask[e][l] = DropoutMask(pooled.size(), rate, rng_ptr);
      ApplyMask(pooled, pass.mask[e][l]);
      planes = kernels;
    }

    const std::vector<double>& flat = pass.input[e][layers];
    const auto& dw = p[idx.DenseWeight()].values;
    const auto& db = p[idx.DenseBias()].values;
    std::vector<double>& dpre = pass.dense_pre[e];
    dpre.assign(units, 0.0);
    for (int u = 0; u < units; ++u) {
      double acc = db[u];
      const double* row = &dw[static_cast<size_t>(u) * flat.size()];
      for (size_t i = 0; i < flat.size(); ++i) acc += row[i] * flat[i];
      dpre[u] = acc;
    }
    RETURN_IF_ERROR(CheckFinite(dpre, "dense"));
    std::vector<double>& dout = pass.dense_out[e];
    dout.resize(units);
    for (int u = 0; u < units; ++u) dout[u] = Elu(dpre[u]);
    pass.dense_mask[e] = DropoutMask(units, rate, rng_ptr);
    ApplyMask(dout, pass.dense_mask[e]);
  }

  pass.gates.assign(2, std::vector<std::vector<double>>(epochs));
  pass.cell.assign(2, std::vector<std::vector<double>>(epochs));
  pass.hidden.assign(2, std::vector<std::vector<double>>(epochs));
  for (int dir = 0; dir < 2; ++dir) {
    const auto& wx = p[idx.LstmInput(dir)].values;
    const auto& wh = p[idx.LstmHidden(dir)].values;
    const auto& b = p[idx.LstmBias(dir)].values;
    std::vector<double> h_prev(hid, 0.0);
    std::vector<double> c_prev(hid, 0.0);
    for (size_t s = 0; s < epochs; ++s) {
      const size_t t = dir == 0 ? s : epochs - 1 - s;
      const std::vector<double>& z = pass.dense_out[t];
      std::vector<double> a(kGates * hid);
      for (int r = 0; r < kGates * hid; ++r) {
        double acc = b[r];
        const double* rx = &wx[static_cast<size_t>(r) * units];
        for (int u = 0; u < units; ++u) acc += rx[u] * z[u];
        const double* rh = &wh[static_cast<size_t>(r) * hid];
        for (int j = 0; j < hid; ++j) acc += rh[j] * h_prev[j];
        a[r] = acc;
      }
      RETURN_IF_ERROR(CheckFinite(a, dir == 0 ? "lstm_fwd" : "lstm_bwd"));
      std::vector<double>& g = pass.gates[dir][t];
      std::vector<double>& c = pass.cell[dir][t];
      std::vector<double>& h = pass.hidden[dir][t];
      g.resize(kGates * hid);
      c.resize(hid);
      h.resize(hid);
      for (int j = 0; j < hid; ++j) {
        g[j] = Sigmoid(a[j]);
        g[hid + j] = Sigmoid(a[hid + j]);
        g[2 * hid + j] = std::tanh(a[2 * hid + j]);
        g[3 * hid + j] = Sigmoid(a[3 * hid + j]);
        c[j] = g[hid + j] * c_prev[j] + g[j] * g[2 * hid + j];
        h[j] = g[3 * hid + j] * std::tanh(c[j]);
      }
      h_prev = h;
      c_prev = c;
    }
  }

  const auto& ow = p[idx.OutputWeight()].values;
  const double ob = p[idx.OutputBias()].values[0];
  pass.concat.assign(epochs, {});
  pass.concat_mask.assign(epochs, {});
  pass.posterior.assign(epochs, 0.0);
  for (size_t e = 0; e < epochs; ++e) {
    std::vector<double>& hc = pass.concat[e];
    hc = pass.hidden[0][e];
    hc.insert(hc.end(), pass.hidden[1][e].begin(), pass.hidden[1][e].end());
    pass.concat_mask[e] = DropoutMask(hc.size(), rate, rng_ptr);
    ApplyMask(hc, pass.concat_mask[e]);
    double logit = ob;
    for (size_t j = 0; j < hc.size(); ++j) logit += ow[j] * hc[j];
    if (!std::isfinite(logit)) {
      return absl::InternalError("non-finite activation in output");
    }
    pass.posterior[e] = Sigmoid(logit);
  }
  return absl::OkStatus();
}

absl::StatusOr<std::vector<double>> Network::Forward(
    const FeatureTensor& features, size_t first, size_t count,
    const Weights& weights) const {
  RETURN_IF_ERROR(Validate(features, first, count, weights));
  Pass pass;
  pass.epochs = count;
  RETURN_IF_ERROR(RunForward(features, first, weights, std::nullopt, pass));
  return pass.posterior;
}

absl::StatusOr<LossAndGradient> Network::Gradient(
    const FeatureTensor& features, size_t first, size_t count,
    std::span<const double> labels, const Weights& weights,
    std::optional<uint64_t> dropout_seed) const {
  RETURN_IF_ERROR(Validate(features, first, count, weights));
  if (labels.size() != count) {
    return absl::InvalidArgumentError(
        absl::StrCat("label count ", labels.size(), " != epoch count ", count));
  }
  Pass pass;
  pass.epochs = count;
  RETURN_IF_ERROR(RunForward(features, first, weights, dropout_seed, pass));

  const int layers = plan_.conv_layers();
  const int kernels = spec_.conv_kernels;
  const int units = spec_.dense_units;
  const int hid = spec_.lstm_hidden;
  const ParamIndex idx(layers);
  const Parameters& p = weights.params;

  LossAndGradient out;
  out.grad = p.ZerosLike();
  Parameters& g = out.grad;

  // Output layer.
  const auto& ow = p[idx.OutputWeight()].values;
  auto& gow = g[idx.OutputWeight()].values;
  auto& gob = g[idx.OutputBias()].values;
  std::vector<std::vector<double>> d_hidden[2];
  d_hidden[0].assign(count, std::vector<double>(hid, 0.0));
  d_hidden[1].assign(count, std::vector<double>(hid, 0.0));
  double sse = 0.0;
  for (size_t e = 0; e < count; ++e) {
    const double post = pass.posterior[e];
    const double err = post - labels[e];
    sse += err * err;
    const double d_logit = 2.0 * err / count * post * (1.0 - post);
    gob[0] += d_logit;
    const auto& hc = pass.concat[e];
    const auto& mask = pass.concat_mask[e];
    for (size_t j = 0; j < hc.size(); ++j) {
      gow[j] += d_logit * hc[j];
      double d = d_logit * ow[j];
      if (!mask.empty()) d *= mask[j];
      d_hidden[j < static_cast<size_t>(hid) ? 0 : 1][e][j % hid] = d;
    }
  }
  out.loss = sse / count;

  // Bidirectional LSTM, back-propagated through time per direction.
  std::vector<std::vector<double>> d_dense(count,
                                           std::vector<double>(units, 0.0));
  for (int dir = 0; dir < 2; ++dir) {
    const auto& wx = p[idx.LstmInput(dir)].values;
    const auto& wh = p[idx.LstmHidden(dir)].values;
    auto& gwx = g[idx.LstmInput(dir)].values;
    auto& gwh = g[idx.LstmHidden(dir)].values;
    auto& gb = g[idx.LstmBias(dir)].values;
    std::vector<double> dh_next(hid, 0.0);
    std::vector<double> dc_next(hid, 0.0);
    std::vector<double> da(kGates * hid);
    const std::vector<double> zeros(hid, 0.0);
    for (size_t s = count; s-- > 0;) {
      const size_t t = dir == 0 ? s : count - 1 - s;
      const bool has_prev = s > 0;
      const size_t tp = dir == 0 ? t - 1 : t + 1;
      const std::vector<double>& c_prev = has_prev ? pass.cell[dir][tp] : zeros;
      const std::vector<double>& h_prev =
          has_prev ? pass.hidden[dir][tp] : zeros;
      const auto& gt = pass.gates[dir][t];
      const auto& c = pass.cell[dir][t];
      std::vector<double> dc_prev(hid);
      for (int j = 0; j < hid; ++j) {
        const double i_g = gt[j], f_g = gt[hid + j], g_g = gt[2 * hid + j],
                     o_g = gt[3 * hid + j];
        const double tc = std::tanh(c[j]);
        const double dh = d_hidden[dir][t][j] + dh_next[j];
        const double dc = dc_next[j] + dh * o_g * (1.0 - tc * tc);
        da[j] = dc * g_g * i_g * (1.0 - i_g);
        da[hid + j] = dc * c_prev[j] * f_g * (1.0 - f_g);
        da[2 * hid + j] = dc * i_g * (1.0 - g_g * g_g);
        da[3 * hid + j] = dh * tc * o_g * (1.0 - o_g);
        dc_prev[j] = dc * f_g;
      }
      const std::vector<double>& z = pass.dense_out[t];
      std::fill(dh_next.begin(), dh_next.end(), 0.0);
      for (int r = 0; r < kGates * hid; ++r) {
        const double d = da[r];
        gb[r] += d;
        double* gx = &gwx[static_cast<size_t>(r) * units];
        const double* rx = &wx[static_cast<size_t>(r) * units];
        for (int u = 0; u < units; ++u) {
          gx[u] += d * z[u];
          d_dense[t][u] += d * rx[u];
        }
        double* gh = &gwh[static_cast<size_t>(r) * hid];
        const double* rh = &wh[static_cast<size_t>(r) * hid];
        for (int j = 0; j < hid; ++j) {
          gh[j] += d * h_prev[j];
          dh_next[j] += d * rh[j];
        }
      }
      dc_next = dc_prev;
    }
  }

  // Dense projection and CNN, independently per epoch.
  const auto& dw = p[idx.DenseWeight()].values;
  auto& gdw = g[idx.DenseWeight()].values;
  auto& gdb = g[idx.DenseBias()].values;
  for (size_t e = 0; e < count; ++e) {
    const std::vector<double>& flat = pass.input[e][layers];
    std::vector<double> d_flat(flat.size(), 0.0);
    for (int u = 0; u < units; ++u) {
      double d = d_dense[e][u];
      if (!pass.dense_mask[e].empty()) d *= pass.dense_mask[e][u];
      d *= EluGrad(pass.dense_pre[e][u]);
      gdb[u] += d;
      double* grow = &gdw[static_cast<size_t>(u) * flat.size()];
      const double* row = &dw[static_cast<size_t>(u) * flat.size()];
      for (size_t i = 0; i < flat.size(); ++i) {
        grow[i] += d * flat[i];
        d_flat[i] += d * row[i];
      }
    }

    std::vector<double> d_out = std::move(d_flat);
    for (int l = layers - 1; l >= 0; --l) {
      const LayerShape& s = plan_.layers[l];
      const int planes = l == 0 ? kFeatureDim : kernels;
      if (!pass.mask[e][l].empty()) {
        for (size_t i = 0; i < d_out.size(); ++i)
          d_out[i] *= pass.mask[e][l][i];
      }
      const auto& pre = pass.pre[e][l];
      std::vector<double> d_pre(pre.size(), 0.0);
      const auto& arg = pass.argmax[e][l];
      for (size_t o = 0; o < d_out.size(); ++o) d_pre[arg[o]] += d_out[o];
      for (size_t i = 0; i < pre.size(); ++i) d_pre[i] *= EluGrad(pre[i]);

      const std::vector<double>& in = pass.input[e][l];
      const auto& wt = p[idx.ConvWeight(l)].values;
      auto& gwt = g[idx.ConvWeight(l)].values;
      auto& gbias = g[idx.ConvBias(l)].values;
      const bool need_input_grad = l > 0;
      std::vector<double> d_in(need_input_grad ? in.size() : 0, 0.0);
      for (int k = 0; k < kernels; ++k) {
        const double* dk = &d_pre[static_cast<size_t>(k) * s.conv_h * s.conv_w];
        double bsum = 0.0;
        for (int i = 0; i < s.conv_h * s.conv_w; ++i) bsum += dk[i];
        gbias[k] += bsum;
        for (int q = 0; q < planes; ++q) {
          const size_t plane_off = static_cast<size_t>(q) * s.in_h * s.in_w;
          for (int ky = 0; ky < kKernel; ++ky) {
            const int y0 = std::max(0, s.pad_h - ky);
            const int y1 = std::min(s.conv_h, s.in_h + s.pad_h - ky);
            for (int kx = 0; kx < kKernel; ++kx) {
              const size_t wi =
                  ((static_cast<size_t>(k) * planes + q) * kKernel + ky) *
                      kKernel +
                  kx;
              const int x0 = std::max(0, s.pad_w - kx);
              const int x1 = std::min(s.conv_w, s.in_w + s.pad_w - kx);
              double acc = 0.0;
              const double wv = wt[wi];
              for (int y = y0; y < y1; ++y) {
                const ptrdiff_t base =
                    static_cast<ptrdiff_t>(plane_off) +
                    static_cast<ptrdiff_t>(y + ky - s.pad_h) * s.in_w -
                    s.pad_w + kx;
                const double* drow = dk + y * s.conv_w;
                for (int xx = x0; xx < x1; ++xx)
                  acc += drow[xx] * in[base + xx];
                if (need_input_grad) {
                  for (int xx = x0; xx < x1; ++xx) {
                    d_in[base + xx] += wv * drow[xx];
                  }
                }
              }
              gwt[wi] += acc;
            }
          }
        }
      }
      d_out = std::move(d_in);
    }
  }
  return out;
}

std::string Checkpoint::Serialize() const {
  ByteWriter w;
  w.PutRaw(kCheckpointMagic);
  w.PutU32(kCheckpointVersion);
  w.PutString(spec.Canonical());
  w.PutU64(spec.Hash());
  w.PutU32(static_cast<uint32_t>(channel_labels.size()));
  for (const auto& l : channel_labels) w.PutString(l);
  w.PutU64(feature_hash);
  w.PutU64(static_cast<uint64_t>(weights.step));
  for (double v : weights.norm.mean) w.PutF64(v);
  for (double v : weights.norm.scale) w.PutF64(v);
  w.PutU32(static_cast<uint32_t>(weights.params.size()));
  for (const auto& t : weights.params.tensors()) {
    w.PutString(t.name);
    w.PutU32(static_cast<uint32_t>(t.shape.size()));
    for (int d : t.shape) w.PutU32(static_cast<uint32_t>(d));
    for (double v : t.values) w.PutF64(v);
  }
  for (const Parameters* moments : {&weights.adam_m, &weights.adam_v}) {
    for (const auto& t : moments->tensors()) {
      for (double v : t.values) w.PutF64(v);
    }
  }
  std::string body = w.Release();
  ByteWriter digest;
  digest.PutU64(Fnv1a64(body));
  return body + digest.Release();
}

absl::StatusOr<Checkpoint> Checkpoint::Parse(absl::string_view bytes) {
  if (bytes.size() < 16) return absl::DataLossError("checkpoint too short");
  ByteReader tail(bytes.substr(bytes.size() - 8));
  ASSIGN_OR_RETURN(uint64_t digest, tail.GetU64());
  bytes.remove_suffix(8);
  if (digest != Fnv1a64(bytes)) {
    return absl::DataLossError("checkpoint digest mismatch");
  }
  ByteReader r(bytes);
  ASSIGN_OR_RETURN(absl::string_view magic, r.GetRaw(8));
  if (magic != kCheckpointMagic) {
    return absl::InvalidArgumentError("not a checkpoint file");
  }
  ASSIGN_OR_RETURN(uint32_t version, r.GetU32());
  if (version != kCheckpointVersion) {
    return absl::InvalidArgumentError(
        absl::StrCat("unsupported checkpoint version ", version));
  }
  Checkpoint ckpt;
  ASSIGN_OR_RETURN(std::string spec_text, r.GetString());
  ASSIGN_OR_RETURN(ckpt.spec, NetworkSpec::Parse(spec_text));
  ASSIGN_OR_RETURN(uint64_t spec_hash, r.GetU64());
  if (spec_hash != ckpt.spec.Hash()) {
    return absl::DataLossError("checkpoint spec hash does not match its spec");
  }
  ASSIGN_OR_RETURN(uint32_t channels, r.GetU32());
  ckpt.channel_labels.resize(channels);
  for (auto& l : ckpt.channel_labels) {
    ASSIGN_OR_RETURN(l, r.GetString());
  }
  ASSIGN_OR_RETURN(ckpt.feature_hash, r.GetU64());
  ASSIGN_OR_RETURN(uint64_t step, r.GetU64());
  ckpt.weights.step = static_cast<int64_t>(step);
  for (double& v : ckpt.weights.norm.mean) {
    ASSIGN_OR_RETURN(v, r.GetF64());
  }
  for (double& v : ckpt.weights.norm.scale) {
    ASSIGN_OR_RETURN(v, r.GetF64());
  }
  ASSIGN_OR_RETURN(uint32_t count, r.GetU32());
  for (uint32_t i = 0; i < count; ++i) {
    ASSIGN_OR_RETURN(std::string name, r.GetString());
    ASSIGN_OR_RETURN(uint32_t rank, r.GetU32());
    std::vector<int> shape(rank);
    for (int& d : shape) {
      ASSIGN_OR_RETURN(uint32_t v, r.GetU32());
      d = static_cast<int>(v);
    }
    ckpt.weights.params.Add(std::move(name), std::move(shape));
    for (double& v : ckpt.weights.params[i].values) {
      ASSIGN_OR_RETURN(v, r.GetF64());
    }
  }
  ckpt.weights.adam_m = ckpt.weights.params.ZerosLike();
  ckpt.weights.adam_v = ckpt.weights.params.ZerosLike();
  for (Parameters* moments : {&ckpt.weights.adam_m, &ckpt.weights.adam_v}) {
    for (auto& t : moments->tensors()) {
      for (double& v : t.values) {
        ASSIGN_OR_RETURN(v, r.GetF64());
      }
    }
  }
  if (r.remaining() != 0) {
    return absl::DataLossError("trailing bytes in checkpoint");
  }
  ASSIGN_OR_RETURN(Network net, Network::Create(ckpt.spec, channels));
  if (!ckpt.weights.params.SameLayout(net.Layout())) {
    return absl::DataLossError("checkpoint tensors do not match its spec");
  }
  return ckpt;
}

}  // namespace eegpipe
