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

#include "eegpipe/trainer.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "eegpipe/config.h"
#include "eegpipe/parallel.h"
#include "eegpipe/status_macros.h"

namespace eegpipe {

namespace {

struct SegmentRef {
  size_t example = 0;
  size_t first = 0;
  size_t count = 0;
};

std::vector<SegmentRef> Segments(std::span<const LabeledFeatures> data,
                                 int segment_epochs) {
  std::vector<SegmentRef> out;
  for (size_t i = 0; i < data.size(); ++i) {
    const size_t epochs = data[i].features->epochs();
    for (size_t first = 0; first < epochs; first += segment_epochs) {
      out.push_back(
          {i, first, std::min<size_t>(segment_epochs, epochs - first)});
    }
  }
  return out;
}

absl::Status ValidateData(const Network& net,
                          std::span<const LabeledFeatures> data) {
  if (data.empty()) return absl::InvalidArgumentError("empty training set");
  for (size_t i = 0; i < data.size(); ++i) {
    const LabeledFeatures& d = data[i];
    if (d.features == nullptr) {
      return absl::InvalidArgumentError("null feature tensor");
    }
    if (d.features->channels() != static_cast<size_t>(net.channels())) {
      return absl::InvalidArgumentError(
          absl::StrCat("example ", i, " has ", d.features->channels(),
                       " channels, network expects ", net.channels()));
    }
    if (d.labels.size() != d.features->epochs()) {
      return absl::InvalidArgumentError(
          absl::StrCat("example ", i, ": ", d.labels.size(), " labels for ",
                       d.features->epochs(), " epochs"));
    }
  }
  return absl::OkStatus();
}

// Unbiased index in [0, n) from a 64-bit generator.
uint64_t UniformIndex(std::mt19937_64& rng, uint64_t n) {
  const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

}  // namespace

absl::Status AdamStep(Weights& weights, const Parameters& grad,
                      const AdamHyper& hyper) {
  if (!grad.SameLayout(weights.params) ||
      !weights.adam_m.SameLayout(weights.params) ||
      !weights.adam_v.SameLayout(weights.params)) {
    return absl::InvalidArgumentError("gradient layout does not match weights");
  }
  for (const auto& t : grad.tensors()) {
    for (double v : t.values) {
      if (!std::isfinite(v)) {
        return absl::InternalError(
            absl::StrCat("non-finite gradient in ", t.name));
      }
    }
  }
  const int64_t step = weights.step + 1;
  const double correction1 = 1.0 - std::pow(hyper.beta1, step);
  const double correction2 = 1.0 - std::pow(hyper.beta2, step);
  for (size_t i = 0; i < weights.params.size(); ++i) {
    auto& w = weights.params[i].values;
    auto& m = weights.adam_m[i].values;
    auto& v = weights.adam_v[i].values;
    const auto& g = grad[i].values;
    for (size_t k = 0; k < w.size(); ++k) {
      m[k] = hyper.beta1 * m[k] + (1.0 - hyper.beta1) * g[k];
      v[k] = hyper.beta2 * v[k] + (1.0 - hyper.beta2) * g[k] * g[k];
      const double m_hat = m[k] / correction1;
      const double v_hat = v[k] / correction2;
      w[k] -= hyper.learning_rate * m_hat / (std::sqrt(v_hat) + hyper.epsilon);
    }
  }
  weights.step = step;
  return absl::OkStatus();
}

absl::Status TrainConfig::Validate() const {
  if (passes < 0 || batch_segments < 1 || segment_epochs < 1) {
    return absl::InvalidArgumentError(
        "require passes >= 0, batch_segments >= 1, segment_epochs >= 1");
  }
  if (!(adam.learning_rate > 0.0) || !(adam.beta1 >= 0.0 && adam.beta1 < 1.0) ||
      !(adam.beta2 >= 0.0 && adam.beta2 < 1.0) || !(adam.epsilon > 0.0)) {
    return absl::InvalidArgumentError("invalid Adam hyperparameters");
  }
  return absl::OkStatus();
}

std::string TrainConfig::Canonical() const {
  return absl::StrFormat(
      "adam_beta1=%.17g\nadam_beta2=%.17g\nadam_epsilon=%.17g\n"
      "batch_segments=%d\nlearning_rate=%.17g\npasses=%d\nsegment_epochs=%d\n"
      "seed=%d\n",
      adam.beta1, adam.beta2, adam.epsilon, batch_segments, adam.learning_rate,
      passes, segment_epochs, seed);
}

absl::StatusOr<TrainConfig> TrainConfig::Parse(absl::string_view text) {
  ASSIGN_OR_RETURN(KeyValueConfig kv, KeyValueConfig::Parse(text));
  TrainConfig cfg;
  RETURN_IF_ERROR(kv.GetInt("passes", cfg.passes));
  RETURN_IF_ERROR(kv.GetInt("batch_segments", cfg.batch_segments));
  RETURN_IF_ERROR(kv.GetInt("segment_epochs", cfg.segment_epochs));
  RETURN_IF_ERROR(kv.GetUint64("seed", cfg.seed));
  RETURN_IF_ERROR(kv.GetDouble("learning_rate", cfg.adam.learning_rate));
  RETURN_IF_ERROR(kv.GetDouble("adam_beta1", cfg.adam.beta1));
  RETURN_IF_ERROR(kv.GetDouble("adam_beta2", cfg.adam.beta2));
  RETURN_IF_ERROR(kv.GetDouble("adam_epsilon", cfg.adam.epsilon));
  RETURN_IF_ERROR(kv.CheckAllConsumed());
  RETURN_IF_ERROR(cfg.Validate());
  return cfg;
}

InputNormalization ComputeNormalization(std::span<const LabeledFeatures> data) {
  InputNormalization norm;
  std::vector<double> sum(kFeatureDim, 0.0);
  std::vector<double> sum_sq(kFeatureDim, 0.0);
  double n = 0.0;
  for (const LabeledFeatures& d : data) {
    const std::span<const float> values = d.features->values();
    for (size_t i = 0; i < values.size(); ++i) {
      const double v = values[i];
      sum[i % kFeatureDim] += v;
      sum_sq[i % kFeatureDim] += v * v;
    }
    n += static_cast<double>(values.size() / kFeatureDim);
  }
  if (n == 0.0) return norm;
  for (int k = 0; k < kFeatureDim; ++k) {
    const double mean = sum[k] / n;
    const double var = std::max(0.0, sum_sq[k] / n - mean * mean);
    norm.mean[k] = mean;
    norm.scale[k] = var > 1e-12 ? 1.0 / std::sqrt(var) : 1.0;
  }
  return norm;
}

absl::StatusOr<double> EvaluateLoss(const Network& net, const Weights& weights,
                                    std::span<const LabeledFeatures> data,
                                    int segment_epochs, int threads) {
  RETURN_IF_ERROR(ValidateData(net, data));
  const std::vector<SegmentRef> segments = Segments(data, segment_epochs);
  std::vector<double> sse(segments.size(), 0.0);
  std::vector<absl::Status> status(segments.size());
  ParallelFor(segments.size(), threads, [&](size_t i) {
    const SegmentRef& s = segments[i];
    auto post =
        net.Forward(*data[s.example].features, s.first, s.count, weights);
    if (!post.ok()) {
      status[i] = post.status();
      return;
    }
    for (size_t e = 0; e < s.count; ++e) {
      const double err = (*post)[e] - data[s.example].labels[s.first + e];
      sse[i] += err * err;
    }
  });
  double total = 0.0;
  size_t epochs = 0;
  for (size_t i = 0; i < segments.size(); ++i) {
    RETURN_IF_ERROR(status[i]);
    total += sse[i];
    epochs += segments[i].count;
  }
  return total / static_cast<double>(epochs);
}

absl::StatusOr<TrainResult> Train(const Network& net,
                                  std::span<const LabeledFeatures> data,
                                  const TrainConfig& config) {
  RETURN_IF_ERROR(config.Validate());
  RETURN_IF_ERROR(ValidateData(net, data));

  TrainResult result;
  bool any_pos = false;
  bool any_neg = false;
  for (const auto& d : data) {
    for (double y : d.labels) {
      if (y != 0.0 && y != 1.0) {
        return absl::InvalidArgumentError("labels must be 0 or 1");
      }
      (y > 0.5 ? any_pos : any_neg) = true;
    }
  }
  if (!any_pos || !any_neg) {
    result.warnings.push_back(
        "degenerate training set: only one class present");
  }

  result.weights = net.Initialize(config.seed);
  result.weights.norm = ComputeNormalization(data);
  ASSIGN_OR_RETURN(double initial,
                   EvaluateLoss(net, result.weights, data,
                                config.segment_epochs, config.threads));
  result.pass_losses.push_back(initial);

  std::vector<SegmentRef> segments = Segments(data, config.segment_epochs);
  std::vector<size_t> order(segments.size());
  for (int pass = 0; pass < config.passes; ++pass) {
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::mt19937_64 shuffle_rng(MixSeed(config.seed, 0x5eed0000ULL + pass));
    for (size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[UniformIndex(shuffle_rng, i)]);
    }

    for (size_t begin = 0; begin < order.size();
         begin += config.batch_segments) {
      const size_t end = std::min(
          order.size(), begin + static_cast<size_t>(config.batch_segments));
      const size_t batch = end - begin;
      const uint64_t step_seed =
          MixSeed(config.seed, static_cast<uint64_t>(result.weights.step));
      std::vector<absl::StatusOr<LossAndGradient>> grads(
          batch, absl::UnknownError("not run"));
      ParallelFor(batch, config.threads, [&](size_t b) {
        const size_t seg_index = order[begin + b];
        const SegmentRef& s = segments[seg_index];
        const auto& labels = data[s.example].labels;
        grads[b] = net.Gradient(
            *data[s.example].features, s.first, s.count,
            std::span<const double>(labels).subspan(s.first, s.count),
            result.weights, MixSeed(step_seed, seg_index));
      });

      // Sum in batch order so the result is independent of scheduling.
      Parameters total = result.weights.params.ZerosLike();
      double sse = 0.0;
      size_t epochs = 0;
      for (size_t b = 0; b < batch; ++b) {
        if (!grads[b].ok()) return grads[b].status();
        const size_t count = segments[order[begin + b]].count;
        grads[b]->grad.Scale(static_cast<double>(count));
        total.Accumulate(grads[b]->grad);
        sse += grads[b]->loss * count;
        epochs += count;
      }
      total.Scale(1.0 / static_cast<double>(epochs));
      result.step_losses.push_back(sse / static_cast<double>(epochs));
      RETURN_IF_ERROR(AdamStep(result.weights, total, config.adam));
    }
    ASSIGN_OR_RETURN(double loss,
                     EvaluateLoss(net, result.weights, data,
                                  config.segment_epochs, config.threads));
    result.pass_losses.push_back(loss);
  }
  return result;
}

absl::StatusOr<std::vector<double>> Infer(const Network& net,
                                          const Weights& weights,
                                          const FeatureTensor& features,
                                          int segment_epochs, int threads) {
  if (segment_epochs < 1) {
    return absl::InvalidArgumentError("segment_epochs must be >= 1");
  }
  const size_t epochs = features.epochs();
  const size_t n_segments = (epochs + segment_epochs - 1) / segment_epochs;
  std::vector<double> out(epochs, 0.0);
  std::vector<absl::Status> status(n_segments);
  ParallelFor(n_segments, threads, [&](size_t i) {
    const size_t first = i * segment_epochs;
    const size_t count = std::min<size_t>(segment_epochs, epochs - first);
    auto post = net.Forward(features, first, count, weights);
    if (!post.ok()) {
      status[i] = post.status();
      return;
    }
    std::copy(post->begin(), post->end(), out.begin() + first);
  });
  for (const auto& s : status) RETURN_IF_ERROR(s);
  return out;
}

}  // namespace eegpipe
