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

#ifndef EEGPIPE_EDF_H_
#define EEGPIPE_EDF_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"

namespace eegpipe {

// Referential electrode signals at a single uniform sample rate, in µV.
class Recording {
 public:
  // Fails unless labels and sample vectors line up, all vectors have equal
  // length and the sample rate is positive.
  static absl::StatusOr<Recording> Create(
      std::vector<std::string> labels, std::vector<std::vector<double>> samples,
      double sample_rate);

  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<double>& samples(size_t i) const { return samples_[i]; }
  const std::vector<std::vector<double>>& all_samples() const {
    return samples_;
  }
  size_t electrode_count() const { return labels_.size(); }
  size_t sample_count() const {
    return samples_.empty() ? 0 : samples_.front().size();
  }
  double sample_rate() const { return sample_rate_; }
  double duration_seconds() const { return sample_count() / sample_rate_; }

 private:
  Recording() = default;

  std::vector<std::string> labels_;
  std::vector<std::vector<double>> samples_;
  double sample_rate_ = 0.0;
};

struct SignalDescriptor {
  std::string label;
  std::string transducer;
  std::string physical_dimension = "uV";
  double physical_min = -1.0;
  double physical_max = 1.0;
  int digital_min = -32768;
  int digital_max = 32767;
  std::string prefiltering;
  int samples_per_record = 1;
  std::string reserved;

  double Gain() const {
    return (physical_max - physical_min) / (digital_max - digital_min);
  }
  double ToPhysical(int digital) const {
    return physical_min + (digital - digital_min) * Gain();
  }
};

struct EdfHeader {
  std::string version = "0";
  std::string patient_id;
  std::string recording_id;
  std::string start_date = "01.01.00";  // dd.mm.yy
  std::string start_time = "00.00.00";  // hh.mm.ss
  std::string reserved;
  int64_t record_count = 0;
  double record_duration = 1.0;
  std::vector<SignalDescriptor> signals;

  int64_t HeaderBytes() const {
    return 256 + 256 * static_cast<int64_t>(signals.size());
  }
  int64_t RecordBytes() const;
};

// Header plus the raw 16-bit digital samples of every signal.
struct EdfFile {
  EdfHeader header;
  std::vector<std::vector<int16_t>> digital;

  std::vector<double> Physical(size_t signal) const;
  double SampleRate(size_t signal) const {
    return header.signals[signal].samples_per_record / header.record_duration;
  }
  double DurationSeconds() const {
    return header.record_count * header.record_duration;
  }

  // Converts the requested signals (all non-annotation signals when empty) to
  // a Recording. Mixed sample rates among the requested signals are rejected.
  absl::StatusOr<Recording> ToRecording(
      std::span<const std::string> labels = {}) const;
};

absl::StatusOr<EdfFile> ParseEdf(absl::string_view bytes);
// Parses only the fixed and signal headers; data records are not checked.
absl::StatusOr<EdfHeader> ParseEdfHeader(absl::string_view bytes);

absl::StatusOr<std::string> WriteEdf(const EdfFile& file);

// Converts physical samples back to digital values via the inverse
// calibration. Samples outside the physical range are rejected.
absl::StatusOr<std::string> WriteEdf(const Recording& recording,
                                     const EdfHeader& header);

// Header for `recording` with one signal per electrode, full 16-bit digital
// range and a symmetric physical range covering every sample.
absl::StatusOr<EdfHeader> DefaultHeaderFor(const Recording& recording,
                                           double record_duration = 1.0);

absl::StatusOr<int16_t> ToDigital(const SignalDescriptor& signal,
                                  double physical);

}  // namespace eegpipe

#endif  // EEGPIPE_EDF_H_
