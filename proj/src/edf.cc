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

#include "eegpipe/edf.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/status/status.h"
#include "absl/strings/ascii.h"
#include "absl/strings/match.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "eegpipe/status_macros.h"

namespace eegpipe {

namespace {

constexpr size_t kFixedHeaderBytes = 256;
constexpr size_t kSignalHeaderBytes = 256;
constexpr char kAnnotationLabel[] = "EDF Annotations";

// Field widths of the per-signal header block, in on-disk order.
constexpr size_t kLabelWidth = 16;
constexpr size_t kTransducerWidth = 80;
constexpr size_t kDimensionWidth = 8;
constexpr size_t kNumberWidth = 8;
constexpr size_t kPrefilterWidth = 80;
constexpr size_t kSignalReservedWidth = 32;

std::string Trimmed(absl::string_view field) {
  return std::string(absl::StripAsciiWhitespace(field));
}

absl::StatusOr<double> ParseDoubleField(absl::string_view field,
                                        absl::string_view name) {
  double v = 0.0;
  if (!absl::SimpleAtod(absl::StripAsciiWhitespace(field), &v) ||
      !std::isfinite(v)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "non-numeric header field ", name, ": '", Trimmed(field), "'"));
  }
  return v;
}

absl::StatusOr<int64_t> ParseIntField(absl::string_view field,
                                      absl::string_view name) {
  int64_t v = 0;
  if (!absl::SimpleAtoi(absl::StripAsciiWhitespace(field), &v)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "non-numeric header field ", name, ": '", Trimmed(field), "'"));
  }
  return v;
}

// Left-justified, space padded. Text longer than the field is an error.
absl::Status PutField(std::string& out, absl::string_view text, size_t width,
                      absl::string_view name) {
  if (text.size() > width) {
    return absl::InvalidArgumentError(absl::StrCat(
        "header field ", name, " '", text, "' exceeds ", width, " bytes"));
  }
  out.append(text.data(), text.size());
  out.append(width - text.size(), ' ');
  return absl::OkStatus();
}

// Shortest decimal rendering that fits the 8-byte numeric fields.
std::string FormatNumber(double v, size_t width) {
  if (v == std::floor(v) && std::fabs(v) < 1e7) {
    return absl::StrFormat("%d", static_cast<int64_t>(v));
  }
  for (int precision = static_cast<int>(width); precision >= 1; --precision) {
    std::string s = absl::StrFormat("%.*g", precision, v);
    if (s.size() <= width) return s;
  }
  return absl::StrFormat("%.1g", v);
}

absl::Status ValidateSignal(const SignalDescriptor& s) {
  if (s.digital_min >= s.digital_max) {
    return absl::InvalidArgumentError(
        absl::StrCat("signal '", s.label, "': digital_min ", s.digital_min,
                     " >= digital_max ", s.digital_max));
  }
  if (s.digital_min < std::numeric_limits<int16_t>::min() ||
      s.digital_max > std::numeric_limits<int16_t>::max()) {
    return absl::InvalidArgumentError(
        absl::StrCat("signal '", s.label, "': digital range exceeds 16 bits"));
  }
  if (s.physical_min == s.physical_max) {
    return absl::InvalidArgumentError(absl::StrCat(
        "signal '", s.label, "': physical_min equals physical_max"));
  }
  if (s.samples_per_record < 1) {
    return absl::InvalidArgumentError(absl::StrCat(
        "signal '", s.label, "': samples_per_record must be >= 1"));
  }
  return absl::OkStatus();
}

absl::Status ValidateHeader(const EdfHeader& h) {
  if (h.signals.empty()) {
    return absl::InvalidArgumentError("EDF must contain at least one signal");
  }
  if (!(h.record_duration > 0.0)) {
    return absl::InvalidArgumentError("record duration must be positive");
  }
  if (h.record_count < 0) {
    return absl::InvalidArgumentError("record count must be non-negative");
  }
  for (const auto& s : h.signals) RETURN_IF_ERROR(ValidateSignal(s));
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<Recording> Recording::Create(
    std::vector<std::string> labels, std::vector<std::vector<double>> samples,
    double sample_rate) {
  if (labels.size() != samples.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("label count ", labels.size(),
                     " does not match signal count ", samples.size()));
  }
  if (!(sample_rate > 0.0) || !std::isfinite(sample_rate)) {
    return absl::InvalidArgumentError("sample rate must be positive");
  }
  for (const auto& s : samples) {
    if (s.size() != samples.front().size()) {
      return absl::InvalidArgumentError(
          "electrode sample sequences differ in length");
    }
  }
  Recording r;
  r.labels_ = std::move(labels);
  r.samples_ = std::move(samples);
  r.sample_rate_ = sample_rate;
  return r;
}

int64_t EdfHeader::RecordBytes() const {
  int64_t n = 0;
  for (const auto& s : signals) n += 2 * s.samples_per_record;
  return n;
}

std::vector<double> EdfFile::Physical(size_t signal) const {
  const SignalDescriptor& desc = header.signals[signal];
  std::vector<double> out;
  out.reserve(digital[signal].size());
  for (int16_t d : digital[signal]) out.push_back(desc.ToPhysical(d));
  return out;
}

absl::StatusOr<Recording> EdfFile::ToRecording(
    std::span<const std::string> labels) const {
  std::vector<size_t> picked;
  if (labels.empty()) {
    for (size_t i = 0; i < header.signals.size(); ++i) {
      if (header.signals[i].label != kAnnotationLabel) picked.push_back(i);
    }
  } else {
    for (const std::string& want : labels) {
      auto it = std::find_if(header.signals.begin(), header.signals.end(),
                             [&](const SignalDescriptor& s) {
                               return absl::EqualsIgnoreCase(
                                   absl::StripAsciiWhitespace(s.label), want);
                             });
      if (it == header.signals.end()) {
        return absl::NotFoundError(absl::StrCat("missing signal ", want));
      }
      picked.push_back(static_cast<size_t>(it - header.signals.begin()));
    }
  }
  if (picked.empty()) {
    return absl::InvalidArgumentError("no signals selected");
  }
  const double rate = SampleRate(picked.front());
  std::vector<std::string> out_labels;
  std::vector<std::vector<double>> out_samples;
  for (size_t i : picked) {
    if (SampleRate(i) != rate) {
      return absl::InvalidArgumentError(
          absl::StrFormat("mixed sample rates: '%s' at %g Hz vs '%s' at %g Hz",
                          header.signals[i].label, SampleRate(i),
                          header.signals[picked.front()].label, rate));
    }
    out_labels.push_back(header.signals[i].label);
    out_samples.push_back(Physical(i));
  }
  return Recording::Create(std::move(out_labels), std::move(out_samples), rate);
}

absl::StatusOr<EdfHeader> ParseEdfHeader(absl::string_view bytes) {
  if (bytes.size() < kFixedHeaderBytes) {
    return absl::DataLossError(absl::StrCat("truncated header: ", bytes.size(),
                                            " bytes, need at least 256"));
  }
  EdfHeader h;
  size_t pos = 0;
  auto take = [&](size_t n) {
    absl::string_view f = bytes.substr(pos, n);
    pos += n;
    return f;
  };
  h.version = Trimmed(take(8));
  h.patient_id = Trimmed(take(80));
  h.recording_id = Trimmed(take(80));
  h.start_date = Trimmed(take(8));
  h.start_time = Trimmed(take(8));
  ASSIGN_OR_RETURN(int64_t header_bytes,
                   ParseIntField(take(8), "header_bytes"));
  h.reserved = Trimmed(take(44));
  ASSIGN_OR_RETURN(h.record_count, ParseIntField(take(8), "record_count"));
  ASSIGN_OR_RETURN(h.record_duration,
                   ParseDoubleField(take(8), "record_duration"));
  ASSIGN_OR_RETURN(int64_t ns, ParseIntField(take(4), "signal_count"));
  if (ns < 1) {
    return absl::InvalidArgumentError("signal_count must be >= 1");
  }
  if (header_bytes != 256 + 256 * ns) {
    return absl::InvalidArgumentError(absl::StrCat(
        "header_bytes ", header_bytes, " inconsistent with signal_count ", ns));
  }
  if (bytes.size() < static_cast<size_t>(header_bytes)) {
    return absl::DataLossError("truncated signal header");
  }
  if (!(h.record_duration > 0.0)) {
    return absl::InvalidArgumentError("record_duration must be positive");
  }

  const size_t n = static_cast<size_t>(ns);
  h.signals.resize(n);
  for (auto& s : h.signals) s.label = Trimmed(take(kLabelWidth));
  for (auto& s : h.signals) s.transducer = Trimmed(take(kTransducerWidth));
  for (auto& s : h.signals) {
    s.physical_dimension = Trimmed(take(kDimensionWidth));
  }
  for (auto& s : h.signals) {
    ASSIGN_OR_RETURN(s.physical_min,
                     ParseDoubleField(take(kNumberWidth), "physical_min"));
  }
  for (auto& s : h.signals) {
    ASSIGN_OR_RETURN(s.physical_max,
                     ParseDoubleField(take(kNumberWidth), "physical_max"));
  }
  for (auto& s : h.signals) {
    ASSIGN_OR_RETURN(int64_t v,
                     ParseIntField(take(kNumberWidth), "digital_min"));
    s.digital_min = static_cast<int>(v);
  }
  for (auto& s : h.signals) {
    ASSIGN_OR_RETURN(int64_t v,
                     ParseIntField(take(kNumberWidth), "digital_max"));
    s.digital_max = static_cast<int>(v);
  }
  for (auto& s : h.signals) s.prefiltering = Trimmed(take(kPrefilterWidth));
  for (auto& s : h.signals) {
    ASSIGN_OR_RETURN(int64_t v,
                     ParseIntField(take(kNumberWidth), "samples_per_record"));
    s.samples_per_record = static_cast<int>(v);
  }
  for (auto& s : h.signals) s.reserved = Trimmed(take(kSignalReservedWidth));
  for (const auto& s : h.signals) RETURN_IF_ERROR(ValidateSignal(s));
  return h;
}

absl::StatusOr<EdfFile> ParseEdf(absl::string_view bytes) {
  EdfFile file;
  ASSIGN_OR_RETURN(file.header, ParseEdfHeader(bytes));
  EdfHeader& h = file.header;
  const size_t data_offset = static_cast<size_t>(h.HeaderBytes());
  const size_t record_bytes = static_cast<size_t>(h.RecordBytes());
  const size_t available = bytes.size() - data_offset;
  if (h.record_count == -1) {
    // Recording still in progress when the header was written.
    h.record_count = static_cast<int64_t>(available / record_bytes);
  }
  if (h.record_count < 0) {
    return absl::InvalidArgumentError("record_count must be >= 0");
  }
  if (available < static_cast<size_t>(h.record_count) * record_bytes) {
    return absl::DataLossError(absl::StrCat(
        "truncated data record: expected ", h.record_count, " records of ",
        record_bytes, " bytes, found ", available, " bytes"));
  }

  file.digital.resize(h.signals.size());
  for (size_t i = 0; i < h.signals.size(); ++i) {
    file.digital[i].reserve(h.record_count * h.signals[i].samples_per_record);
  }
  const unsigned char* p =
      reinterpret_cast<const unsigned char*>(bytes.data()) + data_offset;
  for (int64_t r = 0; r < h.record_count; ++r) {
    for (size_t i = 0; i < h.signals.size(); ++i) {
      for (int k = 0; k < h.signals[i].samples_per_record; ++k) {
        uint16_t raw = static_cast<uint16_t>(p[0] | (p[1] << 8));
        file.digital[i].push_back(static_cast<int16_t>(raw));
        p += 2;
      }
    }
  }
  return file;
}

absl::StatusOr<std::string> WriteEdf(const EdfFile& file) {
  const EdfHeader& h = file.header;
  RETURN_IF_ERROR(ValidateHeader(h));
  if (file.digital.size() != h.signals.size()) {
    return absl::InvalidArgumentError("digital signal count mismatch");
  }
  for (size_t i = 0; i < h.signals.size(); ++i) {
    const size_t want =
        static_cast<size_t>(h.record_count) * h.signals[i].samples_per_record;
    if (file.digital[i].size() != want) {
      return absl::InvalidArgumentError(absl::StrCat(
          "signal '", h.signals[i].label, "' has ", file.digital[i].size(),
          " samples, header implies ", want));
    }
  }

  std::string out;
  out.reserve(h.HeaderBytes() + h.record_count * h.RecordBytes());
  RETURN_IF_ERROR(PutField(out, h.version, 8, "version"));
  RETURN_IF_ERROR(PutField(out, h.patient_id, 80, "patient_id"));
  RETURN_IF_ERROR(PutField(out, h.recording_id, 80, "recording_id"));
  RETURN_IF_ERROR(PutField(out, h.start_date, 8, "start_date"));
  RETURN_IF_ERROR(PutField(out, h.start_time, 8, "start_time"));
  RETURN_IF_ERROR(
      PutField(out, absl::StrCat(h.HeaderBytes()), 8, "header_bytes"));
  RETURN_IF_ERROR(PutField(out, h.reserved, 44, "reserved"));
  RETURN_IF_ERROR(
      PutField(out, absl::StrCat(h.record_count), 8, "record_count"));
  RETURN_IF_ERROR(
      PutField(out, FormatNumber(h.record_duration, 8), 8, "record_duration"));
  RETURN_IF_ERROR(
      PutField(out, absl::StrCat(h.signals.size()), 4, "signal_count"));

  for (const auto& s : h.signals) {
    RETURN_IF_ERROR(PutField(out, s.label, kLabelWidth, "label"));
  }
  for (const auto& s : h.signals) {
    RETURN_IF_ERROR(
        PutField(out, s.transducer, kTransducerWidth, "transducer"));
  }
  for (const auto& s : h.signals) {
    RETURN_IF_ERROR(PutField(out, s.physical_dimension, kDimensionWidth,
                             "physical_dimension"));
  }
  for (const auto& s : h.signals) {
    RETURN_IF_ERROR(PutField(out, FormatNumber(s.physical_min, kNumberWidth),
                             kNumberWidth, "physical_min"));
  }
  for (const auto& s : h.signals) {
    RETURN_IF_ERROR(PutField(out, FormatNumber(s.physical_max, kNumberWidth),
                             kNumberWidth, "physical_max"));
  }
  for (const auto& s : h.signals) {
    RETURN_IF_ERROR(PutField(out, absl::StrCat(s.digital_min), kNumberWidth,
                             "digital_min"));
  }
  for (const auto& s : h.signals) {
    RETURN_IF_ERROR(PutField(out, absl::StrCat(s.digital_max), kNumberWidth,
                             "digital_max"));
  }
  for (const auto& s : h.signals) {
    RETURN_IF_ERROR(
        PutField(out, s.prefiltering, kPrefilterWidth, "prefiltering"));
  }
  for (const auto& s : h.signals) {
    RETURN_IF_ERROR(PutField(out, absl::StrCat(s.samples_per_record),
                             kNumberWidth, "samples_per_record"));
  }
  for (const auto& s : h.signals) {
    RETURN_IF_ERROR(
        PutField(out, s.reserved, kSignalReservedWidth, "reserved"));
  }

  for (int64_t r = 0; r < h.record_count; ++r) {
    for (size_t i = 0; i < h.signals.size(); ++i) {
      const int spr = h.signals[i].samples_per_record;
      for (int k = 0; k < spr; ++k) {
        const uint16_t v = static_cast<uint16_t>(file.digital[i][r * spr + k]);
        out.push_back(static_cast<char>(v & 0xff));
        out.push_back(static_cast<char>(v >> 8));
      }
    }
  }
  return out;
}

absl::StatusOr<int16_t> ToDigital(const SignalDescriptor& s, double physical) {
  const double lo = std::min(s.physical_min, s.physical_max);
  const double hi = std::max(s.physical_min, s.physical_max);
  if (!(physical >= lo && physical <= hi)) {
    return absl::OutOfRangeError(absl::StrFormat(
        "sample %g outside physical range [%g, %g] of signal '%s'", physical,
        lo, hi, s.label));
  }
  const double d =
      std::nearbyint((physical - s.physical_min) / s.Gain() + s.digital_min);
  return static_cast<int16_t>(std::clamp(d, static_cast<double>(s.digital_min),
                                         static_cast<double>(s.digital_max)));
}

absl::StatusOr<std::string> WriteEdf(const Recording& recording,
                                     const EdfHeader& header) {
  if (header.signals.size() != recording.electrode_count()) {
    return absl::InvalidArgumentError(
        absl::StrCat("header describes ", header.signals.size(),
                     " signals, recording has ", recording.electrode_count()));
  }
  EdfFile file;
  file.header = header;
  file.digital.resize(header.signals.size());
  for (size_t i = 0; i < header.signals.size(); ++i) {
    const SignalDescriptor& desc = header.signals[i];
    const double expected_rate =
        desc.samples_per_record / header.record_duration;
    if (std::fabs(expected_rate - recording.sample_rate()) > 1e-9) {
      return absl::InvalidArgumentError(
          absl::StrFormat("signal '%s' declares %g Hz, recording is %g Hz",
                          desc.label, expected_rate, recording.sample_rate()));
    }
    file.digital[i].reserve(recording.sample_count());
    for (double x : recording.samples(i)) {
      ASSIGN_OR_RETURN(int16_t d, ToDigital(desc, x));
      file.digital[i].push_back(d);
    }
  }
  const int spr = header.signals.front().samples_per_record;
  if (recording.sample_count() % spr != 0) {
    return absl::InvalidArgumentError(absl::StrCat(
        "sample count ", recording.sample_count(),
        " is not a whole number of data records of ", spr, " samples"));
  }
  file.header.record_count =
      static_cast<int64_t>(recording.sample_count() / spr);
  return WriteEdf(file);
}

absl::StatusOr<EdfHeader> DefaultHeaderFor(const Recording& recording,
                                           double record_duration) {
  const double spr_exact = recording.sample_rate() * record_duration;
  const double spr = std::nearbyint(spr_exact);
  if (spr < 1 || std::fabs(spr - spr_exact) > 1e-9) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "sample rate %g Hz gives a non-integer record of %g samples",
        recording.sample_rate(), spr_exact));
  }
  EdfHeader h;
  h.record_duration = record_duration;
  h.record_count =
      static_cast<int64_t>(recording.sample_count() / static_cast<size_t>(spr));
  for (size_t i = 0; i < recording.electrode_count(); ++i) {
    double peak = 1.0;
    for (double x : recording.samples(i)) peak = std::max(peak, std::fabs(x));
    SignalDescriptor s;
    s.label = recording.labels()[i];
    s.physical_max = std::ceil(peak);
    s.physical_min = -s.physical_max;
    s.samples_per_record = static_cast<int>(spr);
    h.signals.push_back(std::move(s));
  }
  return h;
}

}  // namespace eegpipe
