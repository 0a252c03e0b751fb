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

#ifndef EEGPIPE_BINARY_IO_H_
#define EEGPIPE_BINARY_IO_H_

#include <cstdint>
#include <span>
#include <string>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"

namespace eegpipe {

// Appends fixed-width little-endian values to a byte string.
class ByteWriter {
 public:
  void PutU8(uint8_t v) { out_.push_back(static_cast<char>(v)); }
  void PutU32(uint32_t v);
  void PutU64(uint64_t v);
  void PutI16(int16_t v);
  void PutF32(float v);
  void PutF64(double v);
  // Length-prefixed (u32) string.
  void PutString(absl::string_view s);
  void PutRaw(absl::string_view s) { out_.append(s.data(), s.size()); }

  const std::string& bytes() const { return out_; }
  std::string Release() { return std::move(out_); }

 private:
  std::string out_;
};

// Bounds-checked little-endian reader. Every getter fails with
// DataLossError once the input is exhausted.
class ByteReader {
 public:
  explicit ByteReader(absl::string_view bytes) : bytes_(bytes) {}

  absl::StatusOr<uint8_t> GetU8();
  absl::StatusOr<uint32_t> GetU32();
  absl::StatusOr<uint64_t> GetU64();
  absl::StatusOr<int16_t> GetI16();
  absl::StatusOr<float> GetF32();
  absl::StatusOr<double> GetF64();
  absl::StatusOr<std::string> GetString();
  absl::StatusOr<absl::string_view> GetRaw(size_t n);

  size_t remaining() const { return bytes_.size() - pos_; }
  size_t position() const { return pos_; }

 private:
  absl::Status Need(size_t n) const;

  absl::string_view bytes_;
  size_t pos_ = 0;
};

// 64-bit FNV-1a. Stable across runs and platforms; used for config hashes.
uint64_t Fnv1a64(absl::string_view text);

std::string HashToHex(uint64_t hash);

absl::StatusOr<std::string> ReadFileToString(const std::string& path);
absl::Status WriteStringToFile(const std::string& path, absl::string_view data);

}  // namespace eegpipe

#endif  // EEGPIPE_BINARY_IO_H_
