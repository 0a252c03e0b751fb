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

#include "eegpipe/binary_io.h"

#include <bit>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"

namespace eegpipe {

namespace {

template <typename T>
void PutLittleEndian(std::string& out, T v) {
  for (size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
}

template <typename T>
T GetLittleEndian(absl::string_view bytes, size_t pos) {
  T v = 0;
  for (size_t i = 0; i < sizeof(T); ++i) {
    v |= static_cast<T>(static_cast<uint8_t>(bytes[pos + i])) << (8 * i);
  }
  return v;
}

}  // namespace

void ByteWriter::PutU32(uint32_t v) { PutLittleEndian(out_, v); }
void ByteWriter::PutU64(uint64_t v) { PutLittleEndian(out_, v); }
void ByteWriter::PutI16(int16_t v) {
  PutLittleEndian(out_, static_cast<uint16_t>(v));
}
void ByteWriter::PutF32(float v) {
  PutLittleEndian(out_, std::bit_cast<uint32_t>(v));
}
void ByteWriter::PutF64(double v) {
  PutLittleEndian(out_, std::bit_cast<uint64_t>(v));
}
void ByteWriter::PutString(absl::string_view s) {
  PutU32(static_cast<uint32_t>(s.size()));
  out_.append(s.data(), s.size());
}

absl::Status ByteReader::Need(size_t n) const {
  if (remaining() < n) {
    return absl::DataLossError(absl::StrCat("unexpected end of data at byte ",
                                            pos_, " (need ", n, " more)"));
  }
  return absl::OkStatus();
}

absl::StatusOr<uint8_t> ByteReader::GetU8() {
  if (auto s = Need(1); !s.ok()) return s;
  return static_cast<uint8_t>(bytes_[pos_++]);
}

absl::StatusOr<uint32_t> ByteReader::GetU32() {
  if (auto s = Need(4); !s.ok()) return s;
  uint32_t v = GetLittleEndian<uint32_t>(bytes_, pos_);
  pos_ += 4;
  return v;
}

absl::StatusOr<uint64_t> ByteReader::GetU64() {
  if (auto s = Need(8); !s.ok()) return s;
  uint64_t v = GetLittleEndian<uint64_t>(bytes_, pos_);
  pos_ += 8;
  return v;
}

absl::StatusOr<int16_t> ByteReader::GetI16() {
  if (auto s = Need(2); !s.ok()) return s;
  uint16_t v = GetLittleEndian<uint16_t>(bytes_, pos_);
  pos_ += 2;
  return static_cast<int16_t>(v);
}

absl::StatusOr<float> ByteReader::GetF32() {
  auto v = GetU32();
  if (!v.ok()) return v.status();
  return std::bit_cast<float>(*v);
}

absl::StatusOr<double> ByteReader::GetF64() {
  auto v = GetU64();
  if (!v.ok()) return v.status();
  return std::bit_cast<double>(*v);
}

absl::StatusOr<std::string> ByteReader::GetString() {
  auto n = GetU32();
  if (!n.ok()) return n.status();
  auto raw = GetRaw(*n);
  if (!raw.ok()) return raw.status();
  return std::string(*raw);
}

absl::StatusOr<absl::string_view> ByteReader::GetRaw(size_t n) {
  if (auto s = Need(n); !s.ok()) return s;
  absl::string_view v = bytes_.substr(pos_, n);
  pos_ += n;
  return v;
}

uint64_t Fnv1a64(absl::string_view text) {
  uint64_t hash = 0xcbf29ce484222325ULL;
  for (char c : text) {
    hash ^= static_cast<uint8_t>(c);
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string HashToHex(uint64_t hash) { return absl::StrFormat("%016x", hash); }

absl::StatusOr<std::string> ReadFileToString(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) return absl::DataLossError(absl::StrCat("read failed: ", path));
  return ss.str();
}

absl::Status WriteStringToFile(const std::string& path,
                               absl::string_view data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    return absl::PermissionDeniedError(absl::StrCat("cannot write ", path));
  }
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) return absl::DataLossError(absl::StrCat("write failed: ", path));
  return absl::OkStatus();
}

}  // namespace eegpipe
