// Copyright 2026 The fcm-stats Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fcm/byte_io.h"

#include <bit>
#include <string>

namespace fcm {

void ByteWriter::U16(std::uint16_t v) {
  out_.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out_.push_back(static_cast<std::uint8_t>(v >> 8));
}

void ByteWriter::U32(std::uint32_t v) {
  for (int shift = 0; shift < 32; shift += 8) {
    out_.push_back(static_cast<std::uint8_t>((v >> shift) & 0xFF));
  }
}

void ByteWriter::F32(float v) { U32(std::bit_cast<std::uint32_t>(v)); }

void ByteWriter::Bytes(std::span<const std::uint8_t> bytes) {
  out_.insert(out_.end(), bytes.begin(), bytes.end());
}

void ByteWriter::Tag(std::string_view four_cc) {
  for (char c : four_cc) out_.push_back(static_cast<std::uint8_t>(c));
}

void ByteReader::Require(std::size_t n, const char* what) const {
  if (n > remaining()) {
    Fail(ErrorCode::kTruncatedStream,
         std::string("stream ends inside ") + what + " at byte " +
             std::to_string(pos_) + " (need " + std::to_string(n) +
             ", have " + std::to_string(remaining()) + ")");
  }
}

std::uint8_t ByteReader::U8() {
  Require(1, "u8");
  return in_[pos_++];
}

std::uint16_t ByteReader::U16() {
  Require(2, "u16");
  const auto v = static_cast<std::uint16_t>(in_[pos_] | (in_[pos_ + 1] << 8));
  pos_ += 2;
  return v;
}

std::uint32_t ByteReader::U32() {
  Require(4, "u32");
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | in_[pos_ + i];
  pos_ += 4;
  return v;
}

float ByteReader::F32() { return std::bit_cast<float>(U32()); }

std::span<const std::uint8_t> ByteReader::Bytes(std::size_t n) {
  Require(n, "byte block");
  auto out = in_.subspan(pos_, n);
  pos_ += n;
  return out;
}

}  // namespace fcm
