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

#ifndef FCM_PACKING_H_
#define FCM_PACKING_H_

#include <cstdint>
#include <span>
#include <vector>

#include "fcm/tensor.h"

namespace fcm {

// Channel grid of a packed frame. Channel k sits at grid cell
// (k / cols, k % cols); cells past `channels` are padding.
struct Tiling {
  std::uint32_t rows = 1;
  std::uint32_t cols = 1;
  std::uint32_t channels = 1;
  std::uint32_t tile_height = 0;
  std::uint32_t tile_width = 0;

  std::uint32_t frame_height() const { return rows * tile_height; }
  std::uint32_t frame_width() const { return cols * tile_width; }

  friend bool operator==(const Tiling&, const Tiling&) = default;
};

// Near-square grid: cols = ceil(sqrt(C)), rows = ceil(C / cols).
Tiling TilingFor(const Shape& fused);

struct PackedFrame {
  Tiling tiling;
  std::uint32_t height = 0;
  std::uint32_t width = 0;
  std::vector<float> data;  // row-major, height * width

  friend bool operator==(const PackedFrame&, const PackedFrame&) = default;
};

struct MinMax {
  float min = 0.0f;
  float max = 0.0f;

  friend bool operator==(const MinMax&, const MinMax&) = default;
};

struct QuantFrame {
  std::uint32_t height = 0;
  std::uint32_t width = 0;
  std::uint8_t bit_depth = 0;
  std::vector<std::uint16_t> samples;

  std::uint32_t max_level() const { return (1u << bit_depth) - 1u; }
  friend bool operator==(const QuantFrame&, const QuantFrame&) = default;
};

struct QuantizeResult {
  QuantFrame frame;
  MinMax range;
};

inline constexpr int kMinBitDepth = 1;
inline constexpr int kMaxBitDepth = 16;

PackedFrame Pack(const FusedTensor& fused);
FusedTensor Unpack(const PackedFrame& frame, const Shape& fused);

// Min-max normalization followed by q-bit uniform scalar quantization:
// y = round((x - min) / (max - min) * (2^q - 1)), half away from zero.
// min and max are taken over channel cells only; padding cells encode as 0.
// A flat frame (max == min) quantizes to all zeros.
QuantizeResult Quantize(const PackedFrame& frame, int bit_depth);

// y / (2^q - 1), no min-max inversion. Without a tiling the frame is treated
// as a single channel.
PackedFrame DequantizeProposed(const QuantFrame& frame);
PackedFrame DequantizeProposed(const QuantFrame& frame, const Tiling& tiling);

// y / (2^q - 1) * (max - min) + min.
PackedFrame DequantizeBaseline(const QuantFrame& frame, const MinMax& range);
PackedFrame DequantizeBaseline(const QuantFrame& frame, const MinMax& range,
                               const Tiling& tiling);

// Raw sample layout shared by the inner codecs: one byte per sample for
// q <= 8, otherwise two bytes little-endian.
std::size_t SampleBytes(int bit_depth);
std::vector<std::uint8_t> SerializeSamples(const QuantFrame& frame);
QuantFrame ParseSamples(std::span<const std::uint8_t> bytes, std::uint32_t height,
                        std::uint32_t width, int bit_depth);

}  // namespace fcm

#endif  // FCM_PACKING_H_
