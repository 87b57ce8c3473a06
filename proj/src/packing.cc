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

#include "fcm/packing.h"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fcm {
namespace {

void CheckBitDepth(int bit_depth) {
  if (bit_depth < kMinBitDepth || bit_depth > kMaxBitDepth) {
    Fail(ErrorCode::kInvalidInput,
         "bit depth " + std::to_string(bit_depth) + " outside [1, 16]");
  }
}

std::uint32_t CeilSqrt(std::uint32_t v) {
  auto r = static_cast<std::uint32_t>(std::sqrt(static_cast<double>(v)));
  while (static_cast<std::uint64_t>(r) * r < v) ++r;
  while (r > 0 && static_cast<std::uint64_t>(r - 1) * (r - 1) >= v) --r;
  return r;
}

// Visits the frame offset of every channel sample, tile by tile.
template <class Fn>
void ForEachContentRow(const Tiling& t, std::uint32_t frame_width, Fn&& fn) {
  for (std::uint32_t k = 0; k < t.channels; ++k) {
    const std::size_t y0 = static_cast<std::size_t>(k / t.cols) * t.tile_height;
    const std::size_t x0 = static_cast<std::size_t>(k % t.cols) * t.tile_width;
    for (std::uint32_t y = 0; y < t.tile_height; ++y) {
      fn(k, y, (y0 + y) * frame_width + x0);
    }
  }
}

void CheckTiling(const Tiling& t, std::uint32_t height, std::uint32_t width) {
  if (t.channels == 0 || static_cast<std::uint64_t>(t.rows) * t.cols < t.channels ||
      t.frame_height() != height || t.frame_width() != width) {
    Fail(ErrorCode::kUnsupportedGeometry, "tiling does not match frame geometry");
  }
}

}  // namespace

Tiling TilingFor(const Shape& fused) {
  if (fused.elements() == 0) Fail(ErrorCode::kUnsupportedGeometry, "empty fused tensor");
  Tiling t;
  t.channels = fused.channels;
  t.cols = CeilSqrt(fused.channels);
  t.rows = (fused.channels + t.cols - 1) / t.cols;
  t.tile_height = fused.height;
  t.tile_width = fused.width;
  if (static_cast<std::uint64_t>(t.rows) * t.tile_height > 0xFFFFFFFFu ||
      static_cast<std::uint64_t>(t.cols) * t.tile_width > 0xFFFFFFFFu) {
    Fail(ErrorCode::kUnsupportedGeometry, "packed frame too large");
  }
  return t;
}

PackedFrame Pack(const FusedTensor& fused) {
  PackedFrame p;
  p.tiling = TilingFor(fused.shape());
  p.height = p.tiling.frame_height();
  p.width = p.tiling.frame_width();
  p.data.assign(static_cast<std::size_t>(p.height) * p.width, 0.0f);
  const auto src = fused.data();
  const std::uint32_t w = p.tiling.tile_width;
  ForEachContentRow(p.tiling, p.width, [&](std::uint32_t k, std::uint32_t y, std::size_t off) {
    const float* row = src.data() + (static_cast<std::size_t>(k) * fused.height() + y) * w;
    std::copy(row, row + w, p.data.begin() + static_cast<std::ptrdiff_t>(off));
  });
  return p;
}

FusedTensor Unpack(const PackedFrame& frame, const Shape& fused) {
  const Tiling expected = TilingFor(fused);
  if (frame.tiling != expected || frame.height != expected.frame_height() ||
      frame.width != expected.frame_width() ||
      frame.data.size() != static_cast<std::size_t>(frame.height) * frame.width) {
    Fail(ErrorCode::kUnsupportedGeometry,
         "packed frame does not hold a fused tensor of shape " + ToString(fused));
  }
  std::vector<float> out(fused.elements());
  const std::uint32_t w = expected.tile_width;
  ForEachContentRow(expected, frame.width, [&](std::uint32_t k, std::uint32_t y, std::size_t off) {
    std::copy_n(frame.data.begin() + static_cast<std::ptrdiff_t>(off), w,
                out.begin() + static_cast<std::ptrdiff_t>(
                                  (static_cast<std::size_t>(k) * fused.height + y) * w));
  });
  return FusedTensor(fused, std::move(out));
}

QuantizeResult Quantize(const PackedFrame& frame, int bit_depth) {
  CheckBitDepth(bit_depth);
  CheckTiling(frame.tiling, frame.height, frame.width);
  if (frame.data.size() != static_cast<std::size_t>(frame.height) * frame.width) {
    Fail(ErrorCode::kUnsupportedGeometry, "packed frame size mismatch");
  }
  const Tiling& t = frame.tiling;
  float lo = std::numeric_limits<float>::infinity();
  float hi = -std::numeric_limits<float>::infinity();
  ForEachContentRow(t, frame.width, [&](std::uint32_t, std::uint32_t, std::size_t off) {
    for (std::uint32_t x = 0; x < t.tile_width; ++x) {
      const float v = frame.data[off + x];
      if (!std::isfinite(v)) Fail(ErrorCode::kInvalidInput, "non-finite sample in packed frame");
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  });

  QuantizeResult r;
  r.range = {lo, hi};
  r.frame.height = frame.height;
  r.frame.width = frame.width;
  r.frame.bit_depth = static_cast<std::uint8_t>(bit_depth);
  r.frame.samples.assign(frame.data.size(), 0);
  if (hi == lo) return r;

  const double levels = static_cast<double>(r.frame.max_level());
  const double range = static_cast<double>(hi) - lo;
  ForEachContentRow(t, frame.width, [&](std::uint32_t, std::uint32_t, std::size_t off) {
    for (std::uint32_t x = 0; x < t.tile_width; ++x) {
      const double y = std::round((frame.data[off + x] - static_cast<double>(lo)) / range * levels);
      r.frame.samples[off + x] = static_cast<std::uint16_t>(std::clamp(y, 0.0, levels));
    }
  });
  return r;
}

PackedFrame DequantizeProposed(const QuantFrame& frame) {
  return DequantizeProposed(frame, Tiling{1, 1, 1, frame.height, frame.width});
}

PackedFrame DequantizeProposed(const QuantFrame& frame, const Tiling& tiling) {
  return DequantizeBaseline(frame, MinMax{0.0f, 1.0f}, tiling);
}

PackedFrame DequantizeBaseline(const QuantFrame& frame, const MinMax& range) {
  return DequantizeBaseline(frame, range, Tiling{1, 1, 1, frame.height, frame.width});
}

PackedFrame DequantizeBaseline(const QuantFrame& frame, const MinMax& range,
                               const Tiling& tiling) {
  CheckBitDepth(frame.bit_depth);
  CheckTiling(tiling, frame.height, frame.width);
  if (frame.samples.size() != static_cast<std::size_t>(frame.height) * frame.width) {
    Fail(ErrorCode::kUnsupportedGeometry, "quantized frame size mismatch");
  }
  PackedFrame p;
  p.tiling = tiling;
  p.height = frame.height;
  p.width = frame.width;
  p.data.resize(frame.samples.size());
  const double levels = static_cast<double>(frame.max_level());
  const double lo = range.min;
  const double span = static_cast<double>(range.max) - range.min;
  for (std::size_t i = 0; i < p.data.size(); ++i) {
    p.data[i] = static_cast<float>(frame.samples[i] / levels * span + lo);
  }
  return p;
}

std::size_t SampleBytes(int bit_depth) {
  CheckBitDepth(bit_depth);
  return bit_depth <= 8 ? 1 : 2;
}

std::vector<std::uint8_t> SerializeSamples(const QuantFrame& frame) {
  const std::size_t width = SampleBytes(frame.bit_depth);
  std::vector<std::uint8_t> out(frame.samples.size() * width);
  if (width == 1) {
    for (std::size_t i = 0; i < frame.samples.size(); ++i) {
      out[i] = static_cast<std::uint8_t>(frame.samples[i]);
    }
  } else {
    for (std::size_t i = 0; i < frame.samples.size(); ++i) {
      out[2 * i] = static_cast<std::uint8_t>(frame.samples[i] & 0xFF);
      out[2 * i + 1] = static_cast<std::uint8_t>(frame.samples[i] >> 8);
    }
  }
  return out;
}

QuantFrame ParseSamples(std::span<const std::uint8_t> bytes, std::uint32_t height,
                        std::uint32_t width, int bit_depth) {
  const std::size_t sample_bytes = SampleBytes(bit_depth);
  const std::size_t count = static_cast<std::size_t>(height) * width;
  if (bytes.size() != count * sample_bytes) {
    Fail(ErrorCode::kDecodeError,
         "raw frame has " + std::to_string(bytes.size()) + " bytes, expected " +
             std::to_string(count * sample_bytes));
  }
  QuantFrame f;
  f.height = height;
  f.width = width;
  f.bit_depth = static_cast<std::uint8_t>(bit_depth);
  f.samples.resize(count);
  const std::uint32_t limit = f.max_level();
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint32_t v = sample_bytes == 1
                                ? bytes[i]
                                : static_cast<std::uint32_t>(bytes[2 * i] | (bytes[2 * i + 1] << 8));
    if (v > limit) {
      Fail(ErrorCode::kDecodeError, "sample " + std::to_string(v) + " exceeds " +
                                        std::to_string(bit_depth) + "-bit range");
    }
    f.samples[i] = static_cast<std::uint16_t>(v);
  }
  return f;
}

}  // namespace fcm
