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

#ifndef FCM_BITSTREAM_H_
#define FCM_BITSTREAM_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fcm/fusion.h"
#include "fcm/inner_codec.h"
#include "fcm/packing.h"
#include "fcm/stats_coding.h"
#include "fcm/tensor.h"

namespace fcm {

// FCMS container, little-endian throughout.
//
//   header:
//     "FCMS" | version u8 | mode u8 | q u8 | N u8 | L u16 | fusion_id u8 |
//     codec_id u8 | temporal u8 | frame_count u32 |
//     N x (C u32, H u32, W u32) | fused (C u32, H u32, W u32) |
//     fps_num u16 | fps_den u16                      -> 33 + 12 N bytes
//   then for every coded frame i:
//     [stats segment]   iff mode != baseline and i % L == 0
//     [min f32, max f32] iff mode == baseline
//     payload length u32 | payload
//
// frame_count is the number of frames before temporal downsampling; the
// coded frame count is ceil(frame_count / 2) when the temporal flag is set.
inline constexpr std::uint8_t kStreamVersion = 1;

struct StreamHeader {
  StatsMode mode = StatsMode::kFull;
  std::uint8_t bit_depth = 10;
  std::uint16_t refresh_period = 1;
  FusionId fusion_id = FusionId::kIdentity;
  CodecId codec_id = CodecId::kRaw;
  bool temporal = false;
  std::uint32_t frame_count = 0;
  ShapeSpec shapes;
  Shape fused_shape;
  std::uint16_t fps_num = 30;
  std::uint16_t fps_den = 1;

  std::uint32_t coded_frame_count() const;
  std::size_t num_tensors() const { return shapes.size(); }
  friend bool operator==(const StreamHeader&, const StreamHeader&) = default;
};

std::size_t HeaderBytes(std::size_t tensor_count);

struct FrameRecord {
  std::optional<MinMax> minmax;  // baseline only
  std::vector<std::uint8_t> payload;

  friend bool operator==(const FrameRecord&, const FrameRecord&) = default;
};

struct Stream {
  StreamHeader header;
  // Encoded statistics, one per refresh period (empty in baseline mode).
  std::vector<std::vector<std::uint8_t>> stats_segments;
  std::vector<FrameRecord> frames;  // coded frames

  friend bool operator==(const Stream&, const Stream&) = default;
};

// Number of statistics segments a stream of `coded_frames` carries.
std::size_t StatsSegmentCount(StatsMode mode, std::uint32_t refresh_period,
                              std::uint32_t coded_frames);

// Throws MuxError when record counts or sizes disagree with the header.
std::vector<std::uint8_t> Mux(const Stream& stream);

// Throws NotAStream (bad magic), TruncatedStream (data ends early) or
// CorruptStream (bad field values, trailing bytes).
Stream Demux(std::span<const std::uint8_t> bytes);

struct BitrateReport {
  std::uint64_t total_bytes = 0;
  std::uint64_t header_bytes = 0;
  std::uint64_t stats_bytes = 0;
  std::uint64_t minmax_bytes = 0;
  std::uint64_t framing_bytes = 0;  // u32 payload length prefixes
  std::uint64_t payload_bytes = 0;
  std::uint32_t frame_count = 0;
  double fps = 0.0;
  double kbps = 0.0;  // total_bits * fps / frame_count / 1000
};

BitrateReport Account(std::span<const std::uint8_t> bytes);
BitrateReport Account(const Stream& stream);

}  // namespace fcm

#endif  // FCM_BITSTREAM_H_
