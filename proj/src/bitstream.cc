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

#include "fcm/bitstream.h"

#include <algorithm>

#include "fcm/byte_io.h"
#include "fcm/temporal.h"

namespace fcm {
namespace {

constexpr char kMagic[4] = {'F', 'C', 'M', 'S'};

// Returns an empty string when the header is valid, otherwise the reason.
std::string HeaderProblem(const StreamHeader& h) {
  if (h.mode > StatsMode::kSimplified) return "unknown mode";
  if (h.bit_depth < kMinBitDepth || h.bit_depth > kMaxBitDepth) return "bit depth out of range";
  if (h.shapes.empty() || h.shapes.size() > 255) return "tensor count out of range";
  if (h.refresh_period == 0) return "refresh period is zero";
  if (h.fusion_id != FusionId::kIdentity && h.fusion_id != FusionId::kSpaceToChannel) {
    return "unknown fusion id";
  }
  switch (h.codec_id) {
    case CodecId::kRaw:
    case CodecId::kZDeflate:
    case CodecId::kRequant:
    case CodecId::kExternal:
      break;
    default:
      return "unknown codec id";
  }
  if (h.frame_count == 0) return "frame count is zero";
  for (const auto& s : h.shapes) {
    if (s.elements() == 0) return "zero-sized tensor shape";
  }
  if (h.fused_shape.elements() == 0) return "zero-sized fused shape";
  if (h.fps_num == 0 || h.fps_den == 0) return "zero frame rate";
  return {};
}

void WriteShape(ByteWriter& w, const Shape& s) {
  w.U32(s.channels);
  w.U32(s.height);
  w.U32(s.width);
}

Shape ReadShape(ByteReader& r) {
  Shape s;
  s.channels = r.U32();
  s.height = r.U32();
  s.width = r.U32();
  return s;
}

}  // namespace

std::uint32_t StreamHeader::coded_frame_count() const {
  return KeptFrameCount(frame_count, temporal);
}

std::size_t HeaderBytes(std::size_t tensor_count) { return 33 + 12 * tensor_count; }

std::size_t StatsSegmentCount(StatsMode mode, std::uint32_t refresh_period,
                              std::uint32_t coded_frames) {
  if (mode == StatsMode::kBaseline) return 0;
  return (static_cast<std::size_t>(coded_frames) + refresh_period - 1) / refresh_period;
}

std::vector<std::uint8_t> Mux(const Stream& stream) {
  const StreamHeader& h = stream.header;
  if (const auto problem = HeaderProblem(h); !problem.empty()) {
    Fail(ErrorCode::kMuxError, "invalid header: " + problem);
  }
  const std::uint32_t coded = h.coded_frame_count();
  if (stream.frames.size() != coded) {
    Fail(ErrorCode::kMuxError, std::to_string(stream.frames.size()) +
                                   " frame records for " + std::to_string(coded) +
                                   " coded frames");
  }
  const std::size_t segments = StatsSegmentCount(h.mode, h.refresh_period, coded);
  if (stream.stats_segments.size() != segments) {
    Fail(ErrorCode::kMuxError, std::to_string(stream.stats_segments.size()) +
                                   " statistics segments, schedule needs " +
                                   std::to_string(segments));
  }
  const std::size_t segment_bytes = StatsSegmentBytes(h.mode, h.num_tensors());
  for (const auto& seg : stream.stats_segments) {
    if (seg.size() != segment_bytes) {
      Fail(ErrorCode::kMuxError, "statistics segment of " + std::to_string(seg.size()) +
                                     " bytes, mode needs " + std::to_string(segment_bytes));
    }
  }

  std::vector<std::uint8_t> out;
  ByteWriter w(out);
  w.Tag(std::string_view(kMagic, 4));
  w.U8(kStreamVersion);
  w.U8(static_cast<std::uint8_t>(h.mode));
  w.U8(h.bit_depth);
  w.U8(static_cast<std::uint8_t>(h.shapes.size()));
  w.U16(h.refresh_period);
  w.U8(static_cast<std::uint8_t>(h.fusion_id));
  w.U8(static_cast<std::uint8_t>(h.codec_id));
  w.U8(h.temporal ? 1 : 0);
  w.U32(h.frame_count);
  for (const auto& s : h.shapes) WriteShape(w, s);
  WriteShape(w, h.fused_shape);
  w.U16(h.fps_num);
  w.U16(h.fps_den);

  for (std::uint32_t i = 0; i < coded; ++i) {
    const FrameRecord& rec = stream.frames[i];
    if (h.mode != StatsMode::kBaseline && RefreshSchedule(i, h.refresh_period)) {
      w.Bytes(stream.stats_segments[i / h.refresh_period]);
    }
    if (h.mode == StatsMode::kBaseline) {
      if (!rec.minmax) Fail(ErrorCode::kMuxError, "baseline frame " + std::to_string(i) + " lacks min/max");
      w.F32(rec.minmax->min);
      w.F32(rec.minmax->max);
    } else if (rec.minmax) {
      Fail(ErrorCode::kMuxError, "min/max only travels in baseline mode");
    }
    if (rec.payload.size() > 0xFFFFFFFFu) Fail(ErrorCode::kMuxError, "payload exceeds 4 GiB");
    w.U32(static_cast<std::uint32_t>(rec.payload.size()));
    w.Bytes(rec.payload);
  }
  return out;
}

Stream Demux(std::span<const std::uint8_t> bytes) {
  const std::size_t probe = std::min<std::size_t>(bytes.size(), 4);
  if (!std::equal(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>(probe), kMagic)) {
    Fail(ErrorCode::kNotAStream, "missing FCMS magic");
  }
  ByteReader r(bytes);
  r.Bytes(4);
  Stream s;
  StreamHeader& h = s.header;
  if (const auto version = r.U8(); version != kStreamVersion) {
    Fail(ErrorCode::kCorruptStream, "unsupported FCMS version " + std::to_string(version));
  }
  const std::uint8_t mode = r.U8();
  if (mode > static_cast<std::uint8_t>(StatsMode::kSimplified)) {
    Fail(ErrorCode::kCorruptStream, "unknown mode " + std::to_string(mode));
  }
  h.mode = static_cast<StatsMode>(mode);
  h.bit_depth = r.U8();
  const std::uint8_t n = r.U8();
  h.refresh_period = r.U16();
  h.fusion_id = static_cast<FusionId>(r.U8());
  h.codec_id = static_cast<CodecId>(r.U8());
  const std::uint8_t temporal = r.U8();
  if (temporal > 1) Fail(ErrorCode::kCorruptStream, "temporal flag must be 0 or 1");
  h.temporal = temporal == 1;
  h.frame_count = r.U32();
  for (std::uint8_t i = 0; i < n; ++i) h.shapes.push_back(ReadShape(r));
  h.fused_shape = ReadShape(r);
  h.fps_num = r.U16();
  h.fps_den = r.U16();
  if (const auto problem = HeaderProblem(h); !problem.empty()) {
    Fail(ErrorCode::kCorruptStream, "invalid header: " + problem);
  }

  const std::uint32_t coded = h.coded_frame_count();
  const std::size_t segment_bytes = StatsSegmentBytes(h.mode, h.num_tensors());
  for (std::uint32_t i = 0; i < coded; ++i) {
    if (h.mode != StatsMode::kBaseline && RefreshSchedule(i, h.refresh_period)) {
      const auto seg = r.Bytes(segment_bytes);
      s.stats_segments.emplace_back(seg.begin(), seg.end());
    }
    FrameRecord rec;
    if (h.mode == StatsMode::kBaseline) {
      MinMax mm{r.F32(), r.F32()};
      rec.minmax = mm;
    }
    const std::uint32_t length = r.U32();
    const auto payload = r.Bytes(length);
    rec.payload.assign(payload.begin(), payload.end());
    s.frames.push_back(std::move(rec));
  }
  if (!r.at_end()) {
    Fail(ErrorCode::kCorruptStream,
         std::to_string(r.remaining()) + " bytes past the last frame record");
  }
  return s;
}

BitrateReport Account(const Stream& stream) {
  const StreamHeader& h = stream.header;
  BitrateReport rep;
  rep.header_bytes = HeaderBytes(h.num_tensors());
  for (const auto& seg : stream.stats_segments) rep.stats_bytes += seg.size();
  for (const auto& f : stream.frames) {
    if (f.minmax) rep.minmax_bytes += 8;
    rep.framing_bytes += 4;
    rep.payload_bytes += f.payload.size();
  }
  rep.total_bytes = rep.header_bytes + rep.stats_bytes + rep.minmax_bytes +
                    rep.framing_bytes + rep.payload_bytes;
  rep.frame_count = h.frame_count;
  rep.fps = static_cast<double>(h.fps_num) / h.fps_den;
  rep.kbps = static_cast<double>(rep.total_bytes) * 8.0 * rep.fps / h.frame_count / 1000.0;
  return rep;
}

BitrateReport Account(std::span<const std::uint8_t> bytes) {
  BitrateReport rep = Account(Demux(bytes));
  if (rep.total_bytes != bytes.size()) {
    Fail(ErrorCode::kCorruptStream, "accounted size differs from stream size");
  }
  return rep;
}

}  // namespace fcm
