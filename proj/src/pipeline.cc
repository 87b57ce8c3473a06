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

#include "fcm/pipeline.h"

#include "fcm/fusion.h"
#include "fcm/packing.h"
#include "fcm/rescale.h"
#include "fcm/stats_coding.h"
#include "fcm/temporal.h"

namespace fcm {

Stream EncodeStream(const Sequence& seq, const EncodeConfig& config) {
  const ShapeSpec shapes = ValidateSequence(seq);
  if (shapes.size() > 255) Fail(ErrorCode::kInvalidInput, "at most 255 tensors per frame");
  if (seq.size() > 0xFFFFFFFFull) Fail(ErrorCode::kInvalidInput, "too many frames");
  if (config.refresh_period == 0) Fail(ErrorCode::kConfigError, "refresh period must be >= 1");
  if (config.bit_depth < kMinBitDepth || config.bit_depth > kMaxBitDepth) {
    Fail(ErrorCode::kConfigError, "q must lie in [1, 16]");
  }

  const FusionId fusion_id = config.fusion.value_or(DefaultFusionId(shapes));
  const auto fusion = MakeFusion(fusion_id);
  const auto codec = MakeCodec(config.codec, config.codec_options);

  Stream stream;
  StreamHeader& h = stream.header;
  h.mode = config.mode;
  h.bit_depth = static_cast<std::uint8_t>(config.bit_depth);
  h.refresh_period = config.refresh_period;
  h.fusion_id = fusion_id;
  h.codec_id = config.codec;
  h.temporal = config.temporal;
  h.frame_count = static_cast<std::uint32_t>(seq.size());
  h.shapes = shapes;
  h.fused_shape = fusion->FusedShape(shapes);
  h.fps_num = config.fps_num;
  h.fps_den = config.fps_den;

  const DownsampleResult coded = TemporalDownsample(seq, config.temporal);
  for (std::size_t i = 0; i < coded.kept.size(); ++i) {
    const FeatureSet& x = coded.kept[i];
    const FusedTensor fused = fusion->Fuse(x);
    if (config.mode != StatsMode::kBaseline && RefreshSchedule(i, config.refresh_period)) {
      stream.stats_segments.push_back(
          EncodeStats(MakeStatsParams(config.mode, x, fused, config.refresh_period)));
    }
    const QuantizeResult q = Quantize(Pack(fused), config.bit_depth);
    FrameRecord rec;
    if (config.mode == StatsMode::kBaseline) rec.minmax = q.range;
    rec.payload = codec->Encode(q.frame).frame_bytes;
    stream.frames.push_back(std::move(rec));
  }
  return stream;
}

std::vector<std::uint8_t> Encode(const Sequence& seq, const EncodeConfig& config) {
  return Mux(EncodeStream(seq, config));
}

Sequence DecodeStream(const Stream& stream, const CodecOptions& options) {
  const StreamHeader& h = stream.header;
  const auto fusion = MakeFusion(h.fusion_id);
  Shape fused_shape;
  try {
    fused_shape = fusion->FusedShape(h.shapes);
  } catch (const Error& e) {
    Fail(ErrorCode::kCorruptStream, std::string("header shapes cannot be fused: ") + e.what());
  }
  if (fused_shape != h.fused_shape) {
    Fail(ErrorCode::kCorruptStream, "header fused shape " + ToString(h.fused_shape) +
                                        " disagrees with fusion of tensor shapes " +
                                        ToString(fused_shape));
  }
  const Tiling tiling = TilingFor(fused_shape);
  const std::uint64_t samples =
      static_cast<std::uint64_t>(tiling.frame_height()) * tiling.frame_width();
  if (samples > kMaxFrameSamples) {
    Fail(ErrorCode::kCorruptStream, "packed frame of " + std::to_string(samples) +
                                        " samples exceeds decoder limit");
  }
  const std::uint32_t coded = h.coded_frame_count();
  if (stream.frames.size() != coded ||
      stream.stats_segments.size() != StatsSegmentCount(h.mode, h.refresh_period, coded)) {
    Fail(ErrorCode::kCorruptStream, "stream record counts disagree with header");
  }

  const auto codec = MakeCodec(h.codec_id, options);
  const FrameGeometry geometry{tiling.frame_height(), tiling.frame_width(), h.bit_depth};

  std::vector<StatsParams> params;
  for (const auto& seg : stream.stats_segments) {
    params.push_back(DecodeStats(seg, h.mode, h.num_tensors(), h.refresh_period));
  }

  Sequence decoded;
  decoded.reserve(coded);
  for (std::uint32_t i = 0; i < coded; ++i) {
    const FrameRecord& rec = stream.frames[i];
    const QuantFrame q = codec->Decode({h.codec_id, rec.payload}, geometry);

    PackedFrame packed;
    if (h.mode == StatsMode::kBaseline) {
      if (!rec.minmax) Fail(ErrorCode::kCorruptStream, "baseline frame without min/max");
      packed = DequantizeBaseline(q, *rec.minmax, tiling);
    } else {
      packed = DequantizeProposed(q, tiling);
    }
    FusedTensor fused = Unpack(packed, fused_shape);

    FeatureSet set;
    switch (h.mode) {
      case StatsMode::kBaseline:
        set = fusion->Restore(fused, h.shapes);
        break;
      case StatsMode::kFull: {
        const StatsParams& p = params[i / h.refresh_period];
        set = fusion->Restore(RescaleFused(fused, *p.fused), h.shapes);
        set = RescalePerTensor(set, p.per_tensor);
        break;
      }
      case StatsMode::kSimplified: {
        const StatsParams& p = params[i / h.refresh_period];
        set = RescaleSimplified(fusion->Restore(fused, h.shapes), *p.pooled);
        break;
      }
    }
    set.frame_index = h.temporal ? 2 * i : i;
    decoded.push_back(std::move(set));
  }
  if (!h.temporal) return decoded;
  return TemporalUpsample(decoded, h.frame_count);
}

Sequence Decode(std::span<const std::uint8_t> bytes, const CodecOptions& options) {
  return DecodeStream(Demux(bytes), options);
}

}  // namespace fcm
