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

#include "fcm/stats_coding.h"

#include <cmath>

#include "fcm/bfloat16.h"
#include "fcm/byte_io.h"

namespace fcm {
namespace {

void CheckPair(const TensorStats& s, const char* what) {
  if (!std::isfinite(s.mean) || !std::isfinite(s.stddev) || s.stddev < 0.0f) {
    Fail(ErrorCode::kInvalidStats, std::string("invalid ") + what + " statistics (mean " +
                                       std::to_string(s.mean) + ", stddev " +
                                       std::to_string(s.stddev) + ")");
  }
}

}  // namespace

std::string_view ModeName(StatsMode mode) {
  switch (mode) {
    case StatsMode::kBaseline: return "baseline";
    case StatsMode::kFull: return "full";
    case StatsMode::kSimplified: return "simplified";
  }
  return "unknown";
}

StatsMode ParseMode(std::string_view name) {
  if (name == "baseline" || name == "0") return StatsMode::kBaseline;
  if (name == "full" || name == "1") return StatsMode::kFull;
  if (name == "simplified" || name == "2") return StatsMode::kSimplified;
  Fail(ErrorCode::kConfigError, "unknown mode '" + std::string(name) + "'");
}

StatsParams MakeStatsParams(StatsMode mode, const FeatureSet& set,
                            const FusedTensor& fused, std::uint16_t refresh_period) {
  StatsParams p;
  p.mode = mode;
  p.refresh_period = refresh_period;
  if (mode == StatsMode::kBaseline) return p;
  std::vector<TensorStats> per_tensor;
  for (const auto& t : set.tensors) per_tensor.push_back(ComputeStats(t));
  if (mode == StatsMode::kFull) {
    p.per_tensor = std::move(per_tensor);
    p.fused = ComputeStats(fused);
  } else {
    p.pooled = PooledSumStats(per_tensor);
  }
  return p;
}

std::size_t StatsSegmentBytes(StatsMode mode, std::size_t tensor_count) {
  switch (mode) {
    case StatsMode::kBaseline: return 0;
    case StatsMode::kFull: return 8 * (tensor_count + 1);
    case StatsMode::kSimplified: return 4;
  }
  return 0;
}

std::vector<std::uint8_t> EncodeStats(const StatsParams& params) {
  std::vector<std::uint8_t> out;
  ByteWriter w(out);
  switch (params.mode) {
    case StatsMode::kBaseline:
      break;
    case StatsMode::kFull: {
      if (params.per_tensor.empty() || !params.fused) {
        Fail(ErrorCode::kInvalidStats, "full mode needs per-tensor and fused statistics");
      }
      for (const auto& s : params.per_tensor) {
        CheckPair(s, "per-tensor");
        w.F32(s.mean);
        w.F32(s.stddev);
      }
      CheckPair(*params.fused, "fused");
      w.F32(params.fused->mean);
      w.F32(params.fused->stddev);
      break;
    }
    case StatsMode::kSimplified: {
      if (!params.pooled) Fail(ErrorCode::kInvalidStats, "simplified mode needs pooled statistics");
      CheckPair(*params.pooled, "pooled");
      const TensorStats rounded{RoundToBfloat16(params.pooled->mean),
                                RoundToBfloat16(params.pooled->stddev)};
      CheckPair(rounded, "bfloat16-rounded pooled");
      w.U16(FloatToBfloat16Bits(params.pooled->mean));
      w.U16(FloatToBfloat16Bits(params.pooled->stddev));
      break;
    }
  }
  return out;
}

StatsParams DecodeStats(std::span<const std::uint8_t> bytes, StatsMode mode,
                        std::size_t tensor_count, std::uint16_t refresh_period) {
  const std::size_t expected = StatsSegmentBytes(mode, tensor_count);
  if (bytes.size() < expected) {
    Fail(ErrorCode::kTruncatedStream, "statistics segment has " +
                                          std::to_string(bytes.size()) + " of " +
                                          std::to_string(expected) + " bytes");
  }
  if (bytes.size() > expected) {
    Fail(ErrorCode::kCorruptStream, "statistics segment longer than " +
                                        std::to_string(expected) + " bytes");
  }
  StatsParams p;
  p.mode = mode;
  p.refresh_period = refresh_period;
  ByteReader r(bytes);
  if (mode == StatsMode::kFull) {
    for (std::size_t n = 0; n < tensor_count; ++n) {
      TensorStats s{r.F32(), r.F32()};
      CheckPair(s, "per-tensor");
      p.per_tensor.push_back(s);
    }
    TensorStats f{r.F32(), r.F32()};
    CheckPair(f, "fused");
    p.fused = f;
  } else if (mode == StatsMode::kSimplified) {
    const float mean = Bfloat16BitsToFloat(r.U16());
    const float stddev = Bfloat16BitsToFloat(r.U16());
    TensorStats s{mean, stddev};
    CheckPair(s, "pooled");
    p.pooled = s;
  }
  return p;
}

bool RefreshSchedule(std::uint64_t frame_index, std::uint32_t refresh_period) {
  if (refresh_period == 0) Fail(ErrorCode::kInvalidInput, "refresh period must be >= 1");
  return frame_index % refresh_period == 0;
}

std::uint64_t OverheadBytes(StatsMode mode, std::size_t tensor_count,
                            std::uint32_t refresh_period, std::uint64_t frames) {
  if (refresh_period == 0) Fail(ErrorCode::kInvalidInput, "refresh period must be >= 1");
  const std::uint64_t periods = (frames + refresh_period - 1) / refresh_period;
  switch (mode) {
    case StatsMode::kBaseline: return 8 * frames;
    case StatsMode::kFull: return 8 * (tensor_count + 1) * periods;
    case StatsMode::kSimplified: return 4 * periods;
  }
  return 0;
}

}  // namespace fcm
