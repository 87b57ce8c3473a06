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

#ifndef FCM_STATS_CODING_H_
#define FCM_STATS_CODING_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fcm/tensor.h"

namespace fcm {

enum class StatsMode : std::uint8_t {
  kBaseline = 0,    // per-frame min/max, no statistics
  kFull = 1,        // N per-tensor pairs + fused pair, binary32
  kSimplified = 2,  // one pooled pair, bfloat16
};

std::string_view ModeName(StatsMode mode);
StatsMode ParseMode(std::string_view name);

struct StatsParams {
  StatsMode mode = StatsMode::kBaseline;
  std::vector<TensorStats> per_tensor;  // Full only
  std::optional<TensorStats> fused;     // Full only
  std::optional<TensorStats> pooled;    // Simplified only
  std::uint16_t refresh_period = 1;

  friend bool operator==(const StatsParams&, const StatsParams&) = default;
};

// Statistics the encoder signals for one refresh frame.
StatsParams MakeStatsParams(StatsMode mode, const FeatureSet& set,
                            const FusedTensor& fused, std::uint16_t refresh_period);

// Segment size in bytes: Full 8(N+1), Simplified 4, Baseline 0.
std::size_t StatsSegmentBytes(StatsMode mode, std::size_t tensor_count);

// Full: (mu, sigma) binary32 pairs for x_1..x_N then x_f, little-endian.
// Simplified: bfloat16 mu_X then bfloat16 sigma_X (sigma, not variance).
// Baseline: nothing. Non-finite or negative-sigma parameters raise
// InvalidStats, including values that overflow when rounded to bfloat16.
std::vector<std::uint8_t> EncodeStats(const StatsParams& params);

// Inverse of EncodeStats. A short buffer raises TruncatedStream, a long one
// CorruptStream.
StatsParams DecodeStats(std::span<const std::uint8_t> bytes, StatsMode mode,
                        std::size_t tensor_count, std::uint16_t refresh_period = 1);

// True when statistics are emitted at this (coded) frame.
bool RefreshSchedule(std::uint64_t frame_index, std::uint32_t refresh_period);

// Side-information bytes over a run of frames:
// Baseline 8F, Full 8(N+1) ceil(F/L), Simplified 4 ceil(F/L).
std::uint64_t OverheadBytes(StatsMode mode, std::size_t tensor_count,
                            std::uint32_t refresh_period, std::uint64_t frames);

}  // namespace fcm

#endif  // FCM_STATS_CODING_H_
