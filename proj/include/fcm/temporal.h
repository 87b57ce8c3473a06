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

#ifndef FCM_TEMPORAL_H_
#define FCM_TEMPORAL_H_

#include <cstdint>
#include <vector>

#include "fcm/tensor.h"

namespace fcm {

struct DownsampleResult {
  Sequence kept;
  std::vector<std::uint32_t> kept_indices;
};

// Keeps frames 0, 2, 4, ... when enabled; identity otherwise.
DownsampleResult TemporalDownsample(const Sequence& seq, bool enabled);

// Number of frames TemporalDownsample keeps out of `original_count`.
std::uint32_t KeptFrameCount(std::uint32_t original_count, bool enabled);

// Rebuilds `original_count` frames from the even-indexed `kept` frames. Frame
// 2k+1 is the element-wise midpoint of kept frames k and k+1; a trailing odd
// frame repeats the last kept frame.
Sequence TemporalUpsample(const Sequence& kept, std::uint32_t original_count);

}  // namespace fcm

#endif  // FCM_TEMPORAL_H_
