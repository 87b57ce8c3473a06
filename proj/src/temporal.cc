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

#include "fcm/temporal.h"

namespace fcm {
namespace {

FeatureSet Midpoint(const FeatureSet& a, const FeatureSet& b, std::uint32_t index) {
  FeatureSet out;
  out.frame_index = index;
  for (std::size_t n = 0; n < a.tensors.size(); ++n) {
    const auto x = a.tensors[n].data();
    const auto y = b.tensors[n].data();
    std::vector<float> mid(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      mid[i] = static_cast<float>((static_cast<double>(x[i]) + y[i]) * 0.5);
    }
    out.tensors.emplace_back(a.tensors[n].shape(), std::move(mid));
  }
  return out;
}

}  // namespace

std::uint32_t KeptFrameCount(std::uint32_t original_count, bool enabled) {
  return enabled ? (original_count + 1) / 2 : original_count;
}

DownsampleResult TemporalDownsample(const Sequence& seq, bool enabled) {
  DownsampleResult r;
  const std::size_t step = enabled ? 2 : 1;
  for (std::size_t i = 0; i < seq.size(); i += step) {
    r.kept.push_back(seq[i]);
    r.kept_indices.push_back(static_cast<std::uint32_t>(i));
  }
  return r;
}

Sequence TemporalUpsample(const Sequence& kept, std::uint32_t original_count) {
  if (kept.empty()) Fail(ErrorCode::kInvalidInput, "nothing to upsample");
  if (KeptFrameCount(original_count, true) != kept.size()) {
    Fail(ErrorCode::kInvalidInput,
         std::to_string(kept.size()) + " kept frames cannot rebuild " +
             std::to_string(original_count) + " frames");
  }
  ValidateSequence(kept);
  Sequence out;
  out.reserve(original_count);
  for (std::uint32_t i = 0; i < original_count; ++i) {
    const std::size_t k = i / 2;
    if (i % 2 == 0) {
      out.push_back(kept[k]);
      out.back().frame_index = i;
    } else if (k + 1 < kept.size()) {
      out.push_back(Midpoint(kept[k], kept[k + 1], i));
    } else {
      out.push_back(kept[k]);
      out.back().frame_index = i;
    }
  }
  return out;
}

}  // namespace fcm
