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

#include "fcm/rescale.h"

#include <cmath>

namespace fcm {
namespace {

template <class Tag>
BasicTensor<Tag> Affine(const BasicTensor<Tag>& in, double scale, double offset) {
  const auto src = in.data();
  std::vector<float> out(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) {
    out[i] = static_cast<float>(scale * src[i] + offset);
  }
  return BasicTensor<Tag>(in.shape(), std::move(out));
}

template <class Tag>
BasicTensor<Tag> Constant(const BasicTensor<Tag>& like, double value) {
  return BasicTensor<Tag>(like.shape(),
                          std::vector<float>(like.size(), static_cast<float>(value)));
}

template <class Tag>
BasicTensor<Tag> ZScoreRescale(const BasicTensor<Tag>& in, const TensorStats& target) {
  const Moments m = ComputeMoments(in.data());
  if (m.stddev < kDegenerateStddev) return Constant(in, target.mean);
  const double a = target.stddev / m.stddev;
  return Affine(in, a, target.mean - a * m.mean);
}

}  // namespace

FusedTensor RescaleFused(const FusedTensor& decoded, const TensorStats& target) {
  return ZScoreRescale(decoded, target);
}

FeatureSet RescalePerTensor(const FeatureSet& decoded,
                            std::span<const TensorStats> targets) {
  if (targets.size() != decoded.tensors.size()) {
    Fail(ErrorCode::kInvalidInput, "need one target per tensor: " +
                                       std::to_string(decoded.tensors.size()) +
                                       " tensors, " + std::to_string(targets.size()) +
                                       " targets");
  }
  FeatureSet out;
  out.frame_index = decoded.frame_index;
  for (std::size_t n = 0; n < targets.size(); ++n) {
    out.tensors.push_back(ZScoreRescale(decoded.tensors[n], targets[n]));
  }
  return out;
}

FeatureSet RescaleSimplified(const FeatureSet& decoded, const TensorStats& pooled_target) {
  if (decoded.tensors.empty()) Fail(ErrorCode::kInvalidInput, "empty feature set");
  double mean_sum = 0.0;
  double var_sum = 0.0;
  for (const auto& t : decoded.tensors) {
    const Moments m = ComputeMoments(t.data());
    mean_sum += m.mean;
    var_sum += m.stddev * m.stddev;
  }
  const double n = static_cast<double>(decoded.tensors.size());
  const double pooled_stddev = std::sqrt(var_sum);

  FeatureSet out;
  out.frame_index = decoded.frame_index;
  if (pooled_stddev < kDegenerateStddev) {
    for (const auto& t : decoded.tensors) out.tensors.push_back(Constant(t, pooled_target.mean / n));
    return out;
  }
  const double a = pooled_target.stddev / pooled_stddev;
  const double b = (pooled_target.mean - a * mean_sum) / n;
  for (const auto& t : decoded.tensors) out.tensors.push_back(Affine(t, a, b));
  return out;
}

}  // namespace fcm
