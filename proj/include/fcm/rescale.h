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

#ifndef FCM_RESCALE_H_
#define FCM_RESCALE_H_

#include <span>

#include "fcm/tensor.h"

namespace fcm {

// Below this decoded standard deviation the Z-score is undefined and the
// rescalers emit constant tensors instead.
inline constexpr double kDegenerateStddev = 1e-8;

// Z-score normalization of the reconstruction by its own moments followed by
// inverse normalization with the signaled target:
//   x~ = (x^ - mu^) / sigma^ * sigma + mu.
// The decoder-side moments are recomputed here in double precision.
FusedTensor RescaleFused(const FusedTensor& decoded, const TensorStats& target);

// Same map applied to every restored tensor with its own target.
FeatureSet RescalePerTensor(const FeatureSet& decoded,
                            std::span<const TensorStats> targets);

// Pooled variant. One affine map y = a * x + b shared by all tensors, with
//   a = sigma_X / sigma_X^,   b = (mu_X - a * mu_X^) / N,
// where mu_X^ = sum of decoded means and sigma_X^ = root-sum-square of
// decoded stddevs. The 1/N share of the offset makes the output's summed
// means equal mu_X; for N = 1 it is the per-tensor rescale. A degenerate
// reconstruction is set to the constant mu_X / N everywhere.
FeatureSet RescaleSimplified(const FeatureSet& decoded, const TensorStats& pooled_target);

}  // namespace fcm

#endif  // FCM_RESCALE_H_
