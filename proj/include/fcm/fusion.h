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

#ifndef FCM_FUSION_H_
#define FCM_FUSION_H_

#include <cstdint>
#include <memory>

#include "fcm/tensor.h"

namespace fcm {

// Fusion implementation IDs as carried in the FCMS header.
enum class FusionId : std::uint8_t {
  kIdentity = 0,
  kSpaceToChannel = 1,
};

// Multi-scale fusion / restoration pair. An implementation must make
// Restore(Fuse(x), x.shapes()) reproduce x; the reference rules below do so
// bit-exactly.
class FeatureFusion {
 public:
  virtual ~FeatureFusion() = default;

  virtual FusionId id() const = 0;
  // Throws UnsupportedGeometry when the shapes cannot be fused.
  virtual Shape FusedShape(const ShapeSpec& shapes) const = 0;
  virtual FusedTensor Fuse(const FeatureSet& set) const = 0;
  virtual FeatureSet Restore(const FusedTensor& fused,
                             const ShapeSpec& shapes) const = 0;
};

// Single-tensor pass-through.
class IdentityFusion final : public FeatureFusion {
 public:
  FusionId id() const override { return FusionId::kIdentity; }
  Shape FusedShape(const ShapeSpec& shapes) const override;
  FusedTensor Fuse(const FeatureSet& set) const override;
  FeatureSet Restore(const FusedTensor& fused,
                     const ShapeSpec& shapes) const override;
};

// Every level is folded onto the smallest spatial grid (min H, min W) by a
// space-to-channel rearrangement with integer block factors
// (H_n / H_min, W_n / W_min), then levels are concatenated along channels in
// declaration order. Inside a level, output channel c * fh * fw + dy * fw + dx
// at (y, x) holds input (c, y * fh + dy, x * fw + dx). No arithmetic is done,
// so the fused tensor is a permutation of the input elements.
class SpaceToChannelFusion final : public FeatureFusion {
 public:
  FusionId id() const override { return FusionId::kSpaceToChannel; }
  Shape FusedShape(const ShapeSpec& shapes) const override;
  FusedTensor Fuse(const FeatureSet& set) const override;
  FeatureSet Restore(const FusedTensor& fused,
                     const ShapeSpec& shapes) const override;
};

FusionId DefaultFusionId(const ShapeSpec& shapes);
std::unique_ptr<FeatureFusion> MakeFusion(FusionId id);

// Convenience wrappers using DefaultFusionId.
FusedTensor Fuse(const FeatureSet& set);
FeatureSet Restore(const FusedTensor& fused, const ShapeSpec& shapes);

}  // namespace fcm

#endif  // FCM_FUSION_H_
