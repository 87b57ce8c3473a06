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

#include "fcm/fusion.h"

#include <algorithm>

namespace fcm {
namespace {

struct LevelFactor {
  std::uint32_t fh;
  std::uint32_t fw;
};

std::vector<LevelFactor> BlockFactors(const ShapeSpec& shapes, Shape* grid) {
  if (shapes.empty()) Fail(ErrorCode::kUnsupportedGeometry, "no tensors to fuse");
  std::uint32_t h = shapes.front().height;
  std::uint32_t w = shapes.front().width;
  for (const auto& s : shapes) {
    if (s.elements() == 0) Fail(ErrorCode::kUnsupportedGeometry, "zero-sized tensor");
    h = std::min(h, s.height);
    w = std::min(w, s.width);
  }
  std::vector<LevelFactor> factors;
  std::uint64_t channels = 0;
  for (const auto& s : shapes) {
    if (s.height % h != 0 || s.width % w != 0) {
      Fail(ErrorCode::kUnsupportedGeometry,
           "no integer space-to-channel factor maps " + ToString(s) +
               " onto grid " + std::to_string(h) + "x" + std::to_string(w));
    }
    factors.push_back({s.height / h, s.width / w});
    channels += static_cast<std::uint64_t>(s.channels) * factors.back().fh *
                factors.back().fw;
  }
  if (channels > 0xFFFFFFFFu) {
    Fail(ErrorCode::kUnsupportedGeometry, "fused channel count overflows u32");
  }
  *grid = {static_cast<std::uint32_t>(channels), h, w};
  return factors;
}

}  // namespace

Shape IdentityFusion::FusedShape(const ShapeSpec& shapes) const {
  if (shapes.size() != 1) {
    Fail(ErrorCode::kUnsupportedGeometry, "identity fusion needs exactly one tensor");
  }
  return shapes.front();
}

FusedTensor IdentityFusion::Fuse(const FeatureSet& set) const {
  const Shape s = FusedShape(set.shapes());
  const auto data = set.tensors.front().data();
  return FusedTensor(s, {data.begin(), data.end()});
}

FeatureSet IdentityFusion::Restore(const FusedTensor& fused,
                                   const ShapeSpec& shapes) const {
  if (FusedShape(shapes) != fused.shape()) {
    Fail(ErrorCode::kUnsupportedGeometry, "fused shape does not match target");
  }
  FeatureSet set;
  set.tensors.emplace_back(fused.shape(), std::vector<float>(fused.data().begin(),
                                                             fused.data().end()));
  return set;
}

Shape SpaceToChannelFusion::FusedShape(const ShapeSpec& shapes) const {
  Shape grid;
  BlockFactors(shapes, &grid);
  return grid;
}

FusedTensor SpaceToChannelFusion::Fuse(const FeatureSet& set) const {
  const ShapeSpec shapes = set.shapes();
  Shape grid;
  const auto factors = BlockFactors(shapes, &grid);
  const std::size_t plane = grid.plane();
  std::vector<float> out(grid.elements());

  std::size_t base = 0;  // first output channel of the current level
  for (std::size_t n = 0; n < shapes.size(); ++n) {
    const Shape& s = shapes[n];
    const auto [fh, fw] = factors[n];
    const auto in = set.tensors[n].data();
    for (std::uint32_t c = 0; c < s.channels; ++c) {
      for (std::uint32_t dy = 0; dy < fh; ++dy) {
        for (std::uint32_t dx = 0; dx < fw; ++dx) {
          const std::size_t oc = base + (static_cast<std::size_t>(c) * fh + dy) * fw + dx;
          float* dst = out.data() + oc * plane;
          const float* src = in.data() + static_cast<std::size_t>(c) * s.plane();
          for (std::uint32_t y = 0; y < grid.height; ++y) {
            const float* row = src + static_cast<std::size_t>(y * fh + dy) * s.width + dx;
            for (std::uint32_t x = 0; x < grid.width; ++x) {
              dst[static_cast<std::size_t>(y) * grid.width + x] = row[x * fw];
            }
          }
        }
      }
    }
    base += static_cast<std::size_t>(s.channels) * fh * fw;
  }
  return FusedTensor(grid, std::move(out));
}

FeatureSet SpaceToChannelFusion::Restore(const FusedTensor& fused,
                                         const ShapeSpec& shapes) const {
  Shape grid;
  const auto factors = BlockFactors(shapes, &grid);
  if (grid != fused.shape()) {
    Fail(ErrorCode::kUnsupportedGeometry,
         "fused tensor " + ToString(fused.shape()) + " does not match target grid " +
             ToString(grid));
  }
  const std::size_t plane = grid.plane();
  const auto in = fused.data();
  FeatureSet set;

  std::size_t base = 0;
  for (std::size_t n = 0; n < shapes.size(); ++n) {
    const Shape& s = shapes[n];
    const auto [fh, fw] = factors[n];
    std::vector<float> out(s.elements());
    for (std::uint32_t c = 0; c < s.channels; ++c) {
      for (std::uint32_t dy = 0; dy < fh; ++dy) {
        for (std::uint32_t dx = 0; dx < fw; ++dx) {
          const std::size_t ic = base + (static_cast<std::size_t>(c) * fh + dy) * fw + dx;
          const float* src = in.data() + ic * plane;
          float* dst = out.data() + static_cast<std::size_t>(c) * s.plane();
          for (std::uint32_t y = 0; y < grid.height; ++y) {
            float* row = dst + static_cast<std::size_t>(y * fh + dy) * s.width + dx;
            for (std::uint32_t x = 0; x < grid.width; ++x) {
              row[x * fw] = src[static_cast<std::size_t>(y) * grid.width + x];
            }
          }
        }
      }
    }
    base += static_cast<std::size_t>(s.channels) * fh * fw;
    set.tensors.emplace_back(s, std::move(out));
  }
  return set;
}

FusionId DefaultFusionId(const ShapeSpec& shapes) {
  return shapes.size() == 1 ? FusionId::kIdentity : FusionId::kSpaceToChannel;
}

std::unique_ptr<FeatureFusion> MakeFusion(FusionId id) {
  switch (id) {
    case FusionId::kIdentity: return std::make_unique<IdentityFusion>();
    case FusionId::kSpaceToChannel: return std::make_unique<SpaceToChannelFusion>();
  }
  Fail(ErrorCode::kInvalidInput,
       "unknown fusion id " + std::to_string(static_cast<int>(id)));
}

FusedTensor Fuse(const FeatureSet& set) {
  return MakeFusion(DefaultFusionId(set.shapes()))->Fuse(set);
}

FeatureSet Restore(const FusedTensor& fused, const ShapeSpec& shapes) {
  return MakeFusion(DefaultFusionId(shapes))->Restore(fused, shapes);
}

}  // namespace fcm
