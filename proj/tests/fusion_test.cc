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

#include <gtest/gtest.h>

#include <algorithm>

#include "test_util.h"

namespace fcm {
namespace {

using testing::RandomSet;

// Channel count of the space-to-channel fold, enumerated block by block.
std::uint64_t EnumeratedFusedChannels(const ShapeSpec& layout) {
  std::uint32_t h = UINT32_MAX, w = UINT32_MAX;
  for (const auto& s : layout) {
    h = std::min(h, s.height);
    w = std::min(w, s.width);
  }
  std::uint64_t channels = 0;
  for (const auto& s : layout) {
    for (std::uint32_t c = 0; c < s.channels; ++c) {
      for (std::uint32_t dy = 0; dy < s.height; dy += h) {
        for (std::uint32_t dx = 0; dx < s.width; dx += w) ++channels;
      }
    }
  }
  return channels;
}

TEST(FusionTest, SingleTensorIsIdentity) {
  const FeatureSet x = RandomSet({{3, 5, 7}}, 1);
  const FusedTensor f = Fuse(x);
  EXPECT_EQ(f.shape(), x.tensors[0].shape());
  EXPECT_TRUE(std::equal(f.data().begin(), f.data().end(), x.tensors[0].data().begin()));
  EXPECT_EQ(Restore(f, x.shapes()), x);
  EXPECT_EQ(DefaultFusionId(x.shapes()), FusionId::kIdentity);
}

TEST(FusionTest, FpnChannelCount) {
  const ShapeSpec fpn = FpnShapes(256, 384);
  const Shape fused = SpaceToChannelFusion().FusedShape(fpn);
  EXPECT_EQ(EnumeratedFusedChannels(fpn), 21760u);
  EXPECT_EQ(fused.channels, 21760u);
  EXPECT_EQ(fused.height, fpn.back().height);
  EXPECT_EQ(fused.width, fpn.back().width);
  std::size_t elements = 0;
  for (const auto& s : fpn) elements += s.elements();
  EXPECT_EQ(fused.elements(), elements);
}

TEST(FusionTest, DarknetChannelCount) {
  const Shape fused = SpaceToChannelFusion().FusedShape(DarknetShapes());
  EXPECT_EQ(EnumeratedFusedChannels(DarknetShapes()), 7168u);
  EXPECT_EQ(fused, (Shape{7168, 19, 34}));
}

TEST(FusionTest, LayoutOfOneBlock) {
  // Level 0 is 1x4x4 (factor 2), level 1 is 1x2x2 (factor 1).
  std::vector<float> a(16), b(4);
  for (int i = 0; i < 16; ++i) a[i] = static_cast<float>(i);
  for (int i = 0; i < 4; ++i) b[i] = 100.0f + i;
  FeatureSet x;
  x.tensors.emplace_back(Shape{1, 4, 4}, a);
  x.tensors.emplace_back(Shape{1, 2, 2}, b);
  const FusedTensor f = Fuse(x);
  ASSERT_EQ(f.shape(), (Shape{5, 2, 2}));
  // Output channel dy * 2 + dx at (y, x) holds input (2y + dy, 2x + dx).
  EXPECT_EQ(f.at(0, 0, 0), 0.0f);
  EXPECT_EQ(f.at(1, 0, 0), 1.0f);
  EXPECT_EQ(f.at(2, 0, 0), 4.0f);
  EXPECT_EQ(f.at(3, 1, 1), 15.0f);
  EXPECT_EQ(f.at(0, 1, 0), 8.0f);
  EXPECT_EQ(f.at(4, 1, 0), 102.0f);
}

class FusionRoundTrip : public ::testing::TestWithParam<ShapeSpec> {};

TEST_P(FusionRoundTrip, BitExactAndPermutation) {
  const ShapeSpec layout = GetParam();
  const FeatureSet x = RandomSet(layout, 42, -10.0f, 10.0f);
  const FusedTensor f = Fuse(x);
  EXPECT_EQ(Restore(f, layout), x);

  std::vector<float> in, out(f.data().begin(), f.data().end());
  for (const auto& t : x.tensors) in.insert(in.end(), t.data().begin(), t.data().end());
  std::sort(in.begin(), in.end());
  std::sort(out.begin(), out.end());
  EXPECT_EQ(in, out);
}

INSTANTIATE_TEST_SUITE_P(
    Geometries, FusionRoundTrip,
    ::testing::Values(ShapeSpec{{4, 8, 8}, {4, 4, 4}},
                      ShapeSpec{{3, 6, 9}, {5, 3, 3}, {2, 3, 3}},
                      ShapeSpec{{2, 4, 4}, {2, 4, 4}},
                      ShapeSpec{{1, 12, 8}, {3, 6, 2}},
                      FpnShapes(64, 96),
                      DarknetShapes()),
    [](const ::testing::TestParamInfo<ShapeSpec>& info) {
      return "Spec" + std::to_string(info.index) + "_" + std::to_string(info.param.size()) + "Levels";
    });

TEST(FusionTest, RandomGroundedGeometries) {
  std::mt19937 rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    auto pick = [&](std::uint32_t k) { return static_cast<std::uint32_t>(rng() % k); };
    const std::uint32_t h = 1 + pick(4), w = 1 + pick(4);
    ShapeSpec layout;
    const int levels = 1 + static_cast<int>(rng() % 4);
    for (int n = 0; n < levels; ++n) {
      layout.push_back({1 + pick(3), h * (1 + pick(3)), w * (1 + pick(3))});
    }
    layout.push_back({1 + pick(3), h, w});
    const FeatureSet x = RandomSet(layout, trial);
    const auto fusion = MakeFusion(FusionId::kSpaceToChannel);
    EXPECT_EQ(fusion->Restore(fusion->Fuse(x), layout), x) << "trial " << trial;
  }
}

TEST(FusionTest, UnsupportedGeometry) {
  auto expect_geometry_error = [](auto&& fn) {
    try {
      fn();
      ADD_FAILURE() << "no error";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kUnsupportedGeometry) << e.what();
    }
  };
  expect_geometry_error([] { SpaceToChannelFusion().FusedShape({{1, 6, 6}, {1, 4, 4}}); });
  expect_geometry_error([] { IdentityFusion().Fuse(RandomSet({{1, 2, 2}, {1, 2, 2}}, 1)); });
  const FeatureSet x = RandomSet({{1, 4, 4}, {1, 2, 2}}, 2);
  const FusedTensor f = Fuse(x);
  expect_geometry_error([&] { Restore(f, {{1, 4, 4}, {2, 2, 2}}); });
  expect_geometry_error([&] { Restore(f, {{1, 8, 8}, {1, 2, 2}}); });
}

}  // namespace
}  // namespace fcm
