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

#ifndef FCM_TENSOR_H_
#define FCM_TENSOR_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fcm/errors.h"

namespace fcm {

struct Shape {
  std::uint32_t channels = 0;
  std::uint32_t height = 0;
  std::uint32_t width = 0;

  std::size_t elements() const {
    return static_cast<std::size_t>(channels) * height * width;
  }
  std::size_t plane() const { return static_cast<std::size_t>(height) * width; }

  friend bool operator==(const Shape&, const Shape&) = default;
};

std::string ToString(const Shape& shape);

using ShapeSpec = std::vector<Shape>;

// Channel-major (C, H, W) float tensor. Contents are validated on
// construction and never change afterwards.
template <class Tag>
class BasicTensor {
 public:
  BasicTensor() = default;
  BasicTensor(Shape shape, std::vector<float> data);

  const Shape& shape() const { return shape_; }
  std::uint32_t channels() const { return shape_.channels; }
  std::uint32_t height() const { return shape_.height; }
  std::uint32_t width() const { return shape_.width; }
  std::size_t size() const { return data_.size(); }

  std::span<const float> data() const { return data_; }
  float at(std::uint32_t c, std::uint32_t y, std::uint32_t x) const {
    return data_[(static_cast<std::size_t>(c) * shape_.height + y) *
                     shape_.width + x];
  }

  std::vector<float> release() && { return std::move(data_); }

  friend bool operator==(const BasicTensor&, const BasicTensor&) = default;

 private:
  Shape shape_;
  std::vector<float> data_;
};

struct FeatureTag {};
struct FusedTag {};

// One split-point tensor x_n.
using FeatureTensor = BasicTensor<FeatureTag>;
// The single tensor x_f produced by multi-scale fusion.
using FusedTensor = BasicTensor<FusedTag>;

extern template class BasicTensor<FeatureTag>;
extern template class BasicTensor<FusedTag>;

struct FeatureSet {
  std::vector<FeatureTensor> tensors;
  std::uint32_t frame_index = 0;

  ShapeSpec shapes() const;
  friend bool operator==(const FeatureSet&, const FeatureSet&) = default;
};

using Sequence = std::vector<FeatureSet>;

// Checks N >= 1 and that every frame carries the same shapes. Returns them.
ShapeSpec ValidateSequence(const Sequence& seq);

struct TensorStats {
  float mean = 0.0f;
  float stddev = 0.0f;

  friend bool operator==(const TensorStats&, const TensorStats&) = default;
};

// Full-precision moments, used where a second rounding to binary32 would
// cost accuracy (decoder-side rescaling).
struct Moments {
  double mean = 0.0;
  double stddev = 0.0;
};

// Two-pass population mean and standard deviation (divisor K) in double.
Moments ComputeMoments(std::span<const float> values);

TensorStats ComputeStats(std::span<const float> values);

template <class Tag>
TensorStats ComputeStats(const BasicTensor<Tag>& t) {
  return ComputeStats(t.data());
}

// (sum of means, root-sum-square of stddevs), the parameters of a sum of
// independent Gaussians.
TensorStats PooledSumStats(std::span<const TensorStats> stats);

// Split-point geometries.
// Four FPN levels of 256 channels at H_r/2^(n+1) x W_r/2^(n+1), n = 1..4.
ShapeSpec FpnShapes(std::uint32_t input_height, std::uint32_t input_width);
// Darknet-53 backbone split of JDE: 256x76x136, 512x38x68, 1024x19x34.
ShapeSpec DarknetShapes();
// Second JDE split near the YOLO layers: 128x76x136, 256x38x68, 512x19x34.
ShapeSpec DarknetAltShapes();

// Parses "CxHxW[,CxHxW...]".
ShapeSpec ParseShapeSpec(const std::string& text);

// Synthetic Gaussian split-point features. Tensor n draws a base target
// (mean, stddev) from the seed; at frame t the target becomes
// (mean + drift * t, stddev + drift * t). Output is a pure function of the
// arguments on every platform (no std::normal_distribution).
Sequence GenerateSequence(const ShapeSpec& layout, std::uint32_t frames,
                          std::uint64_t seed, double drift = 0.0);

// The (mean, stddev) GenerateSequence aims for in tensor n of frame `frame`.
std::vector<Moments> GenerationTargets(const ShapeSpec& layout, std::uint32_t frame,
                                       std::uint64_t seed, double drift = 0.0);

}  // namespace fcm

#endif  // FCM_TENSOR_H_
