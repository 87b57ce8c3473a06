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

#include "fcm/tensor.h"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace fcm {

std::string ToString(const Shape& shape) {
  return std::to_string(shape.channels) + "x" + std::to_string(shape.height) +
         "x" + std::to_string(shape.width);
}

template <class Tag>
BasicTensor<Tag>::BasicTensor(Shape shape, std::vector<float> data)
    : shape_(shape), data_(std::move(data)) {
  if (shape_.channels == 0 || shape_.height == 0 || shape_.width == 0) {
    Fail(ErrorCode::kInvalidTensor, "tensor dimensions must be positive, got " +
                                        ToString(shape_));
  }
  if (data_.size() != shape_.elements()) {
    Fail(ErrorCode::kInvalidTensor,
         "tensor " + ToString(shape_) + " needs " +
             std::to_string(shape_.elements()) + " values, got " +
             std::to_string(data_.size()));
  }
  for (float v : data_) {
    if (!std::isfinite(v)) {
      Fail(ErrorCode::kInvalidTensor, "tensor contains a non-finite value");
    }
  }
}

template class BasicTensor<FeatureTag>;
template class BasicTensor<FusedTag>;

ShapeSpec FeatureSet::shapes() const {
  ShapeSpec out;
  out.reserve(tensors.size());
  for (const auto& t : tensors) out.push_back(t.shape());
  return out;
}

ShapeSpec ValidateSequence(const Sequence& seq) {
  if (seq.empty()) Fail(ErrorCode::kInvalidInput, "sequence has no frames");
  ShapeSpec layout = seq.front().shapes();
  if (layout.empty()) Fail(ErrorCode::kInvalidInput, "frame has no tensors");
  for (std::size_t i = 1; i < seq.size(); ++i) {
    if (seq[i].shapes() != layout) {
      Fail(ErrorCode::kInvalidInput,
           "tensor shapes change at frame " + std::to_string(i));
    }
  }
  return layout;
}

Moments ComputeMoments(std::span<const float> values) {
  if (values.empty()) Fail(ErrorCode::kInvalidTensor, "statistics of empty tensor");
  double sum = 0.0;
  for (float v : values) sum += v;
  const double k = static_cast<double>(values.size());
  const double mean = sum / k;
  double sq = 0.0;
  for (float v : values) {
    const double d = v - mean;
    sq += d * d;
  }
  return {mean, std::sqrt(sq / k)};
}

TensorStats ComputeStats(std::span<const float> values) {
  const Moments m = ComputeMoments(values);
  return {static_cast<float>(m.mean), static_cast<float>(m.stddev)};
}

TensorStats PooledSumStats(std::span<const TensorStats> stats) {
  if (stats.empty()) Fail(ErrorCode::kInvalidInput, "pooled stats of empty list");
  double mean = 0.0;
  double var = 0.0;
  for (const auto& s : stats) {
    mean += s.mean;
    var += static_cast<double>(s.stddev) * s.stddev;
  }
  return {static_cast<float>(mean), static_cast<float>(std::sqrt(var))};
}

ShapeSpec FpnShapes(std::uint32_t input_height, std::uint32_t input_width) {
  if (input_height == 0 || input_width == 0 || input_height % 32 != 0 ||
      input_width % 32 != 0) {
    Fail(ErrorCode::kInvalidInput,
         "FPN input resolution must be a positive multiple of 32");
  }
  ShapeSpec layout;
  for (int n = 1; n <= 4; ++n) {
    layout.push_back({256, input_height >> (n + 1), input_width >> (n + 1)});
  }
  return layout;
}

ShapeSpec DarknetShapes() {
  return {{256, 76, 136}, {512, 38, 68}, {1024, 19, 34}};
}

ShapeSpec DarknetAltShapes() {
  return {{128, 76, 136}, {256, 38, 68}, {512, 19, 34}};
}

ShapeSpec ParseShapeSpec(const std::string& text) {
  ShapeSpec layout;
  std::stringstream list(text);
  std::string item;
  while (std::getline(list, item, ',')) {
    Shape s;
    char x1 = 0, x2 = 0;
    std::istringstream in(item);
    if (!(in >> s.channels >> x1 >> s.height >> x2 >> s.width) || x1 != 'x' ||
        x2 != 'x' || !in.eof() || s.elements() == 0) {
      Fail(ErrorCode::kInvalidInput, "bad shape '" + item + "', want CxHxW");
    }
    layout.push_back(s);
  }
  if (layout.empty()) Fail(ErrorCode::kInvalidInput, "empty shape list");
  return layout;
}

namespace {

// Box-Muller over mt19937_64. Both are fully specified, so the stream of
// draws is identical across standard library implementations.
class GaussianSource {
 public:
  explicit GaussianSource(std::uint64_t seed) : engine_(seed) {}

  double Uniform() {
    // 53 random bits in (0, 1].
    return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
  }

  double Next() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(Uniform()));
    const double theta = 2.0 * std::numbers::pi * Uniform();
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

std::vector<Moments> DrawBaseTargets(GaussianSource& rng, std::size_t count) {
  std::vector<Moments> targets;
  for (std::size_t n = 0; n < count; ++n) {
    const double sign = rng.Uniform() < 0.5 ? -1.0 : 1.0;
    const double mean = sign * (0.5 + 1.5 * rng.Uniform());
    targets.push_back({mean, 0.5 + 2.5 * rng.Uniform()});
  }
  return targets;
}

Moments Drifted(const Moments& base, std::uint32_t frame, double drift) {
  return {base.mean + drift * frame, std::max(1e-3, base.stddev + drift * frame)};
}

}  // namespace

std::vector<Moments> GenerationTargets(const ShapeSpec& layout, std::uint32_t frame,
                                       std::uint64_t seed, double drift) {
  GaussianSource rng(seed);
  auto targets = DrawBaseTargets(rng, layout.size());
  for (auto& t : targets) t = Drifted(t, frame, drift);
  return targets;
}

Sequence GenerateSequence(const ShapeSpec& layout, std::uint32_t frames,
                          std::uint64_t seed, double drift) {
  if (layout.empty()) Fail(ErrorCode::kInvalidInput, "empty shape layout");
  if (frames == 0) Fail(ErrorCode::kInvalidInput, "frames must be >= 1");
  GaussianSource rng(seed);
  const std::vector<Moments> base = DrawBaseTargets(rng, layout.size());

  Sequence seq;
  seq.reserve(frames);
  for (std::uint32_t t = 0; t < frames; ++t) {
    FeatureSet set;
    set.frame_index = t;
    for (std::size_t n = 0; n < layout.size(); ++n) {
      const Moments target = Drifted(base[n], t, drift);
      // Draws are standardised before scaling so the tensor hits its target
      // moments up to float rounding, not just in expectation.
      std::vector<double> z(layout[n].elements());
      double sum = 0.0;
      for (auto& v : z) sum += (v = rng.Next());
      const double mean = sum / z.size();
      double sq = 0.0;
      for (double v : z) sq += (v - mean) * (v - mean);
      const double sd = std::sqrt(sq / z.size());
      const double scale = sd > 0.0 ? target.stddev / sd : 0.0;
      std::vector<float> data(z.size());
      for (std::size_t i = 0; i < z.size(); ++i) {
        data[i] = static_cast<float>(target.mean + scale * (z[i] - mean));
      }
      set.tensors.emplace_back(layout[n], std::move(data));
    }
    seq.push_back(std::move(set));
  }
  return seq;
}

}  // namespace fcm
