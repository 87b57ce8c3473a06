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

#ifndef FCM_PIPELINE_H_
#define FCM_PIPELINE_H_

#include <cstdint>
#include <span>
#include <vector>

#include "fcm/bitstream.h"
#include "fcm/config.h"
#include "fcm/tensor.h"

namespace fcm {

// Encoder: temporal downsample -> statistics at each refresh frame ->
// fuse -> pack -> min-max q-bit quantization -> inner codec -> mux.
// In the statistics modes the min/max used for normalization is dropped
// rather than signaled.
Stream EncodeStream(const Sequence& seq, const EncodeConfig& config);
std::vector<std::uint8_t> Encode(const Sequence& seq, const EncodeConfig& config);

// Decoder: demux -> inner codec -> dequantize (y / (2^q - 1) in the
// statistics modes, inverse min-max in baseline) -> unpack ->
// [full: fused rescale] -> restore -> [full: per-tensor rescale |
// simplified: pooled rescale] -> temporal upsample.
// `options` only matters for the external codec, whose commands cannot
// travel in the stream.
Sequence DecodeStream(const Stream& stream, const CodecOptions& options = {});
Sequence Decode(std::span<const std::uint8_t> bytes, const CodecOptions& options = {});

// Upper bound on packed frame samples accepted from a stream header.
inline constexpr std::uint64_t kMaxFrameSamples = 1ull << 30;

}  // namespace fcm

#endif  // FCM_PIPELINE_H_
