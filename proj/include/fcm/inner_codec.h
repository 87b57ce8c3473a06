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

#ifndef FCM_INNER_CODEC_H_
#define FCM_INNER_CODEC_H_

#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "fcm/packing.h"

namespace fcm {

enum class CodecId : std::uint8_t {
  kRaw = 0,
  kZDeflate = 1,
  kRequant = 2,
  kExternal = 255,
};

std::string_view CodecName(CodecId id);
CodecId ParseCodecId(std::string_view text);

struct CodecPayload {
  CodecId codec_id = CodecId::kRaw;
  std::vector<std::uint8_t> frame_bytes;

  std::size_t byte_count() const { return frame_bytes.size(); }
};

struct FrameGeometry {
  std::uint32_t height = 0;
  std::uint32_t width = 0;
  int bit_depth = 0;
};

// External encoder hook. Each template is run through /bin/sh after
// substituting {input}, {output}, {width}, {height} and {bitdepth}. The
// encode command reads the raw sample layout from {input} and writes the
// payload to {output}; the decode command does the reverse.
struct ExternalCodecConfig {
  std::string encode_command;
  std::string decode_command;
};

struct CodecOptions {
  // Target bit depth q' for the requant codec; 0 means "same as q".
  int requant_bits = 0;
  int deflate_level = 6;
  ExternalCodecConfig external;
};

class InnerCodec {
 public:
  virtual ~InnerCodec() = default;
  virtual CodecId id() const = 0;
  virtual CodecPayload Encode(const QuantFrame& frame) const = 0;
  // Throws DecodeError on payloads that do not describe `geometry`.
  virtual QuantFrame Decode(const CodecPayload& payload,
                            const FrameGeometry& geometry) const = 0;
};

// Sample layout from packing, stored verbatim.
class RawCodec final : public InnerCodec {
 public:
  CodecId id() const override { return CodecId::kRaw; }
  CodecPayload Encode(const QuantFrame& frame) const override;
  QuantFrame Decode(const CodecPayload& payload,
                    const FrameGeometry& geometry) const override;
};

// zlib stream of the raw layout.
class ZDeflateCodec final : public InnerCodec {
 public:
  explicit ZDeflateCodec(int level = 6) : level_(level) {}
  CodecId id() const override { return CodecId::kZDeflate; }
  CodecPayload Encode(const QuantFrame& frame) const override;
  QuantFrame Decode(const CodecPayload& payload,
                    const FrameGeometry& geometry) const override;

 private:
  int level_;
};

// Deterministic lossy stand-in for a video codec: samples are rescaled to q'
// bits with round-half-up, bit-packed MSB first, and mapped back to q bits on
// decode. Payload = q' (u8) + ceil(count * q' / 8) bytes. The per-sample
// error is at most 2^(q - q') levels.
class RequantCodec final : public InnerCodec {
 public:
  explicit RequantCodec(int target_bits) : target_bits_(target_bits) {}
  CodecId id() const override { return CodecId::kRequant; }
  CodecPayload Encode(const QuantFrame& frame) const override;
  QuantFrame Decode(const CodecPayload& payload,
                    const FrameGeometry& geometry) const override;

 private:
  int target_bits_;
};

// Pipes frames through external processes. Invocations are serialized.
class ExternalCodec final : public InnerCodec {
 public:
  explicit ExternalCodec(ExternalCodecConfig config) : config_(std::move(config)) {}
  CodecId id() const override { return CodecId::kExternal; }
  CodecPayload Encode(const QuantFrame& frame) const override;
  QuantFrame Decode(const CodecPayload& payload,
                    const FrameGeometry& geometry) const override;

 private:
  std::vector<std::uint8_t> Run(const std::string& command_template,
                                const std::vector<std::uint8_t>& input,
                                const FrameGeometry& geometry) const;

  ExternalCodecConfig config_;
  mutable std::mutex mutex_;
};

std::unique_ptr<InnerCodec> MakeCodec(CodecId id, const CodecOptions& options);

// Requant level mapping, exposed for tests.
std::uint32_t RequantDown(std::uint32_t level, int from_bits, int to_bits);
std::uint32_t RequantUp(std::uint32_t level, int from_bits, int to_bits);

}  // namespace fcm

#endif  // FCM_INNER_CODEC_H_
