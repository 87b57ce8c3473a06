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

#include "fcm/inner_codec.h"

#include <unistd.h>
#include <zlib.h>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>

#include "fcm/ftns_io.h"

namespace fcm {
namespace {

void CheckPayloadCodec(const CodecPayload& p, CodecId expected) {
  if (p.codec_id != expected) {
    Fail(ErrorCode::kDecodeError, "payload was produced by codec " +
                                      std::string(CodecName(p.codec_id)));
  }
}

std::size_t RawSize(const FrameGeometry& g) {
  return static_cast<std::size_t>(g.height) * g.width * SampleBytes(g.bit_depth);
}

std::string Substitute(std::string text, const std::string& key, const std::string& value) {
  for (std::size_t pos = text.find(key); pos != std::string::npos;
       pos = text.find(key, pos + value.size())) {
    text.replace(pos, key.size(), value);
  }
  return text;
}

}  // namespace

std::string_view CodecName(CodecId id) {
  switch (id) {
    case CodecId::kRaw: return "raw";
    case CodecId::kZDeflate: return "zdeflate";
    case CodecId::kRequant: return "requant";
    case CodecId::kExternal: return "external";
  }
  return "unknown";
}

CodecId ParseCodecId(std::string_view text) {
  if (text == "0" || text == "raw") return CodecId::kRaw;
  if (text == "1" || text == "zdeflate") return CodecId::kZDeflate;
  if (text == "2" || text == "requant") return CodecId::kRequant;
  if (text == "255" || text == "external") return CodecId::kExternal;
  Fail(ErrorCode::kUnknownCodec, "unknown codec '" + std::string(text) + "'");
}

CodecPayload RawCodec::Encode(const QuantFrame& frame) const {
  return {CodecId::kRaw, SerializeSamples(frame)};
}

QuantFrame RawCodec::Decode(const CodecPayload& payload, const FrameGeometry& g) const {
  CheckPayloadCodec(payload, CodecId::kRaw);
  return ParseSamples(payload.frame_bytes, g.height, g.width, g.bit_depth);
}

CodecPayload ZDeflateCodec::Encode(const QuantFrame& frame) const {
  const auto raw = SerializeSamples(frame);
  uLongf size = compressBound(static_cast<uLong>(raw.size()));
  std::vector<std::uint8_t> out(size);
  if (compress2(out.data(), &size, raw.data(), static_cast<uLong>(raw.size()), level_) != Z_OK) {
    Fail(ErrorCode::kInvalidInput, "zlib compression failed");
  }
  out.resize(size);
  return {CodecId::kZDeflate, std::move(out)};
}

QuantFrame ZDeflateCodec::Decode(const CodecPayload& payload, const FrameGeometry& g) const {
  CheckPayloadCodec(payload, CodecId::kZDeflate);
  const std::size_t expected = RawSize(g);
  std::vector<std::uint8_t> raw(expected);
  uLongf size = static_cast<uLongf>(expected);
  const int rc = uncompress(raw.data(), &size, payload.frame_bytes.data(),
                            static_cast<uLong>(payload.frame_bytes.size()));
  if (rc != Z_OK || size != expected) {
    Fail(ErrorCode::kDecodeError, "zdeflate payload is corrupt (zlib status " +
                                      std::to_string(rc) + ")");
  }
  return ParseSamples(raw, g.height, g.width, g.bit_depth);
}

std::uint32_t RequantDown(std::uint32_t level, int from_bits, int to_bits) {
  const std::uint64_t from_max = (1ull << from_bits) - 1;
  const std::uint64_t to_max = (1ull << to_bits) - 1;
  return static_cast<std::uint32_t>((2 * level * to_max + from_max) / (2 * from_max));
}

std::uint32_t RequantUp(std::uint32_t level, int from_bits, int to_bits) {
  return RequantDown(level, to_bits, from_bits);
}

CodecPayload RequantCodec::Encode(const QuantFrame& frame) const {
  const int q = frame.bit_depth;
  const int bits = target_bits_ == 0 ? q : target_bits_;
  if (bits < 1 || bits > q) {
    Fail(ErrorCode::kInvalidInput, "requant target " + std::to_string(bits) +
                                       " bits must lie in [1, " + std::to_string(q) + "]");
  }
  std::vector<std::uint8_t> out;
  out.reserve(1 + (frame.samples.size() * bits + 7) / 8);
  out.push_back(static_cast<std::uint8_t>(bits));
  std::uint32_t acc = 0;
  int filled = 0;
  for (std::uint16_t s : frame.samples) {
    acc = (acc << bits) | RequantDown(s, q, bits);
    filled += bits;
    while (filled >= 8) {
      filled -= 8;
      out.push_back(static_cast<std::uint8_t>(acc >> filled));
    }
    acc &= (1u << filled) - 1;
  }
  if (filled > 0) out.push_back(static_cast<std::uint8_t>(acc << (8 - filled)));
  return {CodecId::kRequant, std::move(out)};
}

QuantFrame RequantCodec::Decode(const CodecPayload& payload, const FrameGeometry& g) const {
  CheckPayloadCodec(payload, CodecId::kRequant);
  const auto& in = payload.frame_bytes;
  if (in.empty()) Fail(ErrorCode::kDecodeError, "empty requant payload");
  const int bits = in[0];
  if (bits < 1 || bits > g.bit_depth) {
    Fail(ErrorCode::kDecodeError, "requant payload declares " + std::to_string(bits) + " bits");
  }
  const std::size_t count = static_cast<std::size_t>(g.height) * g.width;
  if (in.size() != 1 + (count * bits + 7) / 8) {
    Fail(ErrorCode::kDecodeError, "requant payload length does not match frame geometry");
  }
  QuantFrame f;
  f.height = g.height;
  f.width = g.width;
  f.bit_depth = static_cast<std::uint8_t>(g.bit_depth);
  f.samples.resize(count);
  std::uint32_t acc = 0;
  int filled = 0;
  std::size_t pos = 1;
  const std::uint32_t mask = (1u << bits) - 1;
  for (auto& s : f.samples) {
    while (filled < bits) {
      acc = (acc << 8) | in[pos++];
      filled += 8;
    }
    filled -= bits;
    s = static_cast<std::uint16_t>(RequantUp((acc >> filled) & mask, g.bit_depth, bits));
    acc &= (1u << filled) - 1;
  }
  return f;
}

std::vector<std::uint8_t> ExternalCodec::Run(const std::string& command_template,
                                             const std::vector<std::uint8_t>& input,
                                             const FrameGeometry& g) const {
  if (command_template.empty()) {
    Fail(ErrorCode::kExternalCodecError, "no external codec command configured");
  }
  std::lock_guard<std::mutex> lock(mutex_);
  static std::atomic<unsigned> counter{0};
  namespace fs = std::filesystem;
  const std::string stem = "fcm_ext_" + std::to_string(::getpid()) + "_" +
                           std::to_string(counter++);
  const fs::path dir = fs::temp_directory_path();
  const fs::path in_path = dir / (stem + ".in");
  const fs::path out_path = dir / (stem + ".out");
  const fs::path err_path = dir / (stem + ".err");
  struct Cleanup {
    std::vector<fs::path> paths;
    ~Cleanup() {
      std::error_code ec;
      for (const auto& p : paths) fs::remove(p, ec);
    }
  } cleanup{{in_path, out_path, err_path}};

  WriteFileBytes(in_path, input);
  std::string cmd = command_template;
  cmd = Substitute(cmd, "{input}", in_path.string());
  cmd = Substitute(cmd, "{output}", out_path.string());
  cmd = Substitute(cmd, "{width}", std::to_string(g.width));
  cmd = Substitute(cmd, "{height}", std::to_string(g.height));
  cmd = Substitute(cmd, "{bitdepth}", std::to_string(g.bit_depth));
  const std::string shell = "( " + cmd + " ) > /dev/null 2> '" + err_path.string() + "'";

  const int status = std::system(shell.c_str());
  if (status != 0 || !fs::exists(out_path)) {
    std::string diag;
    if (std::ifstream err(err_path); err) {
      diag.assign(std::istreambuf_iterator<char>(err), std::istreambuf_iterator<char>());
    }
    while (!diag.empty() && (diag.back() == '\n' || diag.back() == '\r')) diag.pop_back();
    Fail(ErrorCode::kExternalCodecError,
         "external command failed (status " + std::to_string(status) + "): " + cmd +
             (diag.empty() ? "" : " | stderr: " + diag));
  }
  return ReadFileBytes(out_path);
}

CodecPayload ExternalCodec::Encode(const QuantFrame& frame) const {
  const FrameGeometry g{frame.height, frame.width, frame.bit_depth};
  return {CodecId::kExternal, Run(config_.encode_command, SerializeSamples(frame), g)};
}

QuantFrame ExternalCodec::Decode(const CodecPayload& payload, const FrameGeometry& g) const {
  CheckPayloadCodec(payload, CodecId::kExternal);
  const auto raw = Run(config_.decode_command, payload.frame_bytes, g);
  return ParseSamples(raw, g.height, g.width, g.bit_depth);
}

std::unique_ptr<InnerCodec> MakeCodec(CodecId id, const CodecOptions& options) {
  switch (id) {
    case CodecId::kRaw: return std::make_unique<RawCodec>();
    case CodecId::kZDeflate: return std::make_unique<ZDeflateCodec>(options.deflate_level);
    case CodecId::kRequant: return std::make_unique<RequantCodec>(options.requant_bits);
    case CodecId::kExternal: return std::make_unique<ExternalCodec>(options.external);
  }
  Fail(ErrorCode::kUnknownCodec,
       "codec id " + std::to_string(static_cast<int>(id)) + " is not registered");
}

}  // namespace fcm
