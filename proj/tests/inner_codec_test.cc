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

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <random>

namespace fcm {
namespace {

QuantFrame RandomFrame(std::uint32_t h, std::uint32_t w, int q, std::uint32_t seed) {
  std::mt19937 rng(seed);
  QuantFrame f{h, w, static_cast<std::uint8_t>(q), {}};
  f.samples.resize(static_cast<std::size_t>(h) * w);
  for (auto& s : f.samples) s = static_cast<std::uint16_t>(rng() & f.max_level());
  return f;
}

FrameGeometry GeometryOf(const QuantFrame& f) { return {f.height, f.width, f.bit_depth}; }

bool HaveShell() { return std::filesystem::exists("/bin/sh") && std::system(nullptr) != 0; }

TEST(CodecIdTest, Parse) {
  EXPECT_EQ(ParseCodecId("raw"), CodecId::kRaw);
  EXPECT_EQ(ParseCodecId("1"), CodecId::kZDeflate);
  EXPECT_EQ(ParseCodecId(CodecName(CodecId::kRequant)), CodecId::kRequant);
  EXPECT_EQ(ParseCodecId("external"), CodecId::kExternal);
  try {
    ParseCodecId("vvc");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownCodec);
  }
  EXPECT_THROW(MakeCodec(static_cast<CodecId>(7), {}), Error);
}

TEST(LosslessCodecTest, RawAndDeflateAreExact) {
  for (CodecId id : {CodecId::kRaw, CodecId::kZDeflate}) {
    const auto codec = MakeCodec(id, {});
    for (int q : {1, 8, 10, 16}) {
      const QuantFrame f = RandomFrame(13, 17, q, q);
      const CodecPayload p = codec->Encode(f);
      EXPECT_EQ(p.codec_id, id);
      EXPECT_EQ(codec->Decode(p, GeometryOf(f)), f) << CodecName(id) << " q=" << q;
    }
  }
}

TEST(LosslessCodecTest, RawSizeIsSampleBytes) {
  EXPECT_EQ(RawCodec().Encode(RandomFrame(4, 5, 8, 1)).byte_count(), 20u);
  EXPECT_EQ(RawCodec().Encode(RandomFrame(4, 5, 10, 1)).byte_count(), 40u);
}

TEST(LosslessCodecTest, DeflateShrinksFlatFrames) {
  QuantFrame f{64, 64, 10, std::vector<std::uint16_t>(64 * 64, 512)};
  EXPECT_LT(ZDeflateCodec(9).Encode(f).byte_count(), 200u);
}

TEST(LosslessCodecTest, CorruptPayloadIsDecodeError) {
  const QuantFrame f = RandomFrame(8, 8, 10, 2);
  CodecPayload p = ZDeflateCodec().Encode(f);
  p.frame_bytes[p.frame_bytes.size() / 2] ^= 0xFF;
  p.frame_bytes.resize(p.frame_bytes.size() - 3);
  try {
    ZDeflateCodec().Decode(p, GeometryOf(f));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDecodeError);
  }
  CodecPayload raw = RawCodec().Encode(f);
  raw.frame_bytes.pop_back();
  EXPECT_THROW(RawCodec().Decode(raw, GeometryOf(f)), Error);
  // Payload from another codec.
  EXPECT_THROW(RawCodec().Decode(ZDeflateCodec().Encode(f), GeometryOf(f)), Error);
}

TEST(RequantTest, LevelMapping) {
  EXPECT_EQ(RequantDown(0, 10, 8), 0u);
  EXPECT_EQ(RequantDown(1023, 10, 8), 255u);
  EXPECT_EQ(RequantUp(255, 10, 8), 1023u);
  EXPECT_EQ(RequantUp(0, 10, 8), 0u);
  // 512 * 255 / 1023 = 127.62 -> 128
  EXPECT_EQ(RequantDown(512, 10, 8), 128u);
  for (std::uint32_t v = 0; v < 1024; ++v) EXPECT_EQ(RequantDown(v, 10, 10), v);
}

TEST(RequantTest, SameDepthIsIdentity) {
  const QuantFrame f = RandomFrame(9, 11, 10, 3);
  RequantCodec codec(0);
  EXPECT_EQ(codec.Decode(codec.Encode(f), GeometryOf(f)), f);
  RequantCodec ten(10);
  EXPECT_EQ(ten.Decode(ten.Encode(f), GeometryOf(f)), f);
}

TEST(RequantTest, ExhaustiveErrorBound) {
  QuantFrame f{1, 1024, 10, {}};
  for (std::uint16_t v = 0; v < 1024; ++v) f.samples.push_back(v);
  for (int bits = 1; bits <= 10; ++bits) {
    RequantCodec codec(bits);
    const QuantFrame back = codec.Decode(codec.Encode(f), GeometryOf(f));
    // Half of one coarse step, in fine levels, plus one for the return rounding.
    const double bound = 0.5 * 1023.0 / ((1 << bits) - 1) + 0.5;
    for (std::size_t i = 0; i < 1024; ++i) {
      ASSERT_LE(std::abs(static_cast<int>(back.samples[i]) - static_cast<int>(i)), bound)
          << "bits=" << bits << " level=" << i;
    }
    if (bits == 8) {
      int worst = 0;
      for (std::size_t i = 0; i < 1024; ++i) {
        worst = std::max(worst, std::abs(static_cast<int>(back.samples[i]) - static_cast<int>(i)));
      }
      EXPECT_LE(worst, 4);
    }
  }
}

TEST(RequantTest, PayloadShrinksWithDepth) {
  const QuantFrame f = RandomFrame(32, 32, 10, 4);
  std::size_t prev = 0;
  for (int bits = 1; bits <= 10; ++bits) {
    const std::size_t size = RequantCodec(bits).Encode(f).byte_count();
    EXPECT_EQ(size, 1 + (1024u * bits + 7) / 8);
    EXPECT_GT(size, prev);
    prev = size;
  }
}

TEST(RequantTest, RejectsBadPayloadsAndTargets) {
  const QuantFrame f = RandomFrame(4, 4, 10, 5);
  EXPECT_THROW(RequantCodec(11).Encode(f), Error);
  CodecPayload p = RequantCodec(6).Encode(f);
  CodecPayload short_p = p;
  short_p.frame_bytes.pop_back();
  EXPECT_THROW(RequantCodec(6).Decode(short_p, GeometryOf(f)), Error);
  CodecPayload bad_bits = p;
  bad_bits.frame_bytes[0] = 12;
  EXPECT_THROW(RequantCodec(6).Decode(bad_bits, GeometryOf(f)), Error);
  EXPECT_THROW(RequantCodec(6).Decode({CodecId::kRequant, {}}, GeometryOf(f)), Error);
}

TEST(ExternalCodecTest, CopyCommandIsLossless) {
  if (!HaveShell()) GTEST_SKIP() << "no shell available";
  ExternalCodec codec({"cp {input} {output}", "cp {input} {output}"});
  const QuantFrame f = RandomFrame(6, 7, 10, 6);
  const CodecPayload p = codec.Encode(f);
  EXPECT_EQ(p.byte_count(), 84u);
  EXPECT_EQ(codec.Decode(p, GeometryOf(f)), f);
}

TEST(ExternalCodecTest, PlaceholdersAreSubstituted) {
  if (!HaveShell()) GTEST_SKIP() << "no shell available";
  ExternalCodec codec({"printf '%s' '{width}x{height}@{bitdepth}' > {output}", "cp {input} {output}"});
  const CodecPayload p = codec.Encode(RandomFrame(3, 5, 12, 7));
  EXPECT_EQ(std::string(p.frame_bytes.begin(), p.frame_bytes.end()), "5x3@12");
}

TEST(ExternalCodecTest, FailureCarriesStderr) {
  if (!HaveShell()) GTEST_SKIP() << "no shell available";
  ExternalCodec codec({"echo encoder exploded >&2; exit 3", "cp {input} {output}"});
  try {
    codec.Encode(RandomFrame(2, 2, 8, 8));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kExternalCodecError);
    EXPECT_NE(std::string(e.what()).find("encoder exploded"), std::string::npos);
  }
  ExternalCodec nothing({"", ""});
  EXPECT_THROW(nothing.Encode(RandomFrame(2, 2, 8, 8)), Error);
}

}  // namespace
}  // namespace fcm
