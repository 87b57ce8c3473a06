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

#include "fcm/config.h"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

namespace fcm {
namespace {

ErrorCode CodeOf(std::string_view text) {
  try {
    ParseConfigText(text);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kIoError;
}

TEST(ConfigTest, Defaults) {
  const EncodeConfig c;
  EXPECT_EQ(FormatConfig(c),
            "mode=full q=10 refresh=32 codec=raw codec_param=0 deflate_level=6 fusion=auto "
            "temporal=0 fps=30/1");
}

TEST(ConfigTest, ParseText) {
  const EncodeConfig c = ParseConfigText(
      "# comment\n"
      "mode = simplified\n"
      "q=8   # trailing\n"
      "\n"
      "refresh=4\n"
      "codec=requant\n"
      "codec_param=6\n"
      "fusion=identity\n"
      "temporal=on\n"
      "fps=30000/1001\n"
      "external_encode=cp {input} {output}\n");
  EXPECT_EQ(c.mode, StatsMode::kSimplified);
  EXPECT_EQ(c.bit_depth, 8);
  EXPECT_EQ(c.refresh_period, 4);
  EXPECT_EQ(c.codec, CodecId::kRequant);
  EXPECT_EQ(c.codec_options.requant_bits, 6);
  EXPECT_EQ(c.fusion, FusionId::kIdentity);
  EXPECT_TRUE(c.temporal);
  EXPECT_EQ(c.fps_num, 30000);
  EXPECT_EQ(c.fps_den, 1001);
  EXPECT_EQ(c.codec_options.external.encode_command, "cp {input} {output}");
}

TEST(ConfigTest, FormatParsesBack) {
  EncodeConfig c;
  c.mode = StatsMode::kBaseline;
  c.bit_depth = 12;
  c.codec = CodecId::kZDeflate;
  c.codec_options.deflate_level = 9;
  c.fusion = FusionId::kSpaceToChannel;
  c.fps_num = 25;
  const std::string line = FormatConfig(c);
  EXPECT_EQ(FormatConfig(ParseConfigLine(line)), line);
}

TEST(ConfigTest, LineOverridesBase) {
  EncodeConfig base;
  base.bit_depth = 12;
  const EncodeConfig c = ParseConfigLine("mode=baseline refresh=1", base);
  EXPECT_EQ(c.bit_depth, 12);
  EXPECT_EQ(c.refresh_period, 1);
  EXPECT_EQ(c.mode, StatsMode::kBaseline);
}

TEST(ConfigTest, Errors) {
  EXPECT_EQ(CodeOf("q=0"), ErrorCode::kConfigError);
  EXPECT_EQ(CodeOf("q=17"), ErrorCode::kConfigError);
  EXPECT_EQ(CodeOf("q=ten"), ErrorCode::kConfigError);
  EXPECT_EQ(CodeOf("refresh=0"), ErrorCode::kConfigError);
  EXPECT_EQ(CodeOf("mode=lossless"), ErrorCode::kConfigError);
  EXPECT_EQ(CodeOf("codec=vvc"), ErrorCode::kConfigError);
  EXPECT_EQ(CodeOf("fusion=learned"), ErrorCode::kConfigError);
  EXPECT_EQ(CodeOf("temporal=maybe"), ErrorCode::kConfigError);
  EXPECT_EQ(CodeOf("fps=0"), ErrorCode::kConfigError);
  EXPECT_EQ(CodeOf("colour=blue"), ErrorCode::kConfigError);
  EXPECT_EQ(CodeOf("just words"), ErrorCode::kConfigError);
  EXPECT_THROW(ParseConfigLine("q"), Error);
}

TEST(ConfigTest, ReadFile) {
  const auto path = std::filesystem::temp_directory_path() / "fcm_config_test.cfg";
  {
    std::ofstream out(path);
    out << "mode=full\nrefresh=8\n";
  }
  EXPECT_EQ(ReadConfigFile(path).refresh_period, 8);
  std::filesystem::remove(path);
  try {
    ReadConfigFile(path);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIoError);
  }
}

}  // namespace
}  // namespace fcm
