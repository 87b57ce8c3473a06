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

#ifndef FCM_CONFIG_H_
#define FCM_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "fcm/fusion.h"
#include "fcm/inner_codec.h"
#include "fcm/stats_coding.h"

namespace fcm {

struct EncodeConfig {
  StatsMode mode = StatsMode::kFull;
  int bit_depth = 10;
  std::uint16_t refresh_period = 32;
  CodecId codec = CodecId::kRaw;
  CodecOptions codec_options;
  std::optional<FusionId> fusion;  // unset: identity for N = 1, else space-to-channel
  bool temporal = false;
  std::uint16_t fps_num = 30;
  std::uint16_t fps_den = 1;
};

// Recognized keys: mode, q, refresh, codec, codec_param, deflate_level,
// fusion, temporal, fps (NUM or NUM/DEN), external_encode, external_decode.
// Unknown keys and malformed values raise ConfigError.
void ApplyConfigValue(EncodeConfig& config, std::string_view key, std::string_view value);

// Plain-text "key = value" lines; '#' starts a comment.
EncodeConfig ParseConfigText(std::string_view text, EncodeConfig base = {});
EncodeConfig ReadConfigFile(const std::filesystem::path& path, EncodeConfig base = {});

// One-line "key=value ..." rendering. ParseConfigLine(FormatConfig(c))
// reproduces c except for external command templates, which are omitted.
std::string FormatConfig(const EncodeConfig& config);

// Whitespace-separated "key=value" tokens, as printed by FormatConfig.
EncodeConfig ParseConfigLine(std::string_view line, EncodeConfig base = {});

}  // namespace fcm

#endif  // FCM_CONFIG_H_
