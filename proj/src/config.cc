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

#include <charconv>
#include <fstream>
#include <sstream>

namespace fcm {
namespace {

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

long ParseInt(std::string_view key, std::string_view value, long lo, long hi) {
  long v = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size() || v < lo || v > hi) {
    Fail(ErrorCode::kConfigError, std::string(key) + ": expected integer in [" +
                                      std::to_string(lo) + ", " + std::to_string(hi) +
                                      "], got '" + std::string(value) + "'");
  }
  return v;
}

}  // namespace

void ApplyConfigValue(EncodeConfig& config, std::string_view key, std::string_view value) {
  key = Trim(key);
  value = Trim(value);
  if (key == "mode") {
    config.mode = ParseMode(value);
  } else if (key == "q") {
    config.bit_depth = static_cast<int>(ParseInt(key, value, 1, 16));
  } else if (key == "refresh") {
    config.refresh_period = static_cast<std::uint16_t>(ParseInt(key, value, 1, 65535));
  } else if (key == "codec") {
    try {
      config.codec = ParseCodecId(value);
    } catch (const Error& e) {
      Fail(ErrorCode::kConfigError, e.what());
    }
  } else if (key == "codec_param") {
    config.codec_options.requant_bits = static_cast<int>(ParseInt(key, value, 0, 16));
  } else if (key == "deflate_level") {
    config.codec_options.deflate_level = static_cast<int>(ParseInt(key, value, 0, 9));
  } else if (key == "fusion") {
    if (value == "auto") {
      config.fusion.reset();
    } else if (value == "identity" || value == "0") {
      config.fusion = FusionId::kIdentity;
    } else if (value == "s2c" || value == "space-to-channel" || value == "1") {
      config.fusion = FusionId::kSpaceToChannel;
    } else {
      Fail(ErrorCode::kConfigError, "fusion: expected auto, identity or s2c");
    }
  } else if (key == "temporal") {
    if (value == "1" || value == "true" || value == "on") {
      config.temporal = true;
    } else if (value == "0" || value == "false" || value == "off") {
      config.temporal = false;
    } else {
      Fail(ErrorCode::kConfigError, "temporal: expected 0 or 1");
    }
  } else if (key == "fps") {
    const auto slash = value.find('/');
    config.fps_num = static_cast<std::uint16_t>(ParseInt(key, value.substr(0, slash), 1, 65535));
    config.fps_den = slash == std::string_view::npos
                         ? 1
                         : static_cast<std::uint16_t>(ParseInt(key, value.substr(slash + 1), 1, 65535));
  } else if (key == "external_encode") {
    config.codec_options.external.encode_command = std::string(value);
  } else if (key == "external_decode") {
    config.codec_options.external.decode_command = std::string(value);
  } else {
    Fail(ErrorCode::kConfigError, "unknown config key '" + std::string(key) + "'");
  }
}

EncodeConfig ParseConfigText(std::string_view text, EncodeConfig base) {
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) {
      view = view.substr(0, hash);
    }
    view = Trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      Fail(ErrorCode::kConfigError, "config line without '=': " + std::string(view));
    }
    ApplyConfigValue(base, view.substr(0, eq), view.substr(eq + 1));
  }
  return base;
}

EncodeConfig ParseConfigLine(std::string_view line, EncodeConfig base) {
  std::istringstream in{std::string(line)};
  std::string token;
  while (in >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) Fail(ErrorCode::kConfigError, "token without '=': " + token);
    ApplyConfigValue(base, std::string_view(token).substr(0, eq),
                     std::string_view(token).substr(eq + 1));
  }
  return base;
}

EncodeConfig ReadConfigFile(const std::filesystem::path& path, EncodeConfig base) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kIoError, "cannot open config " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseConfigText(buffer.str(), std::move(base));
}

std::string FormatConfig(const EncodeConfig& c) {
  std::ostringstream out;
  out << "mode=" << ModeName(c.mode) << " q=" << c.bit_depth << " refresh=" << c.refresh_period
      << " codec=" << CodecName(c.codec) << " codec_param=" << c.codec_options.requant_bits
      << " deflate_level=" << c.codec_options.deflate_level << " fusion="
      << (!c.fusion ? "auto" : *c.fusion == FusionId::kIdentity ? "identity" : "s2c")
      << " temporal=" << (c.temporal ? 1 : 0) << " fps=" << c.fps_num << "/" << c.fps_den;
  return out.str();
}

}  // namespace fcm
