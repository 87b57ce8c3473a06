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

#include "fcm/errors.h"

namespace fcm {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidTensor: return "InvalidTensor";
    case ErrorCode::kInvalidInput: return "InvalidInput";
    case ErrorCode::kUnsupportedGeometry: return "UnsupportedGeometry";
    case ErrorCode::kInvalidStats: return "InvalidStats";
    case ErrorCode::kTruncatedStream: return "TruncatedStream";
    case ErrorCode::kCorruptStream: return "CorruptStream";
    case ErrorCode::kNotAStream: return "NotAStream";
    case ErrorCode::kMuxError: return "MuxError";
    case ErrorCode::kUnknownCodec: return "UnknownCodec";
    case ErrorCode::kExternalCodecError: return "ExternalCodecError";
    case ErrorCode::kDecodeError: return "DecodeError";
    case ErrorCode::kNoOverlap: return "NoOverlap";
    case ErrorCode::kInsufficientPoints: return "InsufficientPoints";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kConfigError: return "ConfigError";
  }
  return "Unknown";
}

void Fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace fcm
