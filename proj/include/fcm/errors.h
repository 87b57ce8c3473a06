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

#ifndef FCM_ERRORS_H_
#define FCM_ERRORS_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace fcm {

// Every failure raised by the library carries one of these categories. The
// CLI prints the category name verbatim so scripts can match on it.
enum class ErrorCode {
  kInvalidTensor,
  kInvalidInput,
  kUnsupportedGeometry,
  kInvalidStats,
  kTruncatedStream,
  kCorruptStream,
  kNotAStream,
  kMuxError,
  kUnknownCodec,
  kExternalCodecError,
  kDecodeError,
  kNoOverlap,
  kInsufficientPoints,
  kIoError,
  kConfigError,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void Fail(ErrorCode code, const std::string& message);

}  // namespace fcm

#endif  // FCM_ERRORS_H_
