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

#ifndef FCM_BFLOAT16_H_
#define FCM_BFLOAT16_H_

#include <cstdint>

namespace fcm {

// bfloat16 bit pattern: the top half of a binary32, rounded to nearest even
// on bit 16. NaN inputs map to the canonical quiet NaN 0x7FC0.
std::uint16_t FloatToBfloat16Bits(float value);
float Bfloat16BitsToFloat(std::uint16_t bits);

inline float RoundToBfloat16(float value) {
  return Bfloat16BitsToFloat(FloatToBfloat16Bits(value));
}

}  // namespace fcm

#endif  // FCM_BFLOAT16_H_
