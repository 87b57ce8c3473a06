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

#ifndef FCM_FTNS_IO_H_
#define FCM_FTNS_IO_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "fcm/tensor.h"

namespace fcm {

// "FTNS" feature sequence file, little-endian:
//   magic "FTNS" | version u8 (=1) | N u8 | N x (C u32, H u32, W u32) |
//   frame count u32 | frames x N tensors of raw binary32, declaration order.
inline constexpr std::uint8_t kFtnsVersion = 1;

std::vector<std::uint8_t> SerializeFtns(const Sequence& seq);
Sequence ParseFtns(std::span<const std::uint8_t> bytes);

void WriteFtnsFile(const std::filesystem::path& path, const Sequence& seq);
Sequence ReadFtnsFile(const std::filesystem::path& path);

// Whole-file helpers shared with the FCMS tools. Errors carry the path.
std::vector<std::uint8_t> ReadFileBytes(const std::filesystem::path& path);
void WriteFileBytes(const std::filesystem::path& path,
                    std::span<const std::uint8_t> bytes);

}  // namespace fcm

#endif  // FCM_FTNS_IO_H_
