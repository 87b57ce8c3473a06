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

#include "fcm/ftns_io.h"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <iterator>

#include "fcm/byte_io.h"

namespace fcm {

std::vector<std::uint8_t> SerializeFtns(const Sequence& seq) {
  const ShapeSpec layout = ValidateSequence(seq);
  if (layout.size() > 255) Fail(ErrorCode::kInvalidInput, "more than 255 tensors");
  std::vector<std::uint8_t> out;
  ByteWriter w(out);
  w.Tag("FTNS");
  w.U8(kFtnsVersion);
  w.U8(static_cast<std::uint8_t>(layout.size()));
  for (const auto& s : layout) {
    w.U32(s.channels);
    w.U32(s.height);
    w.U32(s.width);
  }
  w.U32(static_cast<std::uint32_t>(seq.size()));
  for (const auto& set : seq) {
    for (const auto& t : set.tensors) {
      for (float v : t.data()) w.F32(v);
    }
  }
  return out;
}

Sequence ParseFtns(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  const auto magic = r.Bytes(4);
  if (!std::equal(magic.begin(), magic.end(), "FTNS")) {
    Fail(ErrorCode::kNotAStream, "missing FTNS magic");
  }
  if (r.U8() != kFtnsVersion) Fail(ErrorCode::kCorruptStream, "unsupported FTNS version");
  const std::uint8_t n = r.U8();
  if (n == 0) Fail(ErrorCode::kCorruptStream, "FTNS declares zero tensors");
  ShapeSpec layout(n);
  std::size_t per_frame = 0;
  for (auto& s : layout) {
    s.channels = r.U32();
    s.height = r.U32();
    s.width = r.U32();
    if (s.elements() == 0) Fail(ErrorCode::kCorruptStream, "FTNS zero-sized tensor");
    per_frame += s.elements();
  }
  const std::uint32_t frames = r.U32();
  if (frames == 0) Fail(ErrorCode::kCorruptStream, "FTNS declares zero frames");
  if (per_frame * 4 > r.remaining() / frames) {
    Fail(ErrorCode::kTruncatedStream, "FTNS payload shorter than declared");
  }
  Sequence seq;
  seq.reserve(frames);
  for (std::uint32_t f = 0; f < frames; ++f) {
    FeatureSet set;
    set.frame_index = f;
    for (const auto& s : layout) {
      std::vector<float> data(s.elements());
      for (auto& v : data) v = r.F32();
      set.tensors.emplace_back(s, std::move(data));
    }
    seq.push_back(std::move(set));
  }
  if (!r.at_end()) Fail(ErrorCode::kCorruptStream, "trailing bytes after FTNS frames");
  return seq;
}

std::vector<std::uint8_t> ReadFileBytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIoError, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) Fail(ErrorCode::kIoError, "read failed: " + path.string());
  return bytes;
}

void WriteFileBytes(const std::filesystem::path& path,
                    std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail(ErrorCode::kIoError, "cannot create " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) Fail(ErrorCode::kIoError, "write failed: " + path.string());
}

void WriteFtnsFile(const std::filesystem::path& path, const Sequence& seq) {
  WriteFileBytes(path, SerializeFtns(seq));
}

Sequence ReadFtnsFile(const std::filesystem::path& path) {
  const auto bytes = ReadFileBytes(path);
  return ParseFtns(bytes);
}

}  // namespace fcm
