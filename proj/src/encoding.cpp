// Copyright 2026 The Sidelink Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sidelink/encoding.hpp"

namespace sidelink {

void Writer::u32(std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) out_.push_back(static_cast<std::uint8_t>(v >> shift));
}

void Writer::u64(std::uint64_t v) {
  for (int shift = 56; shift >= 0; shift -= 8) out_.push_back(static_cast<std::uint8_t>(v >> shift));
}

void Writer::bytes(ByteView b) {
  u32(static_cast<std::uint32_t>(b.size()));
  raw(b);
}

ByteView Reader::take(std::size_t n) {
  if (n > remaining()) throw DecodeError("unexpected end of input");
  auto out = in_.subspan(pos_, n);
  pos_ += n;
  return out;
}

std::uint8_t Reader::u8() { return take(1)[0]; }

std::uint32_t Reader::u32() {
  std::uint32_t v = 0;
  for (auto b : take(4)) v = (v << 8) | b;
  return v;
}

std::uint64_t Reader::u64() {
  std::uint64_t v = 0;
  for (auto b : take(8)) v = (v << 8) | b;
  return v;
}

bool Reader::boolean() {
  auto b = u8();
  if (b > 1) throw DecodeError("boolean discriminant out of range");
  return b == 1;
}

Digest Reader::digest() { return Digest::from_bytes(take(Digest::kSize)); }

Bytes Reader::bytes() {
  auto n = u32();
  auto v = take(n);
  return Bytes(v.begin(), v.end());
}

std::string Reader::string() {
  auto b = bytes();
  return std::string(b.begin(), b.end());
}

void Reader::finish() const {
  if (remaining() != 0) throw DecodeError("trailing bytes after encoding");
}

}  // namespace sidelink
