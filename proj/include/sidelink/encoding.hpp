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

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sidelink/digest.hpp"

namespace sidelink {

/// Thrown when a byte string is not a valid canonical encoding.
class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Canonical binary writer. Integers are fixed-width big-endian, variable
/// length fields carry a u32 length prefix, optionals and union arms a
/// one-byte discriminant.
class Writer {
 public:
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u32(std::uint32_t v);
  void u64(std::uint64_t v);
  void boolean(bool v) { u8(v ? 1 : 0); }
  void digest(const Digest& d) { out_.insert(out_.end(), d.bytes.begin(), d.bytes.end()); }
  void raw(ByteView bytes) { out_.insert(out_.end(), bytes.begin(), bytes.end()); }
  void bytes(ByteView bytes);
  void string(const std::string& s) { bytes(as_bytes(s)); }

  template <class T, class F>
  void list(const std::vector<T>& items, F&& each) {
    u32(static_cast<std::uint32_t>(items.size()));
    for (const auto& item : items) each(*this, item);
  }

  template <class T, class F>
  void optional(const std::optional<T>& value, F&& each) {
    boolean(value.has_value());
    if (value) each(*this, *value);
  }

  const Bytes& data() const& { return out_; }
  Bytes take() && { return std::move(out_); }

 private:
  Bytes out_;
};

/// Strict reader: rejects truncated input, out-of-range discriminants and
/// (via `finish`) trailing bytes.
class Reader {
 public:
  explicit Reader(ByteView in) : in_(in) {}

  std::uint8_t u8();
  std::uint32_t u32();
  std::uint64_t u64();
  bool boolean();
  Digest digest();
  Bytes bytes();
  std::string string();

  template <class T, class F>
  std::vector<T> list(F&& each) {
    auto n = u32();
    // Every element occupies at least one byte.
    if (n > remaining()) throw DecodeError("list length exceeds input");
    std::vector<T> items;
    items.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i) items.push_back(each(*this));
    return items;
  }

  template <class T, class F>
  std::optional<T> optional(F&& each) {
    if (!boolean()) return std::nullopt;
    return each(*this);
  }

  std::size_t remaining() const { return in_.size() - pos_; }
  void finish() const;

 private:
  ByteView take(std::size_t n);

  ByteView in_;
  std::size_t pos_ = 0;
};

}  // namespace sidelink
