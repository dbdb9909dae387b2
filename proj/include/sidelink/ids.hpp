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

#include <array>
#include <compare>
#include <cstdint>
#include <string>

#include "sidelink/digest.hpp"

namespace sidelink {

/// Sidechain identifier assigned by the mainchain at registration.
struct ScId {
  std::uint32_t value = 0;

  auto operator<=>(const ScId&) const = default;
  std::string str() const { return std::to_string(value); }
};

/// 32-byte Ed25519 public key.
struct PubKey {
  std::array<std::uint8_t, 32> bytes{};

  auto operator<=>(const PubKey&) const = default;
  ByteView view() const { return {bytes.data(), bytes.size()}; }
  std::string hex() const { return to_hex(view()); }
  static PubKey from_hex(std::string_view hex);
  static PubKey from_bytes(ByteView raw);
};

/// Detached signature bytes; opaque to the protocol layer.
struct Signature {
  Bytes bytes;

  bool operator==(const Signature&) const = default;
};

}  // namespace sidelink
