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
#include <cstdint>
#include <string_view>

#include "sidelink/digest.hpp"
#include "sidelink/ids.hpp"

namespace sidelink {

/// Ed25519 key pair derived deterministically from a 32-byte seed.
class KeyPair {
 public:
  static KeyPair from_seed(const Digest& seed);
  /// Seed = hash_bytes(label); convenient for named test principals.
  static KeyPair from_label(std::string_view label) { return from_seed(hash_bytes(label)); }

  const PubKey& public_key() const { return public_; }
  Signature sign(const Digest& digest) const;

 private:
  PubKey public_;
  std::array<std::uint8_t, 64> secret_{};
};

bool verify_sig(const PubKey& key, const Digest& digest, const Signature& sig);

}  // namespace sidelink
