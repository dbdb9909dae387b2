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

#include "sidelink/keys.hpp"

#include <sodium.h>

#include <stdexcept>

namespace sidelink {

namespace {

void ensure_sodium() {
  static const bool ready = sodium_init() >= 0;
  if (!ready) throw std::runtime_error("libsodium initialization failed");
}

}  // namespace

KeyPair KeyPair::from_seed(const Digest& seed) {
  ensure_sodium();
  KeyPair kp;
  crypto_sign_seed_keypair(kp.public_.bytes.data(), kp.secret_.data(), seed.bytes.data());
  return kp;
}

Signature KeyPair::sign(const Digest& digest) const {
  Signature sig;
  sig.bytes.resize(crypto_sign_BYTES);
  crypto_sign_detached(sig.bytes.data(), nullptr, digest.bytes.data(), digest.bytes.size(), secret_.data());
  return sig;
}

bool verify_sig(const PubKey& key, const Digest& digest, const Signature& sig) {
  ensure_sodium();
  if (sig.bytes.size() != crypto_sign_BYTES) return false;
  return crypto_sign_verify_detached(sig.bytes.data(), digest.bytes.data(), digest.bytes.size(),
                                     key.bytes.data()) == 0;
}

}  // namespace sidelink
