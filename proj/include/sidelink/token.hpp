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
#include <string>
#include <variant>

#include "sidelink/digest.hpp"
#include "sidelink/encoding.hpp"
#include "sidelink/ids.hpp"

namespace sidelink {

struct TokenId {
  std::uint64_t value = 0;
  auto operator<=>(const TokenId&) const = default;
};

struct Amount {
  std::uint64_t value = 0;
  auto operator<=>(const Amount&) const = default;
};

/// Union arm: TokenId for non-fungible names, Amount for fungible ones.
using Quantity = std::variant<TokenId, Amount>;

/// One NFT or an amount of a fungible token, held by `owner`.
struct TokenInstance {
  std::string name;
  bool fungible = true;
  Quantity quantity = Amount{};
  ScId issuer;
  PubKey owner;
  Digest data_hash;

  bool operator==(const TokenInstance&) const = default;

  /// Union arm agrees with `fungible` and fungible amounts are positive.
  bool well_formed() const;
  std::uint64_t amount() const;    // 0 for NFTs
  std::uint64_t token_id() const;  // 0 for fungible instances

  void encode(Writer& w) const;
  static TokenInstance decode(Reader& r);
  Digest digest() const;
};

/// Issuer-side record of tokens currently outside their chain of origin.
struct SentRecord {
  ScId receiver;
  std::string name;
  bool fungible = true;
  Quantity quantity = Amount{};

  bool operator==(const SentRecord&) const = default;

  std::uint64_t amount() const;
  std::uint64_t token_id() const;

  void encode(Writer& w) const;
  static SentRecord decode(Reader& r);
  Digest digest() const;
};

/// Canonical payload bytes of a token message and their hash.
Bytes token_payload(const TokenInstance& ti);
Digest token_payload_hash(const TokenInstance& ti);

}  // namespace sidelink
