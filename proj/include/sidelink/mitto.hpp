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
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "sidelink/ids.hpp"
#include "sidelink/token.hpp"
#include "sidelink/types.hpp"

namespace sidelink::mitto {

/// Validation rule identifiers. Send rules use R1, R2, R3a-R3e, R4; redeem
/// rules use R1, R2a, R2b, R3, R4a-R4e, R5, R6, R7.
enum class Rule {
  R1, R2, R2a, R2b, R3, R3a, R3b, R3c, R3d, R3e,
  R4, R4a, R4b, R4c, R4d, R4e, R5, R6, R7,
};

std::string_view to_string(Rule rule);
std::optional<Rule> rule_from_string(std::string_view s);

/// Switches for the rejected sent-record designs. All true is the protocol;
/// anything else exists only to demonstrate the resulting vulnerabilities.
struct MittoRules {
  bool sent_records = true;          // false: no sent-record accounting at all
  bool sent_record_receiver = true;  // false: one aggregate record per token (receiver 0)
  bool restrict_routing = true;      // false: foreign tokens may travel between third parties

  bool operator==(const MittoRules&) const = default;
  bool is_default() const { return *this == MittoRules{}; }
};

/// Sent records are unique per (receiver, name) for fungible names and per
/// (receiver, name, tokenId) for NFTs.
using SentKey = std::tuple<std::uint32_t, std::string, bool, std::uint64_t>;
SentKey sent_key(ScId receiver, const std::string& name, bool fungible, std::uint64_t token_id);

struct HeldToken {
  TokenInstance instance;
  std::uint32_t count = 0;

  bool operator==(const HeldToken&) const = default;
};

/// Local issuance bookkeeping for names issued by this chain.
struct IssuedName {
  bool fungible = true;
  std::uint64_t total = 0;             // fungible supply issued
  std::set<std::uint64_t> token_ids;   // NFT ids issued

  bool operator==(const IssuedName&) const = default;
};

struct MittoState {
  std::map<Digest, HeldToken> tks;  // multiset keyed by instance digest
  std::map<SentKey, SentRecord> sent;
  std::map<std::string, IssuedName> issued;

  bool operator==(const MittoState&) const = default;

  bool holds(const TokenInstance& ti) const;
  void add(const TokenInstance& ti);
  /// Removes one copy; returns false if absent.
  bool remove(const TokenInstance& ti);
  bool nft_live(const std::string& name, std::uint64_t token_id) const;

  const SentRecord* find_sent(ScId receiver, const std::string& name, bool fungible,
                              std::uint64_t token_id) const;

  /// Sorted instance digests, one entry per held copy.
  std::vector<Digest> held_digests() const;
  std::vector<Digest> sent_digests() const;
  Digest held_root() const;
  Digest sent_root() const;

  std::uint64_t held_amount(const std::string& name) const;
  std::uint64_t sent_amount(const std::string& name) const;

  void encode(Writer& w) const;
  static MittoState decode(Reader& r);
  Digest digest() const;
};

/// Per-simulation registry pinning each token name to one fungibility and
/// one issuer.
struct NameEntry {
  bool fungible = true;
  ScId issuer;
  bool operator==(const NameEntry&) const = default;
};

class TokenRegistry {
 public:
  const NameEntry* find(const std::string& name) const;
  void record(const std::string& name, NameEntry entry) { names_[name] = entry; }
  const std::map<std::string, NameEntry>& names() const { return names_; }

 private:
  std::map<std::string, NameEntry> names_;
};

/// Creates a token on `self`. Throws ProtocolError(NameConflict,
/// DuplicateTokenId, ZeroAmount).
TokenInstance issue(MittoState& state, TokenRegistry& registry, ScId self, const std::string& name,
                    bool fungible, std::uint64_t id_or_amount, const PubKey& owner, const Digest& data_hash);

std::optional<Rule> validate_send(const MittoState& state, const MittoRules& rules, ScId self,
                                  const TokenInstance& ti, const CscpMessage& msg, const Signature& owner_sig);

void apply_send(MittoState& state, const MittoRules& rules, ScId self, const TokenInstance& ti,
                const CscpMessage& msg);

/// Outcome of the checks the message layer performs on a redeem.
struct RedeemEvidence {
  bool receiver_signature_valid = true;
  bool proof_valid = true;
};

/// `payload` is the raw transaction payload; an undecodable or malformed
/// payload fails R4e.
std::optional<Rule> validate_redeem(const MittoState& state, const MittoRules& rules, ScId self,
                                    ByteView payload, const CscpMessage& msg, const Signature& sender_sig,
                                    const RedeemEvidence& evidence = {});

/// Returns the instance added to `tks`.
TokenInstance apply_redeem(MittoState& state, const MittoRules& rules, ScId self, const TokenInstance& ti,
                           const CscpMessage& msg);

/// Issuer-side bookkeeping for the issuer-notification design: moves
/// accounting for `ti` from counterparty `from` to `to`.
void notify_transfer(MittoState& issuer_state, ScId from, ScId to, const TokenInstance& ti);

/// Local consolidation: two fungible instances with the same name, issuer and
/// owner become one. Throws ProtocolError(EntityNotInState, InvalidInstance).
TokenInstance merge(MittoState& state, const TokenInstance& a, const TokenInstance& b);

/// Splits `ti` into instances of `first` and ti.amount - first. Throws
/// ProtocolError(EntityNotInState, InvalidInstance, ZeroAmount).
std::pair<TokenInstance, TokenInstance> split(MittoState& state, const TokenInstance& ti, std::uint64_t first);

/// Decodes a token payload; nullopt if it is not a canonical TokenInstance.
std::optional<TokenInstance> decode_payload(ByteView payload);

}  // namespace sidelink::mitto
