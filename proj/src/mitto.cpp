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

#include "sidelink/mitto.hpp"

#include <algorithm>
#include <array>

#include "sidelink/error.hpp"
#include "sidelink/keys.hpp"

namespace sidelink::mitto {

namespace {

constexpr std::array<std::string_view, 19> kRuleNames = {
    "R1", "R2", "R2a", "R2b", "R3", "R3a", "R3b", "R3c", "R3d", "R3e",
    "R4", "R4a", "R4b", "R4c", "R4d", "R4e", "R5", "R6", "R7",
};

// Aggregate records of the no-receiver design are filed under this id;
// registered sidechains start at 1.
constexpr ScId kAnyReceiver{0};

ScId record_receiver(const MittoRules& rules, ScId counterparty) {
  return rules.sent_record_receiver ? counterparty : kAnyReceiver;
}

Digest derived_data_hash(std::string_view tag, std::uint8_t index, const Digest& a, const Digest& b) {
  Writer w;
  w.string(std::string(tag));
  w.u8(index);
  w.digest(a);
  w.digest(b);
  return hash_bytes(w.data());
}

void add_sent_amount(MittoState& state, ScId receiver, const TokenInstance& ti) {
  auto key = sent_key(receiver, ti.name, true, 0);
  auto it = state.sent.find(key);
  if (it == state.sent.end()) {
    state.sent.emplace(key, SentRecord{receiver, ti.name, true, Amount{ti.amount()}});
  } else {
    std::get<Amount>(it->second.quantity).value += ti.amount();
  }
}

void sub_sent_amount(MittoState& state, ScId receiver, const TokenInstance& ti) {
  auto it = state.sent.find(sent_key(receiver, ti.name, true, 0));
  if (it == state.sent.end()) return;
  auto& amount = std::get<Amount>(it->second.quantity).value;
  amount -= std::min(amount, ti.amount());
  if (amount == 0) state.sent.erase(it);
}

}  // namespace

std::string_view to_string(Rule rule) { return kRuleNames[static_cast<std::size_t>(rule)]; }

std::optional<Rule> rule_from_string(std::string_view s) {
  for (std::size_t i = 0; i < kRuleNames.size(); ++i) {
    if (kRuleNames[i] == s) return static_cast<Rule>(i);
  }
  return std::nullopt;
}

SentKey sent_key(ScId receiver, const std::string& name, bool fungible, std::uint64_t token_id) {
  return {receiver.value, name, fungible, fungible ? 0 : token_id};
}

bool MittoState::holds(const TokenInstance& ti) const { return tks.count(ti.digest()) != 0; }

void MittoState::add(const TokenInstance& ti) {
  auto& held = tks[ti.digest()];
  held.instance = ti;
  ++held.count;
}

bool MittoState::remove(const TokenInstance& ti) {
  auto it = tks.find(ti.digest());
  if (it == tks.end()) return false;
  if (--it->second.count == 0) tks.erase(it);
  return true;
}

bool MittoState::nft_live(const std::string& name, std::uint64_t token_id) const {
  for (const auto& [_, held] : tks) {
    const auto& ti = held.instance;
    if (!ti.fungible && ti.name == name && ti.token_id() == token_id) return true;
  }
  return false;
}

const SentRecord* MittoState::find_sent(ScId receiver, const std::string& name, bool fungible,
                                        std::uint64_t token_id) const {
  auto it = sent.find(sent_key(receiver, name, fungible, token_id));
  return it == sent.end() ? nullptr : &it->second;
}

std::vector<Digest> MittoState::held_digests() const {
  std::vector<Digest> out;
  for (const auto& [d, held] : tks) out.insert(out.end(), held.count, d);
  return out;
}

std::vector<Digest> MittoState::sent_digests() const {
  std::vector<Digest> out;
  out.reserve(sent.size());
  for (const auto& [_, sr] : sent) out.push_back(sr.digest());
  std::sort(out.begin(), out.end());
  return out;
}

Digest MittoState::held_root() const { return merkle_root(held_digests()); }
Digest MittoState::sent_root() const { return merkle_root(sent_digests()); }

std::uint64_t MittoState::held_amount(const std::string& name) const {
  std::uint64_t total = 0;
  for (const auto& [_, held] : tks) {
    if (held.instance.name == name) total += held.instance.fungible ? held.instance.amount() * held.count : held.count;
  }
  return total;
}

std::uint64_t MittoState::sent_amount(const std::string& name) const {
  std::uint64_t total = 0;
  for (const auto& [_, sr] : sent) {
    if (sr.name == name) total += sr.fungible ? sr.amount() : 1;
  }
  return total;
}

void MittoState::encode(Writer& w) const {
  w.u32(static_cast<std::uint32_t>(tks.size()));
  for (const auto& [_, held] : tks) {
    held.instance.encode(w);
    w.u32(held.count);
  }
  w.u32(static_cast<std::uint32_t>(sent.size()));
  for (const auto& [_, sr] : sent) sr.encode(w);
  w.u32(static_cast<std::uint32_t>(issued.size()));
  for (const auto& [name, info] : issued) {
    w.string(name);
    w.boolean(info.fungible);
    w.u64(info.total);
    w.u32(static_cast<std::uint32_t>(info.token_ids.size()));
    for (auto id : info.token_ids) w.u64(id);
  }
}

MittoState MittoState::decode(Reader& r) {
  MittoState s;
  for (auto n = r.u32(); n > 0; --n) {
    auto ti = TokenInstance::decode(r);
    auto count = r.u32();
    if (count == 0) throw DecodeError("held token with zero count");
    s.tks[ti.digest()] = HeldToken{ti, count};
  }
  for (auto n = r.u32(); n > 0; --n) {
    auto sr = SentRecord::decode(r);
    s.sent[sent_key(sr.receiver, sr.name, sr.fungible, sr.token_id())] = sr;
  }
  for (auto n = r.u32(); n > 0; --n) {
    auto name = r.string();
    IssuedName info;
    info.fungible = r.boolean();
    info.total = r.u64();
    for (auto k = r.u32(); k > 0; --k) info.token_ids.insert(r.u64());
    s.issued[name] = std::move(info);
  }
  return s;
}

Digest MittoState::digest() const {
  Writer w;
  encode(w);
  return hash_bytes(w.data());
}

const NameEntry* TokenRegistry::find(const std::string& name) const {
  auto it = names_.find(name);
  return it == names_.end() ? nullptr : &it->second;
}

TokenInstance issue(MittoState& state, TokenRegistry& registry, ScId self, const std::string& name,
                    bool fungible, std::uint64_t id_or_amount, const PubKey& owner, const Digest& data_hash) {
  if (const auto* entry = registry.find(name)) {
    if (entry->fungible != fungible || entry->issuer != self) {
      throw ProtocolError(Errc::NameConflict, "token name '" + name + "' is registered elsewhere");
    }
  }
  if (fungible && id_or_amount == 0) throw ProtocolError(Errc::ZeroAmount, "fungible issue of 0");
  if (!fungible) {
    auto it = state.issued.find(name);
    bool issued_before = it != state.issued.end() && it->second.token_ids.count(id_or_amount) != 0;
    bool sent_away = false;
    for (const auto& [_, sr] : state.sent) sent_away |= !sr.fungible && sr.name == name && sr.token_id() == id_or_amount;
    if (issued_before || sent_away || state.nft_live(name, id_or_amount)) {
      throw ProtocolError(Errc::DuplicateTokenId, name + " #" + std::to_string(id_or_amount));
    }
  }
  registry.record(name, NameEntry{fungible, self});

  TokenInstance ti;
  ti.name = name;
  ti.fungible = fungible;
  ti.quantity = fungible ? Quantity{Amount{id_or_amount}} : Quantity{TokenId{id_or_amount}};
  ti.issuer = self;
  ti.owner = owner;
  ti.data_hash = data_hash;

  auto& info = state.issued[name];
  info.fungible = fungible;
  if (fungible) {
    info.total += id_or_amount;
  } else {
    info.token_ids.insert(id_or_amount);
  }
  state.add(ti);
  return ti;
}

std::optional<Rule> validate_send(const MittoState& state, const MittoRules& rules, ScId self,
                                  const TokenInstance& ti, const CscpMessage& msg, const Signature& owner_sig) {
  if (!state.holds(ti)) return Rule::R1;
  if (rules.restrict_routing && ti.issuer != self && msg.receiving_sc != ti.issuer) return Rule::R2;
  if (msg.sending_sc != self) return Rule::R3a;
  if (msg.receiving_sc == self) return Rule::R3b;
  if (msg.msg_type != MsgType::TokenTransfer) return Rule::R3c;
  if (msg.sender != ti.owner) return Rule::R3d;
  if (msg.payload_hash != token_payload_hash(ti)) return Rule::R3e;
  if (!verify_sig(ti.owner, message_digest(msg), owner_sig)) return Rule::R4;
  return std::nullopt;
}

void apply_send(MittoState& state, const MittoRules& rules, ScId self, const TokenInstance& ti,
                const CscpMessage& msg) {
  state.remove(ti);
  if (ti.issuer != self || !rules.sent_records) return;
  auto receiver = record_receiver(rules, msg.receiving_sc);
  if (ti.fungible) {
    add_sent_amount(state, receiver, ti);
  } else {
    state.sent[sent_key(receiver, ti.name, false, ti.token_id())] =
        SentRecord{receiver, ti.name, false, TokenId{ti.token_id()}};
  }
}

std::optional<TokenInstance> decode_payload(ByteView payload) {
  try {
    auto ti = decode_canonical<TokenInstance>(payload);
    if (!ti.well_formed()) return std::nullopt;
    return ti;
  } catch (const DecodeError&) {
    return std::nullopt;
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
}

std::optional<Rule> validate_redeem(const MittoState& state, const MittoRules& rules, ScId self,
                                    ByteView payload, const CscpMessage& msg, const Signature& sender_sig,
                                    const RedeemEvidence& evidence) {
  auto decoded = decode_payload(payload);
  if (!decoded) return Rule::R4e;
  const auto& ti = *decoded;

  if (rules.restrict_routing && ti.issuer != msg.sending_sc && ti.issuer != self) return Rule::R1;
  if (ti.issuer == self && rules.sent_records) {
    auto counterparty = record_receiver(rules, msg.sending_sc);
    const auto* sr = state.find_sent(counterparty, ti.name, ti.fungible, ti.token_id());
    if (ti.fungible) {
      if (!sr || !sr->fungible || sr->amount() < ti.amount()) return Rule::R2a;
    } else {
      if (!sr || sr->fungible || sr->token_id() != ti.token_id()) return Rule::R2b;
    }
  }
  if (!ti.fungible && state.nft_live(ti.name, ti.token_id())) return Rule::R3;
  if (msg.sending_sc == self) return Rule::R4a;
  if (msg.receiving_sc != self) return Rule::R4b;
  if (msg.msg_type != MsgType::TokenTransfer) return Rule::R4c;
  if (msg.sender != ti.owner) return Rule::R4d;
  if (msg.payload_hash != hash_bytes(payload)) return Rule::R4e;
  if (!verify_sig(msg.sender, message_digest(msg), sender_sig)) return Rule::R5;
  if (!evidence.receiver_signature_valid) return Rule::R6;
  if (!evidence.proof_valid) return Rule::R7;
  return std::nullopt;
}

TokenInstance apply_redeem(MittoState& state, const MittoRules& rules, ScId self, const TokenInstance& ti,
                           const CscpMessage& msg) {
  TokenInstance fresh = ti;
  fresh.owner = msg.receiver;
  state.add(fresh);
  if (ti.issuer == self && rules.sent_records) {
    auto counterparty = record_receiver(rules, msg.sending_sc);
    if (ti.fungible) {
      sub_sent_amount(state, counterparty, ti);
    } else {
      state.sent.erase(sent_key(counterparty, ti.name, false, ti.token_id()));
    }
  }
  return fresh;
}

void notify_transfer(MittoState& issuer_state, ScId from, ScId to, const TokenInstance& ti) {
  if (ti.fungible) {
    sub_sent_amount(issuer_state, from, ti);
    add_sent_amount(issuer_state, to, ti);
  } else {
    issuer_state.sent.erase(sent_key(from, ti.name, false, ti.token_id()));
    issuer_state.sent[sent_key(to, ti.name, false, ti.token_id())] =
        SentRecord{to, ti.name, false, TokenId{ti.token_id()}};
  }
}

TokenInstance merge(MittoState& state, const TokenInstance& a, const TokenInstance& b) {
  if (!a.fungible || !b.fungible || a.name != b.name || a.issuer != b.issuer || a.owner != b.owner) {
    throw ProtocolError(Errc::InvalidInstance, "merge needs two fungible instances of one name and owner");
  }
  auto it_a = state.tks.find(a.digest());
  auto it_b = state.tks.find(b.digest());
  std::uint32_t needed = a == b ? 2 : 1;
  if (it_a == state.tks.end() || it_b == state.tks.end() || it_a->second.count < needed) {
    throw ProtocolError(Errc::EntityNotInState, "merge input not held");
  }
  TokenInstance out = a;
  out.quantity = Amount{a.amount() + b.amount()};
  out.data_hash = derived_data_hash("merge", 0, a.data_hash, b.data_hash);
  state.remove(a);
  state.remove(b);
  state.add(out);
  return out;
}

std::pair<TokenInstance, TokenInstance> split(MittoState& state, const TokenInstance& ti, std::uint64_t first) {
  if (!ti.fungible) throw ProtocolError(Errc::InvalidInstance, "cannot split an NFT");
  if (!state.holds(ti)) throw ProtocolError(Errc::EntityNotInState, "split input not held");
  if (first == 0 || first >= ti.amount()) throw ProtocolError(Errc::ZeroAmount, "split leaves an empty part");
  TokenInstance lhs = ti;
  TokenInstance rhs = ti;
  lhs.quantity = Amount{first};
  rhs.quantity = Amount{ti.amount() - first};
  lhs.data_hash = derived_data_hash("split", 0, ti.data_hash, ti.data_hash);
  rhs.data_hash = derived_data_hash("split", 1, ti.data_hash, ti.data_hash);
  state.remove(ti);
  state.add(lhs);
  state.add(rhs);
  return {lhs, rhs};
}

}  // namespace sidelink::mitto
