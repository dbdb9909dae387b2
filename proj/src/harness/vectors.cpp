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

#include "sidelink/harness/vectors.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "sidelink/keys.hpp"

namespace sidelink::harness {

namespace {

constexpr ScId kA{1};
constexpr ScId kB{2};
constexpr ScId kC{3};

const KeyPair& key(const std::string& name) {
  static std::map<std::string, KeyPair> keys;
  auto it = keys.find(name);
  if (it == keys.end()) it = keys.emplace(name, KeyPair::from_label("user/" + name)).first;
  return it->second;
}

TokenInstance fungible(const std::string& name, std::uint64_t amount, ScId issuer, const std::string& owner) {
  return TokenInstance{name, true, Amount{amount}, issuer, key(owner).public_key(), hash_bytes(name + "/" + owner)};
}

TokenInstance nft(const std::string& name, std::uint64_t id, ScId issuer, const std::string& owner) {
  return TokenInstance{name, false, TokenId{id}, issuer, key(owner).public_key(), hash_bytes(name + "/nft")};
}

SentRecord sent_fungible(ScId receiver, const std::string& name, std::uint64_t amount) {
  return SentRecord{receiver, name, true, Amount{amount}};
}

SentRecord sent_nft(ScId receiver, const std::string& name, std::uint64_t id) {
  return SentRecord{receiver, name, false, TokenId{id}};
}

mitto::MittoState state_of(std::vector<TokenInstance> held, std::vector<SentRecord> sent = {}) {
  mitto::MittoState s;
  for (const auto& ti : held) s.add(ti);
  for (const auto& sr : sent) s.sent[mitto::sent_key(sr.receiver, sr.name, sr.fungible, sr.token_id())] = sr;
  return s;
}

CscpMessage message_for(ScId from, ScId to, const TokenInstance& ti, const std::string& receiver) {
  return CscpMessage{from, to, MsgType::TokenTransfer, ti.owner, key(receiver).public_key(), token_payload_hash(ti)};
}

struct Builder {
  std::vector<ConformanceVector> out;

  ConformanceVector& send(std::string name, ScId self, mitto::MittoState pre, const TokenInstance& ti,
                          CscpMessage msg, const std::string& signer) {
    ConformanceVector v;
    v.name = std::move(name);
    v.operation = "send";
    v.self = self;
    v.pre_state = std::move(pre);
    v.message = msg;
    v.payload = token_payload(ti);
    v.signature = key(signer).sign(message_digest(msg));
    out.push_back(std::move(v));
    return out.back();
  }

  ConformanceVector& redeem(std::string name, ScId self, mitto::MittoState pre, Bytes payload, CscpMessage msg,
                            const std::string& sender_signer) {
    ConformanceVector v;
    v.name = std::move(name);
    v.operation = "redeem";
    v.self = self;
    v.pre_state = std::move(pre);
    v.message = msg;
    v.payload = std::move(payload);
    v.signature = key(sender_signer).sign(message_digest(msg));
    auto receiver = std::find_if(keys().begin(), keys().end(),
                                 [&](const std::string& n) { return key(n).public_key() == msg.receiver; });
    v.receiver_signature = key(receiver == keys().end() ? "mallory" : *receiver).sign(redeem_auth_digest(msg, v.payload));
    out.push_back(std::move(v));
    return out.back();
  }

  static const std::vector<std::string>& keys() {
    static const std::vector<std::string> names = {"alice", "bob", "carol", "mallory"};
    return names;
  }
};

}  // namespace

Json ConformanceVector::to_json() const {
  Json tx{{"message", harness::to_json(message)}, {"payload", to_hex(payload)}, {"signature", to_hex(signature.bytes)}};
  if (operation == "redeem") {
    tx["receiver_signature"] = to_hex(receiver_signature.bytes);
    tx["proof_valid"] = proof_valid;
  }
  Json doc{{"name", name},
           {"operation", operation},
           {"pre_state", Json{{"self", self.value}, {"rules", harness::to_json(rules)}, {"state", harness::to_json(pre_state)}}},
           {"transaction", tx},
           {"expected", expected}};
  if (post_state) doc["post_state"] = harness::to_json(*post_state);
  return doc;
}

ConformanceVector ConformanceVector::from_json(const Json& j, const std::string& path) {
  ConformanceVector v;
  v.name = get_string(j, "name", path);
  v.operation = get_string(j, "operation", path);
  if (v.operation != "send" && v.operation != "redeem") throw ParseError(path + ".operation", "expected send or redeem");
  const auto& pre = require(j, "pre_state", path);
  v.self = ScId{static_cast<std::uint32_t>(get_u64(pre, "self", path + ".pre_state"))};
  v.rules = pre.contains("rules") ? rules_from_json(pre.at("rules"), path + ".pre_state.rules") : mitto::MittoRules{};
  v.pre_state = state_from_json(require(pre, "state", path + ".pre_state"), path + ".pre_state.state");
  const auto& tx = require(j, "transaction", path);
  const auto tpath = path + ".transaction";
  v.message = message_from_json(require(tx, "message", tpath), tpath + ".message");
  v.payload = get_hex(tx, "payload", tpath);
  v.signature.bytes = get_hex(tx, "signature", tpath);
  if (v.operation == "redeem") {
    v.receiver_signature.bytes = get_hex(tx, "receiver_signature", tpath);
    v.proof_valid = get_bool(tx, "proof_valid", tpath);
  }
  v.expected = get_string(j, "expected", path);
  if (j.contains("post_state")) v.post_state = state_from_json(j.at("post_state"), path + ".post_state");
  if (v.expected == "Accepted" && !v.post_state) throw ParseError(path + ".post_state", "required for Accepted");
  return v;
}

VectorVerdict evaluate(const ConformanceVector& v) {
  auto state = v.pre_state;
  auto ti = mitto::decode_payload(v.payload);
  std::optional<mitto::Rule> rule;
  if (v.operation == "send") {
    rule = ti ? mitto::validate_send(state, v.rules, v.self, *ti, v.message, v.signature) : mitto::Rule::R1;
    if (!rule) mitto::apply_send(state, v.rules, v.self, *ti, v.message);
  } else {
    mitto::RedeemEvidence evidence;
    evidence.receiver_signature_valid =
        verify_sig(v.message.receiver, redeem_auth_digest(v.message, v.payload), v.receiver_signature);
    evidence.proof_valid = v.proof_valid;
    rule = mitto::validate_redeem(state, v.rules, v.self, v.payload, v.message, v.signature, evidence);
    if (!rule) mitto::apply_redeem(state, v.rules, v.self, *ti, v.message);
  }
  if (rule) return {"Rejected(" + std::string(mitto::to_string(*rule)) + ")", std::nullopt};
  return {"Accepted", state};
}

bool reproduces(const ConformanceVector& v, std::string* detail) {
  auto got = evaluate(v);
  if (got.verdict != v.expected) {
    if (detail) *detail = "expected " + v.expected + ", got " + got.verdict;
    return false;
  }
  if (got.post_state && (!v.post_state || *got.post_state != *v.post_state)) {
    if (detail) *detail = "post_state differs";
    return false;
  }
  if (detail) *detail = got.verdict;
  return true;
}

std::vector<ConformanceVector> generate_vectors() {
  Builder b;
  const auto coins = fungible("wBTC", 100, kA, "alice");
  const auto at_b = fungible("wBTC", 60, kA, "bob");
  const auto car = nft("Cars", 1, kA, "bob");

  // Send rules, evaluated on the issuer A or the foreign holder B.
  b.send("send-accepted-native", kA, state_of({coins}), coins, message_for(kA, kB, coins, "bob"), "alice");
  b.send("send-accepted-native-topup", kA, state_of({coins}, {sent_fungible(kB, "wBTC", 60)}), coins,
         message_for(kA, kB, coins, "bob"), "alice");
  b.send("send-accepted-foreign-return", kB, state_of({at_b}), at_b, message_for(kB, kA, at_b, "alice"), "bob");
  b.send("send-accepted-nft", kA, state_of({nft("Cars", 1, kA, "alice")}), nft("Cars", 1, kA, "alice"),
         message_for(kA, kB, nft("Cars", 1, kA, "alice"), "bob"), "alice");
  b.send("send-R1-not-held", kA, state_of({}), coins, message_for(kA, kB, coins, "bob"), "alice");
  b.send("send-R2-foreign-to-third-party", kB, state_of({at_b}), at_b, message_for(kB, kC, at_b, "carol"), "bob");
  {
    auto m = message_for(kC, kB, coins, "bob");
    b.send("send-R3a-wrong-sending-chain", kA, state_of({coins}), coins, m, "alice");
  }
  b.send("send-R3b-self-send", kA, state_of({coins}), coins, message_for(kA, kA, coins, "bob"), "alice");
  {
    auto m = message_for(kA, kB, coins, "bob");
    m.msg_type = static_cast<MsgType>(2);
    b.send("send-R3c-unknown-type", kA, state_of({coins}), coins, m, "alice");
  }
  {
    auto m = message_for(kA, kB, coins, "bob");
    m.sender = key("bob").public_key();
    b.send("send-R3d-sender-not-owner", kA, state_of({coins}), coins, m, "bob");
  }
  {
    auto m = message_for(kA, kB, coins, "bob");
    m.payload_hash = token_payload_hash(fungible("wBTC", 99, kA, "alice"));
    b.send("send-R3e-payload-hash", kA, state_of({coins}), coins, m, "alice");
  }
  b.send("send-R4-bad-owner-signature", kA, state_of({coins}), coins, message_for(kA, kB, coins, "bob"), "mallory");

  // Redeem rules.
  const auto from_a = fungible("wBTC", 60, kA, "alice");
  b.redeem("redeem-accepted-foreign", kB, state_of({}), token_payload(from_a), message_for(kA, kB, from_a, "bob"),
           "alice");
  b.redeem("redeem-accepted-native-return", kA, state_of({}, {sent_fungible(kB, "wBTC", 100)}), token_payload(at_b),
           message_for(kB, kA, at_b, "alice"), "bob");
  b.redeem("redeem-accepted-native-return-all", kA, state_of({}, {sent_fungible(kB, "wBTC", 60)}),
           token_payload(at_b), message_for(kB, kA, at_b, "alice"), "bob");
  b.redeem("redeem-accepted-nft-return", kA, state_of({}, {sent_nft(kB, "Cars", 1)}), token_payload(car),
           message_for(kB, kA, car, "alice"), "bob");
  {
    auto foreign = fungible("wETH", 5, kC, "alice");
    b.redeem("redeem-R1-not-from-issuer", kB, state_of({}), token_payload(foreign),
             message_for(kA, kB, foreign, "bob"), "alice");
  }
  {
    auto over = fungible("wBTC", 150, kA, "bob");
    b.redeem("redeem-R2a-exceeds-sent", kA, state_of({}, {sent_fungible(kB, "wBTC", 100)}), token_payload(over),
             message_for(kB, kA, over, "alice"), "bob");
  }
  b.redeem("redeem-R2b-nft-not-sent", kA, state_of({}, {sent_nft(kB, "Cars", 2)}), token_payload(car),
           message_for(kB, kA, car, "alice"), "bob");
  {
    auto incoming = nft("Cars", 7, kA, "alice");
    b.redeem("redeem-R3-nft-already-live", kB, state_of({nft("Cars", 7, kA, "carol")}), token_payload(incoming),
             message_for(kA, kB, incoming, "bob"), "alice");
  }
  {
    // A record filed under the chain itself lets the message reach rule 4a.
    auto own = fungible("wBTC", 10, kA, "alice");
    b.redeem("redeem-R4a-from-self", kA, state_of({}, {sent_fungible(kA, "wBTC", 10)}), token_payload(own),
             message_for(kA, kA, own, "bob"), "alice");
  }
  b.redeem("redeem-R4b-wrong-receiving-chain", kB, state_of({}), token_payload(from_a),
           message_for(kA, kC, from_a, "bob"), "alice");
  {
    auto m = message_for(kA, kB, from_a, "bob");
    m.msg_type = static_cast<MsgType>(2);
    b.redeem("redeem-R4c-unknown-type", kB, state_of({}), token_payload(from_a), m, "alice");
  }
  {
    auto m = message_for(kA, kB, from_a, "bob");
    m.sender = key("carol").public_key();
    b.redeem("redeem-R4d-sender-not-owner", kB, state_of({}), token_payload(from_a), m, "carol");
  }
  {
    auto m = message_for(kA, kB, from_a, "bob");
    m.payload_hash = token_payload_hash(fungible("wBTC", 61, kA, "alice"));
    b.redeem("redeem-R4e-payload-hash", kB, state_of({}), token_payload(from_a), m, "alice");
  }
  {
    Bytes junk = {0xde, 0xad, 0xbe, 0xef};
    auto m = message_for(kA, kB, from_a, "bob");
    m.payload_hash = hash_bytes(junk);
    b.redeem("redeem-R4e-undecodable-payload", kB, state_of({}), junk, m, "alice");
  }
  b.redeem("redeem-R5-bad-sender-signature", kB, state_of({}), token_payload(from_a),
           message_for(kA, kB, from_a, "bob"), "mallory");
  {
    auto& v = b.redeem("redeem-R6-bad-receiver-signature", kB, state_of({}), token_payload(from_a),
                       message_for(kA, kB, from_a, "bob"), "alice");
    v.receiver_signature = key("mallory").sign(redeem_auth_digest(v.message, v.payload));
  }
  {
    auto& v = b.redeem("redeem-R7-invalid-proof", kB, state_of({}), token_payload(from_a),
                       message_for(kA, kB, from_a, "bob"), "alice");
    v.proof_valid = false;
  }

  // Verdicts and post-states are frozen from the engine; test code
  // cross-checks them against hand-derived expectations.
  for (auto& v : b.out) {
    auto got = evaluate(v);
    v.expected = got.verdict;
    v.post_state = got.post_state;
  }
  return b.out;
}

std::vector<std::filesystem::path> emit_vectors(const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  for (const auto& v : generate_vectors()) {
    auto path = dir / (v.name + ".json");
    std::ofstream out(path, std::ios::binary);
    out << v.to_json().dump(2) << "\n";
    written.push_back(path);
  }
  return written;
}

std::vector<ConformanceVector> load_vectors(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<ConformanceVector> out;
  for (const auto& f : files) {
    std::ifstream in(f);
    std::stringstream buf;
    buf << in.rdbuf();
    Json doc;
    try {
      doc = Json::parse(buf.str());
    } catch (const Json::parse_error& e) {
      throw ParseError(f.filename().string(), e.what());
    }
    out.push_back(ConformanceVector::from_json(doc, f.filename().string()));
  }
  return out;
}

}  // namespace sidelink::harness
