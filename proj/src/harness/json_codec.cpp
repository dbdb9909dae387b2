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

#include "sidelink/harness/json_codec.hpp"

namespace sidelink::harness {

namespace {

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

void put_quantity(Json& j, bool fungible, const Quantity& q) {
  if (const auto* a = std::get_if<Amount>(&q)) j["amount"] = a->value;
  if (const auto* t = std::get_if<TokenId>(&q)) j["token_id"] = t->value;
  j["fungible"] = fungible;
}

Quantity get_quantity(const Json& j, bool fungible, const std::string& path) {
  if (fungible) {
    if (j.contains("token_id")) throw ParseError(join(path, "token_id"), "fungible instances carry an amount");
    return Amount{get_u64(j, "amount", path)};
  }
  if (j.contains("amount")) throw ParseError(join(path, "amount"), "non-fungible instances carry a token_id");
  return TokenId{get_u64(j, "token_id", path)};
}

}  // namespace

ParseError::ParseError(std::string field, const std::string& detail, std::size_t line)
    : std::runtime_error((line ? "line " + std::to_string(line) + ": " : std::string()) +
                         (field.empty() ? detail : field + ": " + detail)),
      field_(std::move(field)),
      line_(line) {}

const Json& require(const Json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw ParseError(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(join(path, key), "missing field");
  return *it;
}

std::string get_string(const Json& obj, const std::string& key, const std::string& path) {
  const auto& v = require(obj, key, path);
  if (!v.is_string()) throw ParseError(join(path, key), "expected a string");
  return v.get<std::string>();
}

std::uint64_t get_u64(const Json& obj, const std::string& key, const std::string& path) {
  const auto& v = require(obj, key, path);
  if (!v.is_number_unsigned()) throw ParseError(join(path, key), "expected a non-negative integer");
  return v.get<std::uint64_t>();
}

bool get_bool(const Json& obj, const std::string& key, const std::string& path) {
  const auto& v = require(obj, key, path);
  if (!v.is_boolean()) throw ParseError(join(path, key), "expected a boolean");
  return v.get<bool>();
}

Bytes get_hex(const Json& obj, const std::string& key, const std::string& path) {
  auto s = get_string(obj, key, path);
  try {
    return from_hex(s);
  } catch (const std::invalid_argument&) {
    throw ParseError(join(path, key), "expected hex");
  }
}

Digest get_digest(const Json& obj, const std::string& key, const std::string& path) {
  auto raw = get_hex(obj, key, path);
  if (raw.size() != Digest::kSize) throw ParseError(join(path, key), "expected 32 bytes");
  return Digest::from_bytes(raw);
}

namespace {

PubKey get_pubkey(const Json& obj, const std::string& key, const std::string& path) {
  auto raw = get_hex(obj, key, path);
  if (raw.size() != 32) throw ParseError(join(path, key), "expected 32 bytes");
  return PubKey::from_bytes(raw);
}

ScId get_scid(const Json& obj, const std::string& key, const std::string& path) {
  auto v = get_u64(obj, key, path);
  if (v > UINT32_MAX) throw ParseError(join(path, key), "sidechain id out of range");
  return ScId{static_cast<std::uint32_t>(v)};
}

}  // namespace

Json to_json(const TokenInstance& ti) {
  Json j = Json::object();
  j["name"] = ti.name;
  put_quantity(j, ti.fungible, ti.quantity);
  j["issuer"] = ti.issuer.value;
  j["owner"] = ti.owner.hex();
  j["data_hash"] = ti.data_hash.hex();
  return j;
}

TokenInstance token_from_json(const Json& j, const std::string& path) {
  TokenInstance ti;
  ti.name = get_string(j, "name", path);
  ti.fungible = get_bool(j, "fungible", path);
  ti.quantity = get_quantity(j, ti.fungible, path);
  ti.issuer = get_scid(j, "issuer", path);
  ti.owner = get_pubkey(j, "owner", path);
  ti.data_hash = get_digest(j, "data_hash", path);
  return ti;
}

Json to_json(const SentRecord& sr) {
  Json j = Json::object();
  j["receiver"] = sr.receiver.value;
  j["name"] = sr.name;
  put_quantity(j, sr.fungible, sr.quantity);
  return j;
}

SentRecord sent_from_json(const Json& j, const std::string& path) {
  SentRecord sr;
  sr.receiver = get_scid(j, "receiver", path);
  sr.name = get_string(j, "name", path);
  sr.fungible = get_bool(j, "fungible", path);
  sr.quantity = get_quantity(j, sr.fungible, path);
  return sr;
}

Json to_json(const CscpMessage& m) {
  Json j = Json::object();
  j["sending_sc"] = m.sending_sc.value;
  j["receiving_sc"] = m.receiving_sc.value;
  j["msg_type"] = static_cast<std::uint32_t>(m.msg_type);
  j["sender"] = m.sender.hex();
  j["receiver"] = m.receiver.hex();
  j["payload_hash"] = m.payload_hash.hex();
  return j;
}

CscpMessage message_from_json(const Json& j, const std::string& path) {
  CscpMessage m;
  m.sending_sc = get_scid(j, "sending_sc", path);
  m.receiving_sc = get_scid(j, "receiving_sc", path);
  auto type = get_u64(j, "msg_type", path);
  if (type > UINT32_MAX) throw ParseError(join(path, "msg_type"), "out of range");
  m.msg_type = static_cast<MsgType>(type);
  m.sender = get_pubkey(j, "sender", path);
  m.receiver = get_pubkey(j, "receiver", path);
  m.payload_hash = get_digest(j, "payload_hash", path);
  return m;
}

Json to_json(const mitto::MittoRules& rules) {
  return Json{{"sent_records", rules.sent_records},
              {"sent_record_receiver", rules.sent_record_receiver},
              {"restrict_routing", rules.restrict_routing}};
}

mitto::MittoRules rules_from_json(const Json& j, const std::string& path) {
  mitto::MittoRules r;
  r.sent_records = get_bool(j, "sent_records", path);
  r.sent_record_receiver = get_bool(j, "sent_record_receiver", path);
  r.restrict_routing = get_bool(j, "restrict_routing", path);
  return r;
}

Json to_json(const mitto::MittoState& state) {
  Json tks = Json::array();
  for (const auto& [_, held] : state.tks) {
    Json t = to_json(held.instance);
    t["count"] = held.count;
    tks.push_back(std::move(t));
  }
  Json sent = Json::array();
  for (const auto& [_, sr] : state.sent) sent.push_back(to_json(sr));
  Json issued = Json::object();
  for (const auto& [name, info] : state.issued) {
    Json e = Json::object();
    e["fungible"] = info.fungible;
    e["total"] = info.total;
    e["token_ids"] = Json(std::vector<std::uint64_t>(info.token_ids.begin(), info.token_ids.end()));
    issued[name] = std::move(e);
  }
  return Json{{"s_tks", tks}, {"s_sent", sent}, {"issued", issued}};
}

mitto::MittoState state_from_json(const Json& j, const std::string& path) {
  mitto::MittoState s;
  const auto& tks = require(j, "s_tks", path);
  if (!tks.is_array()) throw ParseError(join(path, "s_tks"), "expected an array");
  for (std::size_t i = 0; i < tks.size(); ++i) {
    auto p = join(path, "s_tks[" + std::to_string(i) + "]");
    auto ti = token_from_json(tks[i], p);
    std::uint64_t count = tks[i].contains("count") ? get_u64(tks[i], "count", p) : 1;
    if (count == 0 || count > UINT32_MAX) throw ParseError(p + ".count", "out of range");
    s.tks[ti.digest()] = mitto::HeldToken{ti, static_cast<std::uint32_t>(count)};
  }
  const auto& sent = require(j, "s_sent", path);
  if (!sent.is_array()) throw ParseError(join(path, "s_sent"), "expected an array");
  for (std::size_t i = 0; i < sent.size(); ++i) {
    auto sr = sent_from_json(sent[i], join(path, "s_sent[" + std::to_string(i) + "]"));
    s.sent[mitto::sent_key(sr.receiver, sr.name, sr.fungible, sr.token_id())] = sr;
  }
  if (j.contains("issued")) {
    const auto& issued = j.at("issued");
    if (!issued.is_object()) throw ParseError(join(path, "issued"), "expected an object");
    for (const auto& [name, e] : issued.items()) {
      auto p = join(path, "issued." + name);
      mitto::IssuedName info;
      info.fungible = get_bool(e, "fungible", p);
      info.total = get_u64(e, "total", p);
      const auto& ids = require(e, "token_ids", p);
      if (!ids.is_array()) throw ParseError(p + ".token_ids", "expected an array");
      for (const auto& id : ids) {
        if (!id.is_number_unsigned()) throw ParseError(p + ".token_ids", "expected integers");
        info.token_ids.insert(id.get<std::uint64_t>());
      }
      s.issued[name] = std::move(info);
    }
  }
  return s;
}

}  // namespace sidelink::harness
