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

#include "sidelink/token.hpp"

namespace sidelink {

namespace {

void encode_quantity(Writer& w, const Quantity& q) {
  w.u8(static_cast<std::uint8_t>(q.index()));
  std::visit([&](auto v) { w.u64(v.value); }, q);
}

Quantity decode_quantity(Reader& r) {
  auto arm = r.u8();
  auto value = r.u64();
  if (arm == 0) return TokenId{value};
  if (arm == 1) return Amount{value};
  throw DecodeError("quantity discriminant out of range");
}

std::uint64_t amount_of(const Quantity& q) {
  auto* a = std::get_if<Amount>(&q);
  return a ? a->value : 0;
}

std::uint64_t id_of(const Quantity& q) {
  auto* t = std::get_if<TokenId>(&q);
  return t ? t->value : 0;
}

}  // namespace

bool TokenInstance::well_formed() const {
  if (fungible) return std::holds_alternative<Amount>(quantity) && amount() > 0;
  return std::holds_alternative<TokenId>(quantity);
}

std::uint64_t TokenInstance::amount() const { return amount_of(quantity); }
std::uint64_t TokenInstance::token_id() const { return id_of(quantity); }

void TokenInstance::encode(Writer& w) const {
  w.string(name);
  w.boolean(fungible);
  encode_quantity(w, quantity);
  w.u32(issuer.value);
  w.raw(owner.view());
  w.digest(data_hash);
}

TokenInstance TokenInstance::decode(Reader& r) {
  TokenInstance ti;
  ti.name = r.string();
  ti.fungible = r.boolean();
  ti.quantity = decode_quantity(r);
  ti.issuer = ScId{r.u32()};
  ti.owner = PubKey::from_bytes(r.digest().view());
  ti.data_hash = r.digest();
  return ti;
}

Digest TokenInstance::digest() const {
  Writer w;
  encode(w);
  return hash_bytes(w.data());
}

std::uint64_t SentRecord::amount() const { return amount_of(quantity); }
std::uint64_t SentRecord::token_id() const { return id_of(quantity); }

void SentRecord::encode(Writer& w) const {
  w.u32(receiver.value);
  w.string(name);
  w.boolean(fungible);
  encode_quantity(w, quantity);
}

SentRecord SentRecord::decode(Reader& r) {
  SentRecord sr;
  sr.receiver = ScId{r.u32()};
  sr.name = r.string();
  sr.fungible = r.boolean();
  sr.quantity = decode_quantity(r);
  return sr;
}

Digest SentRecord::digest() const {
  Writer w;
  encode(w);
  return hash_bytes(w.data());
}

Bytes token_payload(const TokenInstance& ti) {
  Writer w;
  ti.encode(w);
  return std::move(w).take();
}

Digest token_payload_hash(const TokenInstance& ti) { return hash_bytes(token_payload(ti)); }

}  // namespace sidelink
