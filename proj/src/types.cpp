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

#include "sidelink/types.hpp"

#include <algorithm>

namespace sidelink {

namespace {

void encode_scid(Writer& w, ScId sc) { w.u32(sc.value); }
ScId decode_scid(Reader& r) { return ScId{r.u32()}; }

void encode_pubkey(Writer& w, const PubKey& k) { w.raw(k.view()); }

PubKey decode_pubkey(Reader& r) {
  // A public key is a fixed 32-byte field; reuse the digest reader.
  auto d = r.digest();
  PubKey k;
  std::copy(d.bytes.begin(), d.bytes.end(), k.bytes.begin());
  return k;
}

void encode_digests(Writer& w, const std::vector<Digest>& ds) {
  w.list(ds, [](Writer& out, const Digest& d) { out.digest(d); });
}

std::vector<Digest> decode_digests(Reader& r) {
  return r.list<Digest>([](Reader& in) { return in.digest(); });
}

ProofScheme decode_scheme(Reader& r) {
  auto v = r.u8();
  if (v != static_cast<std::uint8_t>(ProofScheme::SimMerkle)) throw DecodeError("unknown proof scheme");
  return static_cast<ProofScheme>(v);
}

}  // namespace

PubKey PubKey::from_bytes(ByteView raw) {
  if (raw.size() != 32) throw std::invalid_argument("public key must be 32 bytes");
  PubKey k;
  std::copy(raw.begin(), raw.end(), k.bytes.begin());
  return k;
}

PubKey PubKey::from_hex(std::string_view hex) { return from_bytes(sidelink::from_hex(hex)); }

void VerificationKey::encode(Writer& w) const {
  w.u8(static_cast<std::uint8_t>(scheme));
  w.bytes(params);
}

VerificationKey VerificationKey::decode(Reader& r) {
  VerificationKey vk;
  vk.scheme = decode_scheme(r);
  vk.params = r.bytes();
  return vk;
}

void Proof::encode(Writer& w) const {
  w.u8(static_cast<std::uint8_t>(scheme));
  w.bytes(body);
}

Proof Proof::decode(Reader& r) {
  Proof p;
  p.scheme = decode_scheme(r);
  p.body = r.bytes();
  return p;
}

void CscpMessage::encode(Writer& w) const {
  encode_scid(w, sending_sc);
  encode_scid(w, receiving_sc);
  w.u32(static_cast<std::uint32_t>(msg_type));
  encode_pubkey(w, sender);
  encode_pubkey(w, receiver);
  w.digest(payload_hash);
}

CscpMessage CscpMessage::decode(Reader& r) {
  CscpMessage m;
  m.sending_sc = decode_scid(r);
  m.receiving_sc = decode_scid(r);
  m.msg_type = static_cast<MsgType>(r.u32());
  m.sender = decode_pubkey(r);
  m.receiver = decode_pubkey(r);
  m.payload_hash = r.digest();
  return m;
}

Digest message_digest(const CscpMessage& m) { return hash_bytes(encode_canonical(m)); }

void WithdrawalCertificate::encode(Writer& w) const {
  encode_scid(w, ledger_id);
  w.u64(epoch_id);
  w.u64(quality);
  w.list(bt_list, [](Writer& out, const Bytes& b) { out.bytes(b); });
  encode_digests(w, proofdata);
  proof.encode(w);
}

WithdrawalCertificate WithdrawalCertificate::decode(Reader& r) {
  WithdrawalCertificate c;
  c.ledger_id = decode_scid(r);
  c.epoch_id = r.u64();
  c.quality = r.u64();
  c.bt_list = r.list<Bytes>([](Reader& in) { return in.bytes(); });
  c.proofdata = decode_digests(r);
  c.proof = Proof::decode(r);
  return c;
}

Digest WithdrawalCertificate::digest() const { return hash_bytes(encode_canonical(*this)); }

void CeasedSidechainWithdrawal::encode(Writer& w) const {
  encode_scid(w, ledger_id);
  encode_pubkey(w, receiver);
  w.u64(amount);
  w.digest(nullifier);
  encode_digests(w, proofdata);
  proof.encode(w);
}

CeasedSidechainWithdrawal CeasedSidechainWithdrawal::decode(Reader& r) {
  CeasedSidechainWithdrawal c;
  c.ledger_id = decode_scid(r);
  c.receiver = decode_pubkey(r);
  c.amount = r.u64();
  c.nullifier = r.digest();
  c.proofdata = decode_digests(r);
  c.proof = Proof::decode(r);
  return c;
}

Digest CeasedSidechainWithdrawal::digest() const { return hash_bytes(encode_canonical(*this)); }

Digest bt_list_root(const std::vector<Bytes>& bt_list) {
  std::vector<Digest> leaves;
  leaves.reserve(bt_list.size());
  for (const auto& bt : bt_list) leaves.push_back(hash_bytes(bt));
  return merkle_root(std::move(leaves));
}

void RedeemProof::encode(Writer& w) const {
  w.u8(static_cast<std::uint8_t>(source_kind));
  w.u8(static_cast<std::uint8_t>(source.index()));
  std::visit([&](const auto& posting) { posting.encode(w); }, source);
  msg_path.encode(w);
  w.digest(msg_tree_root);
  commitment.encode(w);
  w.digest(block_hash);
}

RedeemProof RedeemProof::decode(Reader& r) {
  RedeemProof p;
  auto kind = r.u8();
  if (kind > 1) throw DecodeError("source kind out of range");
  p.source_kind = static_cast<SourceKind>(kind);
  auto alt = r.u8();
  if (alt == 0) {
    p.source = WithdrawalCertificate::decode(r);
  } else if (alt == 1) {
    p.source = CeasedSidechainWithdrawal::decode(r);
  } else {
    throw DecodeError("posting discriminant out of range");
  }
  p.msg_path = MerklePath::decode(r);
  p.msg_tree_root = r.digest();
  p.commitment = StcInclusion::decode(r);
  p.block_hash = r.digest();
  return p;
}

Digest redeem_auth_digest(const CscpMessage& m, ByteView payload) {
  Writer w;
  m.encode(w);
  w.bytes(payload);
  return hash_bytes(w.data());
}

Digest csw_nullifier(ScId sc, const Digest& entity) {
  Writer w;
  encode_scid(w, sc);
  w.digest(entity);
  return hash_bytes(w.data());
}

}  // namespace sidelink
