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

#include "sidelink/proof.hpp"

#include <algorithm>

#include "sidelink/error.hpp"

namespace sidelink {

namespace {

void encode_digest_list(Writer& w, const std::vector<Digest>& ds) {
  w.list(ds, [](Writer& out, const Digest& d) { out.digest(d); });
}

std::vector<Digest> decode_digest_list(Reader& r) {
  return r.list<Digest>([](Reader& in) { return in.digest(); });
}

Bytes scid_bytes(ScId sc) {
  Writer w;
  w.u32(sc.value);
  return std::move(w).take();
}

struct WcertBody {
  std::vector<Digest> bt_leaves;
  std::vector<Digest> proofdata;
  Signature signature;

  void encode(Writer& w) const {
    encode_digest_list(w, bt_leaves);
    encode_digest_list(w, proofdata);
    w.bytes(signature.bytes);
  }
  static WcertBody decode(Reader& r) {
    WcertBody b;
    b.bt_leaves = decode_digest_list(r);
    b.proofdata = decode_digest_list(r);
    b.signature.bytes = r.bytes();
    return b;
  }
};

// Neighbour of an absent value in a sorted committed list.
struct SortedNeighbor {
  std::uint64_t index = 0;
  Digest leaf;
  MerklePath path;

  void encode(Writer& w) const {
    w.u64(index);
    w.digest(leaf);
    path.encode(w);
  }
  static SortedNeighbor decode(Reader& r) {
    SortedNeighbor n;
    n.index = r.u64();
    n.leaf = r.digest();
    n.path = MerklePath::decode(r);
    return n;
  }
};

/// Evidence that a digest is not in a sorted list committed by
/// redeemed_commitment: the adjacent leaves around its insertion point.
struct NonMembership {
  std::uint64_t count = 0;
  Digest root;
  std::optional<SortedNeighbor> lo;
  std::optional<SortedNeighbor> hi;

  void encode(Writer& w) const {
    w.u64(count);
    w.digest(root);
    w.optional(lo, [](Writer& out, const SortedNeighbor& n) { n.encode(out); });
    w.optional(hi, [](Writer& out, const SortedNeighbor& n) { n.encode(out); });
  }
  static NonMembership decode(Reader& r) {
    NonMembership nm;
    nm.count = r.u64();
    nm.root = r.digest();
    nm.lo = r.optional<SortedNeighbor>([](Reader& in) { return SortedNeighbor::decode(in); });
    nm.hi = r.optional<SortedNeighbor>([](Reader& in) { return SortedNeighbor::decode(in); });
    return nm;
  }
};

std::optional<NonMembership> prove_absent(const std::vector<Digest>& sorted, const Digest& value) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), value);
  if (it != sorted.end() && *it == value) return std::nullopt;
  MerkleTree tree(sorted);
  NonMembership nm;
  nm.count = sorted.size();
  nm.root = tree.root();
  auto pos = static_cast<std::size_t>(std::distance(sorted.begin(), it));
  if (pos > 0) nm.lo = SortedNeighbor{pos - 1, sorted[pos - 1], tree.path(pos - 1)};
  if (pos < sorted.size()) nm.hi = SortedNeighbor{pos, sorted[pos], tree.path(pos)};
  return nm;
}

bool verify_absent(const Digest& commitment, const Digest& value, const NonMembership& nm) {
  Writer w;
  w.u64(nm.count);
  w.digest(nm.root);
  if (hash_bytes(w.data()) != commitment) return false;
  if (nm.count == 0) return !nm.lo && !nm.hi && nm.root == empty_root();
  if (!nm.lo && !nm.hi) return false;
  auto neighbor_ok = [&](const SortedNeighbor& n) {
    return n.index < nm.count && n.path.leaf_index == n.index && verify_path(nm.root, n.leaf, n.path);
  };
  if (nm.lo && (!neighbor_ok(*nm.lo) || !(nm.lo->leaf < value))) return false;
  if (nm.hi && (!neighbor_ok(*nm.hi) || !(value < nm.hi->leaf))) return false;
  if (nm.lo && nm.hi) return nm.hi->index == nm.lo->index + 1;
  if (nm.lo) return nm.lo->index + 1 == nm.count;
  return nm.hi->index == 0;
}

struct CswBody {
  CswKind kind = CswKind::Held;
  CommittedStateRef state;
  std::vector<Digest> proofdata;
  std::optional<CscpMessage> message;
  Bytes entity;
  MerklePath entity_path;
  std::optional<ReturnEvidence> returned;
  std::optional<NonMembership> unredeemed;  // M_t absent from the committed redeemed set
  Signature signature;

  void encode(Writer& w) const {
    w.u8(static_cast<std::uint8_t>(kind));
    state.encode(w);
    encode_digest_list(w, proofdata);
    w.optional(message, [](Writer& out, const CscpMessage& m) { m.encode(out); });
    w.bytes(entity);
    entity_path.encode(w);
    w.optional(returned, [](Writer& out, const ReturnEvidence& ev) { ev.encode(out); });
    w.optional(unredeemed, [](Writer& out, const NonMembership& nm) { nm.encode(out); });
    w.bytes(signature.bytes);
  }
  static CswBody decode(Reader& r) {
    CswBody b;
    auto kind = r.u8();
    if (kind > 1) throw DecodeError("csw kind out of range");
    b.kind = static_cast<CswKind>(kind);
    b.state = CommittedStateRef::decode(r);
    b.proofdata = decode_digest_list(r);
    b.message = r.optional<CscpMessage>([](Reader& in) { return CscpMessage::decode(in); });
    b.entity = r.bytes();
    b.entity_path = MerklePath::decode(r);
    b.returned = r.optional<ReturnEvidence>([](Reader& in) { return ReturnEvidence::decode(in); });
    b.unredeemed = r.optional<NonMembership>([](Reader& in) { return NonMembership::decode(in); });
    b.signature.bytes = r.bytes();
    return b;
  }
};

template <class T>
std::optional<T> try_decode(ByteView bytes) {
  try {
    return decode_canonical<T>(bytes);
  } catch (const DecodeError&) {
    return std::nullopt;
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
}

std::optional<TokenInstance> decode_instance(ByteView bytes) {
  auto ti = try_decode<TokenInstance>(bytes);
  if (ti && !ti->well_formed()) return std::nullopt;
  return ti;
}

std::optional<ScId> scid_from_vk(const VerificationKey& vk) {
  if (vk.params.size() != 4) return std::nullopt;
  Reader r(vk.params);
  return ScId{r.u32()};
}

/// Circuit relation shared by the prover and the verifier. On success
/// `signer` names the key that must authorize the withdrawal.
std::optional<Errc> check_csw(ScId sc, const CswBody& b, std::uint64_t amount, const Digest& nullifier,
                              PubKey& signer) {
  const auto& cert = b.state.cert;
  if (cert.ledger_id != sc || cert.proofdata.size() <= kRedeemedSlot || !b.state.inclusion.is_certificate ||
      !verify_stc_inclusion(b.state.block.stc_root, cert.digest(), b.state.inclusion)) {
    return Errc::InconsistentWitness;
  }
  if (b.proofdata.empty()) return Errc::InconsistentWitness;
  if (b.message) {
    if (amount != 0) return Errc::InvalidParams;
    if (b.proofdata[kMessageSlot] != message_digest(*b.message)) return Errc::InconsistentWitness;
  } else if (b.proofdata[kMessageSlot] != empty_root()) {
    return Errc::InconsistentWitness;
  }
  const Digest entity_digest = hash_bytes(b.entity);
  if (nullifier != csw_nullifier(sc, entity_digest)) return Errc::InconsistentWitness;

  if (b.kind == CswKind::Held) {
    if (b.returned || b.unredeemed) return Errc::InvalidParams;
    auto ti = decode_instance(b.entity);
    if (!ti) return Errc::InvalidInstance;
    if (!verify_path(cert.proofdata[kHeldRootSlot], entity_digest, b.entity_path)) return Errc::EntityNotInState;
    if (b.message) {
      const auto& m = *b.message;
      if (m.sending_sc != sc || m.msg_type != MsgType::TokenTransfer || m.sender != ti->owner ||
          m.payload_hash != entity_digest) {
        return Errc::MessageMismatch;
      }
    }
    signer = ti->owner;
    return std::nullopt;
  }

  auto sr = try_decode<SentRecord>(b.entity);
  if (!sr) return Errc::InvalidInstance;
  if (!verify_path(cert.proofdata[kSentRootSlot], entity_digest, b.entity_path)) return Errc::NoSentRecord;
  if (!b.returned || !b.message) return Errc::InvalidParams;
  const auto& ev = *b.returned;
  const auto& mt = ev.message;
  if (hash_bytes(ev.payload) != mt.payload_hash || ev.block.hash() != ev.commitment.block_hash ||
      ev.commitment.source_kind != SourceKind::Certificate ||
      !verify_commitment(mt, ev.commitment, ev.block.stc_root)) {
    return Errc::CertificateNotConfirmed;
  }
  if (!b.unredeemed || !verify_absent(cert.proofdata[kRedeemedSlot], message_digest(mt), *b.unredeemed)) {
    return Errc::MessageRedeemed;
  }
  auto ti = decode_instance(ev.payload);
  if (!ti || mt.receiving_sc != sc || mt.sending_sc == sc || mt.msg_type != MsgType::TokenTransfer ||
      ti->issuer != sc) {
    return Errc::MessageMismatch;
  }
  // Aggregate records (receiver 0) match any counterparty.
  if ((sr->receiver != mt.sending_sc && sr->receiver != ScId{0}) || sr->name != ti->name ||
      sr->fungible != ti->fungible) {
    return Errc::NoSentRecord;
  }
  if (ti->fungible ? sr->amount() < ti->amount() : sr->token_id() != ti->token_id()) {
    return Errc::AmountExceedsSent;
  }
  TokenInstance forwarded = *ti;
  forwarded.owner = mt.receiver;
  const auto& m = *b.message;
  if (m.sending_sc != sc || m.msg_type != MsgType::TokenTransfer || m.sender != mt.receiver ||
      m.payload_hash != token_payload_hash(forwarded)) {
    return Errc::MessageMismatch;
  }
  signer = mt.receiver;
  return std::nullopt;
}

}  // namespace

void BlockHeader::encode(Writer& w) const {
  w.u64(height);
  w.digest(parent);
  w.digest(stc_root);
}

BlockHeader BlockHeader::decode(Reader& r) {
  BlockHeader h;
  h.height = r.u64();
  h.parent = r.digest();
  h.stc_root = r.digest();
  return h;
}

Digest BlockHeader::hash() const { return hash_bytes(encode_canonical(*this)); }

void WcertPublicInput::encode(Writer& w) const {
  w.u64(quality);
  w.digest(bt_list_root);
  w.digest(last_block_hash);
  w.digest(proofdata_root);
}

WcertPublicInput WcertPublicInput::decode(Reader& r) {
  WcertPublicInput in;
  in.quality = r.u64();
  in.bt_list_root = r.digest();
  in.last_block_hash = r.digest();
  in.proofdata_root = r.digest();
  return in;
}

Digest WcertPublicInput::digest() const { return hash_bytes(encode_canonical(*this)); }

WcertPublicInput wcert_public_input(const WithdrawalCertificate& cert, const Digest& last_block_hash) {
  return {cert.quality, bt_list_root(cert.bt_list), last_block_hash, merkle_root(cert.proofdata)};
}

void CswPublicInput::encode(Writer& w) const {
  w.digest(last_cert_block_hash);
  w.digest(nullifier);
  w.raw(receiver.view());
  w.u64(amount);
  w.digest(proofdata_root);
}

CswPublicInput CswPublicInput::decode(Reader& r) {
  CswPublicInput in;
  in.last_cert_block_hash = r.digest();
  in.nullifier = r.digest();
  in.receiver = PubKey::from_bytes(r.digest().view());
  in.amount = r.u64();
  in.proofdata_root = r.digest();
  return in;
}

Digest CswPublicInput::digest() const { return hash_bytes(encode_canonical(*this)); }

CswPublicInput csw_public_input(const CeasedSidechainWithdrawal& csw, const Digest& last_cert_block_hash) {
  return {last_cert_block_hash, csw.nullifier, csw.receiver, csw.amount, merkle_root(csw.proofdata)};
}

VerificationKey wcert_vk(const PubKey& certifier) {
  return {ProofScheme::SimMerkle, Bytes(certifier.bytes.begin(), certifier.bytes.end())};
}

VerificationKey csw_vk(ScId sc) { return {ProofScheme::SimMerkle, scid_bytes(sc)}; }

Digest redeemed_commitment(const std::vector<Digest>& sorted_redeemed) {
  Writer w;
  w.u64(sorted_redeemed.size());
  w.digest(merkle_root(sorted_redeemed));
  return hash_bytes(w.data());
}

Proof prove_wcert(const KeyPair& certifier, const WcertWitness& witness) {
  const auto& pd = witness.proofdata;
  if (pd.size() <= kRedeemedSlot || pd[kMessageSlot] != merkle_root(witness.messages) ||
      pd[kHeldRootSlot] != merkle_root(witness.held) || pd[kSentRootSlot] != merkle_root(witness.sent) ||
      !std::is_sorted(witness.redeemed.begin(), witness.redeemed.end()) ||
      pd[kRedeemedSlot] != redeemed_commitment(witness.redeemed)) {
    throw ProtocolError(Errc::InconsistentWitness, "proofdata does not commit the epoch state");
  }
  WcertBody body;
  for (const auto& bt : witness.bt_list) body.bt_leaves.push_back(hash_bytes(bt));
  body.proofdata = pd;
  WcertPublicInput input{witness.quality, merkle_root(body.bt_leaves), witness.last_block_hash, merkle_root(pd)};
  body.signature = certifier.sign(input.digest());
  return {ProofScheme::SimMerkle, encode_canonical(body)};
}

bool verify_wcert(const VerificationKey& vk, const WcertPublicInput& input, const Proof& proof) {
  if (proof.scheme != vk.scheme) throw ProtocolError(Errc::SchemeMismatch, "wcert proof scheme");
  if (vk.params.size() != 32) return false;
  auto body = try_decode<WcertBody>(proof.body);
  if (!body) return false;
  if (merkle_root(body->bt_leaves) != input.bt_list_root) return false;
  if (merkle_root(body->proofdata) != input.proofdata_root) return false;
  return verify_sig(PubKey::from_bytes(vk.params), input.digest(), body->signature);
}

void CommittedStateRef::encode(Writer& w) const {
  block.encode(w);
  cert.encode(w);
  inclusion.encode(w);
}

CommittedStateRef CommittedStateRef::decode(Reader& r) {
  CommittedStateRef s;
  s.block = BlockHeader::decode(r);
  s.cert = WithdrawalCertificate::decode(r);
  s.inclusion = StcInclusion::decode(r);
  return s;
}

void ReturnEvidence::encode(Writer& w) const {
  message.encode(w);
  w.bytes(payload);
  commitment.encode(w);
  block.encode(w);
}

ReturnEvidence ReturnEvidence::decode(Reader& r) {
  ReturnEvidence ev;
  ev.message = CscpMessage::decode(r);
  ev.payload = r.bytes();
  ev.commitment = RedeemProof::decode(r);
  ev.block = BlockHeader::decode(r);
  return ev;
}

CeasedSidechainWithdrawal prove_csw(const KeyPair& signer, const CswWitness& witness) {
  const auto& cert = witness.state.cert;
  if (cert.proofdata.size() <= kRedeemedSlot || cert.proofdata[kHeldRootSlot] != merkle_root(witness.held) ||
      cert.proofdata[kSentRootSlot] != merkle_root(witness.sent)) {
    throw ProtocolError(Errc::InconsistentWitness, "state lists do not match the committed roots");
  }
  if (witness.message && witness.amount != 0) {
    throw ProtocolError(Errc::InvalidParams, "a message-carrying CSW must have amount 0");
  }
  const Digest entity_digest = hash_bytes(witness.entity);
  const auto& leaves = witness.kind == CswKind::Held ? witness.held : witness.sent;
  auto it = std::find(leaves.begin(), leaves.end(), entity_digest);
  if (it == leaves.end()) {
    throw ProtocolError(witness.kind == CswKind::Held ? Errc::EntityNotInState : Errc::NoSentRecord,
                        "entity " + entity_digest.hex() + " not in the committed state");
  }
  if (witness.kind == CswKind::Held && witness.message && witness.message->payload_hash != entity_digest) {
    throw ProtocolError(Errc::MessageMismatch, "message payload is not the claimed entity");
  }

  CswBody body;
  body.kind = witness.kind;
  body.state = witness.state;
  body.proofdata = {witness.message ? message_digest(*witness.message) : empty_root()};
  body.message = witness.message;
  body.entity = witness.entity;
  body.entity_path = MerkleTree(leaves).path(static_cast<std::size_t>(std::distance(leaves.begin(), it)));
  body.returned = witness.returned;
  if (witness.kind == CswKind::Returned && witness.returned) {
    if (cert.proofdata[kRedeemedSlot] != redeemed_commitment(witness.redeemed)) {
      throw ProtocolError(Errc::InconsistentWitness, "redeemed list does not match the committed set");
    }
    body.unredeemed = prove_absent(witness.redeemed, message_digest(witness.returned->message));
    if (!body.unredeemed) throw ProtocolError(Errc::MessageRedeemed, "returned message was already redeemed");
  }

  CeasedSidechainWithdrawal csw;
  csw.ledger_id = witness.sc;
  csw.receiver = witness.receiver;
  csw.amount = witness.amount;
  csw.nullifier = csw_nullifier(witness.sc, entity_digest);
  csw.proofdata = body.proofdata;

  PubKey required;
  if (auto err = check_csw(witness.sc, body, csw.amount, csw.nullifier, required)) {
    throw ProtocolError(*err, "CSW witness rejected by the circuit relation");
  }
  if (signer.public_key() != required) throw ProtocolError(Errc::NotOwner, "signer is not the entity owner");

  auto input = csw_public_input(csw, witness.state.block.hash());
  body.signature = signer.sign(input.digest());
  csw.proof = {ProofScheme::SimMerkle, encode_canonical(body)};
  return csw;
}

bool verify_csw(const VerificationKey& vk, const CswPublicInput& input, const Proof& proof) {
  if (proof.scheme != vk.scheme) throw ProtocolError(Errc::SchemeMismatch, "csw proof scheme");
  auto sc = scid_from_vk(vk);
  if (!sc) return false;
  auto body = try_decode<CswBody>(proof.body);
  if (!body) return false;
  if (body->state.block.hash() != input.last_cert_block_hash) return false;
  if (merkle_root(body->proofdata) != input.proofdata_root) return false;
  PubKey signer;
  if (check_csw(*sc, *body, input.amount, input.nullifier, signer)) return false;
  return verify_sig(signer, input.digest(), body->signature);
}

std::vector<Digest> csw_proof_anchors(const Proof& proof) {
  auto body = try_decode<CswBody>(proof.body);
  if (!body || !body->returned) return {};
  return {body->returned->commitment.block_hash};
}

std::optional<CswContents> inspect_csw(const Proof& proof) {
  auto body = try_decode<CswBody>(proof.body);
  if (!body) return std::nullopt;
  return CswContents{body->kind, body->message, body->entity, body->returned};
}

bool verify_commitment(const CscpMessage& message, const RedeemProof& proof, const Digest& stc_root) {
  const Digest leaf = message_digest(message);
  if (proof.source_kind == SourceKind::Certificate) {
    const auto* cert = std::get_if<WithdrawalCertificate>(&proof.source);
    if (!cert || cert->ledger_id != message.sending_sc || cert->proofdata.empty()) return false;
    if (cert->proofdata[kMessageSlot] != proof.msg_tree_root) return false;
    if (!verify_path(proof.msg_tree_root, leaf, proof.msg_path)) return false;
    if (!proof.commitment.is_certificate) return false;
    return verify_stc_inclusion(stc_root, cert->digest(), proof.commitment);
  }
  const auto* csw = std::get_if<CeasedSidechainWithdrawal>(&proof.source);
  if (!csw || csw->ledger_id != message.sending_sc || csw->proofdata.empty()) return false;
  if (proof.msg_path != MerklePath{} || proof.msg_tree_root != leaf) return false;
  if (csw->proofdata[kMessageSlot] != leaf) return false;
  if (proof.commitment.is_certificate) return false;
  return verify_stc_inclusion(stc_root, csw->digest(), proof.commitment);
}

bool verify_redeem(const BlockIndex& index, const CscpMessage& message, ByteView payload,
                   const RedeemProof& proof) {
  if (hash_bytes(payload) != message.payload_hash) return false;
  auto header = index.header_of(proof.block_hash);
  if (!header) return false;
  return verify_commitment(message, proof, header->stc_root);
}

}  // namespace sidelink
