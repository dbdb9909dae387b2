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

#include "sidelink/cscp.hpp"

#include <algorithm>

#include "sidelink/error.hpp"

namespace sidelink {

namespace {

void encode_send(Writer& w, const SendTx& tx) {
  tx.message.encode(w);
  w.bytes(tx.payload);
  w.bytes(tx.signature.bytes);
}

}  // namespace

std::string_view to_string(Reject reason) {
  switch (reason) {
    case Reject::SidechainCeased: return "SidechainCeased";
    case Reject::BadSignature: return "BadSignature";
    case Reject::WrongSender: return "WrongSender";
    case Reject::PayloadMismatch: return "PayloadMismatch";
    case Reject::SelfSend: return "SelfSend";
    case Reject::HandlerRejected: return "HandlerRejected";
    case Reject::CswNotFound: return "CswNotFound";
    case Reject::ProofInvalid: return "ProofInvalid";
    case Reject::WrongReceivingChain: return "WrongReceivingChain";
    case Reject::AlreadyRedeemed: return "AlreadyRedeemed";
    case Reject::BadReceiverAuth: return "BadReceiverAuth";
  }
  return "Unknown";
}

std::string Outcome::str() const {
  if (!rejection) return "Accepted";
  std::string reason(to_string(*rejection));
  if (!inner.empty()) reason += "(" + inner + ")";
  return "Rejected(" + reason + ")";
}

Sidechain::Sidechain(const SidechainRegistration& registration, KeyPair certifier, mitto::MittoRules rules)
    : registration_(registration), certifier_(std::move(certifier)), rules_(rules) {
  install_mitto();
}

std::unique_ptr<Sidechain> Sidechain::create(Mainchain& mc, const KeyPair& certifier, std::uint64_t epoch_length,
                                             mitto::MittoRules rules) {
  auto id = mc.register_sidechain(wcert_vk(certifier.public_key()), csw_vk(mc.next_sc_id()), epoch_length);
  return std::make_unique<Sidechain>(mc.registration(id), certifier, rules);
}

void Sidechain::install_mitto() {
  MessageHandler h;
  h.validate_send = [this](const SendTx& tx) -> std::optional<std::string> {
    auto ti = mitto::decode_payload(tx.payload);
    if (!ti) return std::string(mitto::to_string(mitto::Rule::R1));
    auto rule = mitto::validate_send(mitto_, rules_, id(), *ti, tx.message, tx.signature);
    if (rule) return std::string(mitto::to_string(*rule));
    return std::nullopt;
  };
  h.apply_send = [this](const SendTx& tx) {
    mitto::apply_send(mitto_, rules_, id(), *mitto::decode_payload(tx.payload), tx.message);
  };
  h.validate_redeem = [this](const CscpMessage& msg, ByteView payload,
                             const Signature& sender_sig) -> std::optional<std::string> {
    auto rule = mitto::validate_redeem(mitto_, rules_, id(), payload, msg, sender_sig);
    if (rule) return std::string(mitto::to_string(*rule));
    return std::nullopt;
  };
  h.apply_redeem = [this](const CscpMessage& msg, ByteView payload) {
    mitto::apply_redeem(mitto_, rules_, id(), *mitto::decode_payload(payload), msg);
  };
  register_handler(MsgType::TokenTransfer, std::move(h));
}

Outcome Sidechain::accept_send(const Mainchain& mc, const SendTx& tx) {
  const auto& msg = tx.message;
  if (mc.is_ceased(id())) return Outcome::reject(Reject::SidechainCeased);
  if (!verify_sig(msg.sender, message_digest(msg), tx.signature)) return Outcome::reject(Reject::BadSignature);
  if (msg.sending_sc != id()) return Outcome::reject(Reject::WrongSender);
  if (hash_bytes(tx.payload) != msg.payload_hash) return Outcome::reject(Reject::PayloadMismatch);
  if (msg.sending_sc == msg.receiving_sc) return Outcome::reject(Reject::SelfSend);
  auto handler = handlers_.find(msg.msg_type);
  if (handler == handlers_.end()) {
    return Outcome::reject(Reject::HandlerRejected,
                           "unregistered msgType " + std::to_string(static_cast<std::uint32_t>(msg.msg_type)));
  }
  if (auto rule = handler->second.validate_send(tx)) return Outcome::reject(Reject::HandlerRejected, *rule);
  handler->second.apply_send(tx);
  outbox_.push_back(tx);
  return Outcome::ok();
}

bool Sidechain::epoch_ready(const Mainchain& mc) const {
  return mc.tip_height() >= registration_.epoch_end(next_epoch_);
}

WithdrawalCertificate Sidechain::close_epoch(const Mainchain& mc, std::uint64_t quality) {
  if (!epoch_ready(mc)) {
    throw ProtocolError(Errc::EpochNotOver, "epoch " + std::to_string(next_epoch_) + " of sidechain " + id().str() +
                                                " ends at height " +
                                                std::to_string(registration_.epoch_end(next_epoch_)));
  }
  CommittedEpoch ce;
  ce.epoch = next_epoch_;
  ce.messages = std::move(outbox_);
  outbox_.clear();
  std::vector<Digest> leaves;
  leaves.reserve(ce.messages.size());
  for (const auto& tx : ce.messages) leaves.push_back(message_digest(tx.message));
  ce.tree = MerkleTree(leaves);
  ce.mitto = mitto_;
  ce.redeemed = redeemed_;

  WcertWitness witness;
  witness.quality = quality;
  witness.messages = std::move(leaves);
  witness.held = mitto_.held_digests();
  witness.sent = mitto_.sent_digests();
  witness.redeemed.assign(redeemed_.begin(), redeemed_.end());
  witness.proofdata = {ce.tree.root(), merkle_root(witness.held), merkle_root(witness.sent),
                       redeemed_commitment(witness.redeemed)};
  witness.last_block_hash = mc.block_at(registration_.epoch_end(ce.epoch)).hash;

  WithdrawalCertificate cert;
  cert.ledger_id = id();
  cert.epoch_id = ce.epoch;
  cert.quality = quality;
  cert.proofdata = witness.proofdata;
  try {
    cert.proof = prove_wcert(certifier_, witness);
  } catch (const ProtocolError& e) {
    throw ProtocolError(Errc::ProofFailure, e.what());
  }
  ce.cert = cert;
  archive_.push_back(std::move(ce));
  ++next_epoch_;
  return cert;
}

Outcome Sidechain::check_redeem(const Mainchain& mc, const CscpMessage& msg, ByteView payload,
                                const RedeemProof& proof, const Signature& sender_sig,
                                const Signature& receiver_sig) {
  if (!verify_redeem(mc, msg, payload, proof)) return Outcome::reject(Reject::ProofInvalid);
  if (msg.receiving_sc != id()) return Outcome::reject(Reject::WrongReceivingChain);
  if (redeemed_.count(message_digest(msg))) return Outcome::reject(Reject::AlreadyRedeemed);
  if (!verify_sig(msg.receiver, redeem_auth_digest(msg, payload), receiver_sig)) {
    return Outcome::reject(Reject::BadReceiverAuth);
  }
  auto handler = handlers_.find(msg.msg_type);
  if (handler == handlers_.end()) {
    return Outcome::reject(Reject::HandlerRejected,
                           "unregistered msgType " + std::to_string(static_cast<std::uint32_t>(msg.msg_type)));
  }
  if (auto rule = handler->second.validate_redeem(msg, payload, sender_sig)) {
    return Outcome::reject(Reject::HandlerRejected, *rule);
  }
  return Outcome::ok();
}

void Sidechain::apply_redeem(const CscpMessage& msg, ByteView payload) {
  handlers_.at(msg.msg_type).apply_redeem(msg, payload);
  redeemed_.insert(message_digest(msg));
}

Outcome Sidechain::accept_redeem(const Mainchain& mc, const RedeemTx& tx) {
  if (mc.is_ceased(id())) return Outcome::reject(Reject::SidechainCeased);
  if (tx.proof.source_kind != SourceKind::Certificate) return Outcome::reject(Reject::ProofInvalid);
  auto out = check_redeem(mc, tx.message, tx.payload, tx.proof, tx.sender_signature, tx.receiver_signature);
  if (out.accepted()) apply_redeem(tx.message, tx.payload);
  return out;
}

Outcome Sidechain::accept_csw_redeem(const Mainchain& mc, const CswRedeemTx& tx) {
  if (mc.is_ceased(id())) return Outcome::reject(Reject::SidechainCeased);
  const auto* accepted = mc.csw_by_nullifier(tx.csw_ref.sc, tx.csw_ref.nullifier);
  if (!accepted || !accepted->block_hash) return Outcome::reject(Reject::CswNotFound);
  const auto* source = std::get_if<CeasedSidechainWithdrawal>(&tx.proof.source);
  if (tx.proof.source_kind != SourceKind::Csw || !source || *source != accepted->csw) {
    return Outcome::reject(Reject::ProofInvalid);
  }
  auto out = check_redeem(mc, tx.message, tx.payload, tx.proof, tx.sender_signature, tx.receiver_signature);
  if (out.accepted()) apply_redeem(tx.message, tx.payload);
  return out;
}

const CommittedEpoch* Sidechain::committed(std::uint64_t epoch) const {
  for (const auto& ce : archive_) {
    if (ce.epoch == epoch) return &ce;
  }
  return nullptr;
}

Digest Sidechain::state_digest() const {
  Writer w;
  w.u32(id().value);
  w.u64(next_epoch_);
  w.u32(static_cast<std::uint32_t>(outbox_.size()));
  for (const auto& tx : outbox_) encode_send(w, tx);
  w.u32(static_cast<std::uint32_t>(archive_.size()));
  for (const auto& ce : archive_) {
    w.u64(ce.epoch);
    w.digest(ce.cert.digest());
    w.u32(static_cast<std::uint32_t>(ce.messages.size()));
    for (const auto& tx : ce.messages) encode_send(w, tx);
  }
  w.u32(static_cast<std::uint32_t>(redeemed_.size()));
  for (const auto& d : redeemed_) w.digest(d);
  mitto_.encode(w);
  return hash_bytes(w.data());
}

RedeemProof build_redeem_proof(const Mainchain& mc, const Sidechain& sender, const CscpMessage& message) {
  const Digest leaf = message_digest(message);
  for (const auto& ce : sender.archive()) {
    const auto& leaves = ce.tree.leaves();
    auto it = std::find(leaves.begin(), leaves.end(), leaf);
    if (it == leaves.end()) continue;
    const auto* fc = mc.finalized(sender.id(), ce.epoch);
    if (!fc || fc->cert.proofdata.empty() || fc->cert.proofdata[kMessageSlot] != ce.tree.root()) {
      throw ProtocolError(Errc::CertificateNotConfirmed,
                          "epoch " + std::to_string(ce.epoch) + " of sidechain " + sender.id().str());
    }
    RedeemProof proof;
    proof.source_kind = SourceKind::Certificate;
    proof.source = fc->cert;
    proof.msg_path = ce.tree.path(static_cast<std::size_t>(std::distance(leaves.begin(), it)));
    proof.msg_tree_root = ce.tree.root();
    proof.commitment = mc.block(fc->block_hash).stc.certificate_inclusion(sender.id());
    proof.block_hash = fc->block_hash;
    return proof;
  }
  throw ProtocolError(Errc::MessageNotCommitted, "message " + leaf.hex() + " is in no closed epoch");
}

RedeemProof build_csw_redeem_proof(const Mainchain& mc, ScId ceased, const Digest& nullifier,
                                   const CscpMessage& message) {
  const auto* accepted = mc.csw_by_nullifier(ceased, nullifier);
  if (!accepted || !accepted->block_hash) {
    throw ProtocolError(Errc::NotFound, "no sealed CSW with nullifier " + nullifier.hex());
  }
  const auto& csw = accepted->csw;
  const Digest leaf = message_digest(message);
  if (csw.proofdata.empty() || csw.proofdata[kMessageSlot] != leaf) {
    throw ProtocolError(Errc::MessageMismatch, "CSW does not embed the message");
  }
  RedeemProof proof;
  proof.source_kind = SourceKind::Csw;
  proof.source = csw;
  proof.msg_tree_root = leaf;
  proof.commitment = mc.block(*accepted->block_hash).stc.tx_inclusion(ceased, csw.digest());
  proof.block_hash = *accepted->block_hash;
  return proof;
}

CeasedState ceased_state(const Mainchain& mc, const Sidechain& chain) {
  const auto& status = mc.status(chain.id());
  if (status.state != ScState::Ceased) {
    throw ProtocolError(Errc::SidechainActive, "sidechain " + chain.id().str() + " is active");
  }
  if (!status.last_cert) {
    throw ProtocolError(Errc::EntityNotInState, "sidechain " + chain.id().str() + " never committed a state");
  }
  const auto* fc = mc.finalized(chain.id(), status.last_cert->epoch);
  const auto& block = mc.block(fc->block_hash);
  CeasedState out;
  out.ref.block = block.header;
  out.ref.cert = fc->cert;
  out.ref.inclusion = block.stc.certificate_inclusion(chain.id());
  out.epoch = chain.committed(status.last_cert->epoch);
  if (!out.epoch) {
    throw ProtocolError(Errc::EntityNotInState, "epoch state of sidechain " + chain.id().str() + " unavailable");
  }
  return out;
}

CeasedSidechainWithdrawal withdraw_message_via_csw(const Mainchain& mc, const Sidechain& chain,
                                                   const CscpMessage& message, ByteView entity,
                                                   const KeyPair& owner, const PubKey& receiver,
                                                   std::uint64_t amount) {
  if (amount != 0) throw ProtocolError(Errc::InvalidParams, "a message-carrying CSW must have amount 0");
  auto state = ceased_state(mc, chain);
  CswWitness witness;
  witness.sc = chain.id();
  witness.state = state.ref;
  witness.held = state.epoch->mitto.held_digests();
  witness.sent = state.epoch->mitto.sent_digests();
  witness.kind = CswKind::Held;
  witness.entity = Bytes(entity.begin(), entity.end());
  witness.message = message;
  witness.receiver = receiver;
  witness.amount = 0;
  return prove_csw(owner, witness);
}

}  // namespace sidelink
