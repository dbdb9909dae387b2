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

#include "sidelink/mitto_withdraw.hpp"

#include "sidelink/error.hpp"

namespace sidelink::mitto {

namespace {

CscpMessage token_message(ScId from, ScId to, const TokenInstance& ti, const PubKey& receiver) {
  return CscpMessage{from, to, MsgType::TokenTransfer, ti.owner, receiver, token_payload_hash(ti)};
}

Withdrawal withdraw_held(const Mainchain& mc, const Sidechain& ceased, const TokenInstance& ti,
                         const KeyPair& owner, ScId target, const PubKey& receiver) {
  auto state = ceased_state(mc, ceased);
  if (owner.public_key() != ti.owner) throw ProtocolError(Errc::NotOwner, "signer does not own the instance");
  if (!state.epoch->mitto.holds(ti)) {
    throw ProtocolError(Errc::EntityNotInState, "instance not in the last committed state");
  }
  Withdrawal w;
  w.message = token_message(ceased.id(), target, ti, receiver);
  w.payload = token_payload(ti);
  w.sender_signature = owner.sign(message_digest(w.message));
  w.csw = withdraw_message_via_csw(mc, ceased, w.message, w.payload, owner, owner.public_key());
  return w;
}

}  // namespace

Withdrawal withdraw_native_held(const Mainchain& mc, const Sidechain& ceased, const TokenInstance& ti,
                                const KeyPair& owner, ScId target, const PubKey& receiver) {
  if (ti.issuer != ceased.id()) throw ProtocolError(Errc::InvalidInstance, "instance is not native to the chain");
  return withdraw_held(mc, ceased, ti, owner, target, receiver);
}

Withdrawal withdraw_foreign(const Mainchain& mc, const Sidechain& ceased, const TokenInstance& ti,
                            const KeyPair& owner, const PubKey& receiver) {
  if (ti.issuer == ceased.id()) throw ProtocolError(Errc::InvalidInstance, "instance is native to the chain");
  return withdraw_held(mc, ceased, ti, owner, ti.issuer, receiver);
}

Withdrawal withdraw_held_to(const Mainchain& mc, const Sidechain& ceased, const TokenInstance& ti,
                            const KeyPair& owner, ScId target, const PubKey& receiver) {
  return withdraw_held(mc, ceased, ti, owner, target, receiver);
}

Withdrawal withdraw_native_sent(const Mainchain& mc, const Sidechain& ceased, const Sidechain& holder,
                                const CscpMessage& returned, const KeyPair& owner, ScId target,
                                const PubKey& receiver) {
  auto state = ceased_state(mc, ceased);
  if (returned.receiving_sc != ceased.id() || returned.sending_sc != holder.id()) {
    throw ProtocolError(Errc::MessageNotCommitted, "message was not sent by the holder to the ceased chain");
  }
  auto commitment = build_redeem_proof(mc, holder, returned);
  const SendTx* sent = nullptr;
  for (const auto& ce : holder.archive()) {
    for (const auto& tx : ce.messages) {
      if (tx.message == returned) sent = &tx;
    }
  }
  auto ti = decode_payload(sent->payload);
  if (!ti || ti->issuer != ceased.id()) throw ProtocolError(Errc::InvalidInstance, "message carries no native token");
  if (owner.public_key() != returned.receiver) throw ProtocolError(Errc::NotOwner, "signer is not the message receiver");

  const auto& final_state = state.epoch->mitto;
  const SentRecord* sr = final_state.find_sent(holder.id(), ti->name, ti->fungible, ti->token_id());
  if (!sr) sr = final_state.find_sent(ScId{0}, ti->name, ti->fungible, ti->token_id());
  if (!sr) throw ProtocolError(Errc::NoSentRecord, "no sent record for " + ti->name + " at " + holder.id().str());
  if (ti->fungible && sr->amount() < ti->amount()) {
    throw ProtocolError(Errc::AmountExceedsSent, std::to_string(ti->amount()) + " > " + std::to_string(sr->amount()));
  }

  TokenInstance forwarded = *ti;
  forwarded.owner = returned.receiver;
  Withdrawal w;
  w.message = token_message(ceased.id(), target, forwarded, receiver);
  w.payload = token_payload(forwarded);
  w.sender_signature = owner.sign(message_digest(w.message));

  CswWitness witness;
  witness.sc = ceased.id();
  witness.state = state.ref;
  witness.held = final_state.held_digests();
  witness.sent = final_state.sent_digests();
  witness.redeemed.assign(state.epoch->redeemed.begin(), state.epoch->redeemed.end());
  witness.kind = CswKind::Returned;
  witness.entity = encode_canonical(*sr);
  witness.message = w.message;
  witness.returned = ReturnEvidence{returned, sent->payload, commitment, mc.block(commitment.block_hash).header};
  witness.receiver = owner.public_key();
  witness.amount = 0;
  w.csw = prove_csw(owner, witness);
  return w;
}

}  // namespace sidelink::mitto
