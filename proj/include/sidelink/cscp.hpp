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
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "sidelink/keys.hpp"
#include "sidelink/mainchain.hpp"
#include "sidelink/mitto.hpp"
#include "sidelink/proof.hpp"
#include "sidelink/types.hpp"

namespace sidelink {

enum class Reject {
  SidechainCeased,
  BadSignature,
  WrongSender,
  PayloadMismatch,
  SelfSend,
  HandlerRejected,
  CswNotFound,
  ProofInvalid,
  WrongReceivingChain,
  AlreadyRedeemed,
  BadReceiverAuth,
};

std::string_view to_string(Reject reason);

/// Verdict of a sidechain transaction. `inner` carries the handler's rule id
/// for HandlerRejected.
struct Outcome {
  std::optional<Reject> rejection;
  std::string inner;

  bool accepted() const { return !rejection; }
  /// "Accepted", "Rejected(SelfSend)" or "Rejected(HandlerRejected(R2a))".
  std::string str() const;
  static Outcome ok() { return {}; }
  static Outcome reject(Reject r, std::string inner = {}) { return {r, std::move(inner)}; }
};

/// Type-specific callbacks. Validators return the failing rule id; appliers
/// run only after every check has passed.
struct MessageHandler {
  std::function<std::optional<std::string>(const SendTx&)> validate_send;
  std::function<void(const SendTx&)> apply_send;
  std::function<std::optional<std::string>(const CscpMessage&, ByteView payload, const Signature& sender_sig)>
      validate_redeem;
  std::function<void(const CscpMessage&, ByteView payload)> apply_redeem;
};

/// Closed epoch: messages in submission order, their tree, and the state the
/// certificate commits.
struct CommittedEpoch {
  std::uint64_t epoch = 0;
  std::vector<SendTx> messages;
  MerkleTree tree;
  mitto::MittoState mitto;
  std::set<Digest> redeemed;
  WithdrawalCertificate cert;
};

class Sidechain {
 public:
  Sidechain(const SidechainRegistration& registration, KeyPair certifier, mitto::MittoRules rules = {});
  Sidechain(const Sidechain&) = delete;
  Sidechain& operator=(const Sidechain&) = delete;

  /// Registers a new sidechain on `mc` and returns its state machine.
  static std::unique_ptr<Sidechain> create(Mainchain& mc, const KeyPair& certifier, std::uint64_t epoch_length,
                                           mitto::MittoRules rules = {});

  ScId id() const { return registration_.sc_id; }
  const SidechainRegistration& registration() const { return registration_; }
  const KeyPair& certifier() const { return certifier_; }
  std::uint64_t next_epoch() const { return next_epoch_; }

  void register_handler(MsgType type, MessageHandler handler) { handlers_[type] = std::move(handler); }

  Outcome accept_send(const Mainchain& mc, const SendTx& tx);
  /// Byzantine behaviour: queue a message with no checks and no side effects.
  void forge_send(const SendTx& tx) { outbox_.push_back(tx); }

  /// True once the last block of the current epoch is sealed.
  bool epoch_ready(const Mainchain& mc) const;
  /// Throws ProtocolError(EpochNotOver) before epoch_ready, ProofFailure if
  /// the certificate cannot be proven.
  WithdrawalCertificate close_epoch(const Mainchain& mc, std::uint64_t quality = 1);

  Outcome accept_redeem(const Mainchain& mc, const RedeemTx& tx);
  Outcome accept_csw_redeem(const Mainchain& mc, const CswRedeemTx& tx);

  const std::vector<SendTx>& outbox() const { return outbox_; }
  const std::vector<CommittedEpoch>& archive() const { return archive_; }
  const CommittedEpoch* committed(std::uint64_t epoch) const;
  const std::set<Digest>& redeemed() const { return redeemed_; }

  mitto::MittoState& mitto() { return mitto_; }
  const mitto::MittoState& mitto() const { return mitto_; }
  const mitto::MittoRules& rules() const { return rules_; }

  /// Commitment to the full mutable state: outbox, archive, redeemed set and tokens.
  Digest state_digest() const;

 private:
  Outcome check_redeem(const Mainchain& mc, const CscpMessage& msg, ByteView payload, const RedeemProof& proof,
                       const Signature& sender_sig, const Signature& receiver_sig);
  void apply_redeem(const CscpMessage& msg, ByteView payload);
  void install_mitto();

  SidechainRegistration registration_;
  KeyPair certifier_;
  mitto::MittoRules rules_;
  std::uint64_t next_epoch_ = 0;
  std::vector<SendTx> outbox_;
  std::vector<CommittedEpoch> archive_;
  std::set<Digest> redeemed_;
  mitto::MittoState mitto_;
  std::map<MsgType, MessageHandler> handlers_;
};

/// Evidence that `message` was committed by `sender` in a finalized
/// certificate. Throws ProtocolError(MessageNotCommitted,
/// CertificateNotConfirmed).
RedeemProof build_redeem_proof(const Mainchain& mc, const Sidechain& sender, const CscpMessage& message);

/// Evidence that `message` is embedded in the accepted, sealed CSW with the
/// given nullifier. Throws ProtocolError(NotFound, MessageMismatch).
RedeemProof build_csw_redeem_proof(const Mainchain& mc, ScId ceased, const Digest& nullifier,
                                   const CscpMessage& message);

/// Last committed state of a ceased sidechain together with the archived
/// epoch it commits. Throws ProtocolError(SidechainActive, EntityNotInState).
struct CeasedState {
  CommittedStateRef ref;
  const CommittedEpoch* epoch = nullptr;
};
CeasedState ceased_state(const Mainchain& mc, const Sidechain& chain);

/// Message-carrying CSW over an entity of the final committed held set, with
/// nullifier hash(ScId || entity digest). Throws ProtocolError(SidechainActive,
/// EntityNotInState, MessageMismatch, NotOwner, InvalidParams).
CeasedSidechainWithdrawal withdraw_message_via_csw(const Mainchain& mc, const Sidechain& chain,
                                                   const CscpMessage& message, ByteView entity,
                                                   const KeyPair& owner, const PubKey& receiver,
                                                   std::uint64_t amount = 0);

}  // namespace sidelink
