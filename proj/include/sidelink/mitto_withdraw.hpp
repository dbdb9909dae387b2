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

#include "sidelink/cscp.hpp"

namespace sidelink::mitto {

/// A token message withdrawn through a CSW: redeem it with CswRedeemTx.
struct Withdrawal {
  CscpMessage message;
  Bytes payload;
  Signature sender_signature;
  CeasedSidechainWithdrawal csw;
};

/// Native token held by the ceased chain at its last committed state.
/// Throws ProtocolError(SidechainActive, EntityNotInState, NotOwner, InvalidInstance).
Withdrawal withdraw_native_held(const Mainchain& mc, const Sidechain& ceased, const TokenInstance& ti,
                                const KeyPair& owner, ScId target, const PubKey& receiver);

/// Foreign token held by the ceased chain; the message targets its issuer.
/// Throws as withdraw_native_held.
Withdrawal withdraw_foreign(const Mainchain& mc, const Sidechain& ceased, const TokenInstance& ti,
                            const KeyPair& owner, const PubKey& receiver);

/// Held-case withdrawal of any instance to an arbitrary `target`, without
/// routing checks. A foreign instance sent anywhere but its issuer fails
/// rule R1 at redeem. Throws as withdraw_native_held.
Withdrawal withdraw_held_to(const Mainchain& mc, const Sidechain& ceased, const TokenInstance& ti,
                            const KeyPair& owner, ScId target, const PubKey& receiver);

/// Second leg of returning native tokens: `returned` was sent by `holder` to
/// the ceased issuer and committed in a finalized certificate. `owner` is the
/// key of returned.receiver. Throws ProtocolError(SidechainActive,
/// MessageNotCommitted, CertificateNotConfirmed, NoSentRecord,
/// AmountExceedsSent, NotOwner, InvalidInstance).
Withdrawal withdraw_native_sent(const Mainchain& mc, const Sidechain& ceased, const Sidechain& holder,
                                const CscpMessage& returned, const KeyPair& owner, ScId target,
                                const PubKey& receiver);

}  // namespace sidelink::mitto
