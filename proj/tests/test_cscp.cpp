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

#include <gtest/gtest.h>

#include "sidelink/error.hpp"
#include "world.hpp"

namespace sidelink {
namespace {

using testing::user;
using testing::World;

class Cscp : public ::testing::Test {
 protected:
  void SetUp() override {
    a = &w.add(4);
    b = &w.add(4);
    c = &w.add(4);
    w.seal();
  }

  std::vector<TokenInstance> coins(std::size_t n) {
    std::vector<TokenInstance> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(w.issue(*a, "wBTC", true, 10 + i, "alice"));
    return out;
  }

  template <class F>
  static Errc code_of(F&& f) {
    try {
      f();
    } catch (const ProtocolError& e) {
      return e.code();
    }
    ADD_FAILURE() << "no ProtocolError";
    return Errc::InvalidParams;
  }

  World w;
  Sidechain* a = nullptr;
  Sidechain* b = nullptr;
  Sidechain* c = nullptr;
};

TEST_F(Cscp, SendRejectionsCarryTheirReason) {
  auto ti = coins(1)[0];
  auto good = World::send_tx(*a, ti, b->id(), "bob");

  auto bad_sig = World::send_tx(*a, ti, b->id(), "bob", &user("mallory"));
  EXPECT_EQ(a->accept_send(w.mc, bad_sig).str(), "Rejected(BadSignature)");
  EXPECT_EQ(b->accept_send(w.mc, good).str(), "Rejected(WrongSender)");
  auto payload = good;
  payload.payload.push_back(0);
  EXPECT_EQ(a->accept_send(w.mc, payload).str(), "Rejected(PayloadMismatch)");
  auto self = World::send_tx(*a, ti, a->id(), "bob");
  EXPECT_EQ(a->accept_send(w.mc, self).str(), "Rejected(SelfSend)");

  auto unknown = good;
  unknown.message.msg_type = static_cast<MsgType>(99);
  unknown.signature = user("alice").sign(message_digest(unknown.message));
  auto out = a->accept_send(w.mc, unknown);
  EXPECT_EQ(out.rejection, Reject::HandlerRejected);
  EXPECT_EQ(out.inner, "unregistered msgType 99");

  EXPECT_TRUE(a->outbox().empty());
  EXPECT_TRUE(a->accept_send(w.mc, good).accepted());
  EXPECT_EQ(a->outbox().size(), 1u);
}

TEST_F(Cscp, EightMessagesFormOneProvableEpochTree) {
  std::vector<SendTx> sent;
  for (const auto& ti : coins(8)) {
    sent.push_back(World::send_tx(*a, ti, b->id(), "bob"));
    ASSERT_TRUE(a->accept_send(w.mc, sent.back()).accepted());
  }
  w.finalize(*a);
  ASSERT_EQ(a->archive().size(), a->next_epoch());
  const auto& ce = a->archive().front();
  EXPECT_EQ(ce.messages.size(), 8u);
  EXPECT_EQ(ce.tree.height(), 3u);
  for (const auto& tx : sent) {
    auto redeem = w.redeem_tx(*a, tx);
    EXPECT_EQ(redeem.proof.msg_path.siblings.size(), 3u);
    EXPECT_TRUE(b->accept_redeem(w.mc, redeem).accepted());
  }
  EXPECT_EQ(b->mitto().held_amount("wBTC"), 10u + 11 + 12 + 13 + 14 + 15 + 16 + 17);
}

TEST_F(Cscp, EpochsAreIndependentlyProvable) {
  auto ts = coins(2);
  auto first = World::send_tx(*a, ts[0], b->id(), "bob");
  ASSERT_TRUE(a->accept_send(w.mc, first).accepted());
  w.seal_to(a->registration().epoch_start(1));
  auto second = World::send_tx(*a, ts[1], b->id(), "carol");
  ASSERT_TRUE(a->accept_send(w.mc, second).accepted());
  w.finalize(*a);

  auto r1 = w.redeem_tx(*a, first);
  auto r2 = w.redeem_tx(*a, second);
  EXPECT_NE(r1.proof.msg_tree_root, r2.proof.msg_tree_root);
  EXPECT_NE(r1.proof.block_hash, r2.proof.block_hash);
  EXPECT_TRUE(b->accept_redeem(w.mc, r2).accepted());
  EXPECT_TRUE(b->accept_redeem(w.mc, r1).accepted());
}

TEST_F(Cscp, RedeemIsAcceptedOnce) {
  auto tx = World::send_tx(*a, coins(1)[0], b->id(), "bob");
  ASSERT_TRUE(a->accept_send(w.mc, tx).accepted());
  w.finalize(*a);
  auto redeem = w.redeem_tx(*a, tx);
  EXPECT_TRUE(b->accept_redeem(w.mc, redeem).accepted());
  const auto digest = b->state_digest();
  EXPECT_EQ(b->accept_redeem(w.mc, redeem).str(), "Rejected(AlreadyRedeemed)");
  EXPECT_EQ(b->state_digest(), digest);
}

TEST_F(Cscp, RedeemEvidenceIsCheckedBeforeTheHandler) {
  auto tx = World::send_tx(*a, coins(1)[0], b->id(), "bob");
  ASSERT_TRUE(a->accept_send(w.mc, tx).accepted());
  EXPECT_EQ(code_of([&] { build_redeem_proof(w.mc, *a, tx.message); }), Errc::MessageNotCommitted);
  w.seal_to(a->registration().epoch_start(1));
  EXPECT_EQ(code_of([&] { build_redeem_proof(w.mc, *a, tx.message); }), Errc::CertificateNotConfirmed);
  w.finalize(*a);

  auto redeem = w.redeem_tx(*a, tx);
  EXPECT_EQ(c->accept_redeem(w.mc, redeem).str(), "Rejected(WrongReceivingChain)");

  auto bad_auth = redeem;
  bad_auth.receiver_signature = user("mallory").sign(redeem_auth_digest(tx.message, tx.payload));
  EXPECT_EQ(b->accept_redeem(w.mc, bad_auth).str(), "Rejected(BadReceiverAuth)");

  auto bad_payload = redeem;
  bad_payload.payload[0] ^= 1;
  EXPECT_EQ(b->accept_redeem(w.mc, bad_payload).str(), "Rejected(ProofInvalid)");

  auto bad_path = redeem;
  bad_path.proof.msg_path.siblings[0].sibling.bytes[5] ^= 0x10;
  EXPECT_EQ(b->accept_redeem(w.mc, bad_path).str(), "Rejected(ProofInvalid)");

  auto wrong_kind = redeem;
  wrong_kind.proof.source_kind = SourceKind::Csw;
  EXPECT_EQ(b->accept_redeem(w.mc, wrong_kind).str(), "Rejected(ProofInvalid)");

  EXPECT_TRUE(b->redeemed().empty());
  EXPECT_TRUE(b->accept_redeem(w.mc, redeem).accepted());
}

TEST_F(Cscp, UnconfirmedCertificateBlocksRedeem) {
  auto tx = World::send_tx(*a, coins(1)[0], b->id(), "bob");
  ASSERT_TRUE(a->accept_send(w.mc, tx).accepted());
  w.muted.insert(a->id());
  while (!a->epoch_ready(w.mc)) w.seal();
  auto cert = a->close_epoch(w.mc);
  cert.quality += 1;  // invalidates the proof; the mainchain refuses it
  w.seal();
  EXPECT_EQ(w.mc.submit_certificate(cert).rejection, McReject::ProofInvalid);
  w.seal(8);
  EXPECT_EQ(code_of([&] { build_redeem_proof(w.mc, *a, tx.message); }), Errc::CertificateNotConfirmed);
}

TEST_F(Cscp, CeasedChainsAcceptNothing) {
  auto ti = coins(1)[0];
  w.seal(10);
  w.muted.insert(a->id());
  w.seal(12);
  ASSERT_TRUE(w.mc.is_ceased(a->id()));
  EXPECT_EQ(a->accept_send(w.mc, World::send_tx(*a, ti, b->id(), "bob")).str(), "Rejected(SidechainCeased)");
}

TEST_F(Cscp, CloseEpochBeforeItsEndThrows) {
  EXPECT_EQ(code_of([&] { a->close_epoch(w.mc); }), Errc::EpochNotOver);
}

TEST_F(Cscp, CertificateCommitsHeldSentAndRedeemedSets) {
  auto ti = coins(1)[0];
  auto tx = World::send_tx(*a, ti, b->id(), "bob");
  ASSERT_TRUE(a->accept_send(w.mc, tx).accepted());
  w.finalize(*a);
  ASSERT_TRUE(b->accept_redeem(w.mc, w.redeem_tx(*a, tx)).accepted());
  w.finalize(*b);
  const auto& ce = b->archive().back();
  ASSERT_EQ(ce.cert.proofdata.size(), 4u);
  EXPECT_EQ(ce.cert.proofdata[kHeldRootSlot], b->mitto().held_root());
  EXPECT_EQ(ce.cert.proofdata[kSentRootSlot], b->mitto().sent_root());
  EXPECT_EQ(ce.cert.proofdata[kRedeemedSlot], redeemed_commitment({message_digest(tx.message)}));
  EXPECT_EQ(redeemed_commitment({}), redeemed_commitment({}));
  EXPECT_NE(redeemed_commitment({}), redeemed_commitment({empty_root()}));
}

}  // namespace
}  // namespace sidelink
