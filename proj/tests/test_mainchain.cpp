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

using testing::World;

WithdrawalCertificate reprove(const Sidechain& sc, const Mainchain& mc, std::uint64_t epoch, std::uint64_t quality) {
  const auto* ce = sc.committed(epoch);
  WcertWitness w;
  w.quality = quality;
  for (const auto& tx : ce->messages) w.messages.push_back(message_digest(tx.message));
  w.held = ce->mitto.held_digests();
  w.sent = ce->mitto.sent_digests();
  w.redeemed.assign(ce->redeemed.begin(), ce->redeemed.end());
  w.proofdata = ce->cert.proofdata;
  w.last_block_hash = mc.block_at(sc.registration().epoch_end(epoch)).hash;
  auto cert = ce->cert;
  cert.quality = quality;
  cert.proof = prove_wcert(sc.certifier(), w);
  return cert;
}

TEST(Mainchain, EpochLengthBelowTwoIsRejected) {
  Mainchain mc;
  try {
    Sidechain::create(mc, KeyPair::from_label("c"), 1);
    FAIL() << "expected InvalidParams";
  } catch (const ProtocolError& e) {
    EXPECT_EQ(e.code(), Errc::InvalidParams);
  }
  EXPECT_NO_THROW(Sidechain::create(mc, KeyPair::from_label("c"), 2));
}

TEST(Mainchain, EpochAndWindowArithmetic) {
  World w;
  auto& sc = w.add(4);
  const auto& reg = sc.registration();
  EXPECT_EQ(reg.creation_height, 1u);
  EXPECT_EQ(reg.epoch_start(0), 2u);
  EXPECT_EQ(reg.epoch_end(0), 5u);
  EXPECT_EQ(reg.window_start(0), 6u);
  EXPECT_EQ(reg.window_end(0), 9u);
  EXPECT_EQ(reg.finalization_height(0), 10u);
  EXPECT_EQ(reg.epoch_start(3), 14u);
}

TEST(Mainchain, RegistrationIsCommittedInTheNextBlock) {
  World w;
  auto& sc = w.add(4);
  const auto& block = w.mc.advance_block();
  ASSERT_EQ(block.included.size(), 1u);
  EXPECT_EQ(block.included[0], sc.registration().digest());
  EXPECT_TRUE(verify_stc_inclusion(block.header.stc_root, block.included[0],
                                   block.stc.tx_inclusion(sc.id(), block.included[0])));
}

TEST(Mainchain, CertificateOutsideItsWindowIsRejected) {
  World w;
  auto& sc = w.add(4);
  w.mc.advance_block();
  while (!sc.epoch_ready(w.mc)) w.mc.advance_block();
  auto cert = sc.close_epoch(w.mc);
  // Tip is the last block of epoch 0; the next block opens the window.
  EXPECT_TRUE(w.mc.submit_certificate(cert).accepted());

  World late;
  auto& sc2 = late.add(4);
  while (late.mc.tip_height() < sc2.registration().window_end(0)) late.mc.advance_block();
  auto cert2 = sc2.close_epoch(late.mc);
  EXPECT_EQ(late.mc.submit_certificate(cert2).rejection, McReject::WindowClosed);
}

TEST(Mainchain, EpochsMustBeCertifiedInOrder) {
  World w;
  auto& sc = w.add(2);
  w.mc.advance_block();
  while (w.mc.tip_height() < sc.registration().epoch_end(1)) w.mc.advance_block();
  auto c0 = sc.close_epoch(w.mc);
  auto c1 = sc.close_epoch(w.mc);
  EXPECT_EQ(w.mc.submit_certificate(c1).rejection, McReject::WrongEpoch);
  EXPECT_EQ(w.mc.submit_certificate(c0).rejection, McReject::WindowClosed);
}

TEST(Mainchain, UnknownSidechainAndBadProofAreRejected) {
  World w;
  auto& sc = w.add(4);
  w.mc.advance_block();
  while (!sc.epoch_ready(w.mc)) w.mc.advance_block();
  auto cert = sc.close_epoch(w.mc);
  auto unknown = cert;
  unknown.ledger_id = ScId{42};
  EXPECT_EQ(w.mc.submit_certificate(unknown).rejection, McReject::UnknownSidechain);
  auto tampered = cert;
  tampered.quality += 1;
  EXPECT_EQ(w.mc.submit_certificate(tampered).rejection, McReject::ProofInvalid);
  auto slot = cert;
  slot.proofdata[kHeldRootSlot].bytes[0] ^= 1;
  EXPECT_EQ(w.mc.submit_certificate(slot).rejection, McReject::ProofInvalid);
  EXPECT_TRUE(w.mc.submit_certificate(cert).accepted());
}

TEST(Mainchain, HigherQualityReplacesPendingInEitherOrder) {
  std::optional<Digest> finalized[2];
  for (int order = 0; order < 2; ++order) {
    World w;
    auto& sc = w.add(4);
    w.mc.advance_block();
    while (!sc.epoch_ready(w.mc)) w.mc.advance_block();
    sc.close_epoch(w.mc);
    auto q3 = reprove(sc, w.mc, 0, 3);
    auto q5 = reprove(sc, w.mc, 0, 5);
    if (order == 0) {
      EXPECT_TRUE(w.mc.submit_certificate(q3).accepted());
      EXPECT_TRUE(w.mc.submit_certificate(q5).accepted());
    } else {
      EXPECT_TRUE(w.mc.submit_certificate(q5).accepted());
      EXPECT_EQ(w.mc.submit_certificate(q3).rejection, McReject::LowerQuality);
    }
    EXPECT_EQ(w.mc.submit_certificate(q5).rejection, McReject::LowerQuality);
    while (w.mc.tip_height() < sc.registration().finalization_height(0)) w.mc.advance_block();
    const auto* fc = w.mc.finalized(sc.id(), 0);
    ASSERT_NE(fc, nullptr);
    EXPECT_EQ(fc->cert.quality, 5u);
    finalized[order] = fc->cert.digest();
  }
  EXPECT_EQ(finalized[0], finalized[1]);
}

TEST(Mainchain, SilenceThroughAWindowCeasesTheSidechain) {
  World w;
  auto& a = w.add(4);
  auto& b = w.add(4);
  w.seal(10);
  EXPECT_FALSE(w.mc.is_ceased(a.id()));
  w.muted.insert(a.id());
  const auto next = a.next_epoch();
  const auto ceases_at = a.registration().finalization_height(next);
  while (w.mc.tip_height() < ceases_at - 1) w.seal();
  EXPECT_FALSE(w.mc.is_ceased(a.id()));
  w.seal();
  EXPECT_TRUE(w.mc.is_ceased(a.id()));
  EXPECT_EQ(*w.mc.status(a.id()).ceased_at, ceases_at);
  EXPECT_FALSE(w.mc.is_ceased(b.id()));
  EXPECT_EQ(w.mc.submit_certificate(a.close_epoch(w.mc)).rejection, McReject::SidechainCeased);
  w.seal(12);
  while (a.epoch_ready(w.mc)) {
    EXPECT_EQ(w.mc.submit_certificate(a.close_epoch(w.mc)).rejection, McReject::SidechainCeased);
  }
}

TEST(Mainchain, StcRootsAreRecomputableFromBlockContents) {
  World w;
  w.add(3);
  w.add(4);
  w.seal(20);
  for (const auto& block : w.mc.blocks()) {
    StcBuilder b;
    for (const auto& [sc, entry] : block.stc.entries()) {
      if (entry.wcert) b.add_certificate(sc, *entry.wcert);
      for (const auto& tx : entry.txs) b.add_tx(sc, tx);
    }
    EXPECT_EQ(b.build().root(), block.header.stc_root);
    EXPECT_EQ(block.header.hash(), block.hash);
    if (block.header.height > 0) {
      EXPECT_EQ(block.header.parent, w.mc.block_at(block.header.height - 1).hash);
    }
  }
}

TEST(Mainchain, CswAgainstActiveSidechainIsRejected) {
  World w;
  auto& a = w.add(4);
  w.seal(10);
  CeasedSidechainWithdrawal csw;
  csw.ledger_id = a.id();
  EXPECT_EQ(w.mc.submit_csw(csw).rejection, McReject::SidechainActive);
  try {
    ceased_state(w.mc, a);
    FAIL() << "expected SidechainActive";
  } catch (const ProtocolError& e) {
    EXPECT_EQ(e.code(), Errc::SidechainActive);
  }
}

TEST(Mainchain, MessageCarryingCswNeedsZeroAmountAndCannotBeReplayed) {
  World w;
  auto& a = w.add(4);
  auto& b = w.add(4);
  auto ti = w.issue(a, "wBTC", true, 100, "alice");
  w.seal(10);
  w.muted.insert(a.id());
  w.seal(12);
  ASSERT_TRUE(w.mc.is_ceased(a.id()));

  CscpMessage msg{a.id(), b.id(), MsgType::TokenTransfer, ti.owner, testing::user("bob").public_key(),
                  token_payload_hash(ti)};
  const auto entity = token_payload(ti);
  try {
    withdraw_message_via_csw(w.mc, a, msg, entity, testing::user("alice"), msg.receiver, 5);
    FAIL() << "expected InvalidParams";
  } catch (const ProtocolError& e) {
    EXPECT_EQ(e.code(), Errc::InvalidParams);
  }
  auto csw = withdraw_message_via_csw(w.mc, a, msg, entity, testing::user("alice"), msg.receiver);
  EXPECT_EQ(csw.amount, 0u);
  EXPECT_EQ(csw.nullifier, csw_nullifier(a.id(), hash_bytes(entity)));
  EXPECT_TRUE(w.mc.submit_csw(csw).accepted());
  EXPECT_EQ(w.mc.submit_csw(csw).rejection, McReject::NullifierReused);

  // A different message over the same entity collides on the nullifier.
  auto other = msg;
  other.receiver = testing::user("carol").public_key();
  auto second = withdraw_message_via_csw(w.mc, a, other, entity, testing::user("alice"), other.receiver);
  EXPECT_EQ(w.mc.submit_csw(second).rejection, McReject::NullifierReused);

  auto tampered = csw;
  tampered.amount = 1;
  tampered.nullifier.bytes[0] ^= 1;
  EXPECT_EQ(w.mc.submit_csw(tampered).rejection, McReject::ProofInvalid);
}

TEST(Mainchain, CswForEntityOutsideCommittedStateIsRefused) {
  World w;
  auto& a = w.add(4);
  auto& b = w.add(4);
  w.seal(10);
  auto late = w.issue(a, "late", true, 5, "alice");
  w.muted.insert(a.id());
  w.seal(12);
  CscpMessage msg{a.id(), b.id(), MsgType::TokenTransfer, late.owner, late.owner, token_payload_hash(late)};
  try {
    withdraw_message_via_csw(w.mc, a, msg, token_payload(late), testing::user("alice"), late.owner);
    FAIL() << "expected EntityNotInState";
  } catch (const ProtocolError& e) {
    EXPECT_EQ(e.code(), Errc::EntityNotInState);
  }
}

}  // namespace
}  // namespace sidelink
