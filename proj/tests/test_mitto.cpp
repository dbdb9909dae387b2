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

#include <random>

#include <gtest/gtest.h>

#include "sidelink/error.hpp"
#include "world.hpp"

namespace sidelink {
namespace {

using mitto::Rule;
using testing::user;
using testing::World;

constexpr ScId kA{1};
constexpr ScId kB{2};
constexpr ScId kC{3};

template <class F>
Errc code_of(F&& f) {
  try {
    f();
  } catch (const ProtocolError& e) {
    return e.code();
  }
  ADD_FAILURE() << "no ProtocolError";
  return Errc::InvalidParams;
}

CscpMessage msg_for(ScId from, ScId to, const TokenInstance& ti, const std::string& receiver) {
  return CscpMessage{from, to, MsgType::TokenTransfer, ti.owner, user(receiver).public_key(), token_payload_hash(ti)};
}

Signature sign_as(const std::string& who, const CscpMessage& m) { return user(who).sign(message_digest(m)); }

TokenInstance coins(std::uint64_t amount, ScId issuer, const std::string& owner, const std::string& nonce = "n") {
  return TokenInstance{"wBTC", true, Amount{amount}, issuer, user(owner).public_key(), hash_bytes(nonce)};
}

TEST(MittoIssue, DuplicateNftIdAndNameConflicts) {
  mitto::MittoState s;
  mitto::TokenRegistry reg;
  auto car = mitto::issue(s, reg, kA, "Cars", false, 1, user("alice").public_key(), hash_bytes("x"));
  EXPECT_TRUE(s.holds(car));
  EXPECT_EQ(code_of([&] { mitto::issue(s, reg, kA, "Cars", false, 1, car.owner, hash_bytes("y")); }),
            Errc::DuplicateTokenId);
  EXPECT_EQ(code_of([&] { mitto::issue(s, reg, kA, "Cars", true, 5, car.owner, hash_bytes("y")); }),
            Errc::NameConflict);
  mitto::MittoState other;
  EXPECT_EQ(code_of([&] { mitto::issue(other, reg, kB, "Cars", false, 2, car.owner, hash_bytes("y")); }),
            Errc::NameConflict);
  EXPECT_EQ(code_of([&] { mitto::issue(s, reg, kA, "wBTC", true, 0, car.owner, hash_bytes("y")); }),
            Errc::ZeroAmount);
  EXPECT_EQ(s.issued.count("wBTC"), 0u);
  mitto::issue(s, reg, kA, "wBTC", true, 100, car.owner, hash_bytes("z"));
  EXPECT_EQ(s.issued.at("wBTC").total, 100u);
  EXPECT_EQ(s.issued.at("Cars").token_ids, (std::set<std::uint64_t>{1}));
}

TEST(MittoSend, NativeSendsUpsertOneRecordPerReceiver) {
  mitto::MittoState s;
  mitto::TokenRegistry reg;
  auto all = mitto::issue(s, reg, kA, "wBTC", true, 100, user("alice").public_key(), hash_bytes("n"));
  auto [sixty, forty] = mitto::split(s, all, 60);
  EXPECT_EQ(s.held_amount("wBTC"), 100u);

  auto m1 = msg_for(kA, kB, sixty, "bob");
  ASSERT_EQ(mitto::validate_send(s, {}, kA, sixty, m1, sign_as("alice", m1)), std::nullopt);
  mitto::apply_send(s, {}, kA, sixty, m1);
  EXPECT_FALSE(s.holds(sixty));
  ASSERT_NE(s.find_sent(kB, "wBTC", true, 0), nullptr);
  EXPECT_EQ(s.find_sent(kB, "wBTC", true, 0)->amount(), 60u);

  auto m2 = msg_for(kA, kB, forty, "bob");
  ASSERT_EQ(mitto::validate_send(s, {}, kA, forty, m2, sign_as("alice", m2)), std::nullopt);
  mitto::apply_send(s, {}, kA, forty, m2);
  EXPECT_EQ(s.sent.size(), 1u);
  EXPECT_EQ(s.find_sent(kB, "wBTC", true, 0)->amount(), 100u);
  EXPECT_EQ(s.held_amount("wBTC"), 0u);
}

TEST(MittoSend, ForeignSendBackLeavesNoRecord) {
  mitto::MittoState s;
  auto ti = coins(60, kA, "bob");
  s.add(ti);
  auto m = msg_for(kB, kA, ti, "alice");
  ASSERT_EQ(mitto::validate_send(s, {}, kB, ti, m, sign_as("bob", m)), std::nullopt);
  mitto::apply_send(s, {}, kB, ti, m);
  EXPECT_TRUE(s.tks.empty());
  EXPECT_TRUE(s.sent.empty());
}

TEST(MittoSend, ForeignTokenToThirdPartyFailsR2) {
  mitto::MittoState s;
  auto ti = coins(60, kA, "bob");
  s.add(ti);
  auto m = msg_for(kB, kC, ti, "carol");
  EXPECT_EQ(mitto::validate_send(s, {}, kB, ti, m, sign_as("bob", m)), Rule::R2);
  mitto::MittoRules open;
  open.restrict_routing = false;
  EXPECT_EQ(mitto::validate_send(s, open, kB, ti, m, sign_as("bob", m)), std::nullopt);
}

TEST(MittoSend, EarliestFailingRuleIsReported) {
  mitto::MittoState s;
  auto ti = coins(10, kA, "alice");
  auto m = msg_for(kC, kC, ti, "bob");
  m.msg_type = static_cast<MsgType>(5);
  // Not held, wrong chain, self-send, unknown type and bad signature at once.
  EXPECT_EQ(mitto::validate_send(s, {}, kA, ti, m, sign_as("mallory", m)), Rule::R1);
  s.add(ti);
  EXPECT_EQ(mitto::validate_send(s, {}, kA, ti, m, sign_as("mallory", m)), Rule::R3a);
  m.sending_sc = kA;
  m.receiving_sc = kA;
  EXPECT_EQ(mitto::validate_send(s, {}, kA, ti, m, sign_as("mallory", m)), Rule::R3b);
  m.receiving_sc = kB;
  EXPECT_EQ(mitto::validate_send(s, {}, kA, ti, m, sign_as("mallory", m)), Rule::R3c);
  m.msg_type = MsgType::TokenTransfer;
  EXPECT_EQ(mitto::validate_send(s, {}, kA, ti, m, sign_as("mallory", m)), Rule::R4);
}

class MittoRedeem : public ::testing::Test {
 protected:
  void SetUp() override {
    // Issuer A has 100 wBTC out at B.
    issuer.sent[mitto::sent_key(kB, "wBTC", true, 0)] = SentRecord{kB, "wBTC", true, Amount{100}};
  }

  std::optional<Rule> check(const mitto::MittoState& s, ScId self, const TokenInstance& ti, const CscpMessage& m,
                            const std::string& signer) {
    return mitto::validate_redeem(s, {}, self, token_payload(ti), m, sign_as(signer, m));
  }

  mitto::MittoState issuer;
};

TEST_F(MittoRedeem, PartialThenFullReturnClearsTheRecord) {
  auto sixty = coins(60, kA, "bob", "r1");
  auto m = msg_for(kB, kA, sixty, "alice");
  ASSERT_EQ(check(issuer, kA, sixty, m, "bob"), std::nullopt);
  auto fresh = mitto::apply_redeem(issuer, {}, kA, sixty, m);
  EXPECT_EQ(fresh.owner, user("alice").public_key());
  EXPECT_TRUE(issuer.holds(fresh));
  EXPECT_EQ(issuer.find_sent(kB, "wBTC", true, 0)->amount(), 40u);

  auto forty = coins(40, kA, "bob", "r2");
  auto m2 = msg_for(kB, kA, forty, "alice");
  ASSERT_EQ(check(issuer, kA, forty, m2, "bob"), std::nullopt);
  mitto::apply_redeem(issuer, {}, kA, forty, m2);
  EXPECT_TRUE(issuer.sent.empty());
  EXPECT_EQ(issuer.held_amount("wBTC"), 100u);
}

TEST_F(MittoRedeem, OverReturnFailsR2a) {
  auto lots = coins(150, kA, "bob");
  EXPECT_EQ(check(issuer, kA, lots, msg_for(kB, kA, lots, "alice"), "bob"), Rule::R2a);
  auto from_c = coins(10, kA, "carol");
  EXPECT_EQ(check(issuer, kA, from_c, msg_for(kC, kA, from_c, "alice"), "carol"), Rule::R2a);
}

TEST_F(MittoRedeem, NftRulesR2bAndR3) {
  TokenInstance car{"Cars", false, TokenId{1}, kA, user("bob").public_key(), hash_bytes("car")};
  EXPECT_EQ(check(issuer, kA, car, msg_for(kB, kA, car, "alice"), "bob"), Rule::R2b);

  mitto::MittoState holder;
  auto live = car;
  live.owner = user("carol").public_key();
  holder.add(live);
  auto incoming = car;
  incoming.owner = user("alice").public_key();
  EXPECT_EQ(check(holder, kB, incoming, msg_for(kA, kB, incoming, "bob"), "alice"), Rule::R3);
}

TEST_F(MittoRedeem, ForeignTokenFromNonIssuerFailsR1) {
  auto ti = coins(5, kC, "alice");
  EXPECT_EQ(check({}, kB, ti, msg_for(kA, kB, ti, "bob"), "alice"), Rule::R1);
}

TEST_F(MittoRedeem, PayloadAndEvidenceRules) {
  auto ti = coins(5, kA, "alice");
  auto m = msg_for(kA, kB, ti, "bob");
  EXPECT_EQ(mitto::validate_redeem({}, {}, kB, Bytes{1, 2, 3}, m, sign_as("alice", m)), Rule::R4e);
  auto other = m;
  other.payload_hash = hash_bytes("other");
  EXPECT_EQ(check({}, kB, ti, other, "alice"), Rule::R4e);
  EXPECT_EQ(check({}, kB, ti, m, "mallory"), Rule::R5);
  mitto::RedeemEvidence no_auth{false, true};
  EXPECT_EQ(mitto::validate_redeem({}, {}, kB, token_payload(ti), m, sign_as("alice", m), no_auth), Rule::R6);
  mitto::RedeemEvidence no_proof{true, false};
  EXPECT_EQ(mitto::validate_redeem({}, {}, kB, token_payload(ti), m, sign_as("alice", m), no_proof), Rule::R7);
}

TEST(MittoLocal, SplitAndMergePreserveAmounts) {
  mitto::MittoState s;
  auto ti = coins(10, kA, "alice");
  s.add(ti);
  auto [x, y] = mitto::split(s, ti, 3);
  EXPECT_EQ(x.amount() + y.amount(), 10u);
  EXPECT_NE(x.data_hash, y.data_hash);
  EXPECT_EQ(code_of([&] { mitto::split(s, ti, 3); }), Errc::EntityNotInState);
  EXPECT_EQ(code_of([&] { mitto::split(s, x, 3); }), Errc::ZeroAmount);
  auto merged = mitto::merge(s, x, y);
  EXPECT_EQ(merged.amount(), 10u);
  EXPECT_EQ(s.tks.size(), 1u);
  auto foreign = coins(4, kB, "alice");
  s.add(foreign);
  EXPECT_EQ(code_of([&] { mitto::merge(s, merged, foreign); }), Errc::InvalidInstance);
}

TEST(MittoState, EncodingRoundTripsAndDigestsDiffer) {
  mitto::MittoState s;
  s.add(coins(10, kA, "alice"));
  s.add(coins(10, kA, "alice"));
  s.sent[mitto::sent_key(kB, "wBTC", true, 0)] = SentRecord{kB, "wBTC", true, Amount{4}};
  s.issued["wBTC"] = mitto::IssuedName{true, 24, {}};
  EXPECT_EQ(s.tks.begin()->second.count, 2u);
  EXPECT_EQ(s.held_digests().size(), 2u);
  EXPECT_EQ(decode_canonical<mitto::MittoState>(encode_canonical(s)), s);
  auto t = s;
  t.remove(coins(10, kA, "alice"));
  EXPECT_NE(t.digest(), s.digest());
}

// Issuer conservation: held + sent equals issued after any mix of sends,
// returns and local splits between two honest chains.
TEST(MittoProperty, IssuerHoldingsPlusSentRecordsEqualSupply) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    World w;
    auto& a = w.add(2);
    auto& b = w.add(2);
    w.seal();
    w.issue(a, "wBTC", true, 1000, "alice");
    std::mt19937_64 rng(seed);
    std::vector<std::pair<Sidechain*, SendTx>> pending;
    for (int step = 0; step < 30; ++step) {
      const auto roll = rng() % 4;
      Sidechain& from = (roll % 2 == 0) ? a : b;
      Sidechain& to = (&from == &a) ? b : a;
      if (roll < 2 && !from.mitto().tks.empty()) {
        auto it = from.mitto().tks.begin();
        std::advance(it, static_cast<long>(rng() % from.mitto().tks.size()));
        auto ti = it->second.instance;
        if (ti.amount() > 1 && rng() % 2) ti = mitto::split(from.mitto(), ti, 1 + rng() % (ti.amount() - 1)).first;
        auto tx = World::send_tx(from, ti, to.id(), rng() % 2 ? "bob" : "alice");
        ASSERT_TRUE(from.accept_send(w.mc, tx).accepted());
        pending.emplace_back(&from, tx);
      } else if (roll == 2) {
        w.seal(1 + rng() % 3);
      } else if (!pending.empty()) {
        auto idx = rng() % pending.size();
        auto [src, tx] = pending[idx];
        const Sidechain& dst = src == &a ? b : a;
        try {
          auto redeem = w.redeem_tx(*src, tx);
          if (const_cast<Sidechain&>(dst).accept_redeem(w.mc, redeem).accepted()) {
            pending.erase(pending.begin() + static_cast<long>(idx));
          }
        } catch (const ProtocolError&) {
        }
      }
      const auto& s = a.mitto();
      EXPECT_EQ(s.held_amount("wBTC") + s.sent_amount("wBTC"), s.issued.at("wBTC").total) << seed << ":" << step;
      EXPECT_LE(b.mitto().held_amount("wBTC"), s.sent_amount("wBTC"));
    }
  }
}

class MittoWithdraw : public ::testing::Test {
 protected:
  void SetUp() override {
    a = &w.add(4);
    b = &w.add(4);
    c = &w.add(4);
    w.seal();
  }

  void cease(Sidechain& sc) {
    w.seal(2);
    w.finalize(sc);
    w.muted.insert(sc.id());
    while (!w.mc.is_ceased(sc.id())) w.seal();
    w.seal();
  }

  World w;
  Sidechain* a = nullptr;
  Sidechain* b = nullptr;
  Sidechain* c = nullptr;
};

TEST_F(MittoWithdraw, HeldNativeTokenMovesToAnotherChain) {
  auto ti = w.issue(*a, "wBTC", true, 100, "alice");
  cease(*a);
  EXPECT_EQ(code_of([&] {
              mitto::withdraw_native_held(w.mc, *a, ti, user("bob"), b->id(), user("bob").public_key());
            }),
            Errc::NotOwner);
  auto wd = mitto::withdraw_native_held(w.mc, *a, ti, user("alice"), b->id(), user("bob").public_key());
  ASSERT_TRUE(w.mc.submit_csw(wd.csw).accepted());
  EXPECT_EQ(w.mc.submit_csw(wd.csw).rejection, McReject::NullifierReused);
  w.seal();
  auto proof = build_csw_redeem_proof(w.mc, a->id(), wd.csw.nullifier, wd.message);
  CswRedeemTx tx{wd.message, wd.payload, proof, CswRef{a->id(), wd.csw.nullifier}, wd.sender_signature,
                 user("bob").sign(redeem_auth_digest(wd.message, wd.payload))};
  EXPECT_TRUE(b->accept_csw_redeem(w.mc, tx).accepted());
  EXPECT_EQ(b->accept_csw_redeem(w.mc, tx).str(), "Rejected(AlreadyRedeemed)");
  EXPECT_EQ(b->mitto().held_amount("wBTC"), 100u);
}

TEST_F(MittoWithdraw, ReturnedTokensRespectTheSentRecord) {
  auto all = w.issue(*a, "wBTC", true, 100, "alice");
  auto out = World::send_tx(*a, all, b->id(), "bob");
  ASSERT_TRUE(a->accept_send(w.mc, out).accepted());
  w.finalize(*a);
  ASSERT_TRUE(b->accept_redeem(w.mc, w.redeem_tx(*a, out)).accepted());
  auto at_b = b->mitto().tks.begin()->second.instance;

  // B fabricates a return of 150 next to the honest return of 100.
  auto forged_ti = at_b;
  forged_ti.quantity = Amount{150};
  auto forged = World::send_tx(*b, forged_ti, a->id(), "alice");
  b->forge_send(forged);
  auto back = World::send_tx(*b, at_b, a->id(), "alice");
  ASSERT_TRUE(b->accept_send(w.mc, back).accepted());
  w.finalize(*b);
  cease(*a);

  EXPECT_EQ(code_of([&] {
              mitto::withdraw_native_sent(w.mc, *a, *b, forged.message, user("alice"), c->id(),
                                          user("carol").public_key());
            }),
            Errc::AmountExceedsSent);
  EXPECT_EQ(code_of([&] {
              mitto::withdraw_native_sent(w.mc, *a, *b, back.message, user("bob"), c->id(),
                                          user("carol").public_key());
            }),
            Errc::NotOwner);
  auto wd = mitto::withdraw_native_sent(w.mc, *a, *b, back.message, user("alice"), c->id(),
                                        user("carol").public_key());
  ASSERT_TRUE(w.mc.submit_csw(wd.csw).accepted());
  EXPECT_EQ(w.mc.submit_csw(wd.csw).rejection, McReject::NullifierReused);
  w.seal();
  auto proof = build_csw_redeem_proof(w.mc, a->id(), wd.csw.nullifier, wd.message);
  CswRedeemTx tx{wd.message, wd.payload, proof, CswRef{a->id(), wd.csw.nullifier}, wd.sender_signature,
                 user("carol").sign(redeem_auth_digest(wd.message, wd.payload))};
  EXPECT_TRUE(c->accept_csw_redeem(w.mc, tx).accepted());
  EXPECT_EQ(c->mitto().held_amount("wBTC"), 100u);
}

TEST_F(MittoWithdraw, AlreadyRedeemedReturnCannotBeWithdrawnAgain) {
  auto all = w.issue(*a, "wBTC", true, 100, "alice");
  auto out = World::send_tx(*a, all, b->id(), "bob");
  ASSERT_TRUE(a->accept_send(w.mc, out).accepted());
  w.finalize(*a);
  ASSERT_TRUE(b->accept_redeem(w.mc, w.redeem_tx(*a, out)).accepted());
  auto back = World::send_tx(*b, b->mitto().tks.begin()->second.instance, a->id(), "alice");
  ASSERT_TRUE(b->accept_send(w.mc, back).accepted());
  w.finalize(*b);
  ASSERT_TRUE(a->accept_redeem(w.mc, w.redeem_tx(*b, back)).accepted());
  cease(*a);
  EXPECT_EQ(code_of([&] {
              mitto::withdraw_native_sent(w.mc, *a, *b, back.message, user("alice"), c->id(),
                                          user("carol").public_key());
            }),
            Errc::NoSentRecord);
}

TEST_F(MittoWithdraw, ForeignTokenRedeemsOnlyAtItsIssuer) {
  auto all = w.issue(*a, "wBTC", true, 100, "alice");
  auto out = World::send_tx(*a, all, b->id(), "bob");
  ASSERT_TRUE(a->accept_send(w.mc, out).accepted());
  w.finalize(*a);
  ASSERT_TRUE(b->accept_redeem(w.mc, w.redeem_tx(*a, out)).accepted());
  auto at_b = b->mitto().tks.begin()->second.instance;
  cease(*b);

  EXPECT_EQ(code_of([&] { mitto::withdraw_foreign(w.mc, *c, at_b, user("bob"), user("alice").public_key()); }),
            Errc::SidechainActive);
  auto wd = mitto::withdraw_foreign(w.mc, *b, at_b, user("bob"), user("alice").public_key());
  EXPECT_EQ(wd.message.receiving_sc, a->id());
  ASSERT_TRUE(w.mc.submit_csw(wd.csw).accepted());

  auto stray = mitto::withdraw_held_to(w.mc, *b, at_b, user("bob"), c->id(), user("carol").public_key());
  EXPECT_EQ(w.mc.submit_csw(stray.csw).rejection, McReject::NullifierReused);
  w.seal();

  auto proof = build_csw_redeem_proof(w.mc, b->id(), wd.csw.nullifier, wd.message);
  CswRedeemTx tx{wd.message, wd.payload, proof, CswRef{b->id(), wd.csw.nullifier}, wd.sender_signature,
                 user("alice").sign(redeem_auth_digest(wd.message, wd.payload))};
  EXPECT_EQ(c->accept_csw_redeem(w.mc, tx).str(), "Rejected(WrongReceivingChain)");
  EXPECT_TRUE(a->accept_csw_redeem(w.mc, tx).accepted());
  EXPECT_TRUE(a->mitto().sent.empty());
  EXPECT_EQ(a->mitto().held_amount("wBTC"), 100u);
}

}  // namespace
}  // namespace sidelink
