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

#include <algorithm>
#include <array>
#include <numeric>
#include <set>

#include <gtest/gtest.h>

#include "sidelink/encoding.hpp"
#include "sidelink/error.hpp"
#include "sidelink/merkle.hpp"
#include "sidelink/stc.hpp"
#include "sidelink/token.hpp"
#include "sidelink/types.hpp"

namespace sidelink {
namespace {

// Frozen from tests/oracle/golden.py, an independent re-implementation of the
// hashing layout.
constexpr const char* kEmptyRoot = "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855";
constexpr const char* kLeaf0 = "d2dbf006f96dd05044a8f63d8f118f23925ba4cc5750f8b6c8e287fd506c8188";
constexpr const char* kRootSingle = "f2665af0e7a6aa2542c9f87b1fd9b34a5e5673174b395ffbe2659285de6824db";
constexpr const char* kRootEight = "c94e876e476d5257af7de8633699075cae82e4cfeea7844b363651c79e9ff523";
constexpr const char* kRootThree = "2503a09e5d05f59f2c699fc8adf4973c87b3b8b28f97613cea8e1627889c7648";
constexpr const char* kStcOneCert = "c11120d25a5440f4d0b1944948e48838f1d7687e92784156538d2ef4a4880d14";
constexpr const char* kStcTwo = "0817e0ffa64bf2a9093587de3e1fcbd33de0a8a11dd481bc84eb2352b71e68b9";
constexpr const char* kMsgDigest = "2f1747d7ee492dded3fccea9a7f6a15195f70be55c14c3565433585d0479d455";
constexpr const char* kTokenAmount5 = "b1e36fe061caa83869dc5511305e0c47cc4166f3b984ce8860d00eb294056082";
constexpr const char* kTokenId5 = "2ca2660ea1cf6e2e77881600a3377e425337bce6bd77dc2382bd56815a8822a5";

std::vector<Digest> labelled(std::size_t n) {
  std::vector<Digest> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(hash_bytes("leaf-" + std::to_string(i)));
  return out;
}

PubKey key_bytes(std::uint8_t first) {
  PubKey k;
  std::iota(k.bytes.begin(), k.bytes.end(), first);
  return k;
}

Digest concat_hash(std::initializer_list<ByteView> parts) {
  Bytes buf;
  for (auto p : parts) buf.insert(buf.end(), p.begin(), p.end());
  return hash_bytes(buf);
}

TEST(Digest, EmptyRootIsHashOfEmptyInput) {
  EXPECT_EQ(hash_bytes(Bytes{}).hex(), kEmptyRoot);
  EXPECT_EQ(empty_root().hex(), kEmptyRoot);
  EXPECT_EQ(hash_bytes("leaf-0").hex(), kLeaf0);
}

TEST(Digest, HexRoundTripAndRejection) {
  auto d = hash_bytes("x");
  EXPECT_EQ(Digest::from_hex(d.hex()), d);
  EXPECT_THROW(from_hex("abc"), std::invalid_argument);
  EXPECT_THROW(from_hex("zz"), std::invalid_argument);
  EXPECT_EQ(from_hex("ABcd"), (Bytes{0xab, 0xcd}));
}

TEST(Encoding, IntegersAreBigEndian) {
  Writer w;
  w.u32(0x01020304);
  w.u64(0x0102030405060708ULL);
  EXPECT_EQ(w.data(), (Bytes{1, 2, 3, 4, 1, 2, 3, 4, 5, 6, 7, 8}));
}

TEST(Encoding, ReaderRejectsTruncationAndTrailingBytes) {
  auto bytes = encode_canonical(CscpMessage{});
  Bytes shorter(bytes.begin(), bytes.end() - 1);
  EXPECT_THROW(decode_canonical<CscpMessage>(shorter), DecodeError);
  Bytes longer = bytes;
  longer.push_back(0);
  EXPECT_THROW(decode_canonical<CscpMessage>(longer), DecodeError);
  EXPECT_EQ(decode_canonical<CscpMessage>(bytes), CscpMessage{});
}

TEST(Encoding, ListLengthBeyondInputIsRejected) {
  Writer w;
  w.u32(1000);
  Reader r(w.data());
  EXPECT_THROW(r.list<Digest>([](Reader& in) { return in.digest(); }), DecodeError);
}

TEST(Encoding, MessageDigestMatchesOracleAndHandLayout) {
  CscpMessage m{ScId{1}, ScId{2}, MsgType::TokenTransfer, key_bytes(0), key_bytes(32), hash_bytes("payload")};
  EXPECT_EQ(message_digest(m).hex(), kMsgDigest);

  Writer w;
  w.u32(1);
  w.u32(2);
  w.u32(1);
  w.raw(key_bytes(0).view());
  w.raw(key_bytes(32).view());
  w.digest(hash_bytes("payload"));
  EXPECT_EQ(hash_bytes(w.data()), message_digest(m));
  EXPECT_EQ(decode_canonical<CscpMessage>(encode_canonical(m)), m);
}

TEST(Encoding, TokenUnionDiscriminantSeparatesArms) {
  TokenInstance amount{"wBTC", true, Amount{5}, ScId{1}, key_bytes(0), empty_root()};
  TokenInstance id = amount;
  id.quantity = TokenId{5};
  EXPECT_NE(encode_canonical(amount), encode_canonical(id));
  EXPECT_EQ(amount.digest().hex(), kTokenAmount5);
  EXPECT_EQ(id.digest().hex(), kTokenId5);
  EXPECT_TRUE(amount.well_formed());
  EXPECT_FALSE(id.well_formed());
  EXPECT_EQ(decode_canonical<TokenInstance>(encode_canonical(amount)), amount);
}

TEST(Encoding, TokenArmOutOfRangeIsRejected) {
  TokenInstance ti{"Cars", false, TokenId{1}, ScId{1}, key_bytes(0), empty_root()};
  auto bytes = encode_canonical(ti);
  // u32 length + 4 name bytes + fungible flag, then the arm byte.
  bytes[4 + 4 + 1] = 7;
  EXPECT_THROW(decode_canonical<TokenInstance>(bytes), DecodeError);
}

TEST(Encoding, FixtureDigestsAreDistinct) {
  std::set<Digest> seen;
  std::vector<Bytes> corpus;
  for (int i = 0; i < 64; ++i) corpus.push_back(encode_canonical(TokenInstance{
                                   "t" + std::to_string(i % 8), true, Amount{std::uint64_t(i) + 1}, ScId{1},
                                   key_bytes(0), empty_root()}));
  for (int i = 0; i < 64; ++i) {
    corpus.push_back(encode_canonical(
        CscpMessage{ScId{std::uint32_t(i)}, ScId{2}, MsgType::TokenTransfer, key_bytes(0), key_bytes(1), empty_root()}));
  }
  for (const auto& b : corpus) EXPECT_TRUE(seen.insert(hash_bytes(b)).second);
}

TEST(Merkle, EmptyAndSingleLeaf) {
  EXPECT_EQ(merkle_root({}).hex(), kEmptyRoot);
  auto d = hash_bytes("leaf-0");
  EXPECT_EQ(merkle_root({d}).hex(), kRootSingle);

  const std::uint8_t zero = 0x00;
  const std::uint8_t one = 0x01;
  auto l = concat_hash({ByteView(&zero, 1), d.view()});
  auto pad = concat_hash({ByteView(&zero, 1), empty_root().view()});
  EXPECT_EQ(leaf_hash(d), l);
  EXPECT_EQ(merkle_root({d}), concat_hash({ByteView(&one, 1), l.view(), pad.view()}));
}

TEST(Merkle, EightLeavesFormHeightThreeTree) {
  MerkleTree tree(labelled(8));
  EXPECT_EQ(tree.root().hex(), kRootEight);
  EXPECT_EQ(tree.height(), 3u);
  EXPECT_EQ(tree.levels().front().size(), 8u);
  EXPECT_EQ(merkle_root(labelled(3)).hex(), kRootThree);
}

TEST(Merkle, PaddingWidthIsNextPowerOfTwo) {
  EXPECT_EQ(MerkleTree(labelled(1)).levels().front().size(), 2u);
  EXPECT_EQ(MerkleTree(labelled(3)).levels().front().size(), 4u);
  EXPECT_EQ(MerkleTree(labelled(5)).levels().front().size(), 8u);
  EXPECT_EQ(MerkleTree(labelled(9)).levels().front().size(), 16u);
}

TEST(Merkle, EveryPermutationOfFourLeavesGivesADistinctRoot) {
  auto leaves = labelled(4);
  std::array<int, 4> order{0, 1, 2, 3};
  std::set<Digest> roots;
  int count = 0;
  do {
    std::vector<Digest> perm;
    for (int i : order) perm.push_back(leaves[i]);
    roots.insert(merkle_root(perm));
    ++count;
  } while (std::next_permutation(order.begin(), order.end()));
  EXPECT_EQ(count, 24);
  EXPECT_EQ(roots.size(), 24u);
}

TEST(Merkle, EveryIndexVerifiesForAllSizes) {
  for (std::size_t n = 1; n <= 17; ++n) {
    MerkleTree tree(labelled(n));
    for (std::size_t i = 0; i < n; ++i) {
      auto path = tree.path(i);
      EXPECT_EQ(path.siblings.size(), tree.height());
      EXPECT_TRUE(verify_path(tree.root(), tree.leaves()[i], path)) << n << "/" << i;
    }
    EXPECT_THROW(tree.path(n), ProtocolError);
  }
}

TEST(Merkle, SingleBitTamperingAlwaysFails) {
  MerkleTree tree(labelled(8));
  std::size_t checked = 0;
  for (std::size_t i = 0; i < 8; ++i) {
    const auto path = tree.path(i);
    for (std::size_t s = 0; s < path.siblings.size(); ++s) {
      for (std::size_t bit = 0; bit < 256; ++bit) {
        auto bad = path;
        bad.siblings[s].sibling.bytes[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
        EXPECT_FALSE(verify_path(tree.root(), tree.leaves()[i], bad));
        ++checked;
      }
      auto flipped = path;
      flipped.siblings[s].side = flipped.siblings[s].side == Side::Left ? Side::Right : Side::Left;
      EXPECT_FALSE(verify_path(tree.root(), tree.leaves()[i], flipped));
    }
    for (std::size_t bit = 0; bit < 256; ++bit) {
      auto leaf = tree.leaves()[i];
      leaf.bytes[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
      EXPECT_FALSE(verify_path(tree.root(), leaf, path));
    }
  }
  EXPECT_EQ(checked, 8u * 3u * 256u);
}

TEST(Merkle, LeafSwapAndIndexMismatchFail) {
  MerkleTree tree(labelled(8));
  for (std::size_t i = 0; i < 8; ++i) {
    for (std::size_t j = 0; j < 8; ++j) {
      if (i != j) {
        EXPECT_FALSE(verify_path(tree.root(), tree.leaves()[j], tree.path(i)));
      }
    }
    auto path = tree.path(i);
    path.leaf_index ^= 1;
    EXPECT_FALSE(verify_path(tree.root(), tree.leaves()[i], path));
    path.leaf_index = 8 + i;
    EXPECT_FALSE(fold_path(tree.leaves()[i], path).has_value());
  }
}

TEST(Merkle, InternalNodeCannotPoseAsLeaf) {
  MerkleTree tree(labelled(4));
  const auto& level1 = tree.levels()[1];
  MerklePath shortened{0, {PathStep{level1[1], Side::Right}}};
  EXPECT_FALSE(verify_path(tree.root(), level1[0], shortened));
}

TEST(Merkle, PathEncodingRoundTrips) {
  auto path = MerkleTree(labelled(5)).path(3);
  EXPECT_EQ(decode_canonical<MerklePath>(encode_canonical(path)), path);
}

TEST(Stc, OneSidechainOneCertificateMatchesHandLayout) {
  auto cert = hash_bytes("cert-7");
  StcBuilder b;
  b.add_certificate(ScId{7}, cert);
  auto tree = b.build();
  EXPECT_EQ(tree.root().hex(), kStcOneCert);
  EXPECT_EQ(tree.root(), merkle_root({node_hash(cert, empty_root())}));
  auto inc = tree.certificate_inclusion(ScId{7});
  EXPECT_TRUE(inc.is_certificate);
  EXPECT_TRUE(verify_stc_inclusion(tree.root(), cert, inc));
}

TEST(Stc, SecondCertificateForSameSidechainIsRejected) {
  StcBuilder b;
  b.add_certificate(ScId{7}, hash_bytes("a"));
  try {
    b.add_certificate(ScId{7}, hash_bytes("b"));
    FAIL() << "expected DuplicateCertificate";
  } catch (const ProtocolError& e) {
    EXPECT_EQ(e.code(), Errc::DuplicateCertificate);
  }
}

TEST(Stc, TwoSidechainsOrderedById) {
  auto cert = hash_bytes("cert-7");
  auto tx = hash_bytes("tx-3");
  StcBuilder b;
  b.add_tx(ScId{9}, tx);
  b.add_certificate(ScId{7}, cert);
  auto tree = b.build();
  EXPECT_EQ(tree.root().hex(), kStcTwo);
  auto inc = tree.tx_inclusion(ScId{9}, tx);
  EXPECT_FALSE(inc.is_certificate);
  EXPECT_TRUE(verify_stc_inclusion(tree.root(), tx, inc));
  EXPECT_FALSE(verify_stc_inclusion(tree.root(), cert, inc));
  EXPECT_THROW(tree.tx_inclusion(ScId{7}, tx), ProtocolError);
  EXPECT_THROW(tree.certificate_inclusion(ScId{9}), ProtocolError);
}

TEST(Stc, CertificateAndTransactionSlotsAreNotInterchangeable) {
  auto cert = hash_bytes("cert");
  auto tx = hash_bytes("tx");
  StcBuilder b;
  b.add_certificate(ScId{1}, cert);
  b.add_tx(ScId{1}, tx);
  auto tree = b.build();
  auto cinc = tree.certificate_inclusion(ScId{1});
  auto tinc = tree.tx_inclusion(ScId{1}, tx);
  EXPECT_TRUE(verify_stc_inclusion(tree.root(), cert, cinc));
  EXPECT_TRUE(verify_stc_inclusion(tree.root(), tx, tinc));
  auto forged = cinc;
  forged.is_certificate = false;
  EXPECT_FALSE(verify_stc_inclusion(tree.root(), cert, forged));
  auto with_path = cinc;
  with_path.tx_path = tinc.tx_path;
  with_path.tx_path.siblings.push_back(PathStep{tx, Side::Right});
  EXPECT_FALSE(verify_stc_inclusion(tree.root(), cert, with_path));
}

TEST(Stc, InclusionEncodingRoundTrips) {
  StcBuilder b;
  b.add_tx(ScId{2}, hash_bytes("t1"));
  b.add_tx(ScId{2}, hash_bytes("t2"));
  b.add_tx(ScId{2}, hash_bytes("t3"));
  auto inc = b.build().tx_inclusion(ScId{2}, hash_bytes("t3"));
  EXPECT_EQ(decode_canonical<StcInclusion>(encode_canonical(inc)), inc);
}

}  // namespace
}  // namespace sidelink
