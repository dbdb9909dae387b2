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
#include <string>
#include <variant>
#include <vector>

#include "sidelink/digest.hpp"
#include "sidelink/encoding.hpp"
#include "sidelink/ids.hpp"
#include "sidelink/merkle.hpp"
#include "sidelink/stc.hpp"

namespace sidelink {

/// Registered message types. 0 is reserved as invalid; values outside the
/// registry are representable so that unknown types can be rejected.
enum class MsgType : std::uint32_t { TokenTransfer = 1 };

enum class ProofScheme : std::uint8_t { SimMerkle = 1 };

struct VerificationKey {
  ProofScheme scheme = ProofScheme::SimMerkle;
  Bytes params;

  bool operator==(const VerificationKey&) const = default;
  void encode(Writer& w) const;
  static VerificationKey decode(Reader& r);
};

struct Proof {
  ProofScheme scheme = ProofScheme::SimMerkle;
  Bytes body;

  bool operator==(const Proof&) const = default;
  void encode(Writer& w) const;
  static Proof decode(Reader& r);
};

struct CscpMessage {
  ScId sending_sc;
  ScId receiving_sc;
  MsgType msg_type = MsgType::TokenTransfer;
  PubKey sender;
  PubKey receiver;
  Digest payload_hash;

  bool operator==(const CscpMessage&) const = default;
  void encode(Writer& w) const;
  static CscpMessage decode(Reader& r);
};

/// hash_bytes(encode(m)); the leaf value of the message tree.
Digest message_digest(const CscpMessage& m);

/// Index of the message-tree root inside certificate proofdata, and of the
/// embedded message digest inside CSW proofdata.
inline constexpr std::size_t kMessageSlot = 0;
/// Certificate proofdata slots committing the sidechain state.
inline constexpr std::size_t kHeldRootSlot = 1;
inline constexpr std::size_t kSentRootSlot = 2;
inline constexpr std::size_t kRedeemedSlot = 3;

struct WithdrawalCertificate {
  ScId ledger_id;
  std::uint64_t epoch_id = 0;
  std::uint64_t quality = 0;
  std::vector<Bytes> bt_list;
  std::vector<Digest> proofdata;
  Proof proof;

  bool operator==(const WithdrawalCertificate&) const = default;
  void encode(Writer& w) const;
  static WithdrawalCertificate decode(Reader& r);
  Digest digest() const;
};

struct CeasedSidechainWithdrawal {
  ScId ledger_id;
  PubKey receiver;
  std::uint64_t amount = 0;
  Digest nullifier;
  std::vector<Digest> proofdata;
  Proof proof;

  bool operator==(const CeasedSidechainWithdrawal&) const = default;
  void encode(Writer& w) const;
  static CeasedSidechainWithdrawal decode(Reader& r);
  Digest digest() const;
};

/// Merkle root over backward-transfer leaves (each leaf is hash_bytes(entry)).
Digest bt_list_root(const std::vector<Bytes>& bt_list);

enum class SourceKind : std::uint8_t { Certificate = 0, Csw = 1 };

using Posting = std::variant<WithdrawalCertificate, CeasedSidechainWithdrawal>;

/// Evidence that a message is committed by a mainchain-confirmed posting of
/// its sending sidechain.
struct RedeemProof {
  SourceKind source_kind = SourceKind::Certificate;
  Posting source;
  MerklePath msg_path;  // empty for CSW sources
  Digest msg_tree_root;
  StcInclusion commitment;
  Digest block_hash;

  bool operator==(const RedeemProof&) const = default;
  void encode(Writer& w) const;
  static RedeemProof decode(Reader& r);
};

struct SendTx {
  CscpMessage message;
  Bytes payload;
  Signature signature;  // by message.sender over message_digest(message)

  bool operator==(const SendTx&) const = default;
};

struct RedeemTx {
  CscpMessage message;
  Bytes payload;
  RedeemProof proof;
  Signature sender_signature;    // the original send authorization
  Signature receiver_signature;  // by message.receiver over redeem_auth_digest

  bool operator==(const RedeemTx&) const = default;
};

struct CswRef {
  ScId sc;
  Digest nullifier;

  bool operator==(const CswRef&) const = default;
};

struct CswRedeemTx {
  CscpMessage message;
  Bytes payload;
  RedeemProof proof;
  CswRef csw_ref;
  Signature sender_signature;
  Signature receiver_signature;

  bool operator==(const CswRedeemTx&) const = default;
};

/// Digest a receiver signs to authorize redeeming: H(encode(msg) || payload).
Digest redeem_auth_digest(const CscpMessage& m, ByteView payload);

/// Nullifier binding a CSW claim to one entity: H(encode(sc) || entity).
Digest csw_nullifier(ScId sc, const Digest& entity);

/// Canonical encoding of any type exposing `encode(Writer&)`.
template <class T>
Bytes encode_canonical(const T& value) {
  Writer w;
  value.encode(w);
  return std::move(w).take();
}

/// Strict decode of a complete canonical encoding.
template <class T>
T decode_canonical(ByteView bytes) {
  Reader r(bytes);
  T value = T::decode(r);
  r.finish();
  return value;
}

}  // namespace sidelink
