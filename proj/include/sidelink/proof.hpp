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
#include <optional>
#include <vector>

#include "sidelink/keys.hpp"
#include "sidelink/token.hpp"
#include "sidelink/types.hpp"

namespace sidelink {

/// Mainchain block header; the block hash is hash_bytes(encode(header)).
struct BlockHeader {
  std::uint64_t height = 0;
  Digest parent;
  Digest stc_root;

  bool operator==(const BlockHeader&) const = default;
  void encode(Writer& w) const;
  static BlockHeader decode(Reader& r);
  Digest hash() const;
};

/// Read access to sealed mainchain blocks, used to anchor evidence.
class BlockIndex {
 public:
  virtual ~BlockIndex() = default;
  virtual std::optional<BlockHeader> header_of(const Digest& block_hash) const = 0;
};

// Certificate statement enforced by the mainchain: quality, MH(BTList),
// H(B_last) and MH(proofdata).
struct WcertPublicInput {
  std::uint64_t quality = 0;
  Digest bt_list_root;
  Digest last_block_hash;
  Digest proofdata_root;

  bool operator==(const WcertPublicInput&) const = default;
  void encode(Writer& w) const;
  static WcertPublicInput decode(Reader& r);
  Digest digest() const;
};

WcertPublicInput wcert_public_input(const WithdrawalCertificate& cert, const Digest& last_block_hash);

struct CswPublicInput {
  Digest last_cert_block_hash;
  Digest nullifier;
  PubKey receiver;
  std::uint64_t amount = 0;
  Digest proofdata_root;

  bool operator==(const CswPublicInput&) const = default;
  void encode(Writer& w) const;
  static CswPublicInput decode(Reader& r);
  Digest digest() const;
};

CswPublicInput csw_public_input(const CeasedSidechainWithdrawal& csw, const Digest& last_cert_block_hash);

/// vk_wcert carries the sidechain certifier key; vk_csw carries the ScId.
VerificationKey wcert_vk(const PubKey& certifier);
VerificationKey csw_vk(ScId sc);

/// Commitment to the sorted redeemed-message set: H(u64 count || root).
Digest redeemed_commitment(const std::vector<Digest>& sorted_redeemed);

struct WcertWitness {
  std::uint64_t quality = 0;
  std::vector<Bytes> bt_list;
  std::vector<Digest> proofdata;
  Digest last_block_hash;
  std::vector<Digest> messages;  // message-tree leaves in submission order
  std::vector<Digest> held;      // held-instance digests, sorted
  std::vector<Digest> sent;      // sent-record digests, sorted
  std::vector<Digest> redeemed;  // redeemed message digests, sorted
};

/// Throws ProtocolError(InconsistentWitness) unless proofdata slots 0..3
/// commit messages, held, sent and redeemed.
Proof prove_wcert(const KeyPair& certifier, const WcertWitness& witness);

/// Throws ProtocolError(SchemeMismatch) when the schemes differ.
bool verify_wcert(const VerificationKey& vk, const WcertPublicInput& input, const Proof& proof);

/// Last committed state of a ceased sidechain: the finalized certificate and
/// the block (H(B_w)) that carries it.
struct CommittedStateRef {
  BlockHeader block;
  WithdrawalCertificate cert;
  StcInclusion inclusion;

  bool operator==(const CommittedStateRef&) const = default;
  void encode(Writer& w) const;
  static CommittedStateRef decode(Reader& r);
};

enum class CswKind : std::uint8_t {
  Held = 0,      // entity is a TokenInstance in the committed held set
  Returned = 1,  // entity is a SentRecord; tokens came back in a later message
};

/// Message M_t sent back to the ceased chain, with its commitment evidence.
struct ReturnEvidence {
  CscpMessage message;
  Bytes payload;
  RedeemProof commitment;
  BlockHeader block;  // header of commitment.block_hash

  bool operator==(const ReturnEvidence&) const = default;
  void encode(Writer& w) const;
  static ReturnEvidence decode(Reader& r);
};

struct CswWitness {
  ScId sc;
  CommittedStateRef state;
  std::vector<Digest> held;
  std::vector<Digest> sent;
  std::vector<Digest> redeemed;  // needed for Returned: M_t must be absent
  CswKind kind = CswKind::Held;
  Bytes entity;
  std::optional<CscpMessage> message;
  std::optional<ReturnEvidence> returned;
  PubKey receiver;
  std::uint64_t amount = 0;
};

/// Builds a complete CSW (public fields and proof). Errors:
/// EntityNotInState, MessageMismatch, NotOwner, NoSentRecord,
/// AmountExceedsSent, MessageRedeemed, InconsistentWitness, InvalidParams.
CeasedSidechainWithdrawal prove_csw(const KeyPair& signer, const CswWitness& witness);

bool verify_csw(const VerificationKey& vk, const CswPublicInput& input, const Proof& proof);

/// Block hashes other than H(B_w) that a CSW proof relies on; the mainchain
/// checks them against its own block index. Empty for undecodable proofs.
std::vector<Digest> csw_proof_anchors(const Proof& proof);

/// Public view of a SimMerkle CSW witness bundle, for auditors that
/// re-derive token movements from mainchain postings.
struct CswContents {
  CswKind kind = CswKind::Held;
  std::optional<CscpMessage> message;
  Bytes entity;
  std::optional<ReturnEvidence> returned;
};
std::optional<CswContents> inspect_csw(const Proof& proof);

/// Message commitment check against a known STC root; no payload check.
bool verify_commitment(const CscpMessage& message, const RedeemProof& proof, const Digest& stc_root);

bool verify_redeem(const BlockIndex& index, const CscpMessage& message, ByteView payload,
                   const RedeemProof& proof);

}  // namespace sidelink
