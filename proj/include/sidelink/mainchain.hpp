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
#include <map>
#include <optional>
#include <set>
#include <string_view>
#include <utility>
#include <vector>

#include "sidelink/proof.hpp"
#include "sidelink/stc.hpp"
#include "sidelink/types.hpp"

namespace sidelink {

struct SidechainRegistration {
  ScId sc_id;
  VerificationKey vk_wcert;
  VerificationKey vk_csw;
  std::uint64_t epoch_length = 0;
  std::uint64_t creation_height = 0;

  bool operator==(const SidechainRegistration&) const = default;
  void encode(Writer& w) const;
  Digest digest() const;

  // Epoch e spans [start + e*L, start + (e+1)*L - 1] with start = creation_height + 1.
  std::uint64_t epoch_start(std::uint64_t epoch) const { return creation_height + 1 + epoch * epoch_length; }
  std::uint64_t epoch_end(std::uint64_t epoch) const { return epoch_start(epoch + 1) - 1; }
  // Certificates for epoch e are accepted for inclusion heights inside epoch e+1.
  std::uint64_t window_start(std::uint64_t epoch) const { return epoch_start(epoch + 1); }
  std::uint64_t window_end(std::uint64_t epoch) const { return epoch_end(epoch + 1); }
  // Finalization (or ceasing) happens in the first block after the window.
  std::uint64_t finalization_height(std::uint64_t epoch) const { return window_end(epoch) + 1; }
};

struct MainchainBlock {
  BlockHeader header;
  Digest hash;
  StcTree stc;
  std::vector<Digest> included;  // registrations, certificates, CSWs in inclusion order
};

enum class ScState { Active, Ceased };

struct LastCert {
  std::uint64_t epoch = 0;
  Digest block_hash;
  std::uint64_t quality = 0;
  bool operator==(const LastCert&) const = default;
};

struct SidechainStatus {
  ScId sc_id;
  ScState state = ScState::Active;
  std::optional<LastCert> last_cert;
  std::map<std::uint64_t, WithdrawalCertificate> pending;  // best valid submission per epoch
  std::set<Digest> used_nullifiers;
  std::optional<std::uint64_t> ceased_at;
};

enum class McReject {
  UnknownSidechain,
  SidechainCeased,
  WrongEpoch,
  WindowClosed,
  ProofInvalid,
  LowerQuality,
  SidechainActive,
  NullifierReused,
};

std::string_view to_string(McReject reason);

struct McVerdict {
  std::optional<McReject> rejection;

  bool accepted() const { return !rejection; }
  static McVerdict ok() { return {}; }
  static McVerdict reject(McReject r) { return {r}; }
};

struct FinalizedCert {
  WithdrawalCertificate cert;
  Digest block_hash;
  std::uint64_t height = 0;
};

struct AcceptedCsw {
  CeasedSidechainWithdrawal csw;
  std::optional<Digest> block_hash;  // set once sealed
};

/// Single-writer simulated mainchain. Submissions target the next block
/// (height tip + 1).
class Mainchain : public BlockIndex {
 public:
  Mainchain();

  ScId next_sc_id() const { return ScId{next_id_}; }
  /// Throws ProtocolError(InvalidParams) if epoch_length < 2.
  ScId register_sidechain(const VerificationKey& vk_wcert, const VerificationKey& vk_csw,
                          std::uint64_t epoch_length);

  McVerdict submit_certificate(const WithdrawalCertificate& cert);
  McVerdict submit_csw(const CeasedSidechainWithdrawal& csw);
  const MainchainBlock& advance_block();

  std::uint64_t tip_height() const { return blocks_.size() - 1; }
  const MainchainBlock& tip() const { return blocks_.back(); }
  const std::vector<MainchainBlock>& blocks() const { return blocks_; }
  /// Throws ProtocolError(NotFound).
  const MainchainBlock& block_at(std::uint64_t height) const;
  const MainchainBlock& block(const Digest& hash) const;
  std::optional<BlockHeader> header_of(const Digest& block_hash) const override;

  const SidechainRegistration& registration(ScId sc) const;
  const SidechainStatus& status(ScId sc) const;
  bool is_registered(ScId sc) const { return registry_.count(sc) != 0; }
  bool is_ceased(ScId sc) const { return status(sc).state == ScState::Ceased; }
  const std::map<ScId, SidechainRegistration>& registry() const { return registry_; }
  const std::map<ScId, SidechainStatus>& statuses() const { return statuses_; }

  /// H(B_w): block of the last finalized certificate, else the registration block.
  Digest last_cert_block_hash(ScId sc) const;
  const FinalizedCert* finalized(ScId sc, std::uint64_t epoch) const;
  const AcceptedCsw* csw_by_nullifier(ScId sc, const Digest& nullifier) const;
  const std::map<Digest, AcceptedCsw>& csws() const { return csws_; }

 private:
  void finalize_epochs(std::uint64_t height, StcBuilder& stc, std::vector<Digest>& included);

  std::vector<MainchainBlock> blocks_;
  std::map<Digest, std::uint64_t> height_by_hash_;
  std::uint32_t next_id_ = 1;
  std::map<ScId, SidechainRegistration> registry_;
  std::map<ScId, SidechainStatus> statuses_;
  std::map<std::pair<ScId, std::uint64_t>, FinalizedCert> finalized_;
  std::map<Digest, AcceptedCsw> csws_;
  std::map<std::pair<ScId, Digest>, Digest> csw_by_nullifier_;
  std::vector<std::pair<ScId, Digest>> pending_txs_;
  std::vector<Digest> pending_csws_;
};

}  // namespace sidelink
