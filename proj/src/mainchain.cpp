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

#include "sidelink/mainchain.hpp"

#include "sidelink/error.hpp"

namespace sidelink {

std::string_view to_string(McReject reason) {
  switch (reason) {
    case McReject::UnknownSidechain: return "UnknownSidechain";
    case McReject::SidechainCeased: return "SidechainCeased";
    case McReject::WrongEpoch: return "WrongEpoch";
    case McReject::WindowClosed: return "WindowClosed";
    case McReject::ProofInvalid: return "ProofInvalid";
    case McReject::LowerQuality: return "LowerQuality";
    case McReject::SidechainActive: return "SidechainActive";
    case McReject::NullifierReused: return "NullifierReused";
  }
  return "Unknown";
}

void SidechainRegistration::encode(Writer& w) const {
  w.u32(sc_id.value);
  vk_wcert.encode(w);
  vk_csw.encode(w);
  w.u64(epoch_length);
  w.u64(creation_height);
}

Digest SidechainRegistration::digest() const { return hash_bytes(encode_canonical(*this)); }

Mainchain::Mainchain() {
  MainchainBlock genesis;
  genesis.header = BlockHeader{0, Digest{}, genesis.stc.root()};
  genesis.hash = genesis.header.hash();
  height_by_hash_[genesis.hash] = 0;
  blocks_.push_back(std::move(genesis));
}

ScId Mainchain::register_sidechain(const VerificationKey& vk_wcert, const VerificationKey& vk_csw,
                                   std::uint64_t epoch_length) {
  if (epoch_length < 2) {
    throw ProtocolError(Errc::InvalidParams, "epoch_length must be at least 2, got " + std::to_string(epoch_length));
  }
  ScId id{next_id_++};
  SidechainRegistration reg{id, vk_wcert, vk_csw, epoch_length, tip_height() + 1};
  pending_txs_.emplace_back(id, reg.digest());
  registry_.emplace(id, reg);
  SidechainStatus status;
  status.sc_id = id;
  statuses_.emplace(id, std::move(status));
  return id;
}

McVerdict Mainchain::submit_certificate(const WithdrawalCertificate& cert) {
  auto reg_it = registry_.find(cert.ledger_id);
  if (reg_it == registry_.end()) return McVerdict::reject(McReject::UnknownSidechain);
  const auto& reg = reg_it->second;
  auto& st = statuses_.at(cert.ledger_id);
  if (st.state == ScState::Ceased) return McVerdict::reject(McReject::SidechainCeased);

  std::optional<std::uint64_t> last_accepted;
  if (st.last_cert) last_accepted = st.last_cert->epoch;
  if (!st.pending.empty()) last_accepted = st.pending.rbegin()->first;
  const std::uint64_t next = last_accepted ? *last_accepted + 1 : 0;
  const bool competing = st.pending.count(cert.epoch_id) != 0;
  if (cert.epoch_id != next && !competing) return McVerdict::reject(McReject::WrongEpoch);

  const std::uint64_t height = tip_height() + 1;
  if (height < reg.window_start(cert.epoch_id) || height > reg.window_end(cert.epoch_id)) {
    return McVerdict::reject(McReject::WindowClosed);
  }

  auto input = wcert_public_input(cert, blocks_.at(reg.epoch_end(cert.epoch_id)).hash);
  try {
    if (!verify_wcert(reg.vk_wcert, input, cert.proof)) return McVerdict::reject(McReject::ProofInvalid);
  } catch (const ProtocolError&) {
    return McVerdict::reject(McReject::ProofInvalid);
  }

  if (competing && cert.quality <= st.pending.at(cert.epoch_id).quality) {
    return McVerdict::reject(McReject::LowerQuality);
  }
  st.pending[cert.epoch_id] = cert;
  return McVerdict::ok();
}

McVerdict Mainchain::submit_csw(const CeasedSidechainWithdrawal& csw) {
  auto reg_it = registry_.find(csw.ledger_id);
  if (reg_it == registry_.end()) return McVerdict::reject(McReject::UnknownSidechain);
  auto& st = statuses_.at(csw.ledger_id);
  if (st.state == ScState::Active) return McVerdict::reject(McReject::SidechainActive);
  if (st.used_nullifiers.count(csw.nullifier)) return McVerdict::reject(McReject::NullifierReused);

  auto input = csw_public_input(csw, last_cert_block_hash(csw.ledger_id));
  try {
    if (!verify_csw(reg_it->second.vk_csw, input, csw.proof)) return McVerdict::reject(McReject::ProofInvalid);
  } catch (const ProtocolError&) {
    return McVerdict::reject(McReject::ProofInvalid);
  }
  for (const auto& anchor : csw_proof_anchors(csw.proof)) {
    if (!height_by_hash_.count(anchor)) return McVerdict::reject(McReject::ProofInvalid);
  }

  const Digest digest = csw.digest();
  st.used_nullifiers.insert(csw.nullifier);
  csws_[digest] = AcceptedCsw{csw, std::nullopt};
  csw_by_nullifier_[{csw.ledger_id, csw.nullifier}] = digest;
  pending_txs_.emplace_back(csw.ledger_id, digest);
  pending_csws_.push_back(digest);
  return McVerdict::ok();
}

void Mainchain::finalize_epochs(std::uint64_t height, StcBuilder& stc, std::vector<Digest>& included) {
  for (auto& [sc, st] : statuses_) {
    if (st.state != ScState::Active) continue;
    const auto& reg = registry_.at(sc);
    const std::uint64_t start = reg.creation_height + 1;
    if (height < start || (height - start) % reg.epoch_length != 0) continue;
    const std::uint64_t boundary = (height - start) / reg.epoch_length;
    if (boundary < 2) continue;
    const std::uint64_t epoch = boundary - 2;
    auto it = st.pending.find(epoch);
    if (it == st.pending.end()) {
      st.state = ScState::Ceased;
      st.ceased_at = height;
      st.pending.clear();
      continue;
    }
    const Digest digest = it->second.digest();
    stc.add_certificate(sc, digest);
    included.push_back(digest);
    finalized_[{sc, epoch}] = FinalizedCert{it->second, Digest{}, height};
    st.last_cert = LastCert{epoch, Digest{}, it->second.quality};
    st.pending.erase(it);
  }
}

const MainchainBlock& Mainchain::advance_block() {
  const std::uint64_t height = tip_height() + 1;
  StcBuilder stc;
  MainchainBlock block;
  for (const auto& [sc, digest] : pending_txs_) {
    stc.add_tx(sc, digest);
    block.included.push_back(digest);
  }
  finalize_epochs(height, stc, block.included);

  block.stc = stc.build();
  block.header = BlockHeader{height, blocks_.back().hash, block.stc.root()};
  block.hash = block.header.hash();

  for (auto& [key, fc] : finalized_) {
    if (fc.height == height) {
      fc.block_hash = block.hash;
      statuses_.at(key.first).last_cert->block_hash = block.hash;
    }
  }
  for (const auto& digest : pending_csws_) csws_.at(digest).block_hash = block.hash;
  pending_txs_.clear();
  pending_csws_.clear();

  height_by_hash_[block.hash] = height;
  blocks_.push_back(std::move(block));
  return blocks_.back();
}

const MainchainBlock& Mainchain::block_at(std::uint64_t height) const {
  if (height >= blocks_.size()) throw ProtocolError(Errc::NotFound, "no block at height " + std::to_string(height));
  return blocks_[height];
}

const MainchainBlock& Mainchain::block(const Digest& hash) const {
  auto it = height_by_hash_.find(hash);
  if (it == height_by_hash_.end()) throw ProtocolError(Errc::NotFound, "unknown block " + hash.hex());
  return blocks_[it->second];
}

std::optional<BlockHeader> Mainchain::header_of(const Digest& block_hash) const {
  auto it = height_by_hash_.find(block_hash);
  if (it == height_by_hash_.end()) return std::nullopt;
  return blocks_[it->second].header;
}

const SidechainRegistration& Mainchain::registration(ScId sc) const {
  auto it = registry_.find(sc);
  if (it == registry_.end()) throw ProtocolError(Errc::NotFound, "sidechain " + sc.str());
  return it->second;
}

const SidechainStatus& Mainchain::status(ScId sc) const {
  auto it = statuses_.find(sc);
  if (it == statuses_.end()) throw ProtocolError(Errc::NotFound, "sidechain " + sc.str());
  return it->second;
}

Digest Mainchain::last_cert_block_hash(ScId sc) const {
  const auto& st = status(sc);
  if (st.last_cert) return st.last_cert->block_hash;
  return block_at(registration(sc).creation_height).hash;
}

const FinalizedCert* Mainchain::finalized(ScId sc, std::uint64_t epoch) const {
  auto it = finalized_.find({sc, epoch});
  return it == finalized_.end() ? nullptr : &it->second;
}

const AcceptedCsw* Mainchain::csw_by_nullifier(ScId sc, const Digest& nullifier) const {
  auto it = csw_by_nullifier_.find({sc, nullifier});
  return it == csw_by_nullifier_.end() ? nullptr : &csws_.at(it->second);
}

}  // namespace sidelink
