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

#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "sidelink/ids.hpp"
#include "sidelink/merkle.hpp"

namespace sidelink {

/// Sidechain-related postings of one mainchain block for one sidechain.
struct StcEntry {
  std::optional<Digest> wcert;  // finalized certificate digest, at most one
  std::vector<Digest> txs;      // CSW / registration digests in inclusion order
};

/// Evidence that a posting digest is committed under a block's STC root.
/// A certificate is the left child of its sidechain node; a transaction is
/// a leaf of the right child (the TxsHash subtree).
struct StcInclusion {
  bool is_certificate = false;
  MerklePath tx_path;  // unused (empty) for certificates
  Digest sibling;      // TxsHash for certificates, WCertHash slot for transactions
  MerklePath sc_path;  // sidechain node into the STC root

  bool operator==(const StcInclusion&) const = default;

  void encode(Writer& w) const;
  static StcInclusion decode(Reader& r);
};

/// Sidechain transactions commitment: one node per sidechain,
/// H(WCertHash || TxsHash), combined in ascending ScId order.
class StcTree {
 public:
  /// Multi-certificate input is not representable with `StcEntry`; callers
  /// assembling entries from raw postings use `StcBuilder`.
  explicit StcTree(std::map<ScId, StcEntry> entries);
  StcTree() : StcTree(std::map<ScId, StcEntry>{}) {}

  const Digest& root() const { return tree_.root(); }
  const std::map<ScId, StcEntry>& entries() const { return entries_; }

  /// Node h_2X for sidechain `sc`.
  Digest sidechain_hash(ScId sc) const;

  /// Throws ProtocolError(NotFound) if the sidechain has no certificate here.
  StcInclusion certificate_inclusion(ScId sc) const;
  /// Throws ProtocolError(NotFound) if `tx` is not among the sidechain's txs.
  StcInclusion tx_inclusion(ScId sc, const Digest& tx) const;

 private:
  std::size_t position(ScId sc) const;

  std::map<ScId, StcEntry> entries_;
  std::map<ScId, MerkleTree> txs_trees_;
  MerkleTree tree_;
};

/// Accumulates postings for one block; rejects a second certificate for the
/// same sidechain with ProtocolError(DuplicateCertificate).
class StcBuilder {
 public:
  void add_certificate(ScId sc, const Digest& cert);
  void add_tx(ScId sc, const Digest& tx);
  StcTree build() const { return StcTree(entries_); }
  const std::map<ScId, StcEntry>& entries() const { return entries_; }

 private:
  std::map<ScId, StcEntry> entries_;
};

Digest sidechain_node(const std::optional<Digest>& wcert, const Digest& txs_root);

bool verify_stc_inclusion(const Digest& stc_root, const Digest& item, const StcInclusion& inclusion);

}  // namespace sidelink
