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

#include "sidelink/stc.hpp"

#include <algorithm>

#include "sidelink/error.hpp"

namespace sidelink {

void StcInclusion::encode(Writer& w) const {
  w.boolean(is_certificate);
  tx_path.encode(w);
  w.digest(sibling);
  sc_path.encode(w);
}

StcInclusion StcInclusion::decode(Reader& r) {
  StcInclusion inc;
  inc.is_certificate = r.boolean();
  inc.tx_path = MerklePath::decode(r);
  inc.sibling = r.digest();
  inc.sc_path = MerklePath::decode(r);
  return inc;
}

Digest sidechain_node(const std::optional<Digest>& wcert, const Digest& txs_root) {
  return node_hash(wcert.value_or(empty_root()), txs_root);
}

StcTree::StcTree(std::map<ScId, StcEntry> entries) : entries_(std::move(entries)) {
  std::vector<Digest> nodes;
  nodes.reserve(entries_.size());
  for (const auto& [sc, entry] : entries_) {
    auto [it, _] = txs_trees_.emplace(sc, MerkleTree(entry.txs));
    nodes.push_back(sidechain_node(entry.wcert, it->second.root()));
  }
  tree_ = MerkleTree(std::move(nodes));
}

std::size_t StcTree::position(ScId sc) const {
  auto it = entries_.find(sc);
  if (it == entries_.end()) throw ProtocolError(Errc::NotFound, "sidechain " + sc.str() + " not in STC");
  return static_cast<std::size_t>(std::distance(entries_.begin(), it));
}

Digest StcTree::sidechain_hash(ScId sc) const {
  position(sc);
  return sidechain_node(entries_.at(sc).wcert, txs_trees_.at(sc).root());
}

StcInclusion StcTree::certificate_inclusion(ScId sc) const {
  auto pos = position(sc);
  const auto& entry = entries_.at(sc);
  if (!entry.wcert) throw ProtocolError(Errc::NotFound, "no certificate for sidechain " + sc.str());
  StcInclusion inc;
  inc.is_certificate = true;
  inc.sibling = txs_trees_.at(sc).root();
  inc.sc_path = tree_.path(pos);
  return inc;
}

StcInclusion StcTree::tx_inclusion(ScId sc, const Digest& tx) const {
  auto pos = position(sc);
  const auto& entry = entries_.at(sc);
  auto it = std::find(entry.txs.begin(), entry.txs.end(), tx);
  if (it == entry.txs.end()) throw ProtocolError(Errc::NotFound, "tx not committed for sidechain " + sc.str());
  StcInclusion inc;
  inc.is_certificate = false;
  inc.tx_path = txs_trees_.at(sc).path(static_cast<std::size_t>(std::distance(entry.txs.begin(), it)));
  inc.sibling = entry.wcert.value_or(empty_root());
  inc.sc_path = tree_.path(pos);
  return inc;
}

void StcBuilder::add_certificate(ScId sc, const Digest& cert) {
  auto& entry = entries_[sc];
  if (entry.wcert) throw ProtocolError(Errc::DuplicateCertificate, "second certificate for sidechain " + sc.str());
  entry.wcert = cert;
}

void StcBuilder::add_tx(ScId sc, const Digest& tx) { entries_[sc].txs.push_back(tx); }

bool verify_stc_inclusion(const Digest& stc_root, const Digest& item, const StcInclusion& inc) {
  Digest sc_node;
  if (inc.is_certificate) {
    if (inc.tx_path != MerklePath{}) return false;
    sc_node = node_hash(item, inc.sibling);
  } else {
    auto txs_root = fold_path(item, inc.tx_path);
    if (!txs_root) return false;
    sc_node = node_hash(inc.sibling, *txs_root);
  }
  return verify_path(stc_root, sc_node, inc.sc_path);
}

}  // namespace sidelink
