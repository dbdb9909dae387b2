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

#include "sidelink/merkle.hpp"

#include <bit>

#include "sidelink/error.hpp"

namespace sidelink {

Digest leaf_hash(const Digest& leaf) {
  Writer w;
  w.u8(0x00);
  w.digest(leaf);
  return hash_bytes(w.data());
}

Digest node_hash(const Digest& left, const Digest& right) {
  Writer w;
  w.u8(0x01);
  w.digest(left);
  w.digest(right);
  return hash_bytes(w.data());
}

void MerklePath::encode(Writer& w) const {
  w.u64(leaf_index);
  w.list(siblings, [](Writer& out, const PathStep& s) {
    out.digest(s.sibling);
    out.u8(static_cast<std::uint8_t>(s.side));
  });
}

MerklePath MerklePath::decode(Reader& r) {
  MerklePath p;
  p.leaf_index = r.u64();
  p.siblings = r.list<PathStep>([](Reader& in) {
    PathStep s;
    s.sibling = in.digest();
    auto side = in.u8();
    if (side > 1) throw DecodeError("path side out of range");
    s.side = static_cast<Side>(side);
    return s;
  });
  return p;
}

MerkleTree::MerkleTree(std::vector<Digest> leaves) : leaves_(std::move(leaves)), root_(empty_root()) {
  if (leaves_.empty()) return;
  std::size_t width = std::max<std::size_t>(2, std::bit_ceil(leaves_.size()));
  std::vector<Digest> level;
  level.reserve(width);
  for (const auto& leaf : leaves_) level.push_back(leaf_hash(leaf));
  const Digest padding = leaf_hash(empty_root());
  level.resize(width, padding);
  levels_.push_back(std::move(level));
  while (levels_.back().size() > 1) {
    const auto& below = levels_.back();
    std::vector<Digest> above;
    above.reserve(below.size() / 2);
    for (std::size_t i = 0; i < below.size(); i += 2) above.push_back(node_hash(below[i], below[i + 1]));
    levels_.push_back(std::move(above));
  }
  root_ = levels_.back().front();
}

MerklePath MerkleTree::path(std::size_t index) const {
  if (index >= leaves_.size()) {
    throw ProtocolError(Errc::IndexOutOfRange,
                        "leaf " + std::to_string(index) + " of " + std::to_string(leaves_.size()));
  }
  MerklePath p;
  p.leaf_index = index;
  std::size_t pos = index;
  for (std::size_t h = 0; h + 1 < levels_.size(); ++h) {
    bool is_right = (pos & 1) != 0;
    p.siblings.push_back({levels_[h][pos ^ 1], is_right ? Side::Left : Side::Right});
    pos >>= 1;
  }
  return p;
}

std::optional<Digest> fold_path(const Digest& leaf, const MerklePath& path) {
  if (path.siblings.size() >= 64) return std::nullopt;
  if ((path.leaf_index >> path.siblings.size()) != 0) return std::nullopt;
  Digest node = leaf_hash(leaf);
  for (std::size_t h = 0; h < path.siblings.size(); ++h) {
    const auto& step = path.siblings[h];
    bool is_right = ((path.leaf_index >> h) & 1) != 0;
    Side expected = is_right ? Side::Left : Side::Right;
    if (step.side != expected) return std::nullopt;
    node = is_right ? node_hash(step.sibling, node) : node_hash(node, step.sibling);
  }
  return node;
}

bool verify_path(const Digest& root, const Digest& leaf, const MerklePath& path) {
  auto folded = fold_path(leaf, path);
  return folded && *folded == root;
}

}  // namespace sidelink
