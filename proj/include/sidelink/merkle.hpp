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
#include <vector>

#include "sidelink/digest.hpp"
#include "sidelink/encoding.hpp"

namespace sidelink {

// Leaves are hashed as H(0x00 || leaf), internal nodes as H(0x01 || left || right).
Digest leaf_hash(const Digest& leaf);
Digest node_hash(const Digest& left, const Digest& right);

enum class Side : std::uint8_t { Left = 0, Right = 1 };

struct PathStep {
  Digest sibling;
  Side side = Side::Right;  // position of the sibling relative to the running node

  bool operator==(const PathStep&) const = default;
};

/// Inclusion evidence for one leaf; `siblings` runs from the leaf level up.
struct MerklePath {
  std::uint64_t leaf_index = 0;
  std::vector<PathStep> siblings;

  bool operator==(const MerklePath&) const = default;

  void encode(Writer& w) const;
  static MerklePath decode(Reader& r);
};

/// Binary Merkle tree over an ordered digest list. Non-empty trees are
/// padded with `empty_root()` leaves up to max(2, next power of two); the
/// empty tree has root `empty_root()`.
class MerkleTree {
 public:
  MerkleTree() : root_(empty_root()) {}
  explicit MerkleTree(std::vector<Digest> leaves);

  const std::vector<Digest>& leaves() const { return leaves_; }
  const std::vector<std::vector<Digest>>& levels() const { return levels_; }
  const Digest& root() const { return root_; }
  std::size_t height() const { return levels_.empty() ? 0 : levels_.size() - 1; }

  /// Throws ProtocolError(IndexOutOfRange) unless `index` names a real leaf.
  MerklePath path(std::size_t index) const;

 private:
  std::vector<Digest> leaves_;
  std::vector<std::vector<Digest>> levels_;
  Digest root_;
};

inline MerkleTree build_merkle(std::vector<Digest> leaves) { return MerkleTree(std::move(leaves)); }

inline Digest merkle_root(std::vector<Digest> leaves) { return MerkleTree(std::move(leaves)).root(); }

/// Folds `leaf` through `path`; false when the result differs from `root`
/// or when the side flags disagree with `leaf_index`.
bool verify_path(const Digest& root, const Digest& leaf, const MerklePath& path);

/// The node reached by folding `leaf` through `path`, or nullopt when the
/// path is malformed.
std::optional<Digest> fold_path(const Digest& leaf, const MerklePath& path);

}  // namespace sidelink
