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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sidelink/harness/json_codec.hpp"
#include "sidelink/mitto.hpp"

namespace sidelink::harness {

/// One Mitto conformance vector: a pre-state, a send or redeem transaction
/// and the expected verdict. post_state is present only for Accepted.
struct ConformanceVector {
  std::string name;
  std::string operation;  // "send" or "redeem"
  ScId self;
  mitto::MittoRules rules;
  mitto::MittoState pre_state;
  CscpMessage message;
  Bytes payload;
  Signature signature;           // owner (send) or sender (redeem) signature
  Signature receiver_signature;  // redeem only, over redeem_auth_digest
  bool proof_valid = true;       // redeem only: outcome of the commitment check
  std::string expected;          // "Accepted" or "Rejected(<rule>)"
  std::optional<mitto::MittoState> post_state;

  Json to_json() const;
  static ConformanceVector from_json(const Json& j, const std::string& path);
};

struct VectorVerdict {
  std::string verdict;
  std::optional<mitto::MittoState> post_state;
};

/// Runs the rule engine on a vector.
VectorVerdict evaluate(const ConformanceVector& v);

/// Verdict and, for Accepted, post-state both match.
bool reproduces(const ConformanceVector& v, std::string* detail = nullptr);

/// Built-in suite: a Rejected vector for every rule id and Accepted vectors
/// for both operations.
std::vector<ConformanceVector> generate_vectors();

/// Writes one <name>.json per vector; returns the paths written.
std::vector<std::filesystem::path> emit_vectors(const std::filesystem::path& dir);
/// Loads every *.json in `dir`, sorted by file name. Throws ParseError.
std::vector<ConformanceVector> load_vectors(const std::filesystem::path& dir);

}  // namespace sidelink::harness
