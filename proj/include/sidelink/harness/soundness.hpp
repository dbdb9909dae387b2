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

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "sidelink/harness/scenario.hpp"

namespace sidelink::harness {

struct MutationReport {
  std::size_t fixtures = 0;
  std::size_t honest_verified = 0;
  std::size_t mutations = 0;
  std::size_t rejected = 0;
  std::map<std::string, std::size_t> per_target;  // mutations per fixture field
  std::vector<std::string> survivors;             // first accepted mutants, capped

  bool ok() const { return fixtures > 0 && honest_verified == fixtures && rejected == mutations; }
};

/// Replays each scenario, collects every certificate, CSW and redeem proof
/// the mainchain accepted, and flips one bit in every byte of every encoded
/// field (public input, proof body, message, payload, redeem evidence).
/// A mutant counts as rejected when it fails to decode, throws, or fails
/// verification.
MutationReport run_mutation_sweep(const std::vector<Scenario>& scenarios);

}  // namespace sidelink::harness
