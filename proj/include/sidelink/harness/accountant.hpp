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

#include <string>
#include <vector>

#include "sidelink/harness/simulation.hpp"

namespace sidelink::harness {

/// Invariant names used in violations and reports.
inline const std::vector<std::string>& invariant_names() {
  static const std::vector<std::string> names = {
      "conservation", "nft_uniqueness", "issuer_conservation", "return_bound",
      "routing_restriction", "replay_safety", "atomicity",
  };
  return names;
}

/// Global checks over the simulation, re-derived from raw chain data:
/// certified outboxes and archives, redeemed sets, held instances and the
/// mainchain's accepted CSWs. Byzantine chains are opaque: only what they
/// receive from and deliver to honest chains is counted.
///
/// A ceased chain contributes the state committed by its last finalized
/// certificate, less the entities already withdrawn through CSWs.
std::vector<Violation> audit(const Simulation& sim);

}  // namespace sidelink::harness
