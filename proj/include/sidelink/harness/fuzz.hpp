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
#include <string>
#include <vector>

#include "sidelink/harness/runner.hpp"

namespace sidelink::harness {

struct FuzzOptions {
  std::size_t traces = 0;
  std::uint64_t seed = 0;
  std::size_t steps_per_trace = 40;
};

struct FuzzReport {
  std::size_t traces = 0;
  std::uint64_t seed = 0;
  std::size_t steps = 0;
  std::size_t sends_accepted = 0;
  std::size_t forged = 0;
  std::size_t redeems_accepted = 0;
  std::size_t byzantine_redeems_rejected = 0;
  std::size_t csws_accepted = 0;
  std::size_t third_party_sends = 0;     // foreign token sent to a non-issuer
  std::size_t third_party_rejected_r2 = 0;
  std::size_t replay_probes = 0;
  std::map<std::string, std::size_t> violations;
  std::vector<Failure> failures;  // first failure of each failing trace, capped

  bool ok() const;
  Json to_json() const;
};

/// Runs `options.traces` random action sequences over the scenario's chain
/// layout (its steps are ignored) and checks the global invariants after
/// every step. Traces are derived from the seed alone.
FuzzReport run_fuzz(const Scenario& base, const FuzzOptions& options);

}  // namespace sidelink::harness
