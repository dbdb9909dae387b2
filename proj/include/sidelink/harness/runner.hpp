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
#include <string>
#include <vector>

#include "sidelink/harness/scenario.hpp"
#include "sidelink/harness/simulation.hpp"

namespace sidelink::harness {

struct Failure {
  std::size_t step = 0;
  std::string label;
  std::string kind;  // "expect", "assert", "invariant" or "missing_violation"
  std::string invariant;
  std::string detail;
  std::vector<std::string> trace;
};

struct RunReport {
  std::string scenario;
  std::uint64_t seed = 0;
  std::vector<StepResult> steps;
  std::map<std::string, std::size_t> violations;  // per invariant, every invariant listed
  std::size_t redeem_replays = 0;
  std::size_t csw_replays = 0;
  std::optional<Failure> failure;
  std::string result;  // "pass", "fail" or "expected_violation"
  std::vector<std::pair<std::string, std::string>> final_digests;
  Json final_dump;

  bool ok() const { return result != "fail"; }
  /// Deterministic report document; excludes the state dump.
  Json to_json() const;
};

/// Executes every step on a fresh simulation, stopping at the first failed
/// expectation, assertion or invariant.
RunReport run_scenario(const Scenario& scenario);

}  // namespace sidelink::harness
