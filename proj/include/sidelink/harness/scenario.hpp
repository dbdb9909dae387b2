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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sidelink/harness/json_codec.hpp"
#include "sidelink/mitto.hpp"

namespace sidelink::harness {

struct IssueSpec {
  std::string token;
  bool fungible = true;
  std::uint64_t value = 0;  // amount for fungible names, token id otherwise
  std::string owner;        // user name
  std::string as;           // token handle; defaults to <chain>#<index>
};

struct ChainSpec {
  std::string name;
  std::uint64_t epoch_length = 4;
  bool byzantine = false;
  bool notify_issuer = false;  // issuer-notification design
  mitto::MittoRules rules;
  bool auto_close = true;
  std::vector<IssueSpec> issue;
};

struct Step {
  std::string label;
  std::string action;
  Json args = Json::object();
  std::optional<std::string> expect;
};

struct Scenario {
  std::string name;
  std::uint64_t seed = 0;
  std::vector<ChainSpec> chains;
  std::vector<Step> steps;
  // Invariant the scenario exists to break (faulty designs); the run passes
  // only if this is the first violation.
  std::optional<std::string> expect_violation;
};

inline const std::vector<std::string>& action_names() {
  static const std::vector<std::string> names = {
      "issue", "split",      "merge", "send", "forge_send", "close_epoch", "advance", "go_silent",
      "cease", "redeem",     "csw",   "csw_redeem", "assert",
  };
  return names;
}

/// Faulty-mode names accepted in chain specs.
inline const std::vector<std::string>& faulty_mode_names() {
  static const std::vector<std::string> names = {"no_sent_records", "no_receiver", "issuer_notification"};
  return names;
}

/// Throws ParseError naming the offending field (and line for syntax errors).
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::filesystem::path& path);

Json to_json(const Scenario& scenario);

}  // namespace sidelink::harness
