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
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sidelink/cscp.hpp"
#include "sidelink/harness/scenario.hpp"
#include "sidelink/mainchain.hpp"
#include "sidelink/mitto_withdraw.hpp"

namespace sidelink::harness {

struct ChainRuntime {
  ChainSpec spec;
  std::unique_ptr<Sidechain> sc;
  bool silent = false;
};

/// Token handle: an instance and the chain expected to hold it.
struct TokenLoc {
  std::size_t chain = 0;
  TokenInstance ti;
};

struct MessageRec {
  std::size_t from = 0;
  SendTx tx;
};

struct CswRec {
  std::size_t chain = 0;
  mitto::Withdrawal withdrawal;
};

/// Issuer-side bookkeeping event of the issuer-notification design.
struct Notification {
  std::size_t issuer = 0;
  ScId from;
  ScId to;
  TokenInstance ti;
};

struct Violation {
  std::string invariant;
  std::string detail;
};

struct StepResult {
  std::size_t index = 0;
  std::string label;
  std::string action;
  std::string outcome;
  std::optional<std::string> expect;
  bool matched = true;
  std::optional<std::string> probe;  // outcome of the automatic replay attempt
  std::optional<std::string> assert_failure;
  std::vector<Violation> violations;

  std::string trace_line() const;
};

/// Fresh mainchain plus the scenario's sidechains. Registration is sealed
/// and initial issuances applied by the constructor.
class Simulation {
 public:
  explicit Simulation(const Scenario& scenario);
  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  /// Runs one step, then the replay probe, the atomicity check and the
  /// accountant.
  StepResult execute(const Step& step, std::size_t index);

  const Mainchain& mainchain() const { return mc_; }
  const std::vector<ChainRuntime>& chains() const { return chains_; }
  std::size_t chain_index(const std::string& name) const;
  std::optional<std::size_t> chain_by_id(ScId id) const;
  bool honest(std::size_t chain) const { return !chains_[chain].spec.byzantine; }

  const std::map<std::string, TokenLoc>& tokens() const { return tokens_; }
  const std::map<std::string, MessageRec>& messages() const { return messages_; }
  const std::map<std::string, CswRec>& csws() const { return csws_; }
  const std::vector<Notification>& notifications() const { return notifications_; }
  const mitto::TokenRegistry& registry() const { return registry_; }

  const KeyPair& user(const std::string& name);
  /// Name of a user key created so far; the hex key otherwise.
  std::string user_name(const PubKey& key) const;

  /// Digest of mainchain bookkeeping: tip, sidechain statuses, accepted CSWs.
  Digest mainchain_digest() const;
  /// Deterministic JSON dump of the mainchain view and every sidechain.
  Json dump() const;

 private:
  std::string run(const Step& step, StepResult& result);
  TokenLoc token_at(const std::string& handle) const;
  std::string do_issue(const Json& args);
  std::string do_send(const Json& args, std::size_t index);
  std::string do_forge(const Json& args, std::size_t index);
  std::string do_close(const Json& args);
  std::string do_redeem(const Json& args, std::size_t index, StepResult& result);
  std::string do_csw(const Json& args, std::size_t index, StepResult& result);
  std::string do_csw_redeem(const Json& args, std::size_t index, StepResult& result);
  std::string do_assert(const Json& args, StepResult& result);
  std::string do_cease(const Json& args);

  void seal_block();
  void auto_close();
  Digest next_nonce(std::string_view tag);
  std::vector<Digest> chain_digests() const;

  Mainchain mc_;
  mitto::TokenRegistry registry_;
  std::vector<ChainRuntime> chains_;
  std::map<std::string, TokenLoc> tokens_;
  std::map<std::string, MessageRec> messages_;
  std::map<std::string, CswRec> csws_;
  std::vector<Notification> notifications_;
  std::map<std::string, KeyPair> users_;
  std::map<PubKey, std::string> user_names_;
  std::uint64_t nonce_ = 0;
};

/// Line-per-difference comparison of two dumps; empty iff equal.
std::vector<std::string> diff_json(const Json& a, const Json& b, const std::string& path = "");

}  // namespace sidelink::harness
