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

#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "sidelink/mitto.hpp"
#include "sidelink/token.hpp"
#include "sidelink/types.hpp"

namespace sidelink::harness {

using Json = nlohmann::json;

/// Malformed input document. `field` is a dotted path such as
/// "steps[3].args.from"; `line` is 1-based, 0 when unknown.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string field, const std::string& detail, std::size_t line = 0);

  const std::string& field() const noexcept { return field_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string field_;
  std::size_t line_;
};

/// Typed field access that reports the failing path.
const Json& require(const Json& obj, const std::string& key, const std::string& path);
std::string get_string(const Json& obj, const std::string& key, const std::string& path);
std::uint64_t get_u64(const Json& obj, const std::string& key, const std::string& path);
bool get_bool(const Json& obj, const std::string& key, const std::string& path);
Digest get_digest(const Json& obj, const std::string& key, const std::string& path);
Bytes get_hex(const Json& obj, const std::string& key, const std::string& path);

Json to_json(const TokenInstance& ti);
TokenInstance token_from_json(const Json& j, const std::string& path);

Json to_json(const SentRecord& sr);
SentRecord sent_from_json(const Json& j, const std::string& path);

Json to_json(const CscpMessage& m);
CscpMessage message_from_json(const Json& j, const std::string& path);

Json to_json(const mitto::MittoRules& rules);
mitto::MittoRules rules_from_json(const Json& j, const std::string& path);

/// {"s_tks": [...], "s_sent": [...], "issued": {...}}; lists in key order.
Json to_json(const mitto::MittoState& state);
mitto::MittoState state_from_json(const Json& j, const std::string& path);

}  // namespace sidelink::harness
