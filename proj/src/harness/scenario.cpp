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

#include "sidelink/harness/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace sidelink::harness {

namespace {

std::size_t line_of(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<long>(byte), '\n'));
}

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

// Keys each action accepts; the first group is mandatory.
struct ArgSchema {
  std::vector<std::string> required;
  std::vector<std::string> optional;
};

const std::map<std::string, ArgSchema>& schemas() {
  static const std::map<std::string, ArgSchema> table = {
      {"issue", {{"chain", "token", "owner"}, {"fungible", "amount", "id", "as"}}},
      {"split", {{"token", "first", "as"}, {}}},
      {"merge", {{"a", "b", "as"}, {}}},
      {"send", {{"token", "to", "receiver"}, {"as", "signer"}}},
      {"forge_send", {{"from", "to", "token", "receiver"}, {"as"}}},
      {"close_epoch", {{"chain"}, {"quality", "submit"}}},
      {"advance", {{"blocks"}, {}}},
      {"go_silent", {{"chain"}, {}}},
      {"cease", {{"chain"}, {}}},
      {"redeem", {{"message"}, {"chain", "signer", "as"}}},
      {"csw", {{"kind", "chain", "receiver"}, {"token", "target", "message", "holder", "as", "signer"}}},
      {"csw_redeem", {{"csw"}, {"chain", "signer", "as"}}},
      {"assert", {{"chain"}, {"held", "sent", "status"}}},
  };
  return table;
}

// Tracks declared names so that references can be checked in step order.
struct Scope {
  std::map<std::string, bool> chains;  // name -> byzantine
  std::set<std::string> tokens;
  std::set<std::string> messages;
  std::set<std::string> csws;
};

void check_chain(const Scope& scope, const Json& args, const std::string& key, const std::string& path) {
  auto name = get_string(args, key, path);
  if (!scope.chains.count(name)) throw ParseError(path + "." + key, "undeclared chain '" + name + "'");
}

void check_handle(const std::set<std::string>& defined, const Json& args, const std::string& key,
                  const std::string& path, const char* what) {
  auto name = get_string(args, key, path);
  if (!defined.count(name)) throw ParseError(path + "." + key, std::string("undefined ") + what + " '" + name + "'");
}

void define(std::set<std::string>& defined, const Json& args, const std::string& key, const std::string& path) {
  if (!args.contains(key)) return;
  defined.insert(get_string(args, key, path));
}

void validate_step(Scope& scope, const Step& step, const std::string& path) {
  const auto& args = step.args;
  const auto apath = path + ".args";
  if (!args.is_object()) throw ParseError(apath, "expected an object");
  const auto& schema = schemas().at(step.action);
  for (const auto& key : schema.required) require(args, key, apath);
  for (const auto& [key, _] : args.items()) {
    if (!contains(schema.required, key) && !contains(schema.optional, key)) {
      throw ParseError(apath + "." + key, "unknown argument for action '" + step.action + "'");
    }
  }
  const auto& a = step.action;
  if (a == "issue") {
    check_chain(scope, args, "chain", apath);
    bool fungible = args.contains("fungible") ? get_bool(args, "fungible", apath) : true;
    get_u64(args, fungible ? "amount" : "id", apath);
    define(scope.tokens, args, "as", apath);
  } else if (a == "split") {
    check_handle(scope.tokens, args, "token", apath, "token");
    get_u64(args, "first", apath);
    const auto& as = args.at("as");
    if (!as.is_array() || as.size() != 2 || !as[0].is_string() || !as[1].is_string()) {
      throw ParseError(apath + ".as", "expected two token handles");
    }
    scope.tokens.insert(as[0].get<std::string>());
    scope.tokens.insert(as[1].get<std::string>());
  } else if (a == "merge") {
    check_handle(scope.tokens, args, "a", apath, "token");
    check_handle(scope.tokens, args, "b", apath, "token");
    define(scope.tokens, args, "as", apath);
  } else if (a == "send") {
    check_handle(scope.tokens, args, "token", apath, "token");
    check_chain(scope, args, "to", apath);
    get_string(args, "receiver", apath);
    define(scope.messages, args, "as", apath);
  } else if (a == "forge_send") {
    check_chain(scope, args, "from", apath);
    if (!scope.chains.at(get_string(args, "from", apath))) {
      throw ParseError(apath + ".from", "only byzantine chains can forge");
    }
    check_chain(scope, args, "to", apath);
    const auto& t = args.at("token");
    const auto tpath = apath + ".token";
    get_string(t, "name", tpath);
    bool fungible = t.contains("fungible") ? get_bool(t, "fungible", tpath) : true;
    get_u64(t, fungible ? "amount" : "id", tpath);
    check_chain(scope, t, "issuer", tpath);
    get_string(t, "owner", tpath);
    define(scope.messages, args, "as", apath);
  } else if (a == "close_epoch" || a == "go_silent" || a == "cease" || a == "assert") {
    check_chain(scope, args, "chain", apath);
    if (a == "assert" && args.contains("status")) {
      auto s = get_string(args, "status", apath);
      if (s != "Active" && s != "Ceased") throw ParseError(apath + ".status", "expected Active or Ceased");
    }
  } else if (a == "advance") {
    get_u64(args, "blocks", apath);
  } else if (a == "redeem") {
    check_handle(scope.messages, args, "message", apath, "message");
    if (args.contains("chain")) check_chain(scope, args, "chain", apath);
    define(scope.tokens, args, "as", apath);
  } else if (a == "csw") {
    auto kind = get_string(args, "kind", apath);
    check_chain(scope, args, "chain", apath);
    if (kind == "held") {
      check_handle(scope.tokens, args, "token", apath, "token");
      check_chain(scope, args, "target", apath);
    } else if (kind == "foreign") {
      check_handle(scope.tokens, args, "token", apath, "token");
      if (args.contains("target")) check_chain(scope, args, "target", apath);
    } else if (kind == "sent") {
      check_handle(scope.messages, args, "message", apath, "message");
      check_chain(scope, args, "holder", apath);
      check_chain(scope, args, "target", apath);
    } else {
      throw ParseError(apath + ".kind", "expected held, foreign or sent");
    }
    define(scope.csws, args, "as", apath);
  } else if (a == "csw_redeem") {
    check_handle(scope.csws, args, "csw", apath, "csw");
    if (args.contains("chain")) check_chain(scope, args, "chain", apath);
    define(scope.tokens, args, "as", apath);
  }
}

ChainSpec parse_chain(const Json& j, const std::string& path) {
  ChainSpec c;
  c.name = get_string(j, "name", path);
  if (j.contains("epoch_length")) c.epoch_length = get_u64(j, "epoch_length", path);
  if (c.epoch_length < 2) throw ParseError(path + ".epoch_length", "must be at least 2");
  if (j.contains("byzantine")) c.byzantine = get_bool(j, "byzantine", path);
  if (j.contains("auto_close")) c.auto_close = get_bool(j, "auto_close", path);
  if (j.contains("faulty_modes")) {
    const auto& modes = j.at("faulty_modes");
    if (!modes.is_array()) throw ParseError(path + ".faulty_modes", "expected an array");
    for (std::size_t i = 0; i < modes.size(); ++i) {
      auto mpath = path + ".faulty_modes[" + std::to_string(i) + "]";
      if (!modes[i].is_string() || !contains(faulty_mode_names(), modes[i].get<std::string>())) {
        throw ParseError(mpath, "unknown faulty mode");
      }
      auto m = modes[i].get<std::string>();
      if (m == "no_sent_records") c.rules.sent_records = false;
      if (m == "no_receiver") c.rules.sent_record_receiver = false;
      if (m == "issuer_notification") {
        c.rules.restrict_routing = false;
        c.notify_issuer = true;
      }
    }
  }
  if (j.contains("issue")) {
    const auto& list = j.at("issue");
    if (!list.is_array()) throw ParseError(path + ".issue", "expected an array");
    for (std::size_t i = 0; i < list.size(); ++i) {
      auto ipath = path + ".issue[" + std::to_string(i) + "]";
      IssueSpec is;
      is.token = get_string(list[i], "token", ipath);
      if (list[i].contains("fungible")) is.fungible = get_bool(list[i], "fungible", ipath);
      is.value = get_u64(list[i], is.fungible ? "amount" : "id", ipath);
      is.owner = get_string(list[i], "owner", ipath);
      is.as = list[i].contains("as") ? get_string(list[i], "as", ipath) : c.name + "#" + std::to_string(i);
      c.issue.push_back(std::move(is));
    }
  }
  for (const auto& [key, _] : j.items()) {
    static const std::vector<std::string> known = {"name", "epoch_length", "byzantine", "auto_close", "faulty_modes",
                                                   "issue"};
    if (!contains(known, key)) throw ParseError(path + "." + key, "unknown chain field");
  }
  return c;
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError("", e.what(), line_of(text, e.byte == 0 ? 0 : e.byte - 1));
  }
  Scenario s;
  s.name = get_string(doc, "name", "");
  s.seed = doc.contains("seed") ? get_u64(doc, "seed", "") : 0;
  if (doc.contains("expect_violation")) s.expect_violation = get_string(doc, "expect_violation", "");

  Scope scope;
  const auto& chains = require(doc, "chains", "");
  if (!chains.is_array() || chains.empty()) throw ParseError("chains", "expected a non-empty array");
  for (std::size_t i = 0; i < chains.size(); ++i) {
    auto c = parse_chain(chains[i], "chains[" + std::to_string(i) + "]");
    if (scope.chains.count(c.name)) throw ParseError("chains[" + std::to_string(i) + "].name", "duplicate chain");
    scope.chains[c.name] = c.byzantine;
    for (const auto& is : c.issue) {
      if (!is.as.empty()) scope.tokens.insert(is.as);
    }
    s.chains.push_back(std::move(c));
  }

  const auto& steps = doc.contains("steps") ? doc.at("steps") : Json::array();
  if (!steps.is_array()) throw ParseError("steps", "expected an array");
  for (std::size_t i = 0; i < steps.size(); ++i) {
    auto path = "steps[" + std::to_string(i) + "]";
    Step step;
    step.action = get_string(steps[i], "action", path);
    if (!schemas().count(step.action)) throw ParseError(path + ".action", "unknown action '" + step.action + "'");
    step.label = steps[i].contains("label") ? get_string(steps[i], "label", path) : step.action;
    if (steps[i].contains("args")) step.args = steps[i].at("args");
    if (steps[i].contains("expect")) step.expect = get_string(steps[i], "expect", path);
    validate_step(scope, step, path);
    s.steps.push_back(std::move(step));
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("", "cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

Json to_json(const Scenario& scenario) {
  Json chains = Json::array();
  for (const auto& c : scenario.chains) {
    Json issue = Json::array();
    for (const auto& is : c.issue) {
      Json e{{"token", is.token}, {"fungible", is.fungible}, {"owner", is.owner}};
      e[is.fungible ? "amount" : "id"] = is.value;
      if (!is.as.empty()) e["as"] = is.as;
      issue.push_back(std::move(e));
    }
    Json modes = Json::array();
    if (!c.rules.sent_records) modes.push_back("no_sent_records");
    if (!c.rules.sent_record_receiver) modes.push_back("no_receiver");
    if (c.notify_issuer) modes.push_back("issuer_notification");
    chains.push_back(Json{{"name", c.name},
                          {"epoch_length", c.epoch_length},
                          {"byzantine", c.byzantine},
                          {"auto_close", c.auto_close},
                          {"faulty_modes", modes},
                          {"issue", issue}});
  }
  Json steps = Json::array();
  for (const auto& st : scenario.steps) {
    Json e{{"label", st.label}, {"action", st.action}, {"args", st.args}};
    if (st.expect) e["expect"] = *st.expect;
    steps.push_back(std::move(e));
  }
  Json doc{{"name", scenario.name}, {"seed", scenario.seed}, {"chains", chains}, {"steps", steps}};
  if (scenario.expect_violation) doc["expect_violation"] = *scenario.expect_violation;
  return doc;
}

}  // namespace sidelink::harness
