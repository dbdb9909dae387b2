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

#include "sidelink/harness/simulation.hpp"

#include <algorithm>

#include "sidelink/error.hpp"
#include "sidelink/harness/accountant.hpp"

namespace sidelink::harness {

namespace {

std::string error_str(const ProtocolError& e) { return "Error(" + std::string(to_string(e.code())) + ")"; }

std::string verdict_str(const McVerdict& v) {
  return v.accepted() ? "Accepted" : "Rejected(" + std::string(to_string(*v.rejection)) + ")";
}

bool is_rejection(const std::string& outcome) {
  return outcome.rfind("Rejected", 0) == 0 || outcome.rfind("Error", 0) == 0;
}

// Actions whose rejection must leave every chain and the mainchain untouched.
bool atomic_action(const std::string& action) {
  static const std::vector<std::string> atomic = {"issue", "split", "merge", "send", "redeem", "csw", "csw_redeem"};
  return std::find(atomic.begin(), atomic.end(), action) != atomic.end();
}

std::string opt_string(const Json& args, const std::string& key, const std::string& fallback) {
  return args.contains(key) ? args.at(key).get<std::string>() : fallback;
}

std::string handle_or(const Json& args, const std::string& prefix, std::size_t index) {
  return opt_string(args, "as", prefix + std::to_string(index));
}

TokenInstance redeemed_instance(const CscpMessage& msg, ByteView payload) {
  auto ti = mitto::decode_payload(payload);
  TokenInstance out = ti ? *ti : TokenInstance{};
  out.owner = msg.receiver;
  return out;
}

}  // namespace

std::string StepResult::trace_line() const {
  std::string line = "#" + std::to_string(index) + " " + label + " [" + action + "] -> " + outcome;
  if (probe) line += " (replay: " + *probe + ")";
  return line;
}

Simulation::Simulation(const Scenario& scenario) {
  for (const auto& spec : scenario.chains) {
    ChainRuntime rt;
    rt.spec = spec;
    rt.sc = Sidechain::create(mc_, KeyPair::from_label("certifier/" + spec.name), spec.epoch_length, spec.rules);
    chains_.push_back(std::move(rt));
  }
  mc_.advance_block();
  for (std::size_t c = 0; c < chains_.size(); ++c) {
    for (const auto& is : chains_[c].spec.issue) {
      auto ti = mitto::issue(chains_[c].sc->mitto(), registry_, chains_[c].sc->id(), is.token, is.fungible, is.value,
                             user(is.owner).public_key(), next_nonce("issue"));
      tokens_[is.as] = TokenLoc{c, ti};
    }
  }
}

std::size_t Simulation::chain_index(const std::string& name) const {
  for (std::size_t i = 0; i < chains_.size(); ++i) {
    if (chains_[i].spec.name == name) return i;
  }
  throw ProtocolError(Errc::NotFound, "chain " + name);
}

std::optional<std::size_t> Simulation::chain_by_id(ScId id) const {
  for (std::size_t i = 0; i < chains_.size(); ++i) {
    if (chains_[i].sc->id() == id) return i;
  }
  return std::nullopt;
}

const KeyPair& Simulation::user(const std::string& name) {
  auto it = users_.find(name);
  if (it == users_.end()) {
    it = users_.emplace(name, KeyPair::from_label("user/" + name)).first;
    user_names_[it->second.public_key()] = name;
  }
  return it->second;
}

std::string Simulation::user_name(const PubKey& key) const {
  auto it = user_names_.find(key);
  return it == user_names_.end() ? key.hex() : it->second;
}

Digest Simulation::next_nonce(std::string_view tag) {
  return hash_bytes(std::string(tag) + "/" + std::to_string(nonce_++));
}

void Simulation::seal_block() {
  mc_.advance_block();
  auto_close();
}

void Simulation::auto_close() {
  for (auto& rt : chains_) {
    if (rt.silent || !rt.spec.auto_close || mc_.is_ceased(rt.sc->id())) continue;
    while (rt.sc->epoch_ready(mc_)) mc_.submit_certificate(rt.sc->close_epoch(mc_));
  }
}

std::vector<Digest> Simulation::chain_digests() const {
  std::vector<Digest> out;
  out.reserve(chains_.size() + 1);
  for (const auto& rt : chains_) out.push_back(rt.sc->state_digest());
  out.push_back(mainchain_digest());
  return out;
}

Digest Simulation::mainchain_digest() const {
  Writer w;
  w.digest(mc_.tip().hash);
  for (const auto& [id, st] : mc_.statuses()) {
    w.u32(id.value);
    w.u8(st.state == ScState::Active ? 0 : 1);
    w.optional(st.last_cert, [](Writer& out, const LastCert& lc) {
      out.u64(lc.epoch);
      out.digest(lc.block_hash);
    });
    w.u32(static_cast<std::uint32_t>(st.pending.size()));
    for (const auto& [epoch, cert] : st.pending) {
      w.u64(epoch);
      w.digest(cert.digest());
    }
    w.u32(static_cast<std::uint32_t>(st.used_nullifiers.size()));
    for (const auto& n : st.used_nullifiers) w.digest(n);
  }
  for (const auto& [digest, _] : mc_.csws()) w.digest(digest);
  return hash_bytes(w.data());
}

StepResult Simulation::execute(const Step& step, std::size_t index) {
  StepResult result;
  result.index = index;
  result.label = step.label;
  result.action = step.action;
  result.expect = step.expect;

  auto before = chain_digests();
  try {
    result.outcome = run(step, result);
  } catch (const ProtocolError& e) {
    result.outcome = error_str(e);
  }
  if (result.expect && *result.expect != result.outcome) result.matched = false;

  if (atomic_action(step.action) && is_rejection(result.outcome) && chain_digests() != before) {
    result.violations.push_back({"atomicity", "rejected step changed chain state"});
  }
  for (auto& v : audit(*this)) result.violations.push_back(std::move(v));
  return result;
}

TokenLoc Simulation::token_at(const std::string& handle) const {
  auto it = tokens_.find(handle);
  if (it == tokens_.end()) throw ProtocolError(Errc::NotFound, "token handle " + handle);
  return it->second;
}

std::string Simulation::run(const Step& step, StepResult& result) {
  const auto& a = step.action;
  const auto& args = step.args;
  if (a == "issue") return do_issue(args);
  if (a == "split") {
    auto loc = token_at(args.at("token").get<std::string>());
    auto [lhs, rhs] = mitto::split(chains_[loc.chain].sc->mitto(), loc.ti, args.at("first").get<std::uint64_t>());
    tokens_.erase(args.at("token").get<std::string>());
    tokens_[args.at("as")[0].get<std::string>()] = TokenLoc{loc.chain, lhs};
    tokens_[args.at("as")[1].get<std::string>()] = TokenLoc{loc.chain, rhs};
    return "Ok";
  }
  if (a == "merge") {
    auto la = token_at(args.at("a").get<std::string>());
    auto lb = token_at(args.at("b").get<std::string>());
    if (la.chain != lb.chain) throw ProtocolError(Errc::InvalidInstance, "merge across chains");
    auto out = mitto::merge(chains_[la.chain].sc->mitto(), la.ti, lb.ti);
    tokens_.erase(args.at("a").get<std::string>());
    tokens_.erase(args.at("b").get<std::string>());
    tokens_[args.at("as").get<std::string>()] = TokenLoc{la.chain, out};
    return "Ok";
  }
  if (a == "send") return do_send(args, result.index);
  if (a == "forge_send") return do_forge(args, result.index);
  if (a == "close_epoch") return do_close(args);
  if (a == "advance") {
    auto n = args.at("blocks").get<std::uint64_t>();
    for (std::uint64_t i = 0; i < n; ++i) seal_block();
    return "Sealed(" + std::to_string(mc_.tip_height()) + ")";
  }
  if (a == "go_silent") {
    chains_[chain_index(args.at("chain").get<std::string>())].silent = true;
    return "Silent";
  }
  if (a == "cease") return do_cease(args);
  if (a == "redeem") return do_redeem(args, result.index, result);
  if (a == "csw") return do_csw(args, result.index, result);
  if (a == "csw_redeem") return do_csw_redeem(args, result.index, result);
  if (a == "assert") return do_assert(args, result);
  throw ProtocolError(Errc::InvalidParams, "unknown action " + a);
}

std::string Simulation::do_issue(const Json& args) {
  auto c = chain_index(args.at("chain").get<std::string>());
  auto& sc = *chains_[c].sc;
  if (mc_.is_ceased(sc.id())) return "Rejected(SidechainCeased)";
  bool fungible = args.value("fungible", true);
  auto value = args.at(fungible ? "amount" : "id").get<std::uint64_t>();
  auto owner = user(args.at("owner").get<std::string>()).public_key();
  auto ti = mitto::issue(sc.mitto(), registry_, sc.id(), args.at("token").get<std::string>(), fungible, value, owner,
                         next_nonce("issue"));
  if (args.contains("as")) tokens_[args.at("as").get<std::string>()] = TokenLoc{c, ti};
  return "Issued";
}

std::string Simulation::do_send(const Json& args, std::size_t index) {
  auto handle = args.at("token").get<std::string>();
  auto it = tokens_.find(handle);
  if (it == tokens_.end()) throw ProtocolError(Errc::NotFound, "token handle " + handle);
  const auto loc = it->second;
  auto& from = *chains_[loc.chain].sc;
  auto to = chain_index(args.at("to").get<std::string>());
  const auto& receiver = user(args.at("receiver").get<std::string>()).public_key();
  CscpMessage msg{from.id(), chains_[to].sc->id(), MsgType::TokenTransfer, loc.ti.owner, receiver,
                  token_payload_hash(loc.ti)};
  const auto& signer = user(opt_string(args, "signer", user_name(loc.ti.owner)));
  SendTx tx{msg, token_payload(loc.ti), signer.sign(message_digest(msg))};
  auto outcome = from.accept_send(mc_, tx);
  if (!outcome.accepted()) return outcome.str();

  tokens_.erase(it);
  messages_[handle_or(args, "m", index)] = MessageRec{loc.chain, tx};
  if (chains_[loc.chain].spec.notify_issuer && loc.ti.issuer != from.id() &&
      loc.ti.issuer != msg.receiving_sc) {
    if (auto issuer = chain_by_id(loc.ti.issuer)) {
      auto& issuer_sc = *chains_[*issuer].sc;
      if (!mc_.is_ceased(issuer_sc.id())) {
        mitto::notify_transfer(issuer_sc.mitto(), from.id(), msg.receiving_sc, loc.ti);
        notifications_.push_back({*issuer, from.id(), msg.receiving_sc, loc.ti});
      }
    }
  }
  return outcome.str();
}

std::string Simulation::do_forge(const Json& args, std::size_t index) {
  auto from = chain_index(args.at("from").get<std::string>());
  auto to = chain_index(args.at("to").get<std::string>());
  const auto& t = args.at("token");
  TokenInstance ti;
  ti.name = t.at("name").get<std::string>();
  ti.fungible = t.value("fungible", true);
  auto value = t.at(ti.fungible ? "amount" : "id").get<std::uint64_t>();
  ti.quantity = ti.fungible ? Quantity{Amount{value}} : Quantity{TokenId{value}};
  ti.issuer = chains_[chain_index(t.at("issuer").get<std::string>())].sc->id();
  const auto& owner = user(t.at("owner").get<std::string>());
  ti.owner = owner.public_key();
  ti.data_hash = next_nonce("forged");
  const auto& receiver = user(args.at("receiver").get<std::string>()).public_key();
  CscpMessage msg{chains_[from].sc->id(), chains_[to].sc->id(), MsgType::TokenTransfer, ti.owner, receiver,
                  token_payload_hash(ti)};
  SendTx tx{msg, token_payload(ti), owner.sign(message_digest(msg))};
  chains_[from].sc->forge_send(tx);
  messages_[handle_or(args, "m", index)] = MessageRec{from, tx};
  return "Forged";
}

std::string Simulation::do_close(const Json& args) {
  auto& sc = *chains_[chain_index(args.at("chain").get<std::string>())].sc;
  auto cert = sc.close_epoch(mc_, args.value("quality", std::uint64_t{1}));
  if (!args.value("submit", true)) return "Closed";
  return verdict_str(mc_.submit_certificate(cert));
}

std::string Simulation::do_cease(const Json& args) {
  auto c = chain_index(args.at("chain").get<std::string>());
  chains_[c].silent = true;
  const auto id = chains_[c].sc->id();
  const auto& reg = mc_.registration(id);
  // Silence is detected at the latest when the next expected epoch's window closes.
  const std::uint64_t limit = mc_.tip_height() + 3 * reg.epoch_length + 2;
  while (!mc_.is_ceased(id) && mc_.tip_height() < limit) seal_block();
  if (!mc_.is_ceased(id)) return "Error(NotCeased)";
  return "Ceased(" + std::to_string(*mc_.status(id).ceased_at) + ")";
}

std::string Simulation::do_redeem(const Json& args, std::size_t index, StepResult& result) {
  auto handle = args.at("message").get<std::string>();
  auto it = messages_.find(handle);
  if (it == messages_.end()) throw ProtocolError(Errc::NotFound, "message handle " + handle);
  const auto& rec = it->second;
  const auto& msg = rec.tx.message;
  std::size_t target;
  if (args.contains("chain")) {
    target = chain_index(args.at("chain").get<std::string>());
  } else if (auto t = chain_by_id(msg.receiving_sc)) {
    target = *t;
  } else {
    throw ProtocolError(Errc::NotFound, "receiving chain " + msg.receiving_sc.str());
  }
  auto proof = build_redeem_proof(mc_, *chains_[rec.from].sc, msg);
  const auto& signer = user(opt_string(args, "signer", user_name(msg.receiver)));
  RedeemTx tx{msg, rec.tx.payload, proof, rec.tx.signature, signer.sign(redeem_auth_digest(msg, rec.tx.payload))};
  auto& sc = *chains_[target].sc;
  auto outcome = sc.accept_redeem(mc_, tx);
  if (outcome.accepted()) {
    tokens_[handle_or(args, "t", index)] = TokenLoc{target, redeemed_instance(msg, rec.tx.payload)};
    auto before = chain_digests();
    auto replay = sc.accept_redeem(mc_, tx);
    result.probe = replay.str();
    if (replay.rejection != Reject::AlreadyRedeemed) {
      result.violations.push_back({"replay_safety", "redeem resubmission returned " + replay.str()});
    }
    if (chain_digests() != before) result.violations.push_back({"atomicity", "replayed redeem changed state"});
  }
  return outcome.str();
}

std::string Simulation::do_csw(const Json& args, std::size_t index, StepResult& result) {
  auto kind = args.at("kind").get<std::string>();
  auto c = chain_index(args.at("chain").get<std::string>());
  const auto& ceased = *chains_[c].sc;
  const auto& receiver = user(args.at("receiver").get<std::string>()).public_key();
  mitto::Withdrawal w;
  std::string consumed;
  if (kind == "held" || kind == "foreign") {
    consumed = args.at("token").get<std::string>();
    auto it = tokens_.find(consumed);
    if (it == tokens_.end()) throw ProtocolError(Errc::NotFound, "token handle " + consumed);
    const auto& ti = it->second.ti;
    const auto& owner = user(opt_string(args, "signer", user_name(ti.owner)));
    if (kind == "held") {
      auto target = chains_[chain_index(args.at("target").get<std::string>())].sc->id();
      w = mitto::withdraw_native_held(mc_, ceased, ti, owner, target, receiver);
    } else if (args.contains("target")) {
      auto target = chains_[chain_index(args.at("target").get<std::string>())].sc->id();
      w = mitto::withdraw_held_to(mc_, ceased, ti, owner, target, receiver);
    } else {
      w = mitto::withdraw_foreign(mc_, ceased, ti, owner, receiver);
    }
  } else {
    auto mt = messages_.find(args.at("message").get<std::string>());
    if (mt == messages_.end()) throw ProtocolError(Errc::NotFound, "message handle");
    const auto& returned = mt->second.tx.message;
    const auto& holder = *chains_[chain_index(args.at("holder").get<std::string>())].sc;
    auto target = chains_[chain_index(args.at("target").get<std::string>())].sc->id();
    const auto& owner = user(opt_string(args, "signer", user_name(returned.receiver)));
    w = mitto::withdraw_native_sent(mc_, ceased, holder, returned, owner, target, receiver);
  }
  auto verdict = mc_.submit_csw(w.csw);
  if (verdict.accepted()) {
    csws_[handle_or(args, "w", index)] = CswRec{c, w};
    if (!consumed.empty()) tokens_.erase(consumed);
    auto before = chain_digests();
    auto replay = mc_.submit_csw(w.csw);
    result.probe = verdict_str(replay);
    if (replay.rejection != McReject::NullifierReused) {
      result.violations.push_back({"replay_safety", "CSW resubmission returned " + verdict_str(replay)});
    }
    if (chain_digests() != before) result.violations.push_back({"atomicity", "replayed CSW changed state"});
  }
  return verdict_str(verdict);
}

std::string Simulation::do_csw_redeem(const Json& args, std::size_t index, StepResult& result) {
  auto it = csws_.find(args.at("csw").get<std::string>());
  if (it == csws_.end()) throw ProtocolError(Errc::NotFound, "csw handle");
  const auto& rec = it->second;
  const auto& w = rec.withdrawal;
  std::size_t target;
  if (args.contains("chain")) {
    target = chain_index(args.at("chain").get<std::string>());
  } else if (auto t = chain_by_id(w.message.receiving_sc)) {
    target = *t;
  } else {
    throw ProtocolError(Errc::NotFound, "receiving chain " + w.message.receiving_sc.str());
  }
  const auto ceased = chains_[rec.chain].sc->id();
  auto proof = build_csw_redeem_proof(mc_, ceased, w.csw.nullifier, w.message);
  const auto& signer = user(opt_string(args, "signer", user_name(w.message.receiver)));
  CswRedeemTx tx{w.message,
                 w.payload,
                 proof,
                 CswRef{ceased, w.csw.nullifier},
                 w.sender_signature,
                 signer.sign(redeem_auth_digest(w.message, w.payload))};
  auto& sc = *chains_[target].sc;
  auto outcome = sc.accept_csw_redeem(mc_, tx);
  if (outcome.accepted()) {
    tokens_[handle_or(args, "t", index)] = TokenLoc{target, redeemed_instance(w.message, w.payload)};
    auto before = chain_digests();
    auto replay = sc.accept_csw_redeem(mc_, tx);
    result.probe = replay.str();
    if (replay.rejection != Reject::AlreadyRedeemed) {
      result.violations.push_back({"replay_safety", "CSW redeem resubmission returned " + replay.str()});
    }
    if (chain_digests() != before) result.violations.push_back({"atomicity", "replayed CSW redeem changed state"});
  }
  return outcome.str();
}

std::string Simulation::do_assert(const Json& args, StepResult& result) {
  const auto& sc = *chains_[chain_index(args.at("chain").get<std::string>())].sc;
  std::vector<std::string> failures;
  if (args.contains("status")) {
    std::string actual = mc_.is_ceased(sc.id()) ? "Ceased" : "Active";
    if (actual != args.at("status").get<std::string>()) failures.push_back("status is " + actual);
  }
  if (args.contains("held")) {
    for (const auto& [name, amount] : args.at("held").items()) {
      auto actual = sc.mitto().held_amount(name);
      if (actual != amount.get<std::uint64_t>()) {
        failures.push_back("held " + name + " is " + std::to_string(actual) + ", expected " + amount.dump());
      }
    }
  }
  if (args.contains("sent")) {
    std::map<mitto::SentKey, SentRecord> expected;
    for (const auto& e : args.at("sent")) {
      SentRecord sr;
      auto rc = e.at("receiver").get<std::string>();
      sr.receiver = rc == "*" ? ScId{0} : chains_[chain_index(rc)].sc->id();
      sr.name = e.at("name").get<std::string>();
      sr.fungible = e.contains("amount");
      sr.quantity = sr.fungible ? Quantity{Amount{e.at("amount").get<std::uint64_t>()}}
                                : Quantity{TokenId{e.at("token_id").get<std::uint64_t>()}};
      expected[mitto::sent_key(sr.receiver, sr.name, sr.fungible, sr.token_id())] = sr;
    }
    if (expected != sc.mitto().sent) failures.push_back("sent set is " + to_json(sc.mitto()).at("s_sent").dump());
  }
  if (failures.empty()) return "Holds";
  std::string detail;
  for (const auto& f : failures) detail += (detail.empty() ? "" : "; ") + f;
  result.assert_failure = detail;
  return "Fails";
}

Json Simulation::dump() const {
  Json mc = Json::object();
  mc["height"] = mc_.tip_height();
  mc["tip"] = mc_.tip().hash.hex();
  Json blocks = Json::array();
  for (const auto& b : mc_.blocks()) {
    Json included = Json::array();
    for (const auto& d : b.included) included.push_back(d.hex());
    blocks.push_back(Json{{"height", b.header.height},
                          {"hash", b.hash.hex()},
                          {"parent", b.header.parent.hex()},
                          {"stc_root", b.header.stc_root.hex()},
                          {"included", included}});
  }
  mc["blocks"] = blocks;
  Json registry = Json::array();
  for (const auto& [id, reg] : mc_.registry()) {
    registry.push_back(Json{{"id", id.value},
                            {"epoch_length", reg.epoch_length},
                            {"creation_height", reg.creation_height},
                            {"digest", reg.digest().hex()}});
  }
  mc["registry"] = registry;
  Json statuses = Json::array();
  for (const auto& [id, st] : mc_.statuses()) {
    Json s = Json::object();
    s["id"] = id.value;
    s["state"] = st.state == ScState::Active ? "Active" : "Ceased";
    s["last_cert_epoch"] = st.last_cert ? Json(st.last_cert->epoch) : Json(nullptr);
    Json pending = Json::array();
    for (const auto& [epoch, cert] : st.pending) pending.push_back(Json{{"epoch", epoch}, {"cert", cert.digest().hex()}});
    s["pending"] = pending;
    Json nullifiers = Json::array();
    for (const auto& n : st.used_nullifiers) nullifiers.push_back(n.hex());
    s["used_nullifiers"] = nullifiers;
    statuses.push_back(std::move(s));
  }
  mc["sidechains"] = statuses;
  Json csws = Json::array();
  for (const auto& [digest, acc] : mc_.csws()) {
    csws.push_back(Json{{"digest", digest.hex()},
                        {"sidechain", acc.csw.ledger_id.value},
                        {"block", acc.block_hash ? Json(acc.block_hash->hex()) : Json(nullptr)}});
  }
  mc["csws"] = csws;

  Json chains = Json::array();
  for (const auto& rt : chains_) {
    const auto& sc = *rt.sc;
    Json c = to_json(sc.mitto());
    c["name"] = rt.spec.name;
    c["id"] = sc.id().value;
    c["byzantine"] = rt.spec.byzantine;
    c["status"] = mc_.is_ceased(sc.id()) ? "Ceased" : "Active";
    c["next_epoch"] = sc.next_epoch();
    Json outbox = Json::array();
    for (const auto& tx : sc.outbox()) {
      Json m = to_json(tx.message);
      m["payload"] = to_hex(tx.payload);
      outbox.push_back(std::move(m));
    }
    c["outbox"] = outbox;
    Json archive = Json::array();
    for (const auto& ce : sc.archive()) {
      Json msgs = Json::array();
      for (const auto& leaf : ce.tree.leaves()) msgs.push_back(leaf.hex());
      archive.push_back(Json{{"epoch", ce.epoch}, {"cert", ce.cert.digest().hex()}, {"messages", msgs}});
    }
    c["archive"] = archive;
    Json redeemed = Json::array();
    for (const auto& d : sc.redeemed()) redeemed.push_back(d.hex());
    c["redeemed"] = redeemed;
    chains.push_back(std::move(c));
  }
  return Json{{"mainchain", mc}, {"chains", chains}};
}

std::vector<std::string> diff_json(const Json& a, const Json& b, const std::string& path) {
  std::vector<std::string> out;
  if (a.type() != b.type()) {
    out.push_back(path + ": " + a.dump() + " -> " + b.dump());
    return out;
  }
  if (a.is_object()) {
    for (const auto& [key, va] : a.items()) {
      auto sub = path.empty() ? key : path + "." + key;
      if (!b.contains(key)) {
        out.push_back(sub + ": removed");
        continue;
      }
      auto d = diff_json(va, b.at(key), sub);
      out.insert(out.end(), d.begin(), d.end());
    }
    for (const auto& [key, _] : b.items()) {
      if (!a.contains(key)) out.push_back((path.empty() ? key : path + "." + key) + ": added");
    }
    return out;
  }
  if (a.is_array()) {
    const auto n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
      auto d = diff_json(a[i], b[i], path + "[" + std::to_string(i) + "]");
      out.insert(out.end(), d.begin(), d.end());
    }
    for (std::size_t i = n; i < a.size(); ++i) out.push_back(path + "[" + std::to_string(i) + "]: removed");
    for (std::size_t i = n; i < b.size(); ++i) out.push_back(path + "[" + std::to_string(i) + "]: added");
    return out;
  }
  if (a != b) out.push_back(path + ": " + a.dump() + " -> " + b.dump());
  return out;
}

}  // namespace sidelink::harness
