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

#include "sidelink/harness/fuzz.hpp"

#include <iterator>
#include <optional>
#include <random>
#include <set>

#include "sidelink/harness/accountant.hpp"

namespace sidelink::harness {

namespace {

constexpr std::size_t kMaxRecordedFailures = 5;
const std::vector<std::string> kUsers = {"alice", "bob", "carol", "dave"};
const std::string kR2Rejection = "Rejected(HandlerRejected(R2))";

class TraceGen {
 public:
  TraceGen(Simulation& sim, std::uint64_t seed) : sim_(sim), rng_(seed) {}

  std::optional<Step> next(std::size_t k) {
    const auto roll = pick(100);
    if (roll < 2) return cease();
    if (roll < 7) {
      if (auto s = csw(k)) return s;
    }
    if (roll < 12) {
      if (auto s = csw_redeem(k)) return s;
    }
    if (roll < 42) {
      if (auto s = send(k)) return s;
    }
    if (roll < 50) {
      if (auto s = split(k)) return s;
    }
    if (roll < 64) {
      if (auto s = forge(k)) return s;
    }
    if (roll < 88) {
      if (auto s = redeem(k)) return s;
    }
    return make("advance", Json{{"blocks", 1 + pick(3)}});
  }

 private:
  std::uint64_t pick(std::uint64_t n) { return n == 0 ? 0 : rng_() % n; }

  const std::string& user() { return kUsers[pick(kUsers.size())]; }

  static Step make(std::string action, Json args) {
    Step s;
    s.action = action;
    s.label = action;
    s.args = std::move(args);
    return s;
  }

  bool active(std::size_t chain) const { return !sim_.mainchain().is_ceased(sim_.chains()[chain].sc->id()); }
  const std::string& name(std::size_t chain) const { return sim_.chains()[chain].spec.name; }

  std::vector<std::string> live_tokens(bool need_split) const {
    std::vector<std::string> out;
    for (const auto& [h, loc] : sim_.tokens()) {
      if (!sim_.honest(loc.chain) || !active(loc.chain)) continue;
      if (!sim_.chains()[loc.chain].sc->mitto().holds(loc.ti)) continue;
      if (need_split && (!loc.ti.fungible || loc.ti.amount() < 2)) continue;
      out.push_back(h);
    }
    return out;
  }

  std::optional<Step> send(std::size_t k) {
    auto live = live_tokens(false);
    if (live.empty()) return std::nullopt;
    const auto& h = live[pick(live.size())];
    const auto& loc = sim_.tokens().at(h);
    const auto n = sim_.chains().size();
    std::size_t to;
    auto issuer = sim_.chain_by_id(loc.ti.issuer);
    if (issuer && *issuer != loc.chain && pick(4) != 0) {
      to = *issuer;
    } else {
      to = (loc.chain + 1 + pick(n - 1)) % n;
    }
    return make("send", Json{{"token", h}, {"to", name(to)}, {"receiver", user()}, {"as", "m" + std::to_string(k)}});
  }

  std::optional<Step> split(std::size_t k) {
    auto live = live_tokens(true);
    if (live.empty()) return std::nullopt;
    const auto& h = live[pick(live.size())];
    auto amount = sim_.tokens().at(h).ti.amount();
    return make("split", Json{{"token", h},
                              {"first", 1 + pick(amount - 1)},
                              {"as", Json::array({"s" + std::to_string(k) + "a", "s" + std::to_string(k) + "b"})}});
  }

  std::optional<Step> forge(std::size_t k) {
    std::vector<std::size_t> byz;
    for (std::size_t i = 0; i < sim_.chains().size(); ++i) {
      if (!sim_.honest(i) && active(i)) byz.push_back(i);
    }
    std::vector<std::pair<std::string, mitto::NameEntry>> names;
    for (const auto& [n, e] : sim_.registry().names()) {
      auto issuer = sim_.chain_by_id(e.issuer);
      if (issuer && sim_.honest(*issuer)) names.emplace_back(n, e);
    }
    if (byz.empty() || names.empty()) return std::nullopt;
    const auto from = byz[pick(byz.size())];
    const auto& [token, entry] = names[pick(names.size())];
    const auto issuer = *sim_.chain_by_id(entry.issuer);
    std::size_t to = issuer;
    if (pick(10) < 3) to = (from + 1 + pick(sim_.chains().size() - 1)) % sim_.chains().size();
    Json t{{"name", token}, {"fungible", entry.fungible}, {"issuer", name(issuer)}, {"owner", user()}};
    if (entry.fungible) {
      t["amount"] = pick(3) == 0 ? 1000000 + pick(1000000) : 1 + pick(150);
    } else {
      t["id"] = 1 + pick(5);
    }
    return make("forge_send",
                Json{{"from", name(from)}, {"to", name(to)}, {"token", t}, {"receiver", user()}, {"as", "m" + std::to_string(k)}});
  }

  std::optional<Step> redeem(std::size_t k) {
    std::vector<std::string> open;
    for (const auto& [h, _] : sim_.messages()) {
      if (!tried_.count(h)) open.push_back(h);
    }
    if (open.empty()) return std::nullopt;
    const auto& h = open[pick(open.size())];
    if (pick(3) == 0) tried_.insert(h);
    return make("redeem", Json{{"message", h}, {"as", "t" + std::to_string(k)}});
  }

  std::optional<Step> cease() {
    if (ceased_once_) return std::nullopt;
    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < sim_.chains().size(); ++i) {
      if (sim_.honest(i) && active(i)) candidates.push_back(i);
    }
    if (candidates.size() < 2) return std::nullopt;
    ceased_once_ = true;
    return make("cease", Json{{"chain", name(candidates[pick(candidates.size())])}});
  }

  std::optional<Step> csw(std::size_t k) {
    std::vector<std::string> held;
    for (const auto& [h, loc] : sim_.tokens()) {
      if (sim_.honest(loc.chain) && !active(loc.chain)) held.push_back(h);
    }
    if (held.empty()) return std::nullopt;
    const auto& h = held[pick(held.size())];
    const auto& loc = sim_.tokens().at(h);
    const auto& ceased = name(loc.chain);
    if (loc.ti.issuer != sim_.chains()[loc.chain].sc->id()) {
      return make("csw", Json{{"kind", "foreign"}, {"chain", ceased}, {"token", h}, {"receiver", user()},
                              {"as", "w" + std::to_string(k)}});
    }
    const auto n = sim_.chains().size();
    return make("csw", Json{{"kind", "held"}, {"chain", ceased}, {"token", h}, {"target", name((loc.chain + 1 + pick(n - 1)) % n)},
                            {"receiver", user()}, {"as", "w" + std::to_string(k)}});
  }

  std::optional<Step> csw_redeem(std::size_t k) {
    if (sim_.csws().empty()) return std::nullopt;
    auto it = sim_.csws().begin();
    std::advance(it, static_cast<long>(pick(sim_.csws().size())));
    return make("csw_redeem", Json{{"csw", it->first}, {"as", "t" + std::to_string(k)}});
  }

  Simulation& sim_;
  std::mt19937_64 rng_;
  std::set<std::string> tried_;
  bool ceased_once_ = false;
};

// A send of a live foreign token to a chain other than its issuer.
bool third_party_send(const Simulation& sim, const Step& step) {
  if (step.action != "send") return false;
  const auto& loc = sim.tokens().at(step.args.at("token").get<std::string>());
  const auto& from = *sim.chains()[loc.chain].sc;
  const auto to = sim.chains()[sim.chain_index(step.args.at("to").get<std::string>())].sc->id();
  return loc.ti.issuer != from.id() && to != loc.ti.issuer;
}

}  // namespace

FuzzReport run_fuzz(const Scenario& base, const FuzzOptions& options) {
  FuzzReport report;
  report.traces = options.traces;
  report.seed = options.seed;
  for (const auto& name : invariant_names()) report.violations[name] = 0;

  std::mt19937_64 seeder(options.seed);
  for (std::size_t t = 0; t < options.traces; ++t) {
    Simulation sim(base);
    TraceGen gen(sim, seeder());
    std::vector<StepResult> trace;
    for (std::size_t k = 0; k < options.steps_per_trace; ++k) {
      auto step = gen.next(k);
      if (!step) continue;
      const bool probe_r2 = third_party_send(sim, *step);
      const bool byz_origin = step->action == "redeem" &&
                              !sim.honest(sim.messages().at(step->args.at("message").get<std::string>()).from);
      auto result = sim.execute(*step, k);
      ++report.steps;
      if (result.probe) ++report.replay_probes;
      const bool accepted = result.outcome == "Accepted";
      if (step->action == "send" && accepted) ++report.sends_accepted;
      if (step->action == "forge_send") ++report.forged;
      if (step->action == "redeem" && accepted) ++report.redeems_accepted;
      if (byz_origin && result.outcome.rfind("Rejected", 0) == 0) ++report.byzantine_redeems_rejected;
      if (step->action == "csw" && accepted) ++report.csws_accepted;
      if (probe_r2) {
        ++report.third_party_sends;
        if (result.outcome == kR2Rejection) {
          ++report.third_party_rejected_r2;
        } else {
          result.violations.push_back({"routing_restriction", "third-party send returned " + result.outcome});
        }
      }
      trace.push_back(result);
      if (!result.violations.empty()) {
        for (const auto& v : result.violations) report.violations[v.invariant] += 1;
        if (report.failures.size() < kMaxRecordedFailures) {
          Failure f;
          f.step = k;
          f.label = "trace " + std::to_string(t);
          f.kind = "invariant";
          f.invariant = result.violations.front().invariant;
          f.detail = result.violations.front().detail;
          for (const auto& r : trace) f.trace.push_back(r.trace_line());
          report.failures.push_back(std::move(f));
        }
        break;
      }
    }
  }
  return report;
}

bool FuzzReport::ok() const {
  for (const auto& [_, n] : violations) {
    if (n != 0) return false;
  }
  return third_party_rejected_r2 == third_party_sends;
}

Json FuzzReport::to_json() const {
  Json failures_json = Json::array();
  for (const auto& f : failures) {
    failures_json.push_back(Json{{"trace", f.label}, {"step", f.step}, {"invariant", f.invariant},
                                 {"detail", f.detail}, {"steps", f.trace}});
  }
  return Json{{"mode", "fuzz"},
              {"traces", traces},
              {"seed", seed},
              {"steps", steps},
              {"result", ok() ? "pass" : "fail"},
              {"sends_accepted", sends_accepted},
              {"forged_messages", forged},
              {"redeems_accepted", redeems_accepted},
              {"byzantine_redeems_rejected", byzantine_redeems_rejected},
              {"csws_accepted", csws_accepted},
              {"third_party_sends", third_party_sends},
              {"third_party_rejected_r2", third_party_rejected_r2},
              {"replay_probes", replay_probes},
              {"invariant_violations", violations},
              {"failures", failures_json}};
}

}  // namespace sidelink::harness
