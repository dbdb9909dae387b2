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

#include "sidelink/harness/runner.hpp"

#include "sidelink/harness/accountant.hpp"

namespace sidelink::harness {

namespace {

std::vector<std::string> trace_of(const std::vector<StepResult>& steps) {
  std::vector<std::string> out;
  out.reserve(steps.size());
  for (const auto& s : steps) out.push_back(s.trace_line());
  return out;
}

}  // namespace

RunReport run_scenario(const Scenario& scenario) {
  RunReport report;
  report.scenario = scenario.name;
  report.seed = scenario.seed;
  for (const auto& name : invariant_names()) report.violations[name] = 0;

  Simulation sim(scenario);
  for (std::size_t i = 0; i < scenario.steps.size() && !report.failure; ++i) {
    auto result = sim.execute(scenario.steps[i], i);
    if (result.probe) (result.action == "csw" ? report.csw_replays : report.redeem_replays) += 1;
    for (const auto& v : result.violations) report.violations[v.invariant] += 1;
    report.steps.push_back(result);

    Failure f;
    f.step = i;
    f.label = result.label;
    if (!result.violations.empty()) {
      f.kind = "invariant";
      f.invariant = result.violations.front().invariant;
      f.detail = result.violations.front().detail;
    } else if (result.assert_failure) {
      f.kind = "assert";
      f.detail = *result.assert_failure;
    } else if (!result.matched) {
      f.kind = "expect";
      f.detail = "expected " + *result.expect + ", got " + result.outcome;
    } else {
      continue;
    }
    f.trace = trace_of(report.steps);
    report.failure = std::move(f);
  }

  if (scenario.expect_violation) {
    if (report.failure && report.failure->kind == "invariant" &&
        report.failure->invariant == *scenario.expect_violation) {
      report.result = "expected_violation";
    } else {
      report.result = "fail";
      if (!report.failure) {
        Failure f;
        f.step = report.steps.size();
        f.kind = "missing_violation";
        f.invariant = *scenario.expect_violation;
        f.detail = "scenario completed without the expected violation";
        f.trace = trace_of(report.steps);
        report.failure = std::move(f);
      }
    }
  } else {
    report.result = report.failure ? "fail" : "pass";
  }

  for (const auto& rt : sim.chains()) report.final_digests.emplace_back(rt.spec.name, rt.sc->state_digest().hex());
  report.final_digests.emplace_back("mainchain", sim.mainchain_digest().hex());
  report.final_dump = sim.dump();
  return report;
}

Json RunReport::to_json() const {
  Json steps_json = Json::array();
  for (const auto& s : steps) {
    Json e{{"index", s.index}, {"label", s.label}, {"action", s.action}, {"outcome", s.outcome}};
    if (s.expect) e["expect"] = *s.expect;
    if (s.probe) e["replay"] = *s.probe;
    if (s.assert_failure) e["assert_failure"] = *s.assert_failure;
    if (!s.violations.empty()) {
      Json vs = Json::array();
      for (const auto& v : s.violations) vs.push_back(Json{{"invariant", v.invariant}, {"detail", v.detail}});
      e["violations"] = vs;
    }
    steps_json.push_back(std::move(e));
  }
  Json digests = Json::object();
  for (const auto& [name, d] : final_digests) digests[name] = d;
  Json doc{{"scenario", scenario},
           {"seed", seed},
           {"result", result},
           {"steps", steps_json},
           {"invariant_violations", violations},
           {"replay_probes", Json{{"redeem", redeem_replays}, {"csw", csw_replays}}},
           {"final_state_digests", digests}};
  if (failure) {
    doc["failure"] = Json{{"step", failure->step},     {"label", failure->label},   {"kind", failure->kind},
                          {"invariant", failure->invariant}, {"detail", failure->detail}, {"trace", failure->trace}};
  }
  return doc;
}

}  // namespace sidelink::harness
