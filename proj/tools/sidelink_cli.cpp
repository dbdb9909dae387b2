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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "sidelink/harness/fuzz.hpp"
#include "sidelink/harness/runner.hpp"
#include "sidelink/harness/scenario.hpp"
#include "sidelink/harness/vectors.hpp"

namespace fs = std::filesystem;
using namespace sidelink::harness;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

int cmd_run(const std::string& path, std::optional<std::size_t> fuzz, std::optional<std::uint64_t> seed,
            const std::string& dump_dir, const std::string& report_path) {
  auto scenario = load_scenario(path);
  if (seed) scenario.seed = *seed;

  if (fuzz) {
    auto report = run_fuzz(scenario, FuzzOptions{*fuzz, scenario.seed});
    std::cout << scenario.name << ": " << report.traces << " traces, " << report.steps << " steps, "
              << report.third_party_rejected_r2 << "/" << report.third_party_sends << " third-party sends rejected R2\n";
    for (const auto& [inv, n] : report.violations) std::cout << "  " << inv << ": " << n << "\n";
    for (const auto& f : report.failures) {
      std::cout << "  failure at step " << f.step << ": " << f.invariant << " " << f.detail << "\n";
    }
    if (!report_path.empty()) write_file(report_path, report.to_json().dump(2) + "\n");
    std::cout << (report.ok() ? "PASS" : "FAIL") << "\n";
    return report.ok() ? kExitOk : kExitViolation;
  }

  auto report = run_scenario(scenario);
  for (const auto& step : report.steps) std::cout << step.trace_line() << "\n";
  if (report.failure) {
    const auto& f = *report.failure;
    std::cout << "first failure at step " << f.step << " (" << f.label << "): " << f.kind;
    if (!f.invariant.empty()) std::cout << " " << f.invariant;
    std::cout << ": " << f.detail << "\n";
  }
  for (const auto& [chain, digest] : report.final_digests) std::cout << chain << " " << digest << "\n";
  if (!report_path.empty()) write_file(report_path, report.to_json().dump(2) + "\n");
  if (!dump_dir.empty()) write_file(fs::path(dump_dir) / (scenario.name + ".state.json"), report.final_dump.dump(2) + "\n");
  std::cout << "result: " << report.result << "\n";
  return report.ok() ? kExitOk : kExitViolation;
}

int cmd_validate(const std::string& path) {
  auto scenario = load_scenario(path);
  std::cout << scenario.name << ": " << scenario.chains.size() << " chains, " << scenario.steps.size()
            << " steps\n";
  return kExitOk;
}

int cmd_vectors(const std::string& dir, bool emit) {
  if (emit) {
    for (const auto& p : emit_vectors(dir)) std::cout << "wrote " << p.string() << "\n";
    return kExitOk;
  }
  auto vectors = load_vectors(dir);
  if (vectors.empty()) {
    std::cerr << "no vectors in " << dir << "\n";
    return kExitUsage;
  }
  std::size_t failed = 0;
  for (const auto& v : vectors) {
    std::string detail;
    bool ok = reproduces(v, &detail);
    if (!ok) ++failed;
    std::cout << (ok ? "ok   " : "FAIL ") << v.name << ": " << detail << "\n";
  }
  std::cout << vectors.size() - failed << "/" << vectors.size() << " vectors reproduced\n";
  return failed == 0 ? kExitOk : kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cross-sidechain messaging and token protocol simulator"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::optional<std::size_t> fuzz;
  std::optional<std::uint64_t> seed;
  std::string dump_dir;
  std::string report_path;
  auto* run = app.add_subcommand("run", "Execute a scenario and check global invariants");
  run->add_option("scenario", scenario_path, "Scenario JSON file")->required();
  run->add_option("--fuzz", fuzz, "Run N random traces over the scenario's chains");
  run->add_option("--seed", seed, "Override the scenario seed");
  run->add_option("--dump", dump_dir, "Write the final state dump into DIR");
  run->add_option("--json-report", report_path, "Write the JSON report to PATH");

  auto* validate = app.add_subcommand("validate", "Parse and statically check a scenario");
  validate->add_option("scenario", scenario_path, "Scenario JSON file")->required();

  std::string vector_dir;
  bool emit = false;
  auto* vectors = app.add_subcommand("vectors", "Check (or emit) token-protocol conformance vectors");
  vectors->add_option("dir", vector_dir, "Vector directory")->required();
  vectors->add_flag("--emit", emit, "Write the built-in suite instead of checking");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*run) return cmd_run(scenario_path, fuzz, seed, dump_dir, report_path);
    if (*validate) return cmd_validate(scenario_path);
    return cmd_vectors(vector_dir, emit);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
