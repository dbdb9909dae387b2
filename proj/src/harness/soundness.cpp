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

#include "sidelink/harness/soundness.hpp"

#include <functional>

#include "sidelink/harness/simulation.hpp"
#include "sidelink/proof.hpp"

namespace sidelink::harness {

namespace {

constexpr std::size_t kMaxSurvivors = 10;

using Check = std::function<bool(const Bytes&)>;

struct Sweep {
  MutationReport report;

  void fixture(const std::string& name, std::vector<std::pair<std::string, Bytes>> fields,
               const std::function<bool(const std::vector<Bytes>&)>& verify) {
    std::vector<Bytes> honest;
    for (const auto& [_, bytes] : fields) honest.push_back(bytes);
    ++report.fixtures;
    if (safe(verify, honest)) ++report.honest_verified;
    for (std::size_t f = 0; f < fields.size(); ++f) {
      const auto& bytes = fields[f].second;
      for (std::size_t i = 0; i < bytes.size(); ++i) {
        auto mutated = honest;
        mutated[f][i] ^= static_cast<std::uint8_t>(1u << (i % 8));
        ++report.mutations;
        ++report.per_target[fields[f].first];
        if (!safe(verify, mutated)) {
          ++report.rejected;
        } else if (report.survivors.size() < kMaxSurvivors) {
          report.survivors.push_back(name + "." + fields[f].first + " byte " + std::to_string(i));
        }
      }
    }
  }

  static bool safe(const std::function<bool(const std::vector<Bytes>&)>& verify, const std::vector<Bytes>& in) {
    try {
      return verify(in);
    } catch (const std::exception&) {
      return false;
    }
  }
};

}  // namespace

MutationReport run_mutation_sweep(const std::vector<Scenario>& scenarios) {
  Sweep sweep;
  for (const auto& scenario : scenarios) {
    Simulation sim(scenario);
    for (std::size_t i = 0; i < scenario.steps.size(); ++i) sim.execute(scenario.steps[i], i);
    const auto& mc = sim.mainchain();
    const std::string prefix = scenario.name + ".";

    for (const auto& [sc, reg] : mc.registry()) {
      for (std::uint64_t epoch = 0;; ++epoch) {
        const auto* fc = mc.finalized(sc, epoch);
        if (!fc) break;
        const auto input = wcert_public_input(fc->cert, mc.block_at(reg.epoch_end(epoch)).hash);
        const auto vk = reg.vk_wcert;
        sweep.fixture(prefix + "wcert", {{"wcert.input", encode_canonical(input)}, {"wcert.proof", encode_canonical(fc->cert.proof)}},
                      [vk](const std::vector<Bytes>& in) {
                        return verify_wcert(vk, decode_canonical<WcertPublicInput>(in[0]),
                                            decode_canonical<Proof>(in[1]));
                      });
      }
    }

    for (const auto& [_, acc] : mc.csws()) {
      const auto& csw = acc.csw;
      const auto input = csw_public_input(csw, mc.last_cert_block_hash(csw.ledger_id));
      const auto vk = mc.registration(csw.ledger_id).vk_csw;
      sweep.fixture(prefix + "csw", {{"csw.input", encode_canonical(input)}, {"csw.proof", encode_canonical(csw.proof)}},
                    [vk, &mc](const std::vector<Bytes>& in) {
                      auto proof = decode_canonical<Proof>(in[1]);
                      if (!verify_csw(vk, decode_canonical<CswPublicInput>(in[0]), proof)) return false;
                      for (const auto& anchor : csw_proof_anchors(proof)) {
                        if (!mc.header_of(anchor)) return false;
                      }
                      return true;
                    });
    }

    auto redeem_fixture = [&](const std::string& kind, const CscpMessage& msg, const Bytes& payload,
                              const RedeemProof& proof) {
      sweep.fixture(prefix + kind,
                    {{kind + ".message", encode_canonical(msg)},
                     {kind + ".payload", payload},
                     {kind + ".proof", encode_canonical(proof)}},
                    [&mc](const std::vector<Bytes>& in) {
                      return verify_redeem(mc, decode_canonical<CscpMessage>(in[0]), in[1],
                                           decode_canonical<RedeemProof>(in[2]));
                    });
    };
    for (const auto& rt : sim.chains()) {
      for (const auto& ce : rt.sc->archive()) {
        if (!mc.finalized(rt.sc->id(), ce.epoch)) continue;
        for (const auto& tx : ce.messages) {
          redeem_fixture("redeem", tx.message, tx.payload, build_redeem_proof(mc, *rt.sc, tx.message));
        }
      }
    }
    for (const auto& [_, rec] : sim.csws()) {
      const auto& w = rec.withdrawal;
      const auto ceased = sim.chains()[rec.chain].sc->id();
      if (!mc.csw_by_nullifier(ceased, w.csw.nullifier)->block_hash) continue;
      redeem_fixture("csw_redeem", w.message, w.payload, build_csw_redeem_proof(mc, ceased, w.csw.nullifier, w.message));
    }
  }
  return sweep.report;
}

}  // namespace sidelink::harness
