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

#include "sidelink/harness/accountant.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

namespace sidelink::harness {

namespace {

// Wide signed accumulator: forged amounts may reach UINT64_MAX.
__extension__ typedef __int128 Big;
__extension__ typedef unsigned __int128 UBig;

std::string str(Big v) {
  if (v == 0) return "0";
  bool neg = v < 0;
  UBig u = neg ? static_cast<UBig>(-(v + 1)) + 1 : static_cast<UBig>(v);
  std::string s;
  while (u) {
    s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(u % 10)));
    u /= 10;
  }
  return neg ? "-" + s : s;
}

struct AssetKey {
  std::uint32_t issuer = 0;
  std::string name;
  bool fungible = true;
  std::uint64_t id = 0;

  auto operator<=>(const AssetKey&) const = default;
  std::string str() const {
    return name + (fungible ? "" : "#" + std::to_string(id)) + "@" + std::to_string(issuer);
  }
};

AssetKey key_of(const TokenInstance& ti) { return {ti.issuer.value, ti.name, ti.fungible, ti.token_id()}; }
Big qty(const TokenInstance& ti) { return ti.fungible ? Big(ti.amount()) : Big(1); }

struct View {
  bool honest = true;
  ScId id;
  const mitto::MittoState* state = nullptr;
  const std::set<Digest>* redeemed = nullptr;
  std::vector<const SendTx*> sends;
};

struct Flow {
  std::size_t from = 0;
  CscpMessage msg;
  std::optional<TokenInstance> ti;
  bool via_csw = false;
};

const mitto::MittoState kEmptyState{};
const std::set<Digest> kEmptySet{};

std::vector<View> effective_views(const Simulation& sim) {
  const auto& mc = sim.mainchain();
  std::vector<View> views;
  for (std::size_t i = 0; i < sim.chains().size(); ++i) {
    const auto& sc = *sim.chains()[i].sc;
    View v;
    v.honest = sim.honest(i);
    v.id = sc.id();
    if (!mc.is_ceased(sc.id())) {
      v.state = &sc.mitto();
      v.redeemed = &sc.redeemed();
      for (const auto& ce : sc.archive()) {
        for (const auto& tx : ce.messages) v.sends.push_back(&tx);
      }
      for (const auto& tx : sc.outbox()) v.sends.push_back(&tx);
    } else if (const auto& last = mc.status(sc.id()).last_cert; last && sc.committed(last->epoch)) {
      const auto* ce = sc.committed(last->epoch);
      v.state = &ce->mitto;
      v.redeemed = &ce->redeemed;
      for (const auto& e : sc.archive()) {
        if (e.epoch > last->epoch) continue;
        for (const auto& tx : e.messages) v.sends.push_back(&tx);
      }
    } else {
      v.state = &kEmptyState;
      v.redeemed = &kEmptySet;
    }
    views.push_back(std::move(v));
  }
  return views;
}

class Auditor {
 public:
  explicit Auditor(const Simulation& sim) : sim_(sim), views_(effective_views(sim)) {
    collect_flows();
  }

  std::vector<Violation> run() {
    conservation();
    issuer_conservation();
    return_bound();
    routing();
    return std::move(out_);
  }

 private:
  bool honest_id(ScId id) const {
    auto c = sim_.chain_by_id(id);
    return c && sim_.honest(*c);
  }

  void collect_flows() {
    for (std::size_t i = 0; i < views_.size(); ++i) {
      for (const auto* tx : views_[i].sends) {
        effective_.push_back({i, tx->message, mitto::decode_payload(tx->payload)});
      }
    }
    // Every message ever queued, certified or not, for redeemed-digest lookup.
    for (std::size_t i = 0; i < sim_.chains().size(); ++i) {
      const auto& sc = *sim_.chains()[i].sc;
      for (const auto& ce : sc.archive()) {
        for (const auto& tx : ce.messages) index(i, tx.message, tx.payload);
      }
      for (const auto& tx : sc.outbox()) index(i, tx.message, tx.payload);
    }
    for (const auto& [_, acc] : sim_.mainchain().csws()) {
      auto contents = inspect_csw(acc.csw.proof);
      auto chain = sim_.chain_by_id(acc.csw.ledger_id);
      if (!contents || !chain) continue;
      std::optional<TokenInstance> carried;
      if (contents->kind == CswKind::Held) {
        carried = mitto::decode_payload(contents->entity);
        if (carried && views_[*chain].honest) withdrawn_[*chain].push_back(*carried);
      } else if (contents->returned) {
        const auto& mt = contents->returned->message;
        consumed_[message_digest(mt)] += 1;
        carried = mitto::decode_payload(contents->returned->payload);
        if (carried) carried->owner = mt.receiver;
      }
      if (!contents->message) continue;
      effective_.push_back({*chain, *contents->message, carried, true});
      if (carried) by_digest_[message_digest(*contents->message)] = {*chain, *contents->message, carried};
    }
  }

  void index(std::size_t from, const CscpMessage& msg, const Bytes& payload) {
    by_digest_.try_emplace(message_digest(msg), Flow{from, msg, mitto::decode_payload(payload)});
  }

  void conservation() {
    std::map<AssetKey, Big> held;
    std::map<AssetKey, Big> flight;
    std::map<std::pair<std::size_t, AssetKey>, Big> byz;

    for (std::size_t i = 0; i < views_.size(); ++i) {
      if (!views_[i].honest) continue;
      for (const auto& [_, h] : views_[i].state->tks) held[key_of(h.instance)] += qty(h.instance) * h.count;
      for (const auto& ti : withdrawn_[i]) held[key_of(ti)] -= qty(ti);
    }

    std::map<Digest, std::size_t> sent_count;
    std::map<Digest, const Flow*> sample;
    for (const auto& f : effective_) {
      if (!f.ti) continue;
      const auto d = message_digest(f.msg);
      if (views_[f.from].honest) {
        auto rc = sim_.chain_by_id(f.msg.receiving_sc);
        if (rc && !views_[*rc].honest) {
          byz[{*rc, key_of(*f.ti)}] += qty(*f.ti);
        } else {
          sent_count[d] += 1;
          sample[d] = &f;
        }
      }
    }
    for (const auto& [d, n] : sent_count) {
      const auto& f = *sample[d];
      auto rc = sim_.chain_by_id(f.msg.receiving_sc);
      Big remaining = Big(n) - consumed_count(d);
      if (rc && views_[*rc].redeemed->count(d)) remaining -= 1;
      if (remaining < 0) {
        out_.push_back({"conservation", "message " + d.hex().substr(0, 16) + " delivered more often than sent"});
      }
      flight[key_of(*f.ti)] += qty(*f.ti) * remaining;
    }
    // Deliveries out of byzantine chains: redeemed by an honest chain or
    // consumed by an honest issuer's return CSW.
    for (std::size_t r = 0; r < views_.size(); ++r) {
      if (!views_[r].honest) continue;
      for (const auto& d : *views_[r].redeemed) {
        auto it = by_digest_.find(d);
        if (it == by_digest_.end() || !it->second.ti) continue;
        auto from = sim_.chain_by_id(it->second.msg.sending_sc);
        if (from && !views_[*from].honest) byz[{*from, key_of(*it->second.ti)}] -= qty(*it->second.ti);
      }
    }
    for (const auto& [d, n] : consumed_) {
      auto it = by_digest_.find(d);
      if (it == by_digest_.end() || !it->second.ti) continue;
      auto from = sim_.chain_by_id(it->second.msg.sending_sc);
      if (from && !views_[*from].honest) byz[{*from, key_of(*it->second.ti)}] -= qty(*it->second.ti) * Big(n);
    }

    std::map<AssetKey, Big> issued;
    for (const auto& v : views_) {
      if (!v.honest) continue;
      for (const auto& [name, info] : v.state->issued) {
        if (info.fungible) {
          issued[{v.id.value, name, true, 0}] += info.total;
        } else {
          for (auto id : info.token_ids) issued[{v.id.value, name, false, id}] += 1;
        }
      }
    }

    std::set<AssetKey> keys;
    for (const auto& [k, _] : issued) keys.insert(k);
    for (const auto& [k, _] : held) keys.insert(k);
    for (const auto& [k, _] : flight) keys.insert(k);
    for (const auto& [k, _] : byz) keys.insert(k.second);

    for (const auto& k : keys) {
      if (!honest_id(ScId{k.issuer})) continue;
      Big h = held[k];
      Big f = flight[k];
      Big net = 0;
      for (const auto& [bk, v] : byz) {
        if (bk.second != k) continue;
        net += v;
        if (v < 0) {
          out_.push_back({"conservation", k.str() + ": byzantine chain " + sim_.chains()[bk.first].spec.name +
                                              " delivered " + str(-v) + " more than it received"});
        }
      }
      if (!k.fungible && h + f > 1) {
        out_.push_back({"nft_uniqueness", k.str() + ": " + str(h) + " held, " + str(f) + " in flight"});
      } else if (issued[k] != h + f + net) {
        out_.push_back({"conservation", k.str() + ": issued " + str(issued[k]) + " != held " + str(h) +
                                            " + in flight " + str(f) + " + byzantine " + str(net)});
      }
    }
  }

  Big consumed_count(const Digest& d) const {
    auto it = consumed_.find(d);
    return it == consumed_.end() ? 0 : Big(it->second);
  }

  // The issuer's own books: instances at home plus sent records equal
  // everything it issued.
  void issuer_conservation() {
    for (std::size_t i = 0; i < views_.size(); ++i) {
      const auto& v = views_[i];
      if (!v.honest || !sim_.chains()[i].spec.rules.sent_records) continue;
      for (const auto& [name, info] : v.state->issued) {
        Big home = 0;
        for (const auto& [_, h] : v.state->tks) {
          if (h.instance.name == name && h.instance.issuer == v.id) home += qty(h.instance) * h.count;
        }
        Big away = 0;
        for (const auto& [_, sr] : v.state->sent) {
          if (sr.name == name) away += sr.fungible ? Big(sr.amount()) : Big(1);
        }
        Big total = info.fungible ? Big(info.total) : Big(info.token_ids.size());
        if (home + away != total) {
          out_.push_back({"issuer_conservation", sim_.chains()[i].spec.name + "/" + name + ": held " + str(home) +
                                                     " + sent " + str(away) + " != issued " + str(total)});
        }
      }
    }
  }

  // Returns accepted by an honest issuer from one counterparty never exceed
  // what the issuer sent there (adjusted by issuer notifications).
  void return_bound() {
    using Key = std::tuple<std::size_t, std::uint32_t, AssetKey>;
    std::map<Key, Big> sent;
    std::map<Key, Big> returned;
    for (const auto& f : effective_) {
      if (!f.ti || !views_[f.from].honest || f.ti->issuer != views_[f.from].id) continue;
      sent[{f.from, f.msg.receiving_sc.value, key_of(*f.ti)}] += qty(*f.ti);
    }
    for (const auto& n : sim_.notifications()) {
      sent[{n.issuer, n.from.value, key_of(n.ti)}] -= qty(n.ti);
      sent[{n.issuer, n.to.value, key_of(n.ti)}] += qty(n.ti);
    }
    for (std::size_t i = 0; i < views_.size(); ++i) {
      if (!views_[i].honest) continue;
      for (const auto& d : *views_[i].redeemed) {
        auto it = by_digest_.find(d);
        if (it == by_digest_.end() || !it->second.ti || it->second.ti->issuer != views_[i].id) continue;
        returned[{i, it->second.msg.sending_sc.value, key_of(*it->second.ti)}] += qty(*it->second.ti);
      }
    }
    for (const auto& [k, amount] : returned) {
      auto it = sent.find(k);
      Big bound = it == sent.end() ? 0 : it->second;
      if (amount > bound) {
        out_.push_back({"return_bound", sim_.chains()[std::get<0>(k)].spec.name + " accepted " + str(amount) + " of " +
                                            std::get<2>(k).str() + " back from sidechain " +
                                            std::to_string(std::get<1>(k)) + " after sending " + str(bound)});
      }
    }
  }

  bool redeemed_anywhere(const Digest& d) const {
    return std::any_of(views_.begin(), views_.end(), [&](const View& v) { return v.redeemed->count(d) != 0; });
  }

  void routing() {
    for (const auto& f : effective_) {
      if (!f.ti || !views_[f.from].honest) continue;
      // A misrouted CSW message is unredeemable; only deliveries count.
      if (f.via_csw && !redeemed_anywhere(message_digest(f.msg))) continue;
      if (f.ti->issuer != f.msg.sending_sc && f.ti->issuer != f.msg.receiving_sc) {
        out_.push_back({"routing_restriction", sim_.chains()[f.from].spec.name + " sent " + key_of(*f.ti).str() +
                                                   " to third party sidechain " + f.msg.receiving_sc.str()});
      }
    }
  }

  const Simulation& sim_;
  std::vector<View> views_;
  std::vector<Flow> effective_;
  std::map<Digest, Flow> by_digest_;
  std::map<Digest, std::size_t> consumed_;
  std::map<std::size_t, std::vector<TokenInstance>> withdrawn_;
  std::vector<Violation> out_;
};

}  // namespace

std::vector<Violation> audit(const Simulation& sim) { return Auditor(sim).run(); }

}  // namespace sidelink::harness
