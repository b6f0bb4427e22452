// Copyright 2026 The irismpc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <functional>
#include <span>
#include <thread>
#include <utility>

#include "irismpc/engine.hpp"
#include "irismpc/transport.hpp"

namespace irismpc {

// Runs one callable per party over in-process channels; rethrows the first
// party exception. F: PartyCtx& -> R.
template <typename F>
auto run_parties(std::uint64_t seed, F&& fn)
    -> std::array<std::tuple<decltype(fn(std::declval<PartyCtx&>())), CommLedger, OpenAudit>, 3> {
  using R = decltype(fn(std::declval<PartyCtx&>()));
  InProcNet net;
  Rng seed_rng(CtrPrf::derive(CtrPrf::seed_from_u64(seed), 0x5eed));
  const auto seeds = deal_seeds(seed_rng);

  std::array<std::tuple<R, CommLedger, OpenAudit>, 3> out;
  std::array<std::exception_ptr, 3> errs;
  std::array<std::thread, 3> threads;
  for (unsigned p = 1; p <= 3; ++p) {
    threads[p - 1] = std::thread([&, p] {
      const auto id = static_cast<PartyId>(p);
      PartyCtx ctx{id, net.comm(id), seed_pair_for(id, seeds)};
      try {
        std::get<0>(out[p - 1]) = fn(ctx);
      } catch (...) {
        errs[p - 1] = std::current_exception();
        net.abort();  // unblock the surviving parties
      }
      std::get<1>(out[p - 1]) = ctx.comm.ledger();
      std::get<2>(out[p - 1]) = ctx.audit;
    });
  }
  for (auto& t : threads) t.join();
  // Report the root cause: prefer a protocol error over the transport
  // errors it triggers in the other parties.
  std::exception_ptr transport_err;
  for (const auto& e : errs) {
    if (!e) continue;
    try {
      std::rethrow_exception(e);
    } catch (const TransportError&) {
      transport_err = e;
    } catch (...) {
      std::rethrow_exception(e);
    }
  }
  if (transport_err) std::rethrow_exception(transport_err);
  return out;
}

struct LocalOutcome {
  std::array<MembershipResult, 3> party;
  std::array<CommLedger, 3> ledgers;
  std::array<OpenAudit, 3> audits;

  const MembershipResult& output() const { return party[0]; }
  bool aggregate(unsigned person = 0) const { return party[0].person_match.at(person) != 0; }
};

LocalOutcome run_membership_local(const EngineConfig& cfg, const IrisRecord& query,
                                  const IrisDb& db, std::uint64_t seed);

LocalOutcome run_batch_local(const EngineConfig& cfg,
                             std::span<const std::pair<IrisRecord, IrisRecord>> persons,
                             const IrisDb& db, std::uint64_t seed);

struct ComparisonOutcome {
  std::array<ComparisonBenchResult, 3> party;
  std::array<CommLedger, 3> ledgers;
  double wall_ms = 0.0;  // slowest party
};

// Comparison phase in isolation over pre-shared dot-product outputs.
// Each element of `hd_ml` is a plaintext (masked-dot, ml) pair.
ComparisonOutcome run_comparison_local(const EngineConfig& cfg,
                                       std::span<const std::pair<std::int64_t, std::int64_t>> hd_ml,
                                       bool with_or_tree, std::uint64_t seed);

struct OrTreeOutcome {
  std::array<GateStats, 3> stats;
  std::array<CommLedger, 3> ledgers;
  bool aggregate = false;
  double wall_ms = 0.0;
};

OrTreeOutcome run_or_tree_local(std::span<const std::uint8_t> bits, std::uint64_t seed);

}  // namespace irismpc
