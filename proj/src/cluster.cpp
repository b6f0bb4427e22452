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

#include "irismpc/cluster.hpp"

#include <chrono>
#include <vector>

namespace irismpc {

namespace {

Rng sub_rng(std::uint64_t seed, std::uint64_t tag) {
  return Rng(CtrPrf::derive(CtrPrf::seed_from_u64(seed), tag));
}

}  // namespace

LocalOutcome run_membership_local(const EngineConfig& cfg, const IrisRecord& query,
                                  const IrisDb& db, std::uint64_t seed) {
  Rng db_rng = sub_rng(seed, 1);
  Rng q_rng = sub_rng(seed, 2);
  const auto db_payload = deal_db_payload(db, cfg.backend, cfg.variant, db_rng);
  const IrisRecord codes[1] = {query};
  const auto q_payload = deal_query_payload(codes, cfg.backend, cfg.variant, q_rng);

  auto results = run_parties(seed, [&](PartyCtx& ctx) {
    const unsigned i = party_index(ctx.id) - 1;
    return party_membership(ctx, cfg, db_payload[i], db.size(), q_payload[i]);
  });

  LocalOutcome out;
  for (unsigned i = 0; i < 3; ++i) {
    out.party[i] = std::move(std::get<0>(results[i]));
    out.ledgers[i] = std::get<1>(results[i]);
    out.audits[i] = std::get<2>(results[i]);
  }
  return out;
}

LocalOutcome run_batch_local(const EngineConfig& cfg,
                             std::span<const std::pair<IrisRecord, IrisRecord>> persons,
                             const IrisDb& db, std::uint64_t seed) {
  Rng db_rng = sub_rng(seed, 1);
  Rng q_rng = sub_rng(seed, 2);
  const auto db_payload = deal_db_payload(db, cfg.backend, cfg.variant, db_rng);
  std::vector<IrisRecord> codes;
  codes.reserve(2 * persons.size());
  for (const auto& [left, right] : persons) {
    codes.push_back(left);
    codes.push_back(right);
  }
  const auto q_payload = deal_query_payload(codes, cfg.backend, cfg.variant, q_rng);

  auto results = run_parties(seed, [&](PartyCtx& ctx) {
    const unsigned i = party_index(ctx.id) - 1;
    return party_batch_query(ctx, cfg, db_payload[i], db.size(), q_payload[i],
                             static_cast<unsigned>(persons.size()));
  });

  LocalOutcome out;
  for (unsigned i = 0; i < 3; ++i) {
    out.party[i] = std::move(std::get<0>(results[i]));
    out.ledgers[i] = std::get<1>(results[i]);
    out.audits[i] = std::get<2>(results[i]);
  }
  return out;
}

namespace {

template <unsigned K>
void emit_rep_share_list(std::array<std::vector<std::uint8_t>, 3>& out,
                         std::span<const std::int64_t> values, Rng& rng) {
  for (const auto v : values) {
    const auto sh = share<K>(Ring<K>::from_signed(v), rng);
    for (unsigned p = 0; p < 3; ++p) {
      put_ring(out[p], sh[p].own);
      put_ring(out[p], sh[p].prev);
    }
  }
}

}  // namespace

ComparisonOutcome run_comparison_local(const EngineConfig& cfg,
                                       std::span<const std::pair<std::int64_t, std::int64_t>> hd_ml,
                                       bool with_or_tree, std::uint64_t seed) {
  Rng rng = sub_rng(seed, 3);
  const std::size_t n = hd_ml.size();
  std::vector<std::int64_t> dots(n), mls(n);
  for (std::size_t i = 0; i < n; ++i) {
    dots[i] = hd_ml[i].first;
    mls[i] = hd_ml[i].second;
  }

  std::array<std::vector<std::uint8_t>, 3> hd_payload, ml_payload;
  if (code_bits(cfg.variant) == 16) {
    emit_rep_share_list<16>(hd_payload, dots, rng);
  } else {
    emit_rep_share_list<32>(hd_payload, dots, rng);
  }
  switch (mask_bits(cfg.variant)) {
    case 0:
      for (unsigned p = 0; p < 3; ++p) {
        for (const auto ml : mls) {
          const auto w = static_cast<std::uint64_t>(ml);
          for (int b = 0; b < 8; ++b) {
            ml_payload[p].push_back(static_cast<std::uint8_t>(w >> (8 * b)));
          }
        }
      }
      break;
    case 16: emit_rep_share_list<16>(ml_payload, mls, rng); break;
    case 32: emit_rep_share_list<32>(ml_payload, mls, rng); break;
  }

  auto results = run_parties(seed, [&](PartyCtx& ctx) {
    const unsigned i = party_index(ctx.id) - 1;
    const auto t0 = std::chrono::steady_clock::now();
    auto r = party_comparison_only(ctx, cfg, hd_payload[i], ml_payload[i], n, with_or_tree);
    const auto t1 = std::chrono::steady_clock::now();
    r.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    return r;
  });

  ComparisonOutcome out;
  for (unsigned i = 0; i < 3; ++i) {
    out.party[i] = std::move(std::get<0>(results[i]));
    out.ledgers[i] = std::get<1>(results[i]);
    if (out.party[i].wall_ms > out.wall_ms) out.wall_ms = out.party[i].wall_ms;
  }
  return out;
}

OrTreeOutcome run_or_tree_local(std::span<const std::uint8_t> bits, std::uint64_t seed) {
  Rng rng = sub_rng(seed, 4);
  const std::size_t n = bits.size();
  const std::size_t words = (n + 63) / 64;
  std::array<std::vector<std::uint8_t>, 3> payload;
  for (std::size_t w = 0; w < words; ++w) {
    std::uint64_t plain = 0;
    for (std::size_t b = 0; b < 64 && 64 * w + b < n; ++b) {
      if (bits[64 * w + b]) plain |= std::uint64_t{1} << b;
    }
    const auto sh = share_bits(plain, rng);
    for (unsigned p = 0; p < 3; ++p) {
      for (int i = 0; i < 8; ++i) {
        payload[p].push_back(static_cast<std::uint8_t>(sh[p].own >> (8 * i)));
      }
      for (int i = 0; i < 8; ++i) {
        payload[p].push_back(static_cast<std::uint8_t>(sh[p].prev >> (8 * i)));
      }
    }
  }

  auto results = run_parties(seed, [&](PartyCtx& ctx) {
    const unsigned i = party_index(ctx.id) - 1;
    const auto t0 = std::chrono::steady_clock::now();
    auto r = party_or_tree_only(ctx, payload[i], n);
    const auto t1 = std::chrono::steady_clock::now();
    return std::pair<OrTreeOnlyResult, double>(
        std::move(r), std::chrono::duration<double, std::milli>(t1 - t0).count());
  });

  OrTreeOutcome out;
  for (unsigned i = 0; i < 3; ++i) {
    const auto& [r, ms] = std::get<0>(results[i]);
    out.stats[i] = r.stats;
    out.ledgers[i] = std::get<1>(results[i]);
    if (i == 0 && !r.opened.empty()) out.aggregate = r.opened[0] != 0;
    if (ms > out.wall_ms) out.wall_ms = ms;
  }
  return out;
}

}  // namespace irismpc
