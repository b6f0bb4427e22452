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

#include "irismpc/engine.hpp"

#include <cstring>

namespace irismpc {

void EngineConfig::validate() const {
  if (l == 0 || l % 8 != 0) throw BoundsError("l must be a positive multiple of 8");
  if (params.a > params.b) throw BoundsError("threshold numerator exceeds denominator");
  if (variant == Variant::plain_mask) {
    check_public_mask_bound(l, 16);
  } else {
    if (params.m != 16) throw BoundsError("shared-mask variants fix b = 2^16");
    check_shared_mask_bound(l, params.b, 32);
  }
  if (rotations % 2 == 0) throw BoundsError("rotations must be odd");
  if (backend == Backend::shamir && rotations > 1 && (l / 64) % 2 != 0) {
    throw BoundsError("shamir packing needs an even rotation stride (l/64)");
  }
}

std::uint64_t EngineConfig::digest(std::uint64_t s) const {
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto mix = [&h](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xff;
      h *= 0x100000001b3ull;
    }
  };
  mix(static_cast<std::uint64_t>(backend));
  mix(static_cast<std::uint64_t>(variant));
  mix(l);
  mix(s);
  mix(params.a);
  mix(params.b);
  mix(params.m);
  mix(rotations);
  mix(code_bits(variant));
  mix(mask_bits(variant));
  return h;
}

void handshake(PartyCtx& ctx, std::uint64_t digest) {
  std::vector<std::uint8_t> buf(8);
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<std::uint8_t>(digest >> (8 * i));
  ctx.comm.send(ctx.next(), Phase::setup, buf);
  ctx.comm.round(Phase::setup);
  const auto in = ctx.comm.recv(ctx.prev(), Phase::setup);
  if (in.size() != 8 || in != buf) {
    throw ConfigMismatchError("parties disagree on protocol configuration");
  }
}

namespace {

std::size_t popcount_and(const BitVec& a, const BitVec& b) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < a.words().size(); ++i) {
    c += static_cast<std::size_t>(std::popcount(a.words()[i] & b.words()[i]));
  }
  return c;
}

// Re-randomizes and reshares two additive vectors of different widths in a
// single message, so the dot phase costs one round.
template <unsigned KA, unsigned KB>
void reshare_pair(PartyCtx& ctx, std::span<const Ring<KA>> za, std::span<const Ring<KB>> zb,
                  std::vector<RepShare<KA>>& ra, std::vector<RepShare<KB>>& rb, Phase phase) {
  std::vector<std::uint8_t> buf;
  buf.reserve(za.size() * Ring<KA>::byte_size + zb.size() * Ring<KB>::byte_size);
  ra.resize(za.size());
  rb.resize(zb.size());
  for (std::size_t i = 0; i < za.size(); ++i) {
    ra[i].own = za[i] + ctx.seeds.zero_ring<KA>();
    put_ring(buf, ra[i].own);
  }
  for (std::size_t i = 0; i < zb.size(); ++i) {
    rb[i].own = zb[i] + ctx.seeds.zero_ring<KB>();
    put_ring(buf, rb[i].own);
  }
  ctx.comm.send(ctx.next(), phase, buf);
  ctx.comm.round(phase);
  const auto in = ctx.comm.recv(ctx.prev(), phase);
  if (in.size() != buf.size()) throw TransportError("dot reshare: bad payload size");
  const std::uint8_t* p = in.data();
  for (std::size_t i = 0; i < za.size(); ++i, p += Ring<KA>::byte_size) {
    ra[i].prev = get_ring<KA>(p);
  }
  for (std::size_t i = 0; i < zb.size(); ++i, p += Ring<KB>::byte_size) {
    rb[i].prev = get_ring<KB>(p);
  }
}

struct LedgerSnapshot {
  PhaseCounters dot, lift, msb, or_tree, ot;
  static LedgerSnapshot take(const CommLedger& led) {
    return {led.phase(Phase::dot), led.phase(Phase::lift), led.phase(Phase::msb),
            led.phase(Phase::or_tree), led.phase(Phase::ot)};
  }
};

void fill_stats(QueryStats& st, const EngineConfig& cfg, const LedgerSnapshot& before,
                const CommLedger& led) {
  const auto after = LedgerSnapshot::take(led);
  st.variant = to_string(cfg.variant);
  st.backend = to_string(cfg.backend);
  st.l = cfg.l;
  st.dot_bytes = after.dot.bytes_sent - before.dot.bytes_sent;
  st.dot_rounds = after.dot.rounds - before.dot.rounds;
  st.lift_bytes = (after.lift.bytes_sent - before.lift.bytes_sent) +
                  (after.ot.bytes_sent - before.ot.bytes_sent);
  st.lift_rounds =
      (after.lift.rounds - before.lift.rounds) + (after.ot.rounds - before.ot.rounds);
  st.msb_bytes = after.msb.bytes_sent - before.msb.bytes_sent;
  st.msb_rounds = after.msb.rounds - before.msb.rounds;
  st.or_tree_bytes = after.or_tree.bytes_sent - before.or_tree.bytes_sent;
  st.or_tree_rounds = after.or_tree.rounds - before.or_tree.rounds;
}

}  // namespace

template <Backend B, unsigned KH, unsigned KM>
void Session<B, KH, KM>::load_db(std::span<const std::uint8_t> payload, std::uint64_t s) {
  const std::size_t l = cfg_.l;
  const std::size_t expect =
      s * (code_record_bytes(cfg_.backend, cfg_.variant, l) +
           mask_record_bytes(cfg_.backend, cfg_.variant, l));
  if (payload.size() != expect) throw Error("db payload size mismatch");
  s_ = s;
  const std::uint8_t* p = payload.data();

  if constexpr (kRep) {
    db_rep_.rows = s;
    db_rep_.len = l;
    db_rep_.own_sum.reserve(s * l);
    db_rep_.prev.reserve(s * l);
  } else {
    db_gr_.rows = s;
    db_gr_.len = l / 2;
    db_gr_.c0.reserve(s * l / 2);
    db_gr_.c1.reserve(s * l / 2);
  }
  if constexpr (KM != 0) {
    if constexpr (kRep) {
      db_mask_rep_.rows = s;
      db_mask_rep_.len = l;
      db_mask_rep_.own_sum.reserve(s * l);
      db_mask_rep_.prev.reserve(s * l);
    } else {
      db_mask_gr_.rows = s;
      db_mask_gr_.len = l / 2;
      db_mask_gr_.c0.reserve(s * l / 2);
      db_mask_gr_.c1.reserve(s * l / 2);
    }
  }

  for (std::uint64_t r = 0; r < s; ++r) {
    if constexpr (kRep) {
      auto inst = detail::parse_rep_inst<KH>(p, l);
      db_rep_.own_sum.insert(db_rep_.own_sum.end(), inst.sum.begin(), inst.sum.end());
      db_rep_.prev.insert(db_rep_.prev.end(), inst.prev.begin(), inst.prev.end());
    } else {
      auto inst = detail::parse_gr_inst<KH>(p, l, ctx_.id);
      db_gr_.c0.insert(db_gr_.c0.end(), inst.lc0.begin(), inst.lc0.end());
      db_gr_.c1.insert(db_gr_.c1.end(), inst.lc1.begin(), inst.lc1.end());
    }
    if constexpr (KM == 0) {
      db_plain_masks_.push_back(detail::parse_mask_bits(p, l));
    } else if constexpr (kRep) {
      auto inst = detail::parse_rep_inst<kMaskK>(p, l);
      db_mask_rep_.own_sum.insert(db_mask_rep_.own_sum.end(), inst.sum.begin(), inst.sum.end());
      db_mask_rep_.prev.insert(db_mask_rep_.prev.end(), inst.prev.begin(), inst.prev.end());
    } else {
      auto inst = detail::parse_gr_inst<kMaskK>(p, l, ctx_.id);
      db_mask_gr_.c0.insert(db_mask_gr_.c0.end(), inst.lc0.begin(), inst.lc0.end());
      db_mask_gr_.c1.insert(db_mask_gr_.c1.end(), inst.lc1.begin(), inst.lc1.end());
    }
  }
}

template <Backend B, unsigned KH, unsigned KM>
auto Session<B, KH, KM>::parse_query(std::span<const std::uint8_t> payload)
    -> std::vector<QueryCode> {
  const std::size_t per_code = code_record_bytes(cfg_.backend, cfg_.variant, cfg_.l) +
                               mask_record_bytes(cfg_.backend, cfg_.variant, cfg_.l);
  if (payload.size() % per_code != 0) throw Error("query payload size mismatch");
  const std::size_t n = payload.size() / per_code;
  std::vector<QueryCode> out(n);
  const std::uint8_t* p = payload.data();
  for (std::size_t i = 0; i < n; ++i) {
    if constexpr (kRep) {
      out[i].code = detail::parse_rep_inst<KH>(p, cfg_.l);
    } else {
      out[i].code = detail::parse_gr_inst<KH>(p, cfg_.l, ctx_.id);
    }
    if constexpr (KM == 0) {
      out[i].plain_mask = detail::parse_mask_bits(p, cfg_.l);
    } else if constexpr (kRep) {
      out[i].mask = detail::parse_rep_inst<kMaskK>(p, cfg_.l);
    } else {
      out[i].mask = detail::parse_gr_inst<kMaskK>(p, cfg_.l, ctx_.id);
    }
  }
  return out;
}

template <Backend B, unsigned KH, unsigned KM>
MembershipResult Session<B, KH, KM>::membership(std::span<const std::uint8_t> query_payload) {
  auto q = parse_query(query_payload);
  if (q.size() != 1) throw Error("membership expects exactly one query code");
  Schedule sched;
  sched.db_blocks.push_back(&q[0]);
  sched.groups.resize(1);
  const std::size_t lanes = s_;
  sched.groups[0].resize(lanes);
  for (std::size_t i = 0; i < lanes; ++i) sched.groups[0][i] = static_cast<std::uint32_t>(i);
  return run_schedule(sched, 1);
}

template <Backend B, unsigned KH, unsigned KM>
MembershipResult Session<B, KH, KM>::batch_query(std::span<const std::uint8_t> query_payload,
                                                 unsigned persons) {
  auto q = parse_query(query_payload);
  if (q.size() != 2 * static_cast<std::size_t>(persons)) {
    throw Error("batch query expects 2 codes per person");
  }
  const unsigned r = cfg_.rotations;
  const int half = static_cast<int>(r - 1) / 2;
  const std::ptrdiff_t stride = static_cast<std::ptrdiff_t>(cfg_.l / 64);

  // rotated[q][j]: rotation offset (j - half) * stride of query code q
  std::vector<std::vector<QueryCode>> rotated(q.size());
  for (std::size_t c = 0; c < q.size(); ++c) {
    rotated[c].reserve(r);
    for (int j = 0; j < static_cast<int>(r); ++j) {
      const std::ptrdiff_t by = (j - half) * stride;
      QueryCode rc;
      rc.code = q[c].code.rotated(by);
      if constexpr (KM == 0) {
        rc.plain_mask = q[c].plain_mask.rotated(by);
      } else {
        rc.mask = q[c].mask.rotated(by);
      }
      rotated[c].push_back(std::move(rc));
    }
  }

  Schedule sched;
  sched.groups.resize(persons);
  // database lanes: every rotation of every eye against all rows
  for (std::size_t c = 0; c < q.size(); ++c) {
    for (unsigned j = 0; j < r; ++j) {
      const std::uint32_t base =
          static_cast<std::uint32_t>(sched.db_blocks.size() * s_);
      sched.db_blocks.push_back(&rotated[c][j]);
      for (std::uint64_t row = 0; row < s_; ++row) {
        sched.groups[c / 2].push_back(base + static_cast<std::uint32_t>(row));
      }
    }
  }
  // inner-batch lanes: each eye's rotations against every other person's
  // eyes (same-person eyes legitimately co-occur and are skipped)
  const std::uint32_t pair_base = static_cast<std::uint32_t>(sched.db_blocks.size() * s_);
  std::uint32_t k = 0;
  for (unsigned i = 0; i < persons; ++i) {
    for (unsigned j = i + 1; j < persons; ++j) {
      for (unsigned ea = 0; ea < 2; ++ea) {
        for (unsigned eb = 0; eb < 2; ++eb) {
          for (unsigned rot = 0; rot < r; ++rot) {
            sched.pairs.emplace_back(&rotated[2 * i + ea][rot],
                                     &rotated[2 * j + eb][static_cast<unsigned>(half)]);
            sched.groups[i].push_back(pair_base + k);
            sched.groups[j].push_back(pair_base + k);
            ++k;
          }
        }
      }
    }
  }
  return run_schedule(sched, persons);
}

template <Backend B, unsigned KH, unsigned KM>
MembershipResult Session<B, KH, KM>::run_schedule(const Schedule& sched, std::uint64_t batch) {
  MembershipResult res;
  const auto t0 = std::chrono::steady_clock::now();
  handshake(ctx_, cfg_.digest(s_));
  const auto before = LedgerSnapshot::take(ctx_.comm.ledger());

  const std::size_t n = sched.db_blocks.size() * s_ + sched.pairs.size();
  res.lane_count = n;

  // --- dot phase: all hamming and mask dot products, one reshare round ---
  std::vector<Ring<KH>> hd_add(n);
  std::vector<Ring<kMaskK>> ml_add(KM == 0 ? 0 : n);
  std::vector<std::int64_t> public_ml(KM == 0 ? n : 0);

  for (std::size_t b = 0; b < sched.db_blocks.size(); ++b) {
    const QueryCode* ys = sched.db_blocks[b];
    std::span<Ring<KH>> out(hd_add.data() + b * s_, s_);
    if constexpr (kRep) {
      kernels::dot_prep_rows<KH>(db_rep_, ys->code.sum, ys->code.prev, out, cfg_.parallel_dot);
    } else {
      kernels::dot_gr_ct_rows<KH>(db_gr_, ys->code.c0, ys->code.c1, out, cfg_.parallel_dot);
    }
    if constexpr (KM != 0) {
      std::span<Ring<kMaskK>> mout(ml_add.data() + b * s_, s_);
      if constexpr (kRep) {
        kernels::dot_prep_rows<kMaskK>(db_mask_rep_, ys->mask.sum, ys->mask.prev, mout,
                                       cfg_.parallel_dot);
      } else {
        kernels::dot_gr_ct_rows<kMaskK>(db_mask_gr_, ys->mask.c0, ys->mask.c1, mout,
                                        cfg_.parallel_dot);
      }
    } else {
      for (std::uint64_t row = 0; row < s_; ++row) {
        public_ml[b * s_ + row] =
            static_cast<std::int64_t>(popcount_and(ys->plain_mask, db_plain_masks_[row]));
      }
    }
  }
  const std::size_t pair_off = sched.db_blocks.size() * s_;
  for (std::size_t k = 0; k < sched.pairs.size(); ++k) {
    const auto& [xs, ys] = sched.pairs[k];
    if constexpr (kRep) {
      hd_add[pair_off + k] = detail::rep_pair_dot<KH>(xs->code, ys->code);
    } else {
      hd_add[pair_off + k] = detail::gr_pair_dot<KH>(xs->code, ys->code);
    }
    if constexpr (KM != 0) {
      if constexpr (kRep) {
        ml_add[pair_off + k] = detail::rep_pair_dot<kMaskK>(xs->mask, ys->mask);
      } else {
        ml_add[pair_off + k] = detail::gr_pair_dot<kMaskK>(xs->mask, ys->mask);
      }
    } else {
      public_ml[pair_off + k] =
          static_cast<std::int64_t>(popcount_and(xs->plain_mask, ys->plain_mask));
    }
  }

  std::vector<RepShare<KH>> hd;
  std::vector<RepShare<kMaskK>> ml;
  reshare_pair<KH, kMaskK>(ctx_, hd_add, ml_add, hd, ml, Phase::dot);

  // --- comparison phase ---
  std::vector<RepShare<kCmpBits>> diff;
  if constexpr (KM == 0) {
    diff = plain_diff_lanes<16>(ctx_.id, cfg_.params, hd, public_ml);
  } else {
    diff = shared_diff_lanes<KH, KM>(ctx_, cfg_.params, hd, ml, &res.lift_adder);
  }
  auto ext = msb_batch<kCmpBits>(ctx_, diff);
  res.msb = ext.stats;
  const BitRow& bits = ext.bits[0];

  if (cfg_.debug_rows) {
    auto opened = open_bits_to(ctx_, bits, n, kOutputParty, OpenKind::row_debug);
    if (ctx_.id == kOutputParty) res.row_bits = std::move(opened);
  }

  // --- aggregation ---
  std::vector<OrTreeInput> groups;
  groups.reserve(sched.groups.size());
  for (const auto& g : sched.groups) {
    OrTreeInput in;
    in.lanes = g.size();
    in.bits = BitRow(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) in.bits.set_lane(i, bits.lane(g[i]));
    groups.push_back(std::move(in));
  }
  auto [agg, or_stats] = or_tree_batch(ctx_, std::move(groups));
  res.or_tree_stats = or_stats;

  auto opened = open_bits_to(ctx_, agg, sched.groups.size(), kOutputParty, OpenKind::aggregate);
  if (ctx_.id == kOutputParty) res.person_match = std::move(opened);

  const auto t1 = std::chrono::steady_clock::now();
  fill_stats(res.stats, cfg_, before, ctx_.comm.ledger());
  res.stats.s = s_;
  res.stats.batch = batch;
  res.stats.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  return res;
}

// --- runtime dispatch --------------------------------------------------------

namespace {

template <Backend B, unsigned KH, unsigned KM>
MembershipResult dispatch_membership(PartyCtx& ctx, const EngineConfig& cfg,
                                     std::span<const std::uint8_t> db, std::uint64_t s,
                                     std::span<const std::uint8_t> query) {
  Session<B, KH, KM> session(ctx, cfg);
  session.load_db(db, s);
  return session.membership(query);
}

template <Backend B, unsigned KH, unsigned KM>
MembershipResult dispatch_batch(PartyCtx& ctx, const EngineConfig& cfg,
                                std::span<const std::uint8_t> db, std::uint64_t s,
                                std::span<const std::uint8_t> query, unsigned persons) {
  Session<B, KH, KM> session(ctx, cfg);
  session.load_db(db, s);
  return session.batch_query(query, persons);
}

}  // namespace

MembershipResult party_membership(PartyCtx& ctx, const EngineConfig& cfg,
                                  std::span<const std::uint8_t> db, std::uint64_t s,
                                  std::span<const std::uint8_t> query) {
  auto run = [&](auto tag) {
    constexpr Backend B = decltype(tag)::kB;
    constexpr unsigned KH = decltype(tag)::kKH;
    constexpr unsigned KM = decltype(tag)::kKM;
    return dispatch_membership<B, KH, KM>(ctx, cfg, db, s, query);
  };
  return dispatch_typed(cfg.backend, cfg.variant, run);
}

MembershipResult party_batch_query(PartyCtx& ctx, const EngineConfig& cfg,
                                   std::span<const std::uint8_t> db, std::uint64_t s,
                                   std::span<const std::uint8_t> query, unsigned persons) {
  auto run = [&](auto tag) {
    constexpr Backend B = decltype(tag)::kB;
    constexpr unsigned KH = decltype(tag)::kKH;
    constexpr unsigned KM = decltype(tag)::kKM;
    return dispatch_batch<B, KH, KM>(ctx, cfg, db, s, query, persons);
  };
  return dispatch_typed(cfg.backend, cfg.variant, run);
}

ComparisonBenchResult party_comparison_only(PartyCtx& ctx, const EngineConfig& cfg,
                                            std::span<const std::uint8_t> hd_payload,
                                            std::span<const std::uint8_t> ml_payload,
                                            std::size_t lanes, bool with_or_tree) {
  cfg.validate();
  ComparisonBenchResult res;
  const Variant v = cfg.variant;

  auto parse_rep_shares = [&]<unsigned K>(std::span<const std::uint8_t> payload) {
    std::vector<RepShare<K>> out(lanes);
    if (payload.size() != lanes * 2 * Ring<K>::byte_size) {
      throw Error("bench payload size mismatch");
    }
    const std::uint8_t* p = payload.data();
    for (std::size_t i = 0; i < lanes; ++i) {
      out[i].own = get_ring<K>(p);
      p += Ring<K>::byte_size;
      out[i].prev = get_ring<K>(p);
      p += Ring<K>::byte_size;
    }
    return out;
  };

  std::vector<RepShare<16>> diff16;
  std::vector<RepShare<32>> diff32;
  if (v == Variant::plain_mask) {
    auto hd = parse_rep_shares.operator()<16>(hd_payload);
    std::vector<std::int64_t> public_ml(lanes);
    if (ml_payload.size() != lanes * 8) throw Error("bench ml payload size mismatch");
    for (std::size_t i = 0; i < lanes; ++i) {
      std::uint64_t w = 0;
      std::memcpy(&w, ml_payload.data() + 8 * i, 8);
      public_ml[i] = static_cast<std::int64_t>(w);
    }
    diff16 = plain_diff_lanes<16>(ctx.id, cfg.params, hd, public_ml);
  } else if (v == Variant::mpc_lift) {
    auto hd = parse_rep_shares.operator()<16>(hd_payload);
    auto ml = parse_rep_shares.operator()<16>(ml_payload);
    diff32 = shared_diff_lanes<16, 16>(ctx, cfg.params, hd, ml, &res.lift_adder);
  } else if (v == Variant::const_lift) {
    auto hd = parse_rep_shares.operator()<16>(hd_payload);
    auto ml = parse_rep_shares.operator()<32>(ml_payload);
    diff32 = shared_diff_lanes<16, 32>(ctx, cfg.params, hd, ml, &res.lift_adder);
  } else {
    auto hd = parse_rep_shares.operator()<32>(hd_payload);
    auto ml = parse_rep_shares.operator()<32>(ml_payload);
    diff32 = shared_diff_lanes<32, 32>(ctx, cfg.params, hd, ml, &res.lift_adder);
  }

  BitRow bits;
  if (v == Variant::plain_mask) {
    auto ext = msb_batch<16>(ctx, diff16);
    res.msb = ext.stats;
    bits = std::move(ext.bits[0]);
  } else {
    auto ext = msb_batch<32>(ctx, diff32);
    res.msb = ext.stats;
    bits = std::move(ext.bits[0]);
  }

  if (with_or_tree) {
    auto [agg, or_stats] = or_tree(ctx, std::move(bits), lanes);
    res.or_tree_stats = or_stats;
    auto opened = open_bits_to(ctx, agg, 1, kOutputParty, OpenKind::aggregate);
    if (ctx.id == kOutputParty) res.opened = std::move(opened);
  }
  return res;
}

OrTreeOnlyResult party_or_tree_only(PartyCtx& ctx, std::span<const std::uint8_t> payload,
                                    std::size_t lanes) {
  const std::size_t words = (lanes + 63) / 64;
  if (payload.size() != words * 16) throw Error("or-tree payload size mismatch");
  BitRow bits(lanes);
  for (std::size_t w = 0; w < words; ++w) {
    std::memcpy(&bits.w[w].own, payload.data() + 16 * w, 8);
    std::memcpy(&bits.w[w].prev, payload.data() + 16 * w + 8, 8);
  }
  OrTreeOnlyResult res;
  auto [agg, stats] = or_tree(ctx, std::move(bits), lanes);
  res.stats = stats;
  auto opened = open_bits_to(ctx, agg, 1, kOutputParty, OpenKind::aggregate);
  if (ctx.id == kOutputParty) res.opened = std::move(opened);
  return res;
}

}  // namespace irismpc
