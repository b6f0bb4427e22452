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

#include <chrono>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "irismpc/circuits.hpp"
#include "irismpc/convert.hpp"
#include "irismpc/iris.hpp"
#include "irismpc/kernels.hpp"
#include "irismpc/rep3.hpp"
#include "irismpc/shares.hpp"
#include "irismpc/transport.hpp"

namespace irismpc {

struct EngineConfig {
  Backend backend = Backend::replicated;
  Variant variant = Variant::plain_mask;
  std::uint32_t l = 12800;
  MatchParams params = MatchParams{};
  unsigned rotations = 1;
  bool debug_rows = false;   // opens per-row bits to the output party
  bool parallel_dot = false; // OpenMP over database rows

  void validate() const;
  std::uint64_t digest(std::uint64_t s) const;
};

struct QueryStats {
  std::string variant;
  std::string backend;
  std::uint64_t s = 0;
  std::uint64_t l = 0;
  std::uint64_t batch = 0;
  // lift includes the OT traffic of the bit injections
  std::uint64_t dot_bytes = 0, lift_bytes = 0, msb_bytes = 0, or_tree_bytes = 0;
  std::uint64_t dot_rounds = 0, lift_rounds = 0, msb_rounds = 0, or_tree_rounds = 0;
  double wall_ms = 0.0;
};

struct MembershipResult {
  std::vector<std::uint8_t> person_match;  // filled at the output party
  std::vector<std::uint8_t> row_bits;      // debug mode only, output party
  QueryStats stats;
  GateStats lift_adder;
  GateStats msb;
  GateStats or_tree_stats;
  std::uint64_t lane_count = 0;
};

constexpr PartyId kOutputParty = PartyId::p1;

// Ring-wise exchange of a config digest; throws ConfigMismatchError on any
// disagreement before protocol bytes move.
void handshake(PartyCtx& ctx, std::uint64_t digest);

// --- comparison phase -------------------------------------------------------

// Public-mask comparison input: MSB of ceil((1-2*ratio)*ml) - hd.
template <unsigned K>
std::vector<RepShare<K>> plain_diff_lanes(PartyId self, const MatchParams& params,
                                          std::span<const RepShare<K>> hd,
                                          std::span<const std::int64_t> public_ml) {
  std::vector<RepShare<K>> out(hd.size());
  for (std::size_t i = 0; i < hd.size(); ++i) {
    const Ring<K> t(static_cast<std::uint64_t>(params.plain_threshold(public_ml[i])));
    out[i] = public_minus(t, hd[i], self);
  }
  return out;
}

// Shared-mask comparison input: MSB of a*ml' - b*hd'. hd comes out of a
// KH-bit dot product, ml out of a KM-bit one; lifting per variant:
//   KH=16: hd is const-lifted by b = 2^16 for free
//   KM=16: ml is lifted in MPC (the only interactive step)
//   KM=32: ml is already wide enough
template <unsigned KH, unsigned KM>
std::vector<RepShare<32>> shared_diff_lanes(PartyCtx& ctx, const MatchParams& params,
                                            std::span<const RepShare<KH>> hd,
                                            std::span<const RepShare<KM>> ml,
                                            GateStats* lift_adder) {
  static_assert(KM == 16 || KM == 32);
  std::vector<RepShare<32>> ml32;
  if constexpr (KM == 16) {
    auto lifted = lift<16, 16>(ctx, ml);
    ml32 = std::move(lifted.out);
    if (lift_adder) *lift_adder += lifted.adder;
  } else {
    ml32.assign(ml.begin(), ml.end());
  }
  std::vector<RepShare<32>> out(hd.size());
  for (std::size_t i = 0; i < hd.size(); ++i) {
    const RepShare<32> aml = mul_public(ml32[i], Ring<32>(params.a));
    RepShare<32> bhd;
    if constexpr (KH == 16) {
      bhd = const_lift<32, 16>(hd[i], params.b);
    } else {
      bhd = mul_public(hd[i], Ring<32>(params.b));
    }
    out[i] = aml - bhd;
  }
  return out;
}

// --- typed per-party session -------------------------------------------------

namespace detail {

template <unsigned K>
std::vector<Ring<K>> rotate_vec(std::span<const Ring<K>> v, std::ptrdiff_t by) {
  std::vector<Ring<K>> out(v.size());
  if (v.empty()) return out;
  std::ptrdiff_t s = by % static_cast<std::ptrdiff_t>(v.size());
  if (s < 0) s += static_cast<std::ptrdiff_t>(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[(i + static_cast<std::size_t>(s)) % v.size()] = v[i];
  }
  return out;
}

// Replicated code/mask instance. (sum, prev) doubles as the preprocessed
// form, since own_sum = own + prev = sum.
template <unsigned K>
struct RepInst {
  std::vector<Ring<K>> sum, prev;

  RepInst rotated(std::ptrdiff_t by) const {
    return {rotate_vec<K>(sum, by), rotate_vec<K>(prev, by)};
  }
};

// Shamir instance: raw evaluations plus the lambda-scaled copy used on the
// database-like side of a dot product.
template <unsigned K>
struct GrInst {
  std::vector<Ring<K>> c0, c1, lc0, lc1;

  GrInst rotated(std::ptrdiff_t by_bits) const {
    const std::ptrdiff_t by = by_bits / 2;
    return {rotate_vec<K>(c0, by), rotate_vec<K>(c1, by), rotate_vec<K>(lc0, by),
            rotate_vec<K>(lc1, by)};
  }
};

template <unsigned K>
RepInst<K> parse_rep_inst(const std::uint8_t*& p, std::size_t l) {
  RepInst<K> inst;
  inst.sum.resize(l);
  inst.prev.resize(l);
  for (std::size_t i = 0; i < l; ++i) {
    const Ring<K> own = get_ring<K>(p);
    p += Ring<K>::byte_size;
    const Ring<K> prev = get_ring<K>(p);
    p += Ring<K>::byte_size;
    inst.sum[i] = own + prev;
    inst.prev[i] = prev;
  }
  return inst;
}

template <unsigned K>
GrInst<K> parse_gr_inst(const std::uint8_t*& p, std::size_t l, PartyId self) {
  const auto lambda = party_lagrange_at_zero<K>()[party_index(self) - 1];
  GrInst<K> inst;
  const std::size_t n = l / 2;
  inst.c0.resize(n);
  inst.c1.resize(n);
  inst.lc0.resize(n);
  inst.lc1.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    Gr<K> g(get_ring<K>(p), get_ring<K>(p + Ring<K>::byte_size));
    p += 2 * Ring<K>::byte_size;
    inst.c0[i] = g.c0;
    inst.c1[i] = g.c1;
    const Gr<K> lg = lambda * g;
    inst.lc0[i] = lg.c0;
    inst.lc1[i] = lg.c1;
  }
  return inst;
}

inline BitVec parse_mask_bits(const std::uint8_t*& p, std::size_t l) {
  BitVec m(l);
  for (std::size_t i = 0; i < l / 8; ++i) {
    m.words()[i / 8] |= static_cast<std::uint64_t>(p[i]) << (8 * (i % 8));
  }
  p += l / 8;
  return m;
}

// Additive dot of one (xs-side, ys-side) instance pair.
template <unsigned K>
Ring<K> rep_pair_dot(const RepInst<K>& xs, const RepInst<K>& ys) {
  return kernels::dot_prep_row<K>(xs.sum.data(), xs.prev.data(), ys.sum.data(), ys.prev.data(),
                                  xs.sum.size());
}

template <unsigned K>
Ring<K> gr_pair_dot(const GrInst<K>& xs, const GrInst<K>& ys) {
  return kernels::dot_gr_ct_row<K>(xs.lc0.data(), xs.lc1.data(), ys.c0.data(), ys.c1.data(),
                                   xs.c0.size());
}

}  // namespace detail

// One party's protocol session, typed on backend and ring widths.
// KM = 0 means public masks.
template <Backend B, unsigned KH, unsigned KM>
class Session {
 public:
  static constexpr unsigned kCmpBits = (KM == 0) ? 16 : 32;
  static constexpr bool kRep = (B == Backend::replicated);

  Session(PartyCtx& ctx, const EngineConfig& cfg) : ctx_(ctx), cfg_(cfg) { cfg_.validate(); }

  void load_db(std::span<const std::uint8_t> payload, std::uint64_t s);

  // Single query code against the whole database.
  MembershipResult membership(std::span<const std::uint8_t> query_payload);

  // Person batch: codes ordered [p0.left, p0.right, p1.left, ...], each eye
  // expanded to cfg.rotations rotations, matched against the database and
  // against every other person's eyes in the batch.
  MembershipResult batch_query(std::span<const std::uint8_t> query_payload, unsigned persons);

 private:
  using CodeInst = std::conditional_t<kRep, detail::RepInst<KH>, detail::GrInst<KH>>;
  static constexpr unsigned kMaskK = (KM == 0) ? 16 : KM;  // storage width when shared
  using MaskInst = std::conditional_t<kRep, detail::RepInst<kMaskK>, detail::GrInst<kMaskK>>;

  struct QueryCode {
    CodeInst code;
    MaskInst mask;     // KM > 0
    BitVec plain_mask; // KM == 0
  };

  // Lane order: db blocks first (block b covers lanes [b*s, (b+1)*s)), then
  // the query-pair lanes. groups[g] lists the lanes OR-ed into output g.
  struct Schedule {
    std::vector<const QueryCode*> db_blocks;
    std::vector<std::pair<const QueryCode*, const QueryCode*>> pairs;
    std::vector<std::vector<std::uint32_t>> groups;
  };

  std::vector<QueryCode> parse_query(std::span<const std::uint8_t> payload);
  MembershipResult run_schedule(const Schedule& sched, std::uint64_t batch);

  PartyCtx& ctx_;
  EngineConfig cfg_;
  std::uint64_t s_ = 0;

  // database storage
  kernels::PrepMatrix<KH> db_rep_;
  kernels::GrMatrix<KH> db_gr_;
  kernels::PrepMatrix<kMaskK> db_mask_rep_;
  kernels::GrMatrix<kMaskK> db_mask_gr_;
  std::vector<BitVec> db_plain_masks_;
};

// Runtime dispatch over (backend, variant): invokes fn with a tag carrying
// the compile-time (backend, code width, mask width) triple.
template <Backend B, unsigned KH, unsigned KM>
struct SessionTag {
  static constexpr Backend kB = B;
  static constexpr unsigned kKH = KH;
  static constexpr unsigned kKM = KM;
};

template <typename Fn>
auto dispatch_typed(Backend b, Variant v, Fn&& fn) {
  if (b == Backend::replicated) {
    switch (v) {
      case Variant::plain_mask: return fn(SessionTag<Backend::replicated, 16, 0>{});
      case Variant::mpc_lift: return fn(SessionTag<Backend::replicated, 16, 16>{});
      case Variant::const_lift: return fn(SessionTag<Backend::replicated, 16, 32>{});
      case Variant::no_lift: return fn(SessionTag<Backend::replicated, 32, 32>{});
    }
  } else {
    switch (v) {
      case Variant::plain_mask: return fn(SessionTag<Backend::shamir, 16, 0>{});
      case Variant::mpc_lift: return fn(SessionTag<Backend::shamir, 16, 16>{});
      case Variant::const_lift: return fn(SessionTag<Backend::shamir, 16, 32>{});
      case Variant::no_lift: return fn(SessionTag<Backend::shamir, 32, 32>{});
    }
  }
  throw Error("bad backend/variant");
}

// Runtime dispatch over (backend, variant).
MembershipResult party_membership(PartyCtx& ctx, const EngineConfig& cfg,
                                  std::span<const std::uint8_t> db_payload, std::uint64_t s,
                                  std::span<const std::uint8_t> query_payload);

MembershipResult party_batch_query(PartyCtx& ctx, const EngineConfig& cfg,
                                   std::span<const std::uint8_t> db_payload, std::uint64_t s,
                                   std::span<const std::uint8_t> query_payload, unsigned persons);

// Comparison phase in isolation (bench path): lanes of pre-shared (hd, ml)
// dot-product outputs, run through lifting, MSB extraction and one OR tree.
struct ComparisonBenchResult {
  std::vector<std::uint8_t> opened;  // aggregate bit at output party
  GateStats lift_adder;
  GateStats msb;
  GateStats or_tree_stats;
  double wall_ms = 0.0;
};

ComparisonBenchResult party_comparison_only(PartyCtx& ctx, const EngineConfig& cfg,
                                            std::span<const std::uint8_t> hd_payload,
                                            std::span<const std::uint8_t> ml_payload,
                                            std::size_t lanes, bool with_or_tree);

// OR tree in isolation over pre-shared bits (the Table-style or-tree row).
// Payload: per 64-lane word, (own, prev) as two little-endian u64.
struct OrTreeOnlyResult {
  GateStats stats;
  std::vector<std::uint8_t> opened;
};

OrTreeOnlyResult party_or_tree_only(PartyCtx& ctx, std::span<const std::uint8_t> payload,
                                    std::size_t lanes);

}  // namespace irismpc
