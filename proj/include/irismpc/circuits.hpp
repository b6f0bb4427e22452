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
#include <cstdint>
#include <span>
#include <vector>

#include "irismpc/rep3.hpp"
#include "irismpc/transport.hpp"

namespace irismpc {

// One boolean wire across a batch of lanes, 64 lanes per word.
struct BitRow {
  std::vector<BitWord> w;

  BitRow() = default;
  explicit BitRow(std::size_t lanes) : w((lanes + 63) / 64) {}

  BitWord lane(std::size_t i) const {
    BitWord b = w[i / 64];
    return {(b.own >> (i % 64)) & 1, (b.prev >> (i % 64)) & 1};
  }
  void set_lane(std::size_t i, BitWord bit) {
    w[i / 64].own |= (bit.own & 1) << (i % 64);
    w[i / 64].prev |= (bit.prev & 1) << (i % 64);
  }

  friend BitRow operator^(const BitRow& a, const BitRow& b) {
    BitRow out;
    out.w.resize(a.w.size());
    for (std::size_t i = 0; i < a.w.size(); ++i) out.w[i] = a.w[i] ^ b.w[i];
    return out;
  }
  BitRow& operator^=(const BitRow& o) {
    for (std::size_t i = 0; i < w.size(); ++i) w[i] ^= o.w[i];
    return *this;
  }
};

// Gate and round counts for one circuit evaluation. For the width-w adder
// gadgets `and_gates` counts gates per lane (batching changes payload
// sizes, not the per-comparison count); the or-tree reports its total.
struct GateStats {
  std::uint64_t and_gates = 0;
  std::uint64_t rounds = 0;

  std::uint64_t bits_sent_per_party() const { return and_gates; }

  GateStats& operator+=(const GateStats& o) {
    and_gates += o.and_gates;
    rounds += o.rounds;
    return *this;
  }
};

// One AND gate over a row of `lanes` lanes.
struct AndGate {
  const BitRow* x;
  const BitRow* y;
  BitRow* out;
  std::size_t lanes;
};

// Zeroes the bits above `lanes`. Every party applies the same masking, so
// dead lanes stay a consistent sharing of 0 and cannot bleed into live
// lanes through later XOR folds.
inline void mask_lanes(BitRow& row, std::size_t lanes) {
  if (lanes % 64 == 0) return;
  const std::uint64_t m = (std::uint64_t{1} << (lanes % 64)) - 1;
  row.w.back().own &= m;
  row.w.back().prev &= m;
}

// Evaluates a batch of AND gates in a single communication round:
// z_i = x_i y_i ^ x_{i-1} y_i ^ x_i y_{i-1} ^ r_i, one framed message per
// party carrying every gate's lane-trimmed payload.
inline void and_layer(PartyCtx& ctx, std::span<const AndGate> gates, Phase phase) {
  std::vector<std::uint8_t> buf;
  for (const auto& g : gates) {
    const std::size_t words = (g.lanes + 63) / 64;
    const std::size_t bytes = (g.lanes + 7) / 8;
    g.out->w.assign(words, BitWord{});
    for (std::size_t w = 0; w < words; ++w) {
      const BitWord x = g.x->w[w], y = g.y->w[w];
      g.out->w[w].own =
          (x.own & y.own) ^ (x.prev & y.own) ^ (x.own & y.prev) ^ ctx.seeds.zero_word();
    }
    mask_lanes(*g.out, g.lanes);
    std::size_t emitted = 0;
    for (std::size_t w = 0; w < words; ++w) {
      const std::uint64_t z = g.out->w[w].own;
      for (unsigned b = 0; b < 8 && emitted < bytes; ++b, ++emitted) {
        buf.push_back(static_cast<std::uint8_t>(z >> (8 * b)));
      }
    }
  }
  ctx.comm.send(ctx.next(), phase, buf);
  ctx.comm.round(phase);
  const auto in = ctx.comm.recv(ctx.prev(), phase);
  if (in.size() != buf.size()) throw TransportError("and_layer: bad payload size");
  std::size_t off = 0;
  for (const auto& g : gates) {
    const std::size_t words = (g.lanes + 63) / 64;
    const std::size_t bytes = (g.lanes + 7) / 8;
    std::size_t taken = 0;
    for (std::size_t w = 0; w < words; ++w) {
      std::uint64_t z = 0;
      for (unsigned b = 0; b < 8 && taken < bytes; ++b, ++taken) {
        z |= static_cast<std::uint64_t>(in[off + taken]) << (8 * b);
      }
      g.out->w[w].prev = z;
    }
    mask_lanes(*g.out, g.lanes);
    off += bytes;
  }
}

// Binary sharing of public zero: safe filler for positions above an input's
// width.
inline BitRow zero_row(std::size_t lanes) { return BitRow(lanes); }

// Bit matrix of one additive summand: rows[j] holds bit j of the summand
// across all lanes.
struct SummandBits {
  std::size_t lanes = 0;
  std::vector<BitRow> rows;

  // Row j, treating positions above the stored width as shared zeros.
  const BitRow& row(std::size_t j, const BitRow& zeros) const {
    return j < rows.size() ? rows[j] : zeros;
  }
};

// ShareSplit: reinterprets the arithmetic components x_1, x_2, x_3 as bit
// vectors and turns them into binary sharings via local input. No
// communication.
template <unsigned K>
std::array<SummandBits, 3> share_split(PartyId self, std::span<const RepShare<K>> lanes) {
  std::array<SummandBits, 3> out;
  for (auto& s : out) {
    s.lanes = lanes.size();
    s.rows.assign(K, BitRow(lanes.size()));
  }
  const unsigned own_ix = party_index(self) - 1;
  const unsigned prev_ix = party_index(prev_party(self)) - 1;
  for (std::size_t i = 0; i < lanes.size(); ++i) {
    const std::uint64_t own = lanes[i].own.value();
    const std::uint64_t prev = lanes[i].prev.value();
    const std::size_t word = i / 64;
    const std::uint64_t bit = std::uint64_t{1} << (i % 64);
    for (unsigned j = 0; j < K; ++j) {
      if ((own >> j) & 1) out[own_ix].rows[j].w[word].own |= bit;
      if ((prev >> j) & 1) out[prev_ix].rows[j].w[word].prev |= bit;
    }
  }
  return out;
}

// Full adder over packed rows: sum = a^b^c locally, carry = (a^c)(b^c)^c
// with a single AND gate.
inline void full_adder(PartyCtx& ctx, const BitRow& a, const BitRow& b, const BitRow& c,
                       std::size_t lanes, BitRow& sum, BitRow& carry, Phase phase,
                       GateStats* stats = nullptr) {
  sum = a ^ b ^ c;
  const BitRow t1 = a ^ c;
  const BitRow t2 = b ^ c;
  BitRow t(lanes);
  const AndGate gate{&t1, &t2, &t, lanes};
  and_layer(ctx, std::span<const AndGate>(&gate, 1), phase);
  carry = t ^ c;
  if (stats) {
    stats->and_gates += 1;
    stats->rounds += 1;
  }
}

// Extracts the bits at `indices` of x_1 + x_2 + x_3 (the unreduced integer
// sum of the summand matrices). Each index is computed by its own
// carry-save + ripple-carry instance, truncated at that index and with the
// dead gates at the top eliminated; instances advance in lockstep, sharing
// rounds. Cost per index m: 2m-1 AND gates, m rounds (0 for m = 0).
struct ExtractResult {
  std::vector<BitRow> bits;  // one row per requested index, same order
  GateStats stats;
};

inline ExtractResult bit_extract_sum(PartyCtx& ctx, const std::array<SummandBits, 3>& xs,
                                     std::span<const unsigned> indices, Phase phase) {
  const std::size_t lanes = xs[0].lanes;
  const BitRow zeros = zero_row(lanes);

  struct Instance {
    unsigned m;
    std::vector<BitRow> s;      // sum bits 0..m
    std::vector<BitRow> carry;  // FA-layer carries 0..m-1
    std::vector<BitRow> t1, t2; // FA-layer AND operands (kept alive per layer)
    BitRow chain;               // running ripple carry
    BitRow u, v;                // chain AND operands
    BitRow result;
  };

  std::vector<Instance> inst(indices.size());
  ExtractResult res;
  res.bits.resize(indices.size());

  // Local XOR layer plus the FA-layer AND operands.
  for (std::size_t k = 0; k < indices.size(); ++k) {
    auto& I = inst[k];
    I.m = indices[k];
    I.s.resize(I.m + 1);
    for (unsigned j = 0; j <= I.m; ++j) {
      I.s[j] = xs[0].row(j, zeros) ^ xs[1].row(j, zeros);
      I.s[j] ^= xs[2].row(j, zeros);
    }
    I.carry.assign(I.m, BitRow{});
    I.t1.resize(I.m);
    I.t2.resize(I.m);
    for (unsigned j = 0; j < I.m; ++j) {
      I.t1[j] = xs[0].row(j, zeros) ^ xs[2].row(j, zeros);
      I.t2[j] = xs[1].row(j, zeros) ^ xs[2].row(j, zeros);
    }
  }

  // FA layer: one round, m gates per instance.
  {
    std::vector<AndGate> gates;
    for (auto& I : inst) {
      for (unsigned j = 0; j < I.m; ++j) gates.push_back({&I.t1[j], &I.t2[j], &I.carry[j], lanes});
    }
    if (!gates.empty()) {
      and_layer(ctx, gates, phase);
      res.stats.rounds += 1;
      for (auto& I : inst) {
        res.stats.and_gates += I.m;
        for (unsigned j = 0; j < I.m; ++j) I.carry[j] ^= xs[2].row(j, zeros);
      }
    }
  }

  // Ripple chain over u = s, v = carry << 1. Step t computes the carry out
  // of position t; the final position is sum-only.
  unsigned max_m = 0;
  for (auto& I : inst) max_m = I.m > max_m ? I.m : max_m;
  for (unsigned t = 1; t + 1 <= max_m; ++t) {
    std::vector<AndGate> gates;
    for (auto& I : inst) {
      if (t + 1 > I.m) continue;  // this instance's chain is done
      const BitRow& ut = I.s[t];
      const BitRow& vt = I.carry[t - 1];
      if (t == 1) {
        // carry into position 1 is a[0]*b[0] with a[0] = 0, so the first
        // chain AND is just u[1]*v[1].
        I.u = ut;
        I.v = vt;
      } else {
        I.u = ut ^ I.chain;
        I.v = vt ^ I.chain;
      }
      gates.push_back({&I.u, &I.v, &I.result, lanes});
    }
    if (gates.empty()) break;
    and_layer(ctx, gates, phase);
    res.stats.rounds += 1;
    for (auto& I : inst) {
      if (t + 1 > I.m) continue;
      res.stats.and_gates += 1;
      I.chain = (t == 1) ? I.result : (I.result ^ I.chain);
    }
  }

  for (std::size_t k = 0; k < indices.size(); ++k) {
    auto& I = inst[k];
    if (I.m == 0) {
      res.bits[k] = I.s[0];
    } else {
      res.bits[k] = I.s[I.m] ^ I.carry[I.m - 1];
      if (I.m >= 2) res.bits[k] ^= I.chain;
    }
  }
  return res;
}

// MSB extraction: sign bit of the canonical signed representation.
// 2K-3 AND gates in K-1 rounds.
template <unsigned K>
ExtractResult msb_batch(PartyCtx& ctx, std::span<const RepShare<K>> lanes,
                        Phase phase = Phase::msb) {
  const auto xs = share_split<K>(ctx.id, lanes);
  const unsigned idx[1] = {K - 1};
  return bit_extract_sum(ctx, xs, idx, phase);
}

template <unsigned K>
ExtractResult bit_extract(PartyCtx& ctx, std::span<const RepShare<K>> lanes,
                          std::span<const unsigned> indices, Phase phase) {
  const auto xs = share_split<K>(ctx.id, lanes);
  return bit_extract_sum(ctx, xs, indices, phase);
}

// Generic ripple-carry addition of two w-bit binary-shared values,
// returning w+1 bits. w AND gates for the full output, w-1 when the caller
// only needs bit w-1 (`top_only`).
struct BinAddResult {
  std::vector<BitRow> bits;
  GateStats stats;
};

inline BinAddResult bin_add(PartyCtx& ctx, std::span<const BitRow> a, std::span<const BitRow> b,
                            std::size_t lanes, Phase phase, bool top_only = false) {
  const std::size_t w = a.size();
  if (b.size() != w || w == 0) throw Error("bin_add: width mismatch");
  BinAddResult res;
  res.bits.resize(top_only ? w : w + 1);
  auto out_bit = [&](std::size_t j) -> BitRow* {
    return top_only ? (j == w - 1 ? &res.bits[w - 1] : nullptr) : &res.bits[j];
  };

  if (auto* o = out_bit(0)) *o = a[0] ^ b[0];
  if (w == 1 && top_only) {
    res.bits[0] = a[0] ^ b[0];
    return res;
  }
  BitRow carry(lanes);
  {
    const AndGate g{&a[0], &b[0], &carry, lanes};
    and_layer(ctx, std::span<const AndGate>(&g, 1), phase);
    res.stats.and_gates += 1;
    res.stats.rounds += 1;
  }
  BitRow u, v, t;
  for (std::size_t j = 1; j < w; ++j) {
    const bool last = (j == w - 1);
    if (last && top_only) {
      res.bits[w - 1] = a[j] ^ b[j] ^ carry;
      break;
    }
    if (auto* o = out_bit(j)) *o = a[j] ^ b[j] ^ carry;
    u = a[j] ^ carry;
    v = b[j] ^ carry;
    t = BitRow(lanes);
    const AndGate g{&u, &v, &t, lanes};
    and_layer(ctx, std::span<const AndGate>(&g, 1), phase);
    res.stats.and_gates += 1;
    res.stats.rounds += 1;
    carry = t ^ carry;
  }
  if (!top_only) res.bits[w] = carry;
  return res;
}

// --- lane utilities ---------------------------------------------------------

inline BitWord get_lane(const BitRow& r, std::size_t i) { return r.lane(i); }

inline BitRow gather_lanes(const BitRow& src, std::size_t from, std::size_t count) {
  BitRow out(count);
  for (std::size_t i = 0; i < count; ++i) out.set_lane(i, src.lane(from + i));
  return out;
}

// --- OR tree ----------------------------------------------------------------

// Folds each group's lanes down to one bit with x|y = x^y^(x&y) in a binary
// tree; all groups advance level by level in shared rounds. Returns one row
// whose lane g is group g's aggregate. and_gates counts the total across
// lanes (n-1 per group of n); rounds is the depth of the largest group.
struct OrTreeInput {
  BitRow bits;
  std::size_t lanes;
};

inline std::pair<BitRow, GateStats> or_tree_batch(PartyCtx& ctx, std::vector<OrTreeInput> groups,
                                                  Phase phase = Phase::or_tree) {
  GateStats stats;
  struct Level {
    BitRow lo, hi, t;
    std::size_t nb;
  };
  bool progress = true;
  while (progress) {
    progress = false;
    std::vector<Level> lv(groups.size());
    std::vector<AndGate> gates;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      auto& grp = groups[g];
      if (grp.lanes <= 1) continue;
      progress = true;
      const std::size_t na = (grp.lanes + 1) / 2;
      const std::size_t nb = grp.lanes - na;
      lv[g].lo = gather_lanes(grp.bits, 0, na);
      lv[g].hi = gather_lanes(grp.bits, na, nb);
      // pad hi to na lanes with shared zeros (OR with 0 passes through)
      lv[g].hi.w.resize(lv[g].lo.w.size());
      lv[g].t = BitRow(nb);
      lv[g].nb = nb;
      gates.push_back({&lv[g].lo, &lv[g].hi, &lv[g].t, nb});
    }
    if (!progress) break;
    and_layer(ctx, gates, phase);
    stats.rounds += 1;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      auto& grp = groups[g];
      if (grp.lanes <= 1) continue;
      const std::size_t na = (grp.lanes + 1) / 2;
      stats.and_gates += lv[g].nb;
      BitRow folded = lv[g].lo;
      folded ^= lv[g].hi;
      for (std::size_t w = 0; w < lv[g].t.w.size(); ++w) folded.w[w] ^= lv[g].t.w[w];
      grp.bits = std::move(folded);
      grp.lanes = na;
    }
  }
  BitRow out(groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (groups[g].lanes == 0) continue;
    out.set_lane(g, groups[g].bits.lane(0));
  }
  return {out, stats};
}

inline std::pair<BitRow, GateStats> or_tree(PartyCtx& ctx, BitRow bits, std::size_t lanes,
                                            Phase phase = Phase::or_tree) {
  std::vector<OrTreeInput> groups;
  groups.push_back({std::move(bits), lanes});
  return or_tree_batch(ctx, std::move(groups), phase);
}

// --- opening ----------------------------------------------------------------

enum class OpenKind { aggregate, row_debug };

// Opens packed bits to one party; the two senders each contribute their
// copy of the missing component and the receiver cross-checks them.
inline std::vector<std::uint8_t> open_bits_to(PartyCtx& ctx, const BitRow& row, std::size_t lanes,
                                              PartyId target, OpenKind kind,
                                              Phase phase = Phase::or_tree) {
  if (kind == OpenKind::aggregate) {
    ctx.audit.aggregate_opens += 1;
  } else {
    ctx.audit.row_opens += 1;
  }
  const std::size_t bytes = (lanes + 7) / 8;
  auto pack = [&](bool use_own) {
    std::vector<std::uint8_t> buf(bytes);
    for (std::size_t i = 0; i < bytes; ++i) {
      const std::uint64_t w = use_own ? row.w[i / 8].own : row.w[i / 8].prev;
      buf[i] = static_cast<std::uint8_t>(w >> (8 * (i % 8)));
    }
    return buf;
  };
  if (ctx.id == target) {
    ctx.comm.round(phase);
    auto a = ctx.comm.recv(ctx.next(), phase);
    auto b = ctx.comm.recv(ctx.prev(), phase);
    if (a.size() != bytes || b.size() != bytes || a != b) {
      throw InconsistentShareError("open_bits_to: cross-check failed");
    }
    auto mine_own = pack(true);
    auto mine_prev = pack(false);
    std::vector<std::uint8_t> out(lanes);
    for (std::size_t i = 0; i < lanes; ++i) {
      const unsigned bit = ((mine_own[i / 8] ^ mine_prev[i / 8] ^ a[i / 8]) >> (i % 8)) & 1;
      out[i] = static_cast<std::uint8_t>(bit);
    }
    return out;
  }
  const bool send_own = (ctx.id == next_party(target));
  ctx.comm.send(target, phase, pack(send_own));
  ctx.comm.round(phase);
  return {};
}

}  // namespace irismpc
