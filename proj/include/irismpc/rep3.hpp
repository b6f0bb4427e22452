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
#include <cstring>
#include <span>
#include <vector>

#include "irismpc/errors.hpp"
#include "irismpc/prf.hpp"
#include "irismpc/ring.hpp"
#include "irismpc/transport.hpp"

namespace irismpc {

// Replicated share held by one party: the additive components (x_i, x_{i-1})
// of x = x_1 + x_2 + x_3 mod 2^K. Party i's prev always equals party
// (i-1)'s own.
template <unsigned K>
struct RepShare {
  Ring<K> own{};
  Ring<K> prev{};

  friend constexpr RepShare operator+(RepShare a, RepShare b) {
    return {a.own + b.own, a.prev + b.prev};
  }
  friend constexpr RepShare operator-(RepShare a, RepShare b) {
    return {a.own - b.own, a.prev - b.prev};
  }
  constexpr RepShare operator-() const { return {-own, -prev}; }

  RepShare& operator+=(RepShare o) { return *this = *this + o; }
  RepShare& operator-=(RepShare o) { return *this = *this - o; }

  friend constexpr bool operator==(RepShare a, RepShare b) {
    return a.own == b.own && a.prev == b.prev;
  }
};

// Share scaled by a public constant.
template <unsigned K>
constexpr RepShare<K> mul_public(RepShare<K> x, Ring<K> c) {
  return {x.own * c, x.prev * c};
}

// Public constant added to a share: component x_1 absorbs the constant, so
// party 1 (own) and party 2 (prev) adjust.
template <unsigned K>
constexpr RepShare<K> add_public(RepShare<K> x, Ring<K> c, PartyId self) {
  if (self == PartyId::p1) x.own += c;
  if (self == PartyId::p2) x.prev += c;
  return x;
}

template <unsigned K>
constexpr RepShare<K> public_minus(Ring<K> c, RepShare<K> x, PartyId self) {
  return add_public(-x, c, self);
}

// Dealer-side sharing: components uniform subject to the sum.
template <unsigned K>
std::array<RepShare<K>, 3> share(Ring<K> x, Rng& rng) {
  const Ring<K> x1 = rng.ring<K>();
  const Ring<K> x2 = rng.ring<K>();
  const Ring<K> x3 = x - x1 - x2;
  return {RepShare<K>{x1, x3}, RepShare<K>{x2, x1}, RepShare<K>{x3, x2}};
}

// Dealer/test-side reconstruction with the replication cross-check.
template <unsigned K>
Ring<K> reconstruct(const std::array<RepShare<K>, 3>& sh) {
  for (unsigned i = 0; i < 3; ++i) {
    if (sh[i].prev != sh[(i + 2) % 3].own) {
      throw InconsistentShareError("replicated share cross-check failed");
    }
  }
  return sh[0].own + sh[1].own + sh[2].own;
}

// Local input of a value known to parties i and i+1: component x_i = x,
// others zero. No communication.
template <unsigned K>
RepShare<K> inp_local(Ring<K> x, PartyId holder, PartyId self) {
  RepShare<K> s;
  if (self == holder) s.own = x;
  if (self == next_party(holder)) s.prev = x;
  return s;
}

// Zero-share / correlated-randomness source. Party i holds seed_i (own) and
// seed_{i-1} (prev); the pair (i, i+1) shares seed_i.
struct SeedPair {
  CtrPrf own;
  CtrPrf prev;

  template <unsigned K>
  Ring<K> zero_ring() {
    return own.next_ring<K>() - prev.next_ring<K>();
  }
  std::uint64_t zero_word() { return own.next_u64() ^ prev.next_u64(); }
};

inline std::array<Seed, 3> deal_seeds(Rng& rng) {
  std::array<Seed, 3> seeds;
  for (auto& s : seeds) {
    for (auto& b : s.bytes) b = static_cast<std::uint8_t>(rng.next_u64());
  }
  return seeds;
}

inline SeedPair seed_pair_for(PartyId p, const std::array<Seed, 3>& seeds) {
  return SeedPair{CtrPrf(seeds[party_index(p) - 1]),
                  CtrPrf(seeds[party_index(prev_party(p)) - 1])};
}

// Flags raised when a non-aggregate value reaches the transport for
// opening; production runs must keep row_opens at zero.
struct OpenAudit {
  std::uint64_t aggregate_opens = 0;
  std::uint64_t row_opens = 0;
};

struct PartyCtx {
  PartyId id;
  PartyComm& comm;
  SeedPair seeds;
  OpenAudit audit{};

  PartyId next() const { return next_party(id); }
  PartyId prev() const { return prev_party(id); }
};

// --- serialization --------------------------------------------------------

template <unsigned K>
void put_ring(std::vector<std::uint8_t>& buf, Ring<K> v) {
  std::uint64_t x = v.value();
  for (unsigned i = 0; i < Ring<K>::byte_size; ++i) {
    buf.push_back(static_cast<std::uint8_t>(x >> (8 * i)));
  }
}

template <unsigned K>
Ring<K> get_ring(const std::uint8_t* p) {
  std::uint64_t x = 0;
  for (unsigned i = 0; i < Ring<K>::byte_size; ++i) {
    x |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  }
  return Ring<K>(x);
}

// --- resharing and multiplication ------------------------------------------

// Turns locally-held additive shares into replicated shares: re-randomize
// with a fresh zero share, send to the next party, receive from the
// previous. One message per party regardless of batch size.
template <unsigned K>
std::vector<RepShare<K>> reshare_additive(PartyCtx& ctx, std::span<const Ring<K>> z,
                                          Phase phase) {
  std::vector<std::uint8_t> buf;
  buf.reserve(z.size() * Ring<K>::byte_size);
  std::vector<RepShare<K>> out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    out[i].own = z[i] + ctx.seeds.zero_ring<K>();
    put_ring(buf, out[i].own);
  }
  ctx.comm.send(ctx.next(), phase, buf);
  ctx.comm.round(phase);
  auto in = ctx.comm.recv(ctx.prev(), phase);
  if (in.size() != z.size() * Ring<K>::byte_size) {
    throw TransportError("reshare: bad payload size");
  }
  for (std::size_t i = 0; i < z.size(); ++i) {
    out[i].prev = get_ring<K>(in.data() + i * Ring<K>::byte_size);
  }
  return out;
}

// z_i = x_i*y_i + x_{i-1}*y_i + x_i*y_{i-1} + r_i, then reshare. Exactly one
// ring element sent per party.
template <unsigned K>
RepShare<K> mul_reshare(PartyCtx& ctx, RepShare<K> x, RepShare<K> y, Phase phase = Phase::dot) {
  const Ring<K> z = x.own * y.own + x.prev * y.own + x.own * y.prev;
  return reshare_additive<K>(ctx, std::span<const Ring<K>>(&z, 1), phase)[0];
}

// Preprocessed share for dot products: (x'_i, x'_{i-1}) = (x_i + x_{i-1}, x_{i-1}).
template <unsigned K>
struct PrepShare {
  Ring<K> own_sum{};
  Ring<K> prev{};
};

template <unsigned K>
constexpr PrepShare<K> preprocess(RepShare<K> x) {
  return {x.own + x.prev, x.prev};
}

// Local additive share of <x, y>: sum of x'_i*y'_i - x'_{i-1}*y'_{i-1},
// two plain multiply-accumulate streams.
template <unsigned K>
Ring<K> dot_additive_local(std::span<const PrepShare<K>> xs, std::span<const RepShare<K>> ys) {
  if (xs.size() != ys.size()) throw Error("dot: length mismatch");
  Ring<K> acc(0);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    acc += xs[i].own_sum * (ys[i].own + ys[i].prev) - xs[i].prev * ys[i].prev;
  }
  return acc;
}

// Dot product with the same communication as a single multiplication.
template <unsigned K>
RepShare<K> dot_product(PartyCtx& ctx, std::span<const PrepShare<K>> xs,
                        std::span<const RepShare<K>> ys, Phase phase = Phase::dot) {
  const Ring<K> z = dot_additive_local(xs, ys);
  return reshare_additive<K>(ctx, std::span<const Ring<K>>(&z, 1), phase)[0];
}

// Opens a share to all parties: send own to prev, receive the missing
// component from next.
template <unsigned K>
Ring<K> open(PartyCtx& ctx, RepShare<K> x, Phase phase) {
  std::vector<std::uint8_t> buf;
  put_ring(buf, x.own);
  ctx.comm.send(ctx.prev(), phase, buf);
  ctx.comm.round(phase);
  auto in = ctx.comm.recv(ctx.next(), phase);
  if (in.size() != Ring<K>::byte_size) throw TransportError("open: bad payload");
  return x.own + x.prev + get_ring<K>(in.data());
}

// Opens a share to one party only. Both other parties send their copy of
// the missing component; the receiver cross-checks replication.
template <unsigned K>
Ring<K> open_to(PartyCtx& ctx, RepShare<K> x, PartyId target, Phase phase) {
  if (ctx.id == target) {
    ctx.comm.round(phase);
    auto a = ctx.comm.recv(ctx.next(), phase);
    auto b = ctx.comm.recv(ctx.prev(), phase);
    if (a.size() != Ring<K>::byte_size || b.size() != Ring<K>::byte_size) {
      throw TransportError("open_to: bad payload");
    }
    const Ring<K> va = get_ring<K>(a.data());
    const Ring<K> vb = get_ring<K>(b.data());
    if (va != vb) throw InconsistentShareError("open_to: replication cross-check failed");
    return x.own + x.prev + va;
  }
  std::vector<std::uint8_t> buf;
  // target is missing component x_{next(target)}.
  if (ctx.id == next_party(target)) {
    put_ring(buf, x.own);
  } else {
    put_ring(buf, x.prev);
  }
  ctx.comm.send(target, phase, buf);
  ctx.comm.round(phase);
  return Ring<K>(0);
}

// --- packed binary shares ---------------------------------------------------

// 64 boolean lanes of a replicated XOR sharing.
struct BitWord {
  std::uint64_t own = 0;
  std::uint64_t prev = 0;

  friend constexpr BitWord operator^(BitWord a, BitWord b) {
    return {a.own ^ b.own, a.prev ^ b.prev};
  }
  BitWord& operator^=(BitWord o) { return *this = *this ^ o; }
};

inline std::array<BitWord, 3> share_bits(std::uint64_t x, Rng& rng) {
  const std::uint64_t x1 = rng.next_u64();
  const std::uint64_t x2 = rng.next_u64();
  const std::uint64_t x3 = x ^ x1 ^ x2;
  return {BitWord{x1, x3}, BitWord{x2, x1}, BitWord{x3, x2}};
}

inline std::uint64_t reconstruct_bits(const std::array<BitWord, 3>& sh) {
  for (unsigned i = 0; i < 3; ++i) {
    if (sh[i].prev != sh[(i + 2) % 3].own) {
      throw InconsistentShareError("binary share cross-check failed");
    }
  }
  return sh[0].own ^ sh[1].own ^ sh[2].own;
}

}  // namespace irismpc
