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

#include <span>
#include <vector>

#include "irismpc/circuits.hpp"
#include "irismpc/rep3.hpp"

namespace irismpc {

// ConstLift: re-typing a share of x over Z_c as a share of d*x over
// Z_{c*d}. Purely local. The caller picks To = From + log2(d).
template <unsigned To, unsigned From>
constexpr RepShare<To> const_lift(RepShare<From> x, std::uint64_t d) {
  return {recast<To, From>(x.own) * Ring<To>(d), recast<To, From>(x.prev) * Ring<To>(d)};
}

template <unsigned W>
constexpr Ring<W> xor_ring(Ring<W> a, Ring<W> b) {
  return Ring<W>(static_cast<std::uint64_t>(a.value()) ^ b.value());
}

// 3-party OT, one element: party 1 is the sender with messages (m0, m1),
// party 2 the receiver, party 3 the helper who knows the choice bit. The
// pads come from the seed shared by parties 1 and 3 (seed_3: party 1's
// prev stream, party 3's own stream). Sender transmits 2 elements, helper
// 1, in a single round; the sender receives nothing.
template <unsigned W>
Ring<W> three_ot(PartyCtx& ctx, Ring<W> m0, Ring<W> m1, bool choice, Phase phase = Phase::ot) {
  std::vector<std::uint8_t> buf;
  switch (ctx.id) {
    case PartyId::p1: {
      const Ring<W> w0 = ctx.seeds.prev.next_ring<W>();
      const Ring<W> w1 = ctx.seeds.prev.next_ring<W>();
      put_ring(buf, xor_ring(w0, m0));
      put_ring(buf, xor_ring(w1, m1));
      ctx.comm.send(PartyId::p2, phase, buf);
      ctx.comm.round(phase);
      return Ring<W>(0);
    }
    case PartyId::p3: {
      const Ring<W> w0 = ctx.seeds.own.next_ring<W>();
      const Ring<W> w1 = ctx.seeds.own.next_ring<W>();
      put_ring(buf, choice ? w1 : w0);
      ctx.comm.send(PartyId::p2, phase, buf);
      ctx.comm.round(phase);
      return Ring<W>(0);
    }
    case PartyId::p2: {
      ctx.comm.round(phase);
      const auto ks = ctx.comm.recv(PartyId::p1, phase);
      const auto wc = ctx.comm.recv(PartyId::p3, phase);
      if (ks.size() != 2 * Ring<W>::byte_size || wc.size() != Ring<W>::byte_size) {
        throw TransportError("three_ot: bad payload");
      }
      const Ring<W> kc = get_ring<W>(ks.data() + (choice ? Ring<W>::byte_size : 0));
      return xor_ring(kc, get_ring<W>(wc.data()));
    }
  }
  return Ring<W>(0);
}

// BitInject: converts binary-shared bits into arithmetic shares of 0/1 over
// Z_{2^W}, batched over all lanes. Per lane: one 3OT plus one element from
// party 2 to party 3.
//
// Components: c_1 from seed_1 (parties 1,2), c_3 from seed_3 (parties 1,3),
// c_2 = m_{x_2} produced at party 2 and forwarded to party 3, so that
// c_1 + c_2 + c_3 = x.
template <unsigned W>
std::vector<RepShare<W>> bit_inject(PartyCtx& ctx, const BitRow& bits, std::size_t lanes,
                                    Phase phase = Phase::ot) {
  std::vector<RepShare<W>> out(lanes);
  constexpr std::size_t eb = Ring<W>::byte_size;
  std::vector<std::uint8_t> buf;

  switch (ctx.id) {
    case PartyId::p1: {
      buf.reserve(2 * eb * lanes);
      for (std::size_t i = 0; i < lanes; ++i) {
        const BitWord bw = bits.lane(i);
        const unsigned x1 = static_cast<unsigned>(bw.own);
        const unsigned x3 = static_cast<unsigned>(bw.prev);
        const Ring<W> c1 = ctx.seeds.own.next_ring<W>();
        const Ring<W> c3 = ctx.seeds.prev.next_ring<W>();
        const Ring<W> w0 = ctx.seeds.prev.next_ring<W>();
        const Ring<W> w1 = ctx.seeds.prev.next_ring<W>();
        const Ring<W> m0 = Ring<W>(0 ^ x1 ^ x3) - c1 - c3;
        const Ring<W> m1 = Ring<W>(1 ^ x1 ^ x3) - c1 - c3;
        put_ring(buf, xor_ring(w0, m0));
        put_ring(buf, xor_ring(w1, m1));
        out[i] = {c1, c3};
      }
      ctx.comm.send(PartyId::p2, phase, buf);
      ctx.comm.round(phase);
      ctx.comm.round(phase);  // c_2 forwarding stage, party 1 idle
      return out;
    }
    case PartyId::p3: {
      buf.reserve(eb * lanes);
      std::vector<Ring<W>> c3s(lanes);
      for (std::size_t i = 0; i < lanes; ++i) {
        const bool x2 = bits.lane(i).prev & 1;
        c3s[i] = ctx.seeds.own.next_ring<W>();
        const Ring<W> w0 = ctx.seeds.own.next_ring<W>();
        const Ring<W> w1 = ctx.seeds.own.next_ring<W>();
        put_ring(buf, x2 ? w1 : w0);
      }
      ctx.comm.send(PartyId::p2, phase, buf);
      ctx.comm.round(phase);
      ctx.comm.round(phase);
      const auto c2s = ctx.comm.recv(PartyId::p2, phase);
      if (c2s.size() != eb * lanes) throw TransportError("bit_inject: bad c2 payload");
      for (std::size_t i = 0; i < lanes; ++i) {
        out[i] = {c3s[i], get_ring<W>(c2s.data() + i * eb)};
      }
      return out;
    }
    case PartyId::p2: {
      ctx.comm.round(phase);
      const auto ks = ctx.comm.recv(PartyId::p1, phase);
      const auto ws = ctx.comm.recv(PartyId::p3, phase);
      if (ks.size() != 2 * eb * lanes || ws.size() != eb * lanes) {
        throw TransportError("bit_inject: bad OT payload");
      }
      buf.reserve(eb * lanes);
      for (std::size_t i = 0; i < lanes; ++i) {
        const bool x2 = bits.lane(i).own & 1;
        const Ring<W> c1 = ctx.seeds.prev.next_ring<W>();
        const Ring<W> kc = get_ring<W>(ks.data() + (2 * i + (x2 ? 1 : 0)) * eb);
        const Ring<W> c2 = xor_ring(kc, get_ring<W>(ws.data() + i * eb));
        put_ring(buf, c2);
        out[i] = {c2, c1};
      }
      ctx.comm.send(PartyId::p3, phase, buf);
      ctx.comm.round(phase);
      return out;
    }
  }
  return out;
}

// Lift: converts a sharing of x < 2^K over Z_{2^K} into a sharing of the
// same integer over Z_{2^(K+M)}. The components are re-typed as-is, which
// represents x_1 + x_2 + x_3 without the mod-2^K reduction; the two
// overflow bits K and K+1 of that sum are extracted with a binary adder,
// injected into the small rings Z_{2^(M-1)} and Z_{2^M}, scaled back up by
// free ConstLifts and subtracted.
template <unsigned K, unsigned M>
struct LiftResult {
  std::vector<RepShare<K + M>> out;
  GateStats adder;
};

template <unsigned K, unsigned M>
LiftResult<K, M> lift(PartyCtx& ctx, std::span<const RepShare<K>> lanes) {
  static_assert(M >= 2, "lift needs at least two extra bits");
  LiftResult<K, M> res;

  const auto xs = share_split<K>(ctx.id, lanes);
  const unsigned idx[2] = {K, K + 1};
  auto ext = bit_extract_sum(ctx, xs, idx, Phase::lift);
  res.adder = ext.stats;
  const BitRow& bit_k = ext.bits[0];
  const BitRow& bit_k1 = ext.bits[1];

  const auto inj_k1 = bit_inject<M - 1>(ctx, bit_k1, lanes.size());
  const auto inj_k = bit_inject<M>(ctx, bit_k, lanes.size());

  res.out.resize(lanes.size());
  for (std::size_t i = 0; i < lanes.size(); ++i) {
    RepShare<K + M> wide{recast<K + M, K>(lanes[i].own), recast<K + M, K>(lanes[i].prev)};
    wide -= const_lift<K + M, M - 1>(inj_k1[i], std::uint64_t{1} << (K + 1));
    wide -= const_lift<K + M, M>(inj_k[i], std::uint64_t{1} << K);
    res.out[i] = wide;
  }
  return res;
}

}  // namespace irismpc
