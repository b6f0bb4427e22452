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
#include <span>
#include <vector>

#include "irismpc/galois.hpp"
#include "irismpc/prf.hpp"
#include "irismpc/rep3.hpp"

namespace irismpc {

// Degree-1 Shamir sharing over the Galois ring, packing two consecutive
// vector entries into one element g_i = v_{2i} + v_{2i+1} X. A party's
// share of position i is the evaluation of a random degree-1 polynomial at
// its exceptional point.

// Packs a ring vector (odd lengths padded with 0) into Galois elements.
template <unsigned K>
std::vector<Gr<K>> pack_pairs(std::span<const Ring<K>> v) {
  std::vector<Gr<K>> out((v.size() + 1) / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const Ring<K> lo = v[2 * i];
    const Ring<K> hi = (2 * i + 1 < v.size()) ? v[2 * i + 1] : Ring<K>(0);
    out[i] = Gr<K>(lo, hi);
  }
  return out;
}

// Dealer-side sharing of a packed vector: per element, p(X) = g + r*X
// evaluated at the three party points.
template <unsigned K>
std::array<std::vector<Gr<K>>, 3> shamir_share_packed(std::span<const Ring<K>> v, Rng& rng) {
  const auto packed = pack_pairs<K>(v);
  std::array<std::vector<Gr<K>>, 3> out;
  for (auto& o : out) o.resize(packed.size());
  const auto pts = ExceptionalSeq<K>::points();
  for (std::size_t i = 0; i < packed.size(); ++i) {
    const Gr<K> r(rng.ring<K>(), rng.ring<K>());
    for (unsigned p = 1; p <= 3; ++p) {
      out[p - 1][i] = packed[i] + r * pts[p];
    }
  }
  return out;
}

// Reconstructs one packed position from the three shares (test/dealer path).
template <unsigned K>
Gr<K> shamir_reconstruct(const std::array<Gr<K>, 3>& sh) {
  const auto lambda = party_lagrange_at_zero<K>();
  Gr<K> acc;
  for (unsigned i = 0; i < 3; ++i) acc += lambda[i] * sh[i];
  return acc;
}

// Scales a share vector by this party's Lagrange coefficient. Done once at
// ingestion; afterwards share products are already additive shares.
template <unsigned K>
std::vector<Gr<K>> premultiply_lambda(std::span<const Gr<K>> shares, PartyId party) {
  const auto lambda = party_lagrange_at_zero<K>()[party_index(party) - 1];
  std::vector<Gr<K>> out(shares.size());
  for (std::size_t i = 0; i < shares.size(); ++i) out[i] = lambda * shares[i];
  return out;
}

// Constant term of <lambda-scaled xs, ys>: this party's additive share of
// the unpacked dot product. Only the constant coefficient of each product
// is computed, one plain multiply-accumulate stream over the coefficients.
template <unsigned K>
Ring<K> dot_product_ct(std::span<const Gr<K>> xs, std::span<const Gr<K>> ys) {
  if (xs.size() != ys.size()) throw Error("dot_product_ct: length mismatch");
  Ring<K> acc(0);
  for (std::size_t i = 0; i < xs.size(); ++i) acc += mul_ct(xs[i], ys[i]);
  return acc;
}

// Converts 3-party additive shares into replicated shares: re-randomize
// with a zero share and pass to the next party. Same wire as rep3's
// reshare.
template <unsigned K>
std::vector<RepShare<K>> additive_to_replicated(PartyCtx& ctx, std::span<const Ring<K>> z,
                                                Phase phase = Phase::dot) {
  return reshare_additive<K>(ctx, z, phase);
}

}  // namespace irismpc
