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

#include "irismpc/iris.hpp"
#include "irismpc/rep3.hpp"
#include "irismpc/shamir.hpp"

namespace irismpc {

enum class Backend : std::uint8_t { replicated = 0, shamir = 1 };
enum class Variant : std::uint8_t { plain_mask = 0, mpc_lift = 1, const_lift = 2, no_lift = 3 };

const char* to_string(Backend b);
const char* to_string(Variant v);
Backend backend_from_string(const std::string& s);
Variant variant_from_string(const std::string& s);

// Ring widths per variant: the hamming dot, the mask dot (0 = public
// masks) and the comparison ring.
constexpr unsigned code_bits(Variant v) { return v == Variant::no_lift ? 32 : 16; }
constexpr unsigned mask_bits(Variant v) {
  switch (v) {
    case Variant::plain_mask: return 0;
    case Variant::mpc_lift: return 16;
    case Variant::const_lift:
    case Variant::no_lift: return 32;
  }
  return 0;
}
constexpr unsigned cmp_bits(Variant v) { return v == Variant::plain_mask ? 16 : 32; }

// --- dealer-side payload serialization --------------------------------------
//
// Share payloads are row streams. Per row:
//   replicated code/mask record: l x (own, prev), little-endian words
//   shamir code/mask record:     l/2 x (c0, c1) evaluations
//   plain mask record:           l/8 packed mask bits (same for all parties)
// Query payloads use the same records, one per query code.

namespace detail {

template <unsigned K>
void emit_rep_record(std::array<std::vector<std::uint8_t>, 3>& out,
                     std::span<const Ring<K>> values, Rng& rng) {
  for (const auto v : values) {
    const auto sh = share<K>(v, rng);
    for (unsigned p = 0; p < 3; ++p) {
      put_ring(out[p], sh[p].own);
      put_ring(out[p], sh[p].prev);
    }
  }
}

template <unsigned K>
void emit_gr_record(std::array<std::vector<std::uint8_t>, 3>& out,
                    std::span<const Ring<K>> values, Rng& rng) {
  const auto sh = shamir_share_packed<K>(values, rng);
  for (unsigned p = 0; p < 3; ++p) {
    for (const auto& g : sh[p]) {
      put_ring(out[p], g.c0);
      put_ring(out[p], g.c1);
    }
  }
}

inline void emit_mask_bits(std::array<std::vector<std::uint8_t>, 3>& out, const BitVec& mask) {
  const std::size_t bytes = mask.size() / 8;
  for (unsigned p = 0; p < 3; ++p) {
    for (std::size_t i = 0; i < bytes; ++i) {
      const std::uint64_t w = mask.words()[i / 8];
      out[p].push_back(static_cast<std::uint8_t>(w >> (8 * (i % 8))));
    }
  }
}

template <unsigned K>
std::vector<Ring<K>> masked_entries(const IrisRecord& r) {
  std::vector<Ring<K>> v(r.length());
  for (std::size_t i = 0; i < r.length(); ++i) {
    v[i] = Ring<K>::from_signed(to_masked(r.code.get(i), r.mask.get(i)).to_signed());
  }
  return v;
}

template <unsigned K>
std::vector<Ring<K>> mask_entries(const BitVec& m) {
  std::vector<Ring<K>> v(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) v[i] = Ring<K>(m.get(i) ? 1 : 0);
  return v;
}

template <unsigned K>
void emit_code_record(std::array<std::vector<std::uint8_t>, 3>& out, Backend b,
                      const IrisRecord& rec, Rng& rng) {
  const auto vals = masked_entries<K>(rec);
  if (b == Backend::replicated) {
    emit_rep_record<K>(out, vals, rng);
  } else {
    emit_gr_record<K>(out, vals, rng);
  }
}

template <unsigned K>
void emit_mask_record(std::array<std::vector<std::uint8_t>, 3>& out, Backend b, const BitVec& mask,
                      Rng& rng) {
  const auto vals = mask_entries<K>(mask);
  if (b == Backend::replicated) {
    emit_rep_record<K>(out, vals, rng);
  } else {
    emit_gr_record<K>(out, vals, rng);
  }
}

}  // namespace detail

// Per-row record sizes in bytes.
std::size_t code_record_bytes(Backend b, Variant v, std::size_t l);
std::size_t mask_record_bytes(Backend b, Variant v, std::size_t l);

// Emits one record (code + mask) for each party.
void emit_record(std::array<std::vector<std::uint8_t>, 3>& out, Backend b, Variant v,
                 const IrisRecord& rec, Rng& rng);

// Shares a whole database; payload is the concatenation of its row records.
std::array<std::vector<std::uint8_t>, 3> deal_db_payload(const IrisDb& db, Backend b, Variant v,
                                                         Rng& rng);

// Shares a list of query codes (the orb/dealer path).
std::array<std::vector<std::uint8_t>, 3> deal_query_payload(std::span<const IrisRecord> codes,
                                                            Backend b, Variant v, Rng& rng);

}  // namespace irismpc
