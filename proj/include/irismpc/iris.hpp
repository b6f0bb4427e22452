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

#include <bit>
#include <cmath>
#include <cstdint>
#include <vector>

#include "irismpc/errors.hpp"
#include "irismpc/prf.hpp"
#include "irismpc/ring.hpp"

namespace irismpc {

// Dense bitvector, bit i stored at word[i/64] bit (i%64).
class BitVec {
 public:
  BitVec() = default;
  explicit BitVec(std::size_t n) : n_(n), w_((n + 63) / 64, 0) {}

  std::size_t size() const { return n_; }
  bool get(std::size_t i) const { return (w_[i / 64] >> (i % 64)) & 1; }
  void set(std::size_t i, bool v) {
    const std::uint64_t m = std::uint64_t{1} << (i % 64);
    if (v)
      w_[i / 64] |= m;
    else
      w_[i / 64] &= ~m;
  }

  std::size_t popcount() const {
    std::size_t c = 0;
    for (auto w : w_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  // Circular rotation by `by` positions (positive = towards higher indices).
  BitVec rotated(std::ptrdiff_t by) const {
    BitVec out(n_);
    if (n_ == 0) return out;
    std::ptrdiff_t shift = by % static_cast<std::ptrdiff_t>(n_);
    if (shift < 0) shift += static_cast<std::ptrdiff_t>(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      out.set((i + static_cast<std::size_t>(shift)) % n_, get(i));
    }
    return out;
  }

  const std::vector<std::uint64_t>& words() const { return w_; }
  std::vector<std::uint64_t>& words() { return w_; }

  friend bool operator==(const BitVec& a, const BitVec& b) {
    return a.n_ == b.n_ && a.w_ == b.w_;
  }

  static BitVec random(std::size_t n, Rng& rng, double density = 0.5) {
    BitVec out(n);
    for (std::size_t i = 0; i < n; ++i) out.set(i, rng.with_probability(density));
    return out;
  }

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> w_;
};

// An iris code plus the mask flagging which of its bits are usable.
struct IrisRecord {
  BitVec code;
  BitVec mask;

  IrisRecord() = default;
  IrisRecord(BitVec c, BitVec m) : code(std::move(c)), mask(std::move(m)) {
    if (code.size() != mask.size()) throw Error("IrisRecord: code/mask length mismatch");
  }

  std::size_t length() const { return code.size(); }
};

struct IrisDb {
  std::vector<IrisRecord> rows;
  std::size_t l = 0;

  explicit IrisDb(std::size_t length = 0) : l(length) {}

  std::size_t size() const { return rows.size(); }
  void add(IrisRecord r) {
    if (r.length() != l) throw Error("IrisDb: row length mismatch");
    rows.push_back(std::move(r));
  }
};

// Masked-bit encoding of a code/mask pair: (T, U, F) = (-1, 0, 1), entry
// computed as m - 2*(c & m) in the ring.
inline R16 to_masked(bool code_bit, bool mask_bit) {
  const int m = mask_bit ? 1 : 0;
  const int c = code_bit && mask_bit ? 1 : 0;
  return R16::from_signed(m - 2 * c);
}

struct MaskedVector {
  std::vector<R16> entries;

  static MaskedVector from_record(const IrisRecord& r) {
    MaskedVector mv;
    mv.entries.reserve(r.length());
    for (std::size_t i = 0; i < r.length(); ++i) {
      mv.entries.push_back(to_masked(r.code.get(i), r.mask.get(i)));
    }
    return mv;
  }

  std::size_t size() const { return entries.size(); }
};

// CountOnes on a masked vector: (1/2) * Sum(v*v - v) counts the -1 (T)
// entries. Evaluated in the signed view.
inline std::int64_t count_ones_masked(const MaskedVector& v) {
  std::int64_t acc = 0;
  for (auto e : v.entries) {
    const std::int64_t s = e.to_signed();
    acc += s * s - s;
  }
  return acc / 2;
}

// Hamming distance of two 0/1 vectors embedded in a ring:
// hd(a, b) = Sum a_i + Sum b_i - 2 <a, b>.
template <unsigned Bits>
std::int64_t hamming_distance_ring(const std::vector<Ring<Bits>>& a,
                                   const std::vector<Ring<Bits>>& b) {
  if (a.size() != b.size()) throw Error("hamming_distance_ring: length mismatch");
  std::uint64_t sa = 0, sb = 0, dot = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sa += a[i].value();
    sb += b[i].value();
    dot += static_cast<std::uint64_t>(a[i].value()) * b[i].value();
  }
  return static_cast<std::int64_t>(sa + sb) - 2 * static_cast<std::int64_t>(dot);
}

// Threshold parameters. a/b approximates (1 - 2*match_ratio) with b = 2^m;
// the integer pair is what crosses the MPC boundary, never the real ratio.
struct MatchParams {
  double match_ratio = 0.375;
  unsigned m = 16;
  std::uint32_t a = 1u << 14;
  std::uint32_t b = 1u << 16;

  static MatchParams make(double ratio, unsigned m_bits = 16) {
    if (!(ratio >= 0.0 && ratio <= 0.5)) {
      throw BoundsError("match_ratio must lie in [0, 0.5]");
    }
    MatchParams p;
    p.match_ratio = ratio;
    p.m = m_bits;
    p.b = 1u << m_bits;
    p.a = static_cast<std::uint32_t>(std::llround((1.0 - 2.0 * ratio) * p.b));
    if (p.a > p.b) p.a = p.b;
    return p;
  }

  // Construction bound to a vector length and comparison ring; rejects
  // (l, b, t) combinations the MSB trick cannot support.
  static MatchParams make_for(double ratio, unsigned m_bits, std::uint64_t l, unsigned cmp_bits);

  // Threshold term of the public-mask protocol. Rounding up keeps ties at
  // the rounded threshold on the non-match side, matching the MSB circuit.
  std::int64_t plain_threshold(std::int64_t ml) const {
    return static_cast<std::int64_t>(std::ceil((1.0 - 2.0 * match_ratio) * static_cast<double>(ml)));
  }
};

// Overflow bounds for MSB-as-comparison over Z_{2^t_bits}.
// Public-mask case: l < t/4 and l < t - 2^(ceil(log2 t) - 1).
inline bool public_mask_bound_holds(std::uint64_t l, unsigned t_bits) {
  if (t_bits >= 63) return true;
  const std::uint64_t t = std::uint64_t{1} << t_bits;
  return l < t / 4 && l < t - (t >> 1);
}

// Shared-mask case: b*l < t/4 and b*l < t - 2^(ceil(log2 t) - 1).
inline bool shared_mask_bound_holds(std::uint64_t l, std::uint64_t b, unsigned t_bits) {
  if (t_bits >= 63) return true;
  const std::uint64_t t = std::uint64_t{1} << t_bits;
  const std::uint64_t bl = b * l;
  if (bl / b != l) return false;  // multiplication overflowed
  return bl < t / 4 && bl < t - (t >> 1);
}

inline void check_public_mask_bound(std::uint64_t l, unsigned t_bits) {
  if (!public_mask_bound_holds(l, t_bits)) {
    throw BoundsError("comparison ring too small for vector length (public masks)");
  }
}

inline void check_shared_mask_bound(std::uint64_t l, std::uint64_t b, unsigned t_bits) {
  if (!shared_mask_bound_holds(l, b, t_bits)) {
    throw BoundsError("comparison ring too small for b*l (shared masks)");
  }
}

inline MatchParams MatchParams::make_for(double ratio, unsigned m_bits, std::uint64_t l,
                                         unsigned cmp_bits) {
  auto p = make(ratio, m_bits);
  check_shared_mask_bound(l, p.b, cmp_bits);
  return p;
}

// --- Plaintext predicates -------------------------------------------------
//
// Match semantics mirror the MSB side exactly, so plaintext and MPC agree
// bit for bit:
//   public masks:  dot > ceil((1 - 2*ratio) * ml)
//   shared masks:  b*dot > a*ml
// where dot = <c', C'_db[i]> = ml - 2*hd is the masked dot product.
// Rows with ml = 0 can never match (dot = 0 in both forms).

inline std::int64_t combined_mask_len(const IrisRecord& q, const IrisRecord& db) {
  std::int64_t ml = 0;
  for (std::size_t i = 0; i < q.length(); ++i) {
    ml += (q.mask.get(i) && db.mask.get(i)) ? 1 : 0;
  }
  return ml;
}

inline std::int64_t masked_dot(const MaskedVector& a, const MaskedVector& b) {
  if (a.size() != b.size()) throw Error("masked_dot: length mismatch");
  std::int64_t acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    acc += a.entries[i].to_signed() * b.entries[i].to_signed();
  }
  return acc;
}

inline bool plain_masked_comparison(const MaskedVector& q, const MaskedVector& db,
                                    const MatchParams& p) {
  std::int64_t ml = 0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    ml += (q.entries[i] != R16(0) && db.entries[i] != R16(0)) ? 1 : 0;
  }
  return masked_dot(q, db) > p.plain_threshold(ml);
}

// Shared-mask integer predicate.
inline bool shared_mask_predicate(std::int64_t dot, std::int64_t ml, const MatchParams& p) {
  return static_cast<std::int64_t>(p.b) * dot > static_cast<std::int64_t>(p.a) * ml;
}

// The raw Alg-1 ratio form hd/ml < match_ratio. Kept for documentation
// tests only; it differs from the MSB form exactly at rounded-threshold
// ties.
inline bool raw_ratio_predicate(std::int64_t hd, std::int64_t ml, const MatchParams& p) {
  if (ml == 0) return false;
  return static_cast<double>(hd) / static_cast<double>(ml) < p.match_ratio;
}

// Reference membership check (public-mask tie semantics) over a database.
inline bool plain_membership(const IrisRecord& q, const IrisDb& db, const MatchParams& p) {
  const MaskedVector qv = MaskedVector::from_record(q);
  for (const auto& row : db.rows) {
    if (plain_masked_comparison(qv, MaskedVector::from_record(row), p)) return true;
  }
  return false;
}

// r rotations at offsets -(r-1)/2 .. +(r-1)/2, code and mask rotated in
// lockstep by a stride of l/64 bits per step.
inline std::vector<IrisRecord> expand_rotations(const IrisRecord& q, unsigned r) {
  if (r % 2 == 0) throw Error("expand_rotations: r must be odd");
  const std::ptrdiff_t stride = static_cast<std::ptrdiff_t>(q.length() / 64);
  std::vector<IrisRecord> out;
  out.reserve(r);
  const int half = static_cast<int>(r - 1) / 2;
  for (int off = -half; off <= half; ++off) {
    out.emplace_back(q.code.rotated(off * stride), q.mask.rotated(off * stride));
  }
  return out;
}

inline IrisRecord random_record(std::size_t l, Rng& rng, double mask_density = 0.9) {
  return IrisRecord(BitVec::random(l, rng), BitVec::random(l, rng, mask_density));
}

}  // namespace irismpc
