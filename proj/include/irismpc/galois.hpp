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
#include <cstddef>

#include "irismpc/errors.hpp"
#include "irismpc/ring.hpp"

namespace irismpc {

// Element c0 + c1*X of the degree-2 Galois ring Z_{2^Bits}[X]/(X^2 - X - 1).
// The reduction X^2 = X + 1 gives the product
//   (c0 + c1 X)(d0 + d1 X) = (c0 d0 + c1 d1) + (c0 d1 + c1 d0 + c1 d1) X,
// whose constant term is the dot product of the coefficient pairs. That is
// the property the packed Shamir dot product relies on.
template <unsigned Bits>
struct Gr {
  using Coeff = Ring<Bits>;

  Coeff c0{};
  Coeff c1{};

  constexpr Gr() = default;
  constexpr Gr(Coeff a, Coeff b) : c0(a), c1(b) {}
  constexpr explicit Gr(std::uint64_t a) : c0(a), c1(0) {}

  friend constexpr Gr operator+(Gr a, Gr b) { return {a.c0 + b.c0, a.c1 + b.c1}; }
  friend constexpr Gr operator-(Gr a, Gr b) { return {a.c0 - b.c0, a.c1 - b.c1}; }
  constexpr Gr operator-() const { return {-c0, -c1}; }

  friend constexpr Gr operator*(Gr a, Gr b) {
    return {a.c0 * b.c0 + a.c1 * b.c1, a.c0 * b.c1 + a.c1 * b.c0 + a.c1 * b.c1};
  }

  // Constant term of the product, without materializing the X coefficient.
  friend constexpr Coeff mul_ct(Gr a, Gr b) { return a.c0 * b.c0 + a.c1 * b.c1; }

  Gr& operator+=(Gr o) { return *this = *this + o; }
  Gr& operator-=(Gr o) { return *this = *this - o; }
  Gr& operator*=(Gr o) { return *this = *this * o; }

  friend constexpr bool operator==(Gr a, Gr b) { return a.c0 == b.c0 && a.c1 == b.c1; }
  friend constexpr bool operator!=(Gr a, Gr b) { return !(a == b); }

  // A unit is anything whose projection into F_4 is nonzero.
  constexpr bool is_unit() const { return (c0.value() | c1.value()) & 1; }
};

// Inverse of a unit, lifted from F_4 by Newton iteration y <- y*(2 - a*y).
// Each step doubles the number of correct low bits, so a fixed number of
// steps suffices for a fixed coefficient width.
template <unsigned Bits>
Gr<Bits> gr_inverse(Gr<Bits> a) {
  if (!a.is_unit()) {
    throw NonUnitError("gr_inverse: element projects to 0 in F_4");
  }
  // Inverses in F_4 = {1, X, 1+X}: 1 <-> 1, X <-> 1+X.
  const unsigned p0 = a.c0.value() & 1;
  const unsigned p1 = a.c1.value() & 1;
  Gr<Bits> y;
  if (p1 == 0) {
    y = Gr<Bits>(1);  // a = 1 in F_4
  } else if (p0 == 0) {
    y = Gr<Bits>(Ring<Bits>(1), Ring<Bits>(1));  // a = X, inverse 1+X
  } else {
    y = Gr<Bits>(Ring<Bits>(0), Ring<Bits>(1));  // a = 1+X, inverse X
  }
  const Gr<Bits> two(2);
  for (unsigned correct = 1; correct < Bits; correct *= 2) {
    y = y * (two - a * y);
  }
  return y;
}

// The canonical exceptional sequence {0, 1, X, 1+X}: representatives of the
// four elements of F_4, so every pairwise difference is a unit. Index 0 is
// reserved for the secret; parties 1..3 evaluate at indices 1..3.
template <unsigned Bits>
struct ExceptionalSeq {
  static constexpr std::size_t size = 4;

  static std::array<Gr<Bits>, 4> points() {
    using G = Gr<Bits>;
    using C = Ring<Bits>;
    return {G(0), G(1), G(C(0), C(1)), G(C(1), C(1))};
  }

  static Gr<Bits> party_point(unsigned party /* 1..3 */) { return points()[party]; }
};

// Lagrange coefficients at 0 for three distinct holder points:
// lambda_i = prod_{j != i} x_j / (x_j - x_i). Throws NonUnitError if a
// pairwise difference is not invertible (points not exceptional).
template <unsigned Bits>
std::array<Gr<Bits>, 3> lagrange_at_zero(const std::array<Gr<Bits>, 3>& xs) {
  std::array<Gr<Bits>, 3> out;
  for (std::size_t i = 0; i < 3; ++i) {
    Gr<Bits> num(1), den(1);
    for (std::size_t j = 0; j < 3; ++j) {
      if (j == i) continue;
      num = num * xs[j];
      den = den * (xs[j] - xs[i]);
    }
    out[i] = num * gr_inverse(den);
  }
  return out;
}

// Coefficients for the canonical party points {1, X, 1+X}.
template <unsigned Bits>
std::array<Gr<Bits>, 3> party_lagrange_at_zero() {
  auto pts = ExceptionalSeq<Bits>::points();
  return lagrange_at_zero<Bits>({pts[1], pts[2], pts[3]});
}

using Gr16 = Gr<16>;
using Gr32 = Gr<32>;

}  // namespace irismpc
