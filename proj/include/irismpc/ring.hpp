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

#include <cstdint>
#include <type_traits>

namespace irismpc {

namespace detail {

template <unsigned Bits>
struct ring_word {
  static_assert(Bits >= 1 && Bits <= 64, "ring width out of range");
  using type = std::conditional_t<
      (Bits <= 16), std::uint16_t,
      std::conditional_t<(Bits <= 32), std::uint32_t, std::uint64_t>>;
};

}  // namespace detail

// Element of Z_{2^Bits} stored in the smallest machine word that fits.
// All arithmetic wraps mod 2^Bits; the signed view uses the canonical
// embedding (values >= 2^(Bits-1) are negative). The public protocol
// widths are 16, 32 and 48; intermediate gadget rings (e.g. the 15-bit
// ring used by the lift) instantiate other widths.
template <unsigned Bits>
class Ring {
 public:
  using word = typename detail::ring_word<Bits>::type;
  static constexpr unsigned bits = Bits;
  static constexpr unsigned byte_size = (Bits + 7) / 8;
  static constexpr word mask =
      (Bits == 8 * sizeof(word)) ? static_cast<word>(~word{0})
                                 : static_cast<word>((word{1} << (Bits % (8 * sizeof(word)))) - 1);

  constexpr Ring() = default;
  constexpr explicit Ring(std::uint64_t v) : v_(static_cast<word>(v) & mask) {}

  constexpr word value() const { return v_; }

  static constexpr Ring from_signed(std::int64_t v) {
    return Ring(static_cast<std::uint64_t>(v));
  }

  constexpr std::int64_t to_signed() const {
    if (msb()) {
      return static_cast<std::int64_t>(v_) - (std::int64_t{1} << (Bits - 1)) * 2;
    }
    return static_cast<std::int64_t>(v_);
  }

  constexpr bool msb() const { return (v_ >> (Bits - 1)) & 1; }
  constexpr bool bit(unsigned i) const { return (v_ >> i) & 1; }

  friend constexpr Ring operator+(Ring a, Ring b) { return Ring(std::uint64_t{a.v_} + b.v_); }
  friend constexpr Ring operator-(Ring a, Ring b) { return Ring(std::uint64_t{a.v_} - b.v_); }
  friend constexpr Ring operator*(Ring a, Ring b) {
    return Ring(static_cast<std::uint64_t>(a.v_) * b.v_);
  }
  constexpr Ring operator-() const { return Ring(0) - *this; }

  Ring& operator+=(Ring o) { return *this = *this + o; }
  Ring& operator-=(Ring o) { return *this = *this - o; }
  Ring& operator*=(Ring o) { return *this = *this * o; }

  friend constexpr bool operator==(Ring a, Ring b) { return a.v_ == b.v_; }
  friend constexpr bool operator!=(Ring a, Ring b) { return a.v_ != b.v_; }

 private:
  word v_ = 0;
};

using R16 = Ring<16>;
using R32 = Ring<32>;
using R48 = Ring<48>;

// Widens (or narrows) a value into another ring, taking the representative
// in [0, 2^From) as an integer. Used by ConstLift-style re-typing.
template <unsigned To, unsigned From>
constexpr Ring<To> recast(Ring<From> x) {
  return Ring<To>(static_cast<std::uint64_t>(x.value()));
}

}  // namespace irismpc
