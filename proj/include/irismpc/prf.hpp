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
#include <cstring>

#include "irismpc/ring.hpp"

namespace irismpc {

// 128-bit PRF key. A party pair that holds the same seed derives the same
// stream, which is what makes zero shares and OT pads communication-free.
struct Seed {
  std::array<std::uint8_t, 16> bytes{};

  friend bool operator==(const Seed& a, const Seed& b) { return a.bytes == b.bytes; }
};

namespace detail {

inline std::uint32_t rotl32(std::uint32_t x, int n) { return (x << n) | (x >> (32 - n)); }

inline void chacha_quarter(std::uint32_t& a, std::uint32_t& b, std::uint32_t& c,
                           std::uint32_t& d) {
  a += b; d ^= a; d = rotl32(d, 16);
  c += d; b ^= c; b = rotl32(b, 12);
  a += b; d ^= a; d = rotl32(d, 8);
  c += d; b ^= c; b = rotl32(b, 7);
}

// ChaCha block function (12 rounds), 128-bit key expanded by duplication.
inline void chacha_block(const Seed& seed, std::uint64_t block, std::uint64_t stream,
                         std::uint32_t out[16]) {
  std::uint32_t key[4];
  std::memcpy(key, seed.bytes.data(), 16);
  std::uint32_t st[16] = {
      0x61707865u, 0x3320646eu, 0x79622d32u, 0x6b206574u,
      key[0], key[1], key[2], key[3],
      key[0], key[1], key[2], key[3],
      static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32),
      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  std::uint32_t x[16];
  std::memcpy(x, st, sizeof(st));
  for (int r = 0; r < 6; ++r) {
    chacha_quarter(x[0], x[4], x[8], x[12]);
    chacha_quarter(x[1], x[5], x[9], x[13]);
    chacha_quarter(x[2], x[6], x[10], x[14]);
    chacha_quarter(x[3], x[7], x[11], x[15]);
    chacha_quarter(x[0], x[5], x[10], x[15]);
    chacha_quarter(x[1], x[6], x[11], x[12]);
    chacha_quarter(x[2], x[7], x[8], x[13]);
    chacha_quarter(x[3], x[4], x[9], x[14]);
  }
  for (int i = 0; i < 16; ++i) out[i] = x[i] + st[i];
}

}  // namespace detail

// Counter-mode PRF stream. Both holders of a seed advance their copies in
// lockstep (the protocol is SPMD-deterministic), so no synchronization
// message is ever needed.
class CtrPrf {
 public:
  CtrPrf() = default;
  explicit CtrPrf(Seed seed, std::uint64_t stream = 0) : seed_(seed), stream_(stream) {}

  std::uint64_t next_u64() {
    if (off_ == kWords) refill();
    return buf_[off_++];
  }

  template <unsigned Bits>
  Ring<Bits> next_ring() {
    return Ring<Bits>(next_u64());
  }

  void fill(std::uint8_t* out, std::size_t n) {
    while (n >= 8) {
      std::uint64_t w = next_u64();
      std::memcpy(out, &w, 8);
      out += 8;
      n -= 8;
    }
    if (n) {
      std::uint64_t w = next_u64();
      std::memcpy(out, &w, n);
    }
  }

  // Derives an independent child seed; used to give the dealer, the share
  // files and each party-pair their own domains.
  static Seed derive(const Seed& parent, std::uint64_t tag) {
    std::uint32_t blk[16];
    detail::chacha_block(parent, tag, 0xD5A1u, blk);
    Seed out;
    std::memcpy(out.bytes.data(), blk, 16);
    return out;
  }

  static Seed seed_from_u64(std::uint64_t v) {
    Seed s;
    std::memcpy(s.bytes.data(), &v, 8);
    return derive(s, 0);
  }

 private:
  static constexpr std::size_t kWords = 8;

  void refill() {
    std::uint32_t blk[16];
    detail::chacha_block(seed_, block_++, stream_, blk);
    std::memcpy(buf_.data(), blk, sizeof(blk));
    off_ = 0;
  }

  Seed seed_{};
  std::uint64_t stream_ = 0;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, kWords> buf_{};
  std::size_t off_ = kWords;
};

// General-purpose deterministic RNG for dealers and tests.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : prf_(CtrPrf::seed_from_u64(seed)) {}
  explicit Rng(Seed seed) : prf_(seed) {}

  std::uint64_t next_u64() { return prf_.next_u64(); }

  // Uniform in [0, bound) by rejection.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t lim = ~std::uint64_t{0} - ~std::uint64_t{0} % bound;
    std::uint64_t v;
    do {
      v = next_u64();
    } while (v >= lim);
    return v % bound;
  }

  bool bit() { return next_u64() & 1; }
  bool with_probability(double p) {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53 < p;
  }

  template <unsigned Bits>
  Ring<Bits> ring() {
    return Ring<Bits>(next_u64());
  }

 private:
  CtrPrf prf_;
};

}  // namespace irismpc
