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

#include <doctest.h>

#include "irismpc/prf.hpp"
#include "irismpc/ring.hpp"

using namespace irismpc;

TEST_CASE("ring arithmetic wraps mod 2^k") {
  CHECK(R16(0xffff) + R16(1) == R16(0));
  CHECK(R16(0) - R16(1) == R16(0xffff));
  CHECK(R32(0x80000000u) + R32(0x80000000u) == R32(0));
  CHECK((R48(1) * R48(std::uint64_t{1} << 47)).value() == std::uint64_t{1} << 47);
  CHECK(R48(std::uint64_t{1} << 47) + R48(std::uint64_t{1} << 47) == R48(0));
}

TEST_CASE("signed view and msb") {
  CHECK(R16::from_signed(-1).value() == 0xffff);
  CHECK(R16(0xffff).to_signed() == -1);
  CHECK(R16(0x7fff).to_signed() == 0x7fff);
  CHECK(R16(0x8000).to_signed() == -0x8000);
  CHECK(R16(0x8000).msb());
  CHECK_FALSE(R16(0x7fff).msb());
  CHECK(R32::from_signed(-5) + R32(5) == R32(0));
  CHECK(R48::from_signed(-1).value() == (std::uint64_t{1} << 48) - 1);
}

template <unsigned K>
static void ring_laws(std::uint64_t seed) {
  Rng rng(seed);
  for (int i = 0; i < 2000; ++i) {
    const auto a = rng.ring<K>(), b = rng.ring<K>(), c = rng.ring<K>();
    CHECK((a + b) + c == a + (b + c));
    CHECK(a + b == b + a);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * b == b * a);
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a - a == Ring<K>(0));
  }
}

TEST_CASE("associativity, commutativity, distributivity") {
  ring_laws<16>(11);
  ring_laws<32>(12);
  ring_laws<48>(13);
}

TEST_CASE("msb equals signed negativity") {
  Rng rng(99);
  for (int i = 0; i < 5000; ++i) {
    const auto a = rng.ring<16>();
    CHECK(a.msb() == (a.to_signed() < 0));
    const auto b = rng.ring<32>();
    CHECK(b.msb() == (b.to_signed() < 0));
  }
}

TEST_CASE("recast widens the unsigned representative") {
  CHECK(recast<32, 16>(R16(0xffff)).value() == 0xffffu);
  CHECK(recast<16, 32>(R32(0x1ffff)).value() == 0xffffu);
}
