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

#include <thread>

#include "irismpc/prf.hpp"
#include "irismpc/transport.hpp"

using namespace irismpc;

TEST_CASE("party ring topology") {
  CHECK(next_party(PartyId::p1) == PartyId::p2);
  CHECK(next_party(PartyId::p3) == PartyId::p1);
  CHECK(prev_party(PartyId::p1) == PartyId::p3);
  CHECK(prev_party(PartyId::p2) == PartyId::p1);
}

TEST_CASE("in-process echo round trip") {
  InProcNet net;
  std::thread t([&] {
    auto msg = net.comm(PartyId::p2).recv(PartyId::p1, Phase::setup);
    net.comm(PartyId::p2).send(PartyId::p1, Phase::setup, msg);
  });
  const std::vector<std::uint8_t> payload = {1, 2, 3, 4, 5};
  net.comm(PartyId::p1).send(PartyId::p2, Phase::setup, payload);
  const auto echo = net.comm(PartyId::p1).recv(PartyId::p2, Phase::setup);
  t.join();
  CHECK(echo == payload);
  CHECK(net.comm(PartyId::p1).ledger().phase(Phase::setup).bytes_sent == 5);
  CHECK(net.comm(PartyId::p1).ledger().phase(Phase::setup).messages_sent == 1);
}

TEST_CASE("randomized payloads arrive in FIFO order per channel") {
  InProcNet net;
  Rng rng(1);
  std::vector<std::vector<std::uint8_t>> sent;
  for (int i = 0; i < 10000; ++i) {
    std::vector<std::uint8_t> m(1 + rng.below(16));
    for (auto& b : m) b = static_cast<std::uint8_t>(rng.next_u64());
    // sequence number prefix for the audit
    m[0] = static_cast<std::uint8_t>(i);
    sent.push_back(m);
  }
  std::thread t([&] {
    for (int i = 0; i < 10000; ++i) {
      const auto m = net.comm(PartyId::p3).recv(PartyId::p1, Phase::dot);
      REQUIRE(m == sent[static_cast<std::size_t>(i)]);
    }
  });
  for (const auto& m : sent) net.comm(PartyId::p1).send(PartyId::p3, Phase::dot, m);
  t.join();
}

TEST_CASE("no party sends to itself") {
  InProcNet net;
  CHECK_THROWS_AS(net.comm(PartyId::p1).send(PartyId::p1, Phase::setup, {}), TransportError);
}

TEST_CASE("phase tag mismatch is a transport error") {
  InProcNet net;
  net.comm(PartyId::p1).send(PartyId::p2, Phase::dot, {});
  CHECK_THROWS_AS(net.comm(PartyId::p2).recv(PartyId::p1, Phase::msb), TransportError);
}

TEST_CASE("ledger partitions sum to the grand total") {
  InProcNet net;
  auto& c = net.comm(PartyId::p1);
  c.send(PartyId::p2, Phase::dot, std::vector<std::uint8_t>(7));
  c.send(PartyId::p3, Phase::msb, std::vector<std::uint8_t>(9));
  c.round(Phase::dot);
  c.round(Phase::msb);
  std::uint64_t sum = 0;
  for (const auto p : {Phase::setup, Phase::dot, Phase::lift, Phase::msb, Phase::or_tree,
                       Phase::ot}) {
    sum += c.ledger().phase(p).bytes_sent;
  }
  CHECK(sum == c.ledger().total_bytes());
  CHECK(c.ledger().total_bytes() == 16);
  CHECK(c.ledger().total_rounds() == 2);
}
