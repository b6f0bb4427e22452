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
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <memory>
#include <mutex>
#include <vector>

#include "irismpc/errors.hpp"

namespace irismpc {

// Parties are numbered 1..3 with the ring topology next(i) = (i mod 3) + 1.
enum class PartyId : std::uint8_t { p1 = 1, p2 = 2, p3 = 3 };

constexpr PartyId next_party(PartyId p) {
  return static_cast<PartyId>((static_cast<unsigned>(p) % 3) + 1);
}
constexpr PartyId prev_party(PartyId p) { return next_party(next_party(p)); }
constexpr unsigned party_index(PartyId p) { return static_cast<unsigned>(p); }

enum class Phase : std::uint8_t { setup = 0, dot, lift, msb, or_tree, ot };
constexpr std::size_t kNumPhases = 6;

const char* phase_name(Phase p);

struct PhaseCounters {
  std::uint64_t bytes_sent = 0;
  std::uint64_t messages_sent = 0;
  std::uint64_t rounds = 0;
};

// Per-party accounting of sent payload bytes, messages and protocol rounds,
// partitioned by phase. Counts payload only; framing is excluded so the
// totals are comparable between transport backings and to share-byte
// arithmetic.
class CommLedger {
 public:
  void on_send(Phase p, std::size_t bytes) {
    auto& c = at(p);
    c.bytes_sent += bytes;
    c.messages_sent += 1;
  }
  void on_round(Phase p) { at(p).rounds += 1; }

  const PhaseCounters& phase(Phase p) const { return counters_[static_cast<std::size_t>(p)]; }

  std::uint64_t total_bytes() const {
    std::uint64_t t = 0;
    for (const auto& c : counters_) t += c.bytes_sent;
    return t;
  }
  std::uint64_t total_messages() const {
    std::uint64_t t = 0;
    for (const auto& c : counters_) t += c.messages_sent;
    return t;
  }
  std::uint64_t total_rounds() const {
    std::uint64_t t = 0;
    for (const auto& c : counters_) t += c.rounds;
    return t;
  }

  friend bool operator==(const CommLedger& a, const CommLedger& b);

 private:
  PhaseCounters& at(Phase p) { return counters_[static_cast<std::size_t>(p)]; }
  std::array<PhaseCounters, kNumPhases> counters_{};
};

// One directed, reliable, in-order message channel.
class Link {
 public:
  virtual ~Link() = default;
  virtual void send(Phase tag, const std::uint8_t* data, std::size_t n) = 0;
  virtual std::vector<std::uint8_t> recv(Phase expected_tag) = 0;
};

// A party's view of the network: one outgoing and one incoming link per
// peer, plus the ledger. No party ever sends to itself.
class PartyComm {
 public:
  PartyComm(PartyId self, std::array<Link*, 4> out, std::array<Link*, 4> in)
      : self_(self), out_(out), in_(in) {}

  PartyId id() const { return self_; }

  void send(PartyId to, Phase p, const std::uint8_t* data, std::size_t n) {
    if (to == self_) throw TransportError("send to self");
    ledger_.on_send(p, n);
    out_[party_index(to)]->send(p, data, n);
  }
  void send(PartyId to, Phase p, const std::vector<std::uint8_t>& msg) {
    send(to, p, msg.data(), msg.size());
  }

  std::vector<std::uint8_t> recv(PartyId from, Phase p) {
    if (from == self_) throw TransportError("recv from self");
    return in_[party_index(from)]->recv(p);
  }

  // Marks one protocol-level round: every lane of the current batch has
  // sent and is about to block on the matching receives.
  void round(Phase p) { ledger_.on_round(p); }

  CommLedger& ledger() { return ledger_; }
  const CommLedger& ledger() const { return ledger_; }

 private:
  PartyId self_;
  std::array<Link*, 4> out_;
  std::array<Link*, 4> in_;
  CommLedger ledger_;
};

// In-process backing: six blocking message queues shared by three
// PartyComm instances, for tests and single-process runs.
class InProcNet {
 public:
  InProcNet();
  ~InProcNet();

  PartyComm& comm(PartyId p) { return *comms_[party_index(p) - 1]; }

  // Wakes every blocked receiver; they fail with TransportError. Used when
  // one party dies so the others do not wait out the timeout.
  void abort();

  static constexpr std::chrono::seconds kTimeout{120};

  struct Queue;

 private:
  std::array<std::unique_ptr<Queue>, 9> queues_;  // [from-1][to-1]
  std::array<std::unique_ptr<Link>, 9> links_;
  std::array<std::unique_ptr<PartyComm>, 3> comms_;
};

}  // namespace irismpc
