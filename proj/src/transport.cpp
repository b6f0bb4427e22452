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

#include "irismpc/transport.hpp"

#include <string>

namespace irismpc {

const char* phase_name(Phase p) {
  switch (p) {
    case Phase::setup: return "setup";
    case Phase::dot: return "dot";
    case Phase::lift: return "lift";
    case Phase::msb: return "msb";
    case Phase::or_tree: return "or_tree";
    case Phase::ot: return "ot";
  }
  return "?";
}

bool operator==(const CommLedger& a, const CommLedger& b) {
  for (std::size_t i = 0; i < kNumPhases; ++i) {
    const auto& x = a.counters_[i];
    const auto& y = b.counters_[i];
    if (x.bytes_sent != y.bytes_sent || x.messages_sent != y.messages_sent ||
        x.rounds != y.rounds) {
      return false;
    }
  }
  return true;
}

struct InProcNet::Queue {
  std::mutex mu;
  std::condition_variable cv;
  std::deque<std::pair<Phase, std::vector<std::uint8_t>>> msgs;
  bool aborted = false;

  void push(Phase tag, const std::uint8_t* data, std::size_t n) {
    {
      std::lock_guard<std::mutex> lock(mu);
      msgs.emplace_back(tag, std::vector<std::uint8_t>(data, data + n));
    }
    cv.notify_one();
  }

  void abort() {
    {
      std::lock_guard<std::mutex> lock(mu);
      aborted = true;
    }
    cv.notify_all();
  }

  std::vector<std::uint8_t> pop(Phase expected) {
    std::unique_lock<std::mutex> lock(mu);
    if (!cv.wait_for(lock, kTimeout, [&] { return !msgs.empty() || aborted; })) {
      throw TransportError("in-process recv timed out");
    }
    if (msgs.empty()) throw TransportError("peer aborted");
    auto [tag, payload] = std::move(msgs.front());
    msgs.pop_front();
    if (tag != expected) {
      throw TransportError(std::string("phase tag mismatch: expected ") + phase_name(expected) +
                           ", got " + phase_name(tag));
    }
    return payload;
  }
};

void InProcNet::abort() {
  for (auto& q : queues_) q->abort();
}

InProcNet::~InProcNet() = default;

namespace {

class InProcLink final : public Link {
 public:
  explicit InProcLink(InProcNet::Queue* q) : q_(q) {}
  void send(Phase tag, const std::uint8_t* data, std::size_t n) override {
    q_->push(tag, data, n);
  }
  std::vector<std::uint8_t> recv(Phase expected) override { return q_->pop(expected); }

 private:
  InProcNet::Queue* q_;
};

}  // namespace

InProcNet::InProcNet() {
  for (auto& q : queues_) q = std::make_unique<Queue>();
  for (std::size_t i = 0; i < 9; ++i) links_[i] = std::make_unique<InProcLink>(queues_[i].get());

  auto link_at = [&](unsigned from, unsigned to) -> Link* {
    return links_[(from - 1) * 3 + (to - 1)].get();
  };
  for (unsigned p = 1; p <= 3; ++p) {
    std::array<Link*, 4> out{nullptr, nullptr, nullptr, nullptr};
    std::array<Link*, 4> in{nullptr, nullptr, nullptr, nullptr};
    for (unsigned o = 1; o <= 3; ++o) {
      if (o == p) continue;
      out[o] = link_at(p, o);
      in[o] = link_at(o, p);
    }
    comms_[p - 1] = std::make_unique<PartyComm>(static_cast<PartyId>(p), out, in);
  }
}

}  // namespace irismpc
