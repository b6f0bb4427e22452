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
#include <memory>
#include <string>
#include <vector>

#include "irismpc/transport.hpp"

namespace irismpc {

struct Endpoint {
  std::string host = "127.0.0.1";
  std::uint16_t port = 0;
};

// Framed message stream over one socket: 4-byte little-endian length,
// 1-byte phase tag, payload. The ledger sees payload bytes only.
class TcpStream {
 public:
  explicit TcpStream(int fd);
  ~TcpStream();
  TcpStream(const TcpStream&) = delete;
  TcpStream& operator=(const TcpStream&) = delete;

  void send_frame(std::uint8_t tag, const std::uint8_t* data, std::size_t n);
  std::pair<std::uint8_t, std::vector<std::uint8_t>> recv_frame();

  void send_frame(std::uint8_t tag, const std::vector<std::uint8_t>& v) {
    send_frame(tag, v.data(), v.size());
  }

 private:
  int fd_;
};

// One party's TCP mesh: both directed links to a peer ride the single
// socket for that pair.
class TcpMesh {
 public:
  // Parties listen on endpoints[id]; each dials every lower-numbered peer
  // and accepts the higher-numbered ones.
  static std::unique_ptr<TcpMesh> establish(PartyId self,
                                            const std::array<Endpoint, 3>& endpoints);

  PartyComm& comm() { return *comm_; }

  // Accepts one client connection on the listening socket (intro byte
  // 0xC0). Returns the stream.
  std::unique_ptr<TcpStream> accept_client();

  ~TcpMesh();

 private:
  TcpMesh() = default;

  int listen_fd_ = -1;
  std::array<std::unique_ptr<TcpStream>, 4> peers_;  // by party index
  std::array<std::unique_ptr<Link>, 4> links_;
  std::unique_ptr<PartyComm> comm_;
  // clients that dialed in while the mesh was still forming
  std::vector<std::unique_ptr<TcpStream>> pending_clients_;
};

// Client-side dial (used by the query tool).
std::unique_ptr<TcpStream> dial_client(const Endpoint& ep);

constexpr std::uint8_t kClientIntro = 0xC0;
// Frame tags on the client connection.
constexpr std::uint8_t kTagQuery = 0x01;
constexpr std::uint8_t kTagResult = 0x02;
constexpr std::uint8_t kTagEnd = 0x03;

}  // namespace irismpc
