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

#include "irismpc/tcp.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <thread>

namespace irismpc {

namespace {

void set_common_opts(int fd) {
  int one = 1;
  setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
  timeval tv{};
  tv.tv_sec = 120;
  setsockopt(fd, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof(tv));
  setsockopt(fd, SOL_SOCKET, SO_SNDTIMEO, &tv, sizeof(tv));
}

sockaddr_in to_addr(const Endpoint& ep) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(ep.port);
  if (inet_pton(AF_INET, ep.host.c_str(), &addr.sin_addr) != 1) {
    throw TransportError("bad address: " + ep.host);
  }
  return addr;
}

void write_exact(int fd, const std::uint8_t* p, std::size_t n) {
  while (n > 0) {
    const auto w = ::send(fd, p, n, MSG_NOSIGNAL);
    if (w <= 0) throw TransportError("socket write failed");
    p += w;
    n -= static_cast<std::size_t>(w);
  }
}

void read_exact(int fd, std::uint8_t* p, std::size_t n) {
  while (n > 0) {
    const auto r = ::recv(fd, p, n, 0);
    if (r <= 0) throw TransportError("socket read failed (peer closed or timeout)");
    p += r;
    n -= static_cast<std::size_t>(r);
  }
}

// Dials with retries so party start order does not matter.
int dial_fd(const Endpoint& ep, int attempts = 100) {
  const auto addr = to_addr(ep);
  for (int i = 0; i < attempts; ++i) {
    const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) throw TransportError("socket() failed");
    if (::connect(fd, reinterpret_cast<const sockaddr*>(&addr), sizeof(addr)) == 0) {
      set_common_opts(fd);
      return fd;
    }
    ::close(fd);
    std::this_thread::sleep_for(std::chrono::milliseconds(100));
  }
  throw TransportError("cannot connect to " + ep.host + ":" + std::to_string(ep.port));
}

class TcpPairLink final : public Link {
 public:
  explicit TcpPairLink(TcpStream* s) : s_(s) {}
  void send(Phase tag, const std::uint8_t* data, std::size_t n) override {
    s_->send_frame(static_cast<std::uint8_t>(tag), data, n);
  }
  std::vector<std::uint8_t> recv(Phase expected) override {
    auto [tag, payload] = s_->recv_frame();
    if (tag != static_cast<std::uint8_t>(expected)) {
      throw TransportError("tcp phase tag mismatch");
    }
    return payload;
  }

 private:
  TcpStream* s_;
};

}  // namespace

TcpStream::TcpStream(int fd) : fd_(fd) {}

TcpStream::~TcpStream() {
  if (fd_ >= 0) ::close(fd_);
}

void TcpStream::send_frame(std::uint8_t tag, const std::uint8_t* data, std::size_t n) {
  std::uint8_t hdr[5];
  const auto len = static_cast<std::uint32_t>(n);
  std::memcpy(hdr, &len, 4);
  hdr[4] = tag;
  write_exact(fd_, hdr, 5);
  if (n) write_exact(fd_, data, n);
}

std::pair<std::uint8_t, std::vector<std::uint8_t>> TcpStream::recv_frame() {
  std::uint8_t hdr[5];
  read_exact(fd_, hdr, 5);
  std::uint32_t len = 0;
  std::memcpy(&len, hdr, 4);
  std::vector<std::uint8_t> payload(len);
  if (len) read_exact(fd_, payload.data(), len);
  return {hdr[4], std::move(payload)};
}

TcpMesh::~TcpMesh() {
  if (listen_fd_ >= 0) ::close(listen_fd_);
}

std::unique_ptr<TcpMesh> TcpMesh::establish(PartyId self,
                                            const std::array<Endpoint, 3>& endpoints) {
  auto mesh = std::unique_ptr<TcpMesh>(new TcpMesh);
  const unsigned me = party_index(self);

  mesh->listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (mesh->listen_fd_ < 0) throw TransportError("socket() failed");
  int one = 1;
  setsockopt(mesh->listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  auto addr = to_addr(endpoints[me - 1]);
  if (::bind(mesh->listen_fd_, reinterpret_cast<const sockaddr*>(&addr), sizeof(addr)) != 0) {
    throw TransportError("bind failed on port " + std::to_string(endpoints[me - 1].port));
  }
  if (::listen(mesh->listen_fd_, 8) != 0) throw TransportError("listen failed");

  // Dial lower-numbered parties, identifying ourselves with an intro byte.
  for (unsigned peer = 1; peer < me; ++peer) {
    const int fd = dial_fd(endpoints[peer - 1]);
    const std::uint8_t intro = static_cast<std::uint8_t>(me);
    write_exact(fd, &intro, 1);
    mesh->peers_[peer] = std::make_unique<TcpStream>(fd);
  }
  // Accept higher-numbered parties; clients arriving early are parked.
  unsigned expected = 3 - me;
  while (expected > 0) {
    const int fd = ::accept(mesh->listen_fd_, nullptr, nullptr);
    if (fd < 0) throw TransportError("accept failed");
    set_common_opts(fd);
    std::uint8_t intro = 0;
    read_exact(fd, &intro, 1);
    if (intro == kClientIntro) {
      mesh->pending_clients_.push_back(std::make_unique<TcpStream>(fd));
      continue;
    }
    if (intro <= me || intro > 3) {
      ::close(fd);
      throw TransportError("unexpected peer intro");
    }
    mesh->peers_[intro] = std::make_unique<TcpStream>(fd);
    --expected;
  }

  std::array<Link*, 4> out{nullptr, nullptr, nullptr, nullptr};
  std::array<Link*, 4> in{nullptr, nullptr, nullptr, nullptr};
  for (unsigned peer = 1; peer <= 3; ++peer) {
    if (peer == me) continue;
    mesh->links_[peer] = std::make_unique<TcpPairLink>(mesh->peers_[peer].get());
    out[peer] = mesh->links_[peer].get();
    in[peer] = mesh->links_[peer].get();
  }
  mesh->comm_ = std::make_unique<PartyComm>(self, out, in);
  return mesh;
}

std::unique_ptr<TcpStream> TcpMesh::accept_client() {
  if (!pending_clients_.empty()) {
    auto s = std::move(pending_clients_.front());
    pending_clients_.erase(pending_clients_.begin());
    return s;
  }
  const int fd = ::accept(listen_fd_, nullptr, nullptr);
  if (fd < 0) throw TransportError("accept failed");
  set_common_opts(fd);
  std::uint8_t intro = 0;
  read_exact(fd, &intro, 1);
  if (intro != kClientIntro) {
    ::close(fd);
    throw TransportError("expected client intro");
  }
  return std::make_unique<TcpStream>(fd);
}

std::unique_ptr<TcpStream> dial_client(const Endpoint& ep) {
  const int fd = dial_fd(ep);
  const std::uint8_t intro = kClientIntro;
  write_exact(fd, &intro, 1);
  return std::make_unique<TcpStream>(fd);
}

}  // namespace irismpc
