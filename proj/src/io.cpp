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

#include "irismpc/io.hpp"

#include <cstring>
#include <filesystem>
#include <fstream>

namespace irismpc {

namespace {

void put_u16(std::vector<std::uint8_t>& b, std::uint16_t v) {
  b.push_back(static_cast<std::uint8_t>(v));
  b.push_back(static_cast<std::uint8_t>(v >> 8));
}
void put_u32(std::vector<std::uint8_t>& b, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) b.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}
void put_u64(std::vector<std::uint8_t>& b, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) b.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t get_uint(const std::uint8_t* p, unsigned bytes) {
  std::uint64_t v = 0;
  for (unsigned i = 0; i < bytes; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return v;
}

void write_all(const std::string& path, std::span<const std::uint8_t> bytes) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot open for writing: " + path);
  f.write(reinterpret_cast<const char*>(bytes.data()),
          static_cast<std::streamsize>(bytes.size()));
  if (!f) throw Error("short write: " + path);
}

std::vector<std::uint8_t> read_all(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open: " + path);
  f.seekg(0, std::ios::end);
  const auto n = static_cast<std::size_t>(f.tellg());
  f.seekg(0);
  std::vector<std::uint8_t> out(n);
  f.read(reinterpret_cast<char*>(out.data()), static_cast<std::streamsize>(n));
  if (!f) throw Error("short read: " + path);
  return out;
}

void pack_bits(std::vector<std::uint8_t>& out, const BitVec& v) {
  for (std::size_t i = 0; i < v.size() / 8; ++i) {
    out.push_back(static_cast<std::uint8_t>(v.words()[i / 8] >> (8 * (i % 8))));
  }
}

BitVec unpack_bits(const std::uint8_t* p, std::size_t l) {
  BitVec v(l);
  for (std::size_t i = 0; i < l / 8; ++i) {
    v.words()[i / 8] |= static_cast<std::uint64_t>(p[i]) << (8 * (i % 8));
  }
  return v;
}

}  // namespace

void write_iris_db(const std::string& path, const IrisDb& db) {
  if (db.l % 8 != 0) throw Error("db length must be a multiple of 8");
  std::vector<std::uint8_t> buf;
  buf.reserve(18 + 2 * db.size() * db.l / 8);
  buf.insert(buf.end(), {'I', 'R', 'M', 'P'});
  put_u16(buf, 1);
  put_u32(buf, db.l);
  put_u64(buf, db.size());
  for (const auto& r : db.rows) pack_bits(buf, r.code);
  for (const auto& r : db.rows) pack_bits(buf, r.mask);
  write_all(path, buf);
}

IrisDb read_iris_db(const std::string& path) {
  const auto buf = read_all(path);
  if (buf.size() < 18 || std::memcmp(buf.data(), "IRMP", 4) != 0) {
    throw Error("not an IRMP file: " + path);
  }
  if (get_uint(buf.data() + 4, 2) != 1) throw Error("unsupported IRMP version");
  const auto l = static_cast<std::uint32_t>(get_uint(buf.data() + 6, 4));
  const auto s = get_uint(buf.data() + 10, 8);
  const std::size_t row = l / 8;
  if (buf.size() != 18 + 2 * s * row) throw Error("IRMP size mismatch");
  IrisDb db(l);
  const std::uint8_t* codes = buf.data() + 18;
  const std::uint8_t* masks = codes + s * row;
  for (std::uint64_t i = 0; i < s; ++i) {
    db.add(IrisRecord(unpack_bits(codes + i * row, l), unpack_bits(masks + i * row, l)));
  }
  return db;
}

void write_share_file(const std::string& path, const ShareFileHeader& h,
                      std::span<const std::uint8_t> payload) {
  std::vector<std::uint8_t> buf;
  buf.reserve(24 + payload.size());
  buf.insert(buf.end(), {'I', 'R', 'S', '1'});
  buf.push_back(1);
  buf.push_back(static_cast<std::uint8_t>(h.backend));
  buf.push_back(static_cast<std::uint8_t>(h.variant));
  buf.push_back(static_cast<std::uint8_t>(h.party));
  buf.push_back(static_cast<std::uint8_t>(code_bits(h.variant)));
  buf.push_back(static_cast<std::uint8_t>(mask_bits(h.variant)));
  put_u16(buf, 0);
  put_u32(buf, h.l);
  put_u64(buf, h.s);
  buf.insert(buf.end(), payload.begin(), payload.end());
  write_all(path, buf);
}

std::pair<ShareFileHeader, std::vector<std::uint8_t>> read_share_file(const std::string& path) {
  auto buf = read_all(path);
  if (buf.size() < 24 || std::memcmp(buf.data(), "IRS1", 4) != 0) {
    throw Error("not an IRS1 file: " + path);
  }
  if (buf[4] != 1) throw Error("unsupported IRS1 version");
  ShareFileHeader h;
  h.backend = static_cast<Backend>(buf[5]);
  h.variant = static_cast<Variant>(buf[6]);
  h.party = buf[7];
  h.l = static_cast<std::uint32_t>(get_uint(buf.data() + 12, 4));
  h.s = get_uint(buf.data() + 16, 8);
  if (buf[8] != code_bits(h.variant) || buf[9] != mask_bits(h.variant)) {
    throw Error("IRS1 width fields inconsistent with variant");
  }
  const std::size_t expect =
      h.s * (code_record_bytes(h.backend, h.variant, h.l) +
             mask_record_bytes(h.backend, h.variant, h.l));
  if (buf.size() != 24 + expect) throw Error("IRS1 payload size mismatch");
  std::vector<std::uint8_t> payload(buf.begin() + 24, buf.end());
  return {h, std::move(payload)};
}

void write_seed_file(const std::string& path, unsigned party, const Seed& own, const Seed& prev) {
  std::vector<std::uint8_t> buf;
  buf.insert(buf.end(), {'I', 'R', 'S', 'D'});
  buf.push_back(1);
  buf.push_back(static_cast<std::uint8_t>(party));
  buf.insert(buf.end(), own.bytes.begin(), own.bytes.end());
  buf.insert(buf.end(), prev.bytes.begin(), prev.bytes.end());
  write_all(path, buf);
}

std::pair<Seed, Seed> read_seed_file(const std::string& path, unsigned expect_party) {
  const auto buf = read_all(path);
  if (buf.size() != 38 || std::memcmp(buf.data(), "IRSD", 4) != 0 || buf[4] != 1) {
    throw Error("not an IRSD file: " + path);
  }
  if (buf[5] != expect_party) throw Error("seed file belongs to another party");
  Seed own, prev;
  std::memcpy(own.bytes.data(), buf.data() + 6, 16);
  std::memcpy(prev.bytes.data(), buf.data() + 22, 16);
  return {own, prev};
}

std::size_t file_size(const std::string& path) {
  return static_cast<std::size_t>(std::filesystem::file_size(path));
}

}  // namespace irismpc
