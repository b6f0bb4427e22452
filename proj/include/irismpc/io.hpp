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
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "irismpc/iris.hpp"
#include "irismpc/prf.hpp"
#include "irismpc/shares.hpp"

namespace irismpc {

// Plaintext iris database container:
//   magic "IRMP", version u16, l u32, s u64,
//   packed code bits then mask bits, row-major little-endian.
// Used by the dealer CLI only; parties never see plaintext files.
void write_iris_db(const std::string& path, const IrisDb& db);
IrisDb read_iris_db(const std::string& path);

// Per-party share file:
//   magic "IRS1", version u8, backend u8, variant u8, party u8,
//   code_k u8, mask_k u8 (0 = plain masks), reserved u16, l u32, s u64,
//   then the row-record payload.
struct ShareFileHeader {
  Backend backend = Backend::replicated;
  Variant variant = Variant::plain_mask;
  unsigned party = 1;
  std::uint32_t l = 0;
  std::uint64_t s = 0;
};

void write_share_file(const std::string& path, const ShareFileHeader& h,
                      std::span<const std::uint8_t> payload);
std::pair<ShareFileHeader, std::vector<std::uint8_t>> read_share_file(const std::string& path);

// Per-party PRF seeds: magic "IRSD", version u8, party u8, seed_own, seed_prev.
void write_seed_file(const std::string& path, unsigned party, const Seed& own, const Seed& prev);
std::pair<Seed, Seed> read_seed_file(const std::string& path, unsigned expect_party);

std::size_t file_size(const std::string& path);

}  // namespace irismpc
