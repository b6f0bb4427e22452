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

#include "irismpc/shares.hpp"

#include <string>

namespace irismpc {

const char* to_string(Backend b) {
  return b == Backend::replicated ? "replicated" : "shamir-galois";
}

const char* to_string(Variant v) {
  switch (v) {
    case Variant::plain_mask: return "plain-mask";
    case Variant::mpc_lift: return "mpc-lift";
    case Variant::const_lift: return "const-lift";
    case Variant::no_lift: return "no-lift";
  }
  return "?";
}

Backend backend_from_string(const std::string& s) {
  if (s == "replicated") return Backend::replicated;
  if (s == "shamir-galois" || s == "shamir") return Backend::shamir;
  throw Error("unknown backend: " + s);
}

Variant variant_from_string(const std::string& s) {
  if (s == "plain-mask") return Variant::plain_mask;
  if (s == "mpc-lift") return Variant::mpc_lift;
  if (s == "const-lift") return Variant::const_lift;
  if (s == "no-lift") return Variant::no_lift;
  throw Error("unknown variant: " + s);
}

std::size_t code_record_bytes(Backend b, Variant v, std::size_t l) {
  const std::size_t word = code_bits(v) / 8;
  return b == Backend::replicated ? l * 2 * word : (l / 2) * 2 * word;
}

std::size_t mask_record_bytes(Backend b, Variant v, std::size_t l) {
  const unsigned km = mask_bits(v);
  if (km == 0) return l / 8;
  const std::size_t word = km / 8;
  return b == Backend::replicated ? l * 2 * word : (l / 2) * 2 * word;
}

void emit_record(std::array<std::vector<std::uint8_t>, 3>& out, Backend b, Variant v,
                 const IrisRecord& rec, Rng& rng) {
  if (rec.length() % 8 != 0) throw Error("record length must be a multiple of 8");
  if (code_bits(v) == 16) {
    detail::emit_code_record<16>(out, b, rec, rng);
  } else {
    detail::emit_code_record<32>(out, b, rec, rng);
  }
  switch (mask_bits(v)) {
    case 0: detail::emit_mask_bits(out, rec.mask); break;
    case 16: detail::emit_mask_record<16>(out, b, rec.mask, rng); break;
    case 32: detail::emit_mask_record<32>(out, b, rec.mask, rng); break;
  }
}

std::array<std::vector<std::uint8_t>, 3> deal_db_payload(const IrisDb& db, Backend b, Variant v,
                                                         Rng& rng) {
  std::array<std::vector<std::uint8_t>, 3> out;
  const std::size_t per_row = code_record_bytes(b, v, db.l) + mask_record_bytes(b, v, db.l);
  for (auto& o : out) o.reserve(per_row * db.size());
  for (const auto& row : db.rows) emit_record(out, b, v, row, rng);
  return out;
}

std::array<std::vector<std::uint8_t>, 3> deal_query_payload(std::span<const IrisRecord> codes,
                                                            Backend b, Variant v, Rng& rng) {
  std::array<std::vector<std::uint8_t>, 3> out;
  for (const auto& rec : codes) emit_record(out, b, v, rec, rng);
  return out;
}

}  // namespace irismpc
