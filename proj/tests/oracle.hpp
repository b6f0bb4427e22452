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

// Naive reference implementations for equivalence testing. Everything here
// is computed with per-bit loops and plain integer comparisons; it shares
// no arithmetic with the library paths it is used to check.

#include <cmath>
#include <cstdint>
#include <vector>

#include "irismpc/iris.hpp"
#include "irismpc/shares.hpp"

namespace oracle {

struct Counts {
  std::int64_t hd = 0;  // set bits of (a XOR b) AND both masks
  std::int64_t ml = 0;  // set bits of combined mask
};

inline Counts count_pair(const irismpc::IrisRecord& q, const irismpc::IrisRecord& db) {
  Counts c;
  for (std::size_t i = 0; i < q.length(); ++i) {
    const bool m = q.mask.get(i) && db.mask.get(i);
    if (!m) continue;
    c.ml += 1;
    if (q.code.get(i) != db.code.get(i)) c.hd += 1;
  }
  return c;
}

// Match predicate per variant, mirroring the MSB tie semantics:
//   public masks:  (ml - 2*hd) > ceil((1 - 2*ratio) * ml)
//   shared masks:  b*(ml - 2*hd) > a*ml
inline bool predicate(const Counts& c, const irismpc::MatchParams& p, irismpc::Variant v) {
  const std::int64_t dot = c.ml - 2 * c.hd;
  if (v == irismpc::Variant::plain_mask) {
    const auto threshold =
        static_cast<std::int64_t>(std::ceil((1.0 - 2.0 * p.match_ratio) * static_cast<double>(c.ml)));
    return dot > threshold;
  }
  return static_cast<std::int64_t>(p.b) * dot > static_cast<std::int64_t>(p.a) * c.ml;
}

inline bool naive_predicate(const irismpc::IrisRecord& q, const irismpc::IrisRecord& db,
                            const irismpc::MatchParams& p, irismpc::Variant v) {
  return predicate(count_pair(q, db), p, v);
}

inline bool naive_membership(const irismpc::IrisRecord& q, const irismpc::IrisDb& db,
                             const irismpc::MatchParams& p, irismpc::Variant v) {
  for (const auto& row : db.rows) {
    if (naive_predicate(q, row, p, v)) return true;
  }
  return false;
}

}  // namespace oracle
