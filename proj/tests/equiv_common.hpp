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

// Randomized equivalence driver: full 3-party executions diffed against the
// naive plaintext oracle.

#include <cstdio>
#include <string>
#include <vector>

#include "irismpc/cluster.hpp"
#include "oracle.hpp"

namespace equiv {

using namespace irismpc;

struct Report {
  std::uint64_t instances = 0;
  std::uint64_t mismatches = 0;
  std::vector<std::string> failures;

  void note(bool got, bool want, Backend b, Variant v, std::size_t l, std::size_t s,
            std::uint64_t seed) {
    ++instances;
    if (got != want) {
      ++mismatches;
      char buf[160];
      std::snprintf(buf, sizeof(buf), "mismatch: %s/%s l=%zu s=%zu seed=%llu got=%d want=%d",
                    to_string(b), to_string(v), l, s,
                    static_cast<unsigned long long>(seed), got, want);
      failures.emplace_back(buf);
    }
  }
};

inline EngineConfig grid_cfg(Backend b, Variant v, std::uint32_t l, double ratio) {
  EngineConfig cfg;
  cfg.backend = b;
  cfg.variant = v;
  cfg.l = l;
  cfg.params = MatchParams::make(ratio, 16);
  return cfg;
}

// One random instance: db with varied mask densities (including empty and
// full masks), random query; aggregate compared against the oracle.
inline void run_instance(Report& rep, Backend b, Variant v, std::size_t l, std::size_t s,
                         std::uint64_t seed, double ratio) {
  Rng rng(seed * 2654435761u + l * 97 + s);
  IrisDb db(l);
  for (std::size_t i = 0; i < s; ++i) {
    double density;
    switch (rng.below(5)) {
      case 0: density = 0.0; break;   // all-U mask
      case 1: density = 1.0; break;
      case 2: density = 0.3; break;
      default: density = 0.85; break;
    }
    db.add(random_record(l, rng, density));
  }
  // bias some instances towards matches by planting a noisy copy of a row
  IrisRecord q = random_record(l, rng, 0.85);
  if (s > 0 && rng.below(3) == 0) {
    q = db.rows[rng.below(s)];
    for (int f = 0; f < 4; ++f) {
      const std::size_t i = rng.below(l);
      q.code.set(i, !q.code.get(i));
    }
  }

  const auto cfg = grid_cfg(b, v, static_cast<std::uint32_t>(l), ratio);
  const auto out = run_membership_local(cfg, q, db, seed);
  const bool want = oracle::naive_membership(q, db, cfg.params, v);
  rep.note(out.aggregate(), want, b, v, l, s, seed);
}

// Threshold-boundary instances: full-mask pairs built so that b*dot lands
// at a*ml and one dot step either side of it.
inline void run_boundary_instances(Report& rep, unsigned count) {
  const std::size_t l = 64;
  std::uint64_t seed = 0xb0;
  const Backend backends[2] = {Backend::replicated, Backend::shamir};
  const Variant variants[4] = {Variant::plain_mask, Variant::mpc_lift, Variant::const_lift,
                               Variant::no_lift};
  const double ratios[2] = {0.375, 0.3};
  unsigned made = 0;
  while (made < count) {
    for (const double ratio : ratios) {
      const auto params = MatchParams::make(ratio, 16);
      // full masks: ml = l; target dot near a*l/b
      const double target = static_cast<double>(params.a) * l / params.b;
      for (int delta = -1; delta <= 1 && made < count; ++delta) {
        // dot = l - 2*hd must have l's parity; step around the threshold
        std::int64_t hd = (l - static_cast<std::int64_t>(target)) / 2 + delta;
        if (hd < 0 || hd > static_cast<std::int64_t>(l)) continue;
        Rng rng(seed++);
        IrisRecord row(BitVec::random(l, rng), BitVec(l));
        for (std::size_t i = 0; i < l; ++i) row.mask.set(i, true);
        IrisRecord q = row;
        for (std::int64_t i = 0; i < hd; ++i) q.code.set(static_cast<std::size_t>(i),
                                                         !q.code.get(static_cast<std::size_t>(i)));
        IrisDb db(l);
        db.add(row);
        const Backend b = backends[made % 2];
        const Variant v = variants[(made / 2) % 4];
        const auto cfg = grid_cfg(b, v, l, ratio);
        const auto out = run_membership_local(cfg, q, db, seed);
        const bool want = oracle::naive_membership(q, db, cfg.params, v);
        rep.note(out.aggregate(), want, b, v, l, 1, seed);
        ++made;
      }
    }
  }
}

inline Report run_grid(unsigned seeds_per_config, unsigned boundary_count, double ratio = 0.375) {
  Report rep;
  for (const Backend b : {Backend::replicated, Backend::shamir}) {
    for (const Variant v : {Variant::plain_mask, Variant::mpc_lift, Variant::const_lift,
                            Variant::no_lift}) {
      for (const std::size_t l : {std::size_t{8}, std::size_t{64}}) {
        for (const std::size_t s : {std::size_t{1}, std::size_t{4}, std::size_t{64}}) {
          for (unsigned seed = 0; seed < seeds_per_config; ++seed) {
            run_instance(rep, b, v, l, s, seed + 1, ratio);
          }
        }
      }
    }
  }
  run_boundary_instances(rep, boundary_count);
  return rep;
}

}  // namespace equiv
