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

#include "irismpc/cluster.hpp"
#include "oracle.hpp"

using namespace irismpc;

namespace {

EngineConfig make_cfg(Backend b, Variant v, std::uint32_t l, unsigned rotations = 1) {
  EngineConfig cfg;
  cfg.backend = b;
  cfg.variant = v;
  cfg.l = l;
  cfg.params = MatchParams::make(0.375, 16);
  cfg.rotations = rotations;
  return cfg;
}

IrisRecord full_mask_record(std::size_t l, Rng& rng) {
  IrisRecord r(BitVec::random(l, rng), BitVec(l));
  for (std::size_t i = 0; i < l; ++i) r.mask.set(i, true);
  return r;
}

}  // namespace

TEST_CASE("membership: planted match and self-match across all configs") {
  Rng rng(101);
  const std::size_t l = 64;
  for (const Backend b : {Backend::replicated, Backend::shamir}) {
    for (const Variant v : {Variant::plain_mask, Variant::mpc_lift, Variant::const_lift,
                            Variant::no_lift}) {
      const auto cfg = make_cfg(b, v, l);
      IrisDb db(l);
      for (int i = 0; i < 7; ++i) db.add(random_record(l, rng, 0.8));
      const auto q = full_mask_record(l, rng);
      db.add(q);

      auto out = run_membership_local(cfg, q, db, 500);
      CHECK(out.aggregate());

      // complement of the only row never matches
      IrisDb db2(l);
      IrisRecord comp = q;
      for (std::size_t i = 0; i < l; ++i) comp.code.set(i, !q.code.get(i));
      db2.add(comp);
      auto out2 = run_membership_local(cfg, q, db2, 501);
      CHECK_FALSE(out2.aggregate());
    }
  }
}

TEST_CASE("membership: ml = 0 rows never match") {
  Rng rng(102);
  const std::size_t l = 64;
  IrisRecord q(BitVec::random(l, rng), BitVec(l));
  IrisRecord row(q.code, BitVec(l));
  for (std::size_t i = 0; i < 32; ++i) q.mask.set(i, true);
  for (std::size_t i = 32; i < 64; ++i) row.mask.set(i, true);
  IrisDb db(l);
  db.add(row);
  for (const Backend b : {Backend::replicated, Backend::shamir}) {
    for (const Variant v : {Variant::plain_mask, Variant::mpc_lift, Variant::const_lift,
                            Variant::no_lift}) {
      auto out = run_membership_local(make_cfg(b, v, l), q, db, 502);
      CHECK_FALSE(out.aggregate());
    }
  }
}

TEST_CASE("debug row bits equal oracle per-row predicates") {
  Rng rng(103);
  const std::size_t l = 64;
  IrisDb db(l);
  for (int i = 0; i < 16; ++i) db.add(random_record(l, rng, 0.7));
  const auto q = random_record(l, rng, 0.7);
  for (const Backend b : {Backend::replicated, Backend::shamir}) {
    for (const Variant v : {Variant::plain_mask, Variant::no_lift}) {
      auto cfg = make_cfg(b, v, l);
      cfg.debug_rows = true;
      auto out = run_membership_local(cfg, q, db, 503);
      REQUIRE(out.output().row_bits.size() == db.size());
      for (std::size_t i = 0; i < db.size(); ++i) {
        CHECK(static_cast<bool>(out.output().row_bits[i]) ==
              oracle::naive_predicate(q, db.rows[i], cfg.params, v));
      }
      // debug opens are flagged by the audit
      CHECK(out.audits[0].row_opens > 0);
    }
  }
}

TEST_CASE("production mode never opens a non-aggregate value") {
  Rng rng(104);
  const std::size_t l = 64;
  IrisDb db(l);
  for (int i = 0; i < 8; ++i) db.add(random_record(l, rng, 0.8));
  const auto q = random_record(l, rng, 0.8);
  for (const Backend b : {Backend::replicated, Backend::shamir}) {
    for (const Variant v : {Variant::plain_mask, Variant::mpc_lift, Variant::const_lift,
                            Variant::no_lift}) {
      auto out = run_membership_local(make_cfg(b, v, l), q, db, 504);
      for (const auto& audit : out.audits) {
        CHECK(audit.row_opens == 0);
        CHECK(audit.aggregate_opens == 1);
      }
    }
  }
}

TEST_CASE("dot-phase communication: plain mask sends 2s bytes per party") {
  Rng rng(105);
  const std::size_t l = 64;
  for (const std::size_t s : {std::size_t{1}, std::size_t{10}, std::size_t{100}}) {
    IrisDb db(l);
    for (std::size_t i = 0; i < s; ++i) db.add(random_record(l, rng, 0.8));
    const auto q = random_record(l, rng, 0.8);
    for (const Backend b : {Backend::replicated, Backend::shamir}) {
      auto out = run_membership_local(make_cfg(b, Variant::plain_mask, l), q, db, 505);
      for (const auto& led : out.ledgers) {
        CHECK(led.phase(Phase::dot).bytes_sent == 2 * s);
        CHECK(led.phase(Phase::dot).rounds == 1);
      }
    }
  }
}

TEST_CASE("variant agreement: the three shared-mask variants coincide") {
  Rng rng(106);
  const std::size_t l = 64;
  for (int t = 0; t < 25; ++t) {
    IrisDb db(l);
    const std::size_t s = 1 + rng.below(16);
    for (std::size_t i = 0; i < s; ++i) db.add(random_record(l, rng, 0.75));
    const auto q = random_record(l, rng, 0.75);
    for (const Backend b : {Backend::replicated, Backend::shamir}) {
      const auto m = run_membership_local(make_cfg(b, Variant::mpc_lift, l), q, db, 600 + t);
      const auto c = run_membership_local(make_cfg(b, Variant::const_lift, l), q, db, 600 + t);
      const auto n = run_membership_local(make_cfg(b, Variant::no_lift, l), q, db, 600 + t);
      CHECK(m.aggregate() == c.aggregate());
      CHECK(c.aggregate() == n.aggregate());
      CHECK(m.aggregate() == oracle::naive_membership(q, db, MatchParams::make(0.375, 16),
                                                      Variant::mpc_lift));
    }
  }
}

TEST_CASE("config handshake rejects parameter skew") {
  Rng rng(107);
  const std::size_t l = 64;
  IrisDb db(l);
  db.add(random_record(l, rng, 0.8));
  const auto q = random_record(l, rng, 0.8);
  const auto cfg = make_cfg(Backend::replicated, Variant::plain_mask, l);

  Rng db_rng(1), q_rng(2);
  const auto db_payload = deal_db_payload(db, cfg.backend, cfg.variant, db_rng);
  const IrisRecord codes[1] = {q};
  const auto q_payload = deal_query_payload(codes, cfg.backend, cfg.variant, q_rng);

  CHECK_THROWS_AS(run_parties(508, [&](PartyCtx& ctx) {
                    auto my_cfg = cfg;
                    if (ctx.id == PartyId::p2) {
                      my_cfg.params = MatchParams::make(0.25, 16);  // skewed threshold
                    }
                    const unsigned i = party_index(ctx.id) - 1;
                    return party_membership(ctx, my_cfg, db_payload[i], db.size(), q_payload[i]);
                  }),
                  ConfigMismatchError);
}

TEST_CASE("bounds violations are rejected before any protocol bytes move") {
  EngineConfig bad;
  bad.variant = Variant::plain_mask;
  bad.l = 20000;  // fails l < 2^16 / 4
  CHECK_THROWS_AS(bad.validate(), BoundsError);

  EngineConfig ok;
  ok.variant = Variant::plain_mask;
  ok.l = 12800;
  CHECK_NOTHROW(ok.validate());

  EngineConfig shared_ok;
  shared_ok.variant = Variant::mpc_lift;
  shared_ok.l = 12800;
  CHECK_NOTHROW(shared_ok.validate());
}

TEST_CASE("batch: duplicate person flags both entries on an empty database") {
  Rng rng(108);
  const std::size_t l = 128;
  IrisDb empty(l);
  const auto left = full_mask_record(l, rng);
  const auto right = full_mask_record(l, rng);
  std::vector<std::pair<IrisRecord, IrisRecord>> persons;
  persons.emplace_back(left, right);
  persons.emplace_back(random_record(l, rng, 0.9), random_record(l, rng, 0.9));
  persons.emplace_back(left, right);  // duplicate of person 0

  for (const Backend b : {Backend::replicated, Backend::shamir}) {
    auto cfg = make_cfg(b, Variant::mpc_lift, l, 3);
    auto out = run_batch_local(cfg, persons, empty, 509);
    REQUIRE(out.output().person_match.size() == 3);
    CHECK(out.output().person_match[0] == 1);
    CHECK(out.output().person_match[2] == 1);
    CHECK(out.output().person_match[1] == 0);
  }
}

TEST_CASE("batch: rotated query still matches through rotation expansion") {
  Rng rng(109);
  const std::size_t l = 128;
  const auto rec = full_mask_record(l, rng);
  IrisDb db(l);
  db.add(rec);
  const auto stride = static_cast<std::ptrdiff_t>(l / 64);

  // person whose left eye is the db record rotated by 2 strides
  IrisRecord rotated(rec.code.rotated(2 * stride), rec.mask.rotated(2 * stride));
  std::vector<std::pair<IrisRecord, IrisRecord>> persons;
  persons.emplace_back(rotated, random_record(l, rng, 0.9));

  auto cfg5 = make_cfg(Backend::replicated, Variant::plain_mask, l, 5);
  CHECK(run_batch_local(cfg5, persons, db, 510).output().person_match[0] == 1);

  auto cfg1 = make_cfg(Backend::replicated, Variant::plain_mask, l, 1);
  CHECK(run_batch_local(cfg1, persons, db, 511).output().person_match[0] == 0);
}

TEST_CASE("batch lane accounting: persons x eyes x rotations") {
  Rng rng(110);
  const std::size_t l = 128;
  IrisDb db(l);
  for (int i = 0; i < 2; ++i) db.add(random_record(l, rng, 0.9));
  std::vector<std::pair<IrisRecord, IrisRecord>> persons;
  for (int i = 0; i < 3; ++i) {
    persons.emplace_back(random_record(l, rng, 0.9), random_record(l, rng, 0.9));
  }
  const unsigned r = 5;
  auto cfg = make_cfg(Backend::replicated, Variant::plain_mask, l, r);
  auto out = run_batch_local(cfg, persons, db, 512);
  const std::uint64_t db_lanes = 2 * r * persons.size() * db.size();
  const std::uint64_t inner = persons.size() * (persons.size() - 1) / 2 * 4 * r;
  CHECK(out.output().lane_count == db_lanes + inner);
  // ledger-derived lane count: plain-mask dot phase sends 2 bytes per lane
  for (const auto& led : out.ledgers) {
    CHECK(led.phase(Phase::dot).bytes_sent == 2 * (db_lanes + inner));
  }
}

TEST_CASE("membership against an empty database is false") {
  Rng rng(115);
  const std::size_t l = 64;
  IrisDb empty(l);
  const auto q = random_record(l, rng, 0.9);
  for (const Backend b : {Backend::replicated, Backend::shamir}) {
    for (const Variant v : {Variant::plain_mask, Variant::mpc_lift}) {
      auto out = run_membership_local(make_cfg(b, v, l), q, empty, 516);
      CHECK_FALSE(out.aggregate());
    }
  }
}

TEST_CASE("deterministic traces: fixed seeds give byte-identical ledgers") {
  Rng rng(112);
  const std::size_t l = 64;
  IrisDb db(l);
  for (int i = 0; i < 6; ++i) db.add(random_record(l, rng, 0.8));
  const auto q = random_record(l, rng, 0.8);
  for (const Backend b : {Backend::replicated, Backend::shamir}) {
    const auto cfg = make_cfg(b, Variant::mpc_lift, l);
    const auto a = run_membership_local(cfg, q, db, 42);
    const auto c = run_membership_local(cfg, q, db, 42);
    for (unsigned p = 0; p < 3; ++p) CHECK(a.ledgers[p] == c.ledgers[p]);
    CHECK(a.aggregate() == c.aggregate());
  }
}

TEST_CASE("openmp dot phase matches the serial path") {
  Rng rng(113);
  const std::size_t l = 12800;
  IrisDb db(l);
  for (int i = 0; i < 8; ++i) db.add(random_record(l, rng, 0.9));
  const auto q = random_record(l, rng, 0.9);
  for (const Backend b : {Backend::replicated, Backend::shamir}) {
    auto cfg = make_cfg(b, Variant::const_lift, l);
    cfg.debug_rows = true;
    auto serial = run_membership_local(cfg, q, db, 514);
    cfg.parallel_dot = true;
    auto parallel = run_membership_local(cfg, q, db, 514);
    CHECK(serial.aggregate() == parallel.aggregate());
    CHECK(serial.output().row_bits == parallel.output().row_bits);
    for (unsigned p = 0; p < 3; ++p) CHECK(serial.ledgers[p] == parallel.ledgers[p]);
  }
}

TEST_CASE("stats JSON inputs: phase partitions populated") {
  Rng rng(111);
  const std::size_t l = 64;
  IrisDb db(l);
  for (int i = 0; i < 4; ++i) db.add(random_record(l, rng, 0.8));
  const auto q = random_record(l, rng, 0.8);
  auto out = run_membership_local(make_cfg(Backend::replicated, Variant::mpc_lift, l), q, db, 513);
  const auto& st = out.output().stats;
  CHECK(st.s == 4);
  CHECK(st.l == 64);
  CHECK(st.dot_bytes == 4 * (2 + 2));
  CHECK(st.msb_rounds == 31);
  CHECK(st.lift_bytes > 0);
  CHECK(st.or_tree_bytes > 0);
  CHECK(st.wall_ms >= 0.0);
}
