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

// Acceptance suite: one pass/fail line per criterion. Run with
// --criterion N for a single criterion, no arguments for all.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "equiv_common.hpp"
#include "irismpc/io.hpp"

using namespace irismpc;

namespace {

int g_failures = 0;

void report(const std::string& line, bool pass) {
  std::printf("%s -> %s\n", line.c_str(), pass ? "PASS" : "FAIL");
  if (!pass) ++g_failures;
}

bool within(double measured, double expected, double tol) {
  return std::fabs(measured - expected) <= tol * expected;
}

double secs_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<std::pair<std::int64_t, std::int64_t>> synth_lanes(std::size_t n, std::size_t l,
                                                               std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::pair<std::int64_t, std::int64_t>> out(n);
  for (auto& [dot, ml] : out) {
    ml = static_cast<std::int64_t>(rng.below(l + 1));
    const auto hd = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(ml) + 1));
    dot = ml - 2 * hd;
  }
  return out;
}

// Comparison-phase bytes per party, averaged (lift + ot + msb).
double comparison_kb(const ComparisonOutcome& out) {
  std::uint64_t total = 0;
  for (const auto& led : out.ledgers) {
    total += led.phase(Phase::lift).bytes_sent + led.phase(Phase::ot).bytes_sent +
             led.phase(Phase::msb).bytes_sent;
  }
  return static_cast<double>(total) / 3.0 / 1000.0;
}

void criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto rep = equiv::run_grid(/*seeds_per_config=*/100, /*boundary_count=*/100);
  const double secs = secs_since(t0);
  for (const auto& f : rep.failures) std::printf("    %s\n", f.c_str());
  // machine-readable report alongside the human summary
  {
    std::FILE* f = std::fopen("acceptance_c1_report.json", "w");
    if (f) {
      std::fprintf(f, "{\"instances\": %llu, \"mismatches\": %llu, \"seconds\": %.2f, "
                      "\"failures\": [",
                   static_cast<unsigned long long>(rep.instances),
                   static_cast<unsigned long long>(rep.mismatches), secs);
      for (std::size_t i = 0; i < rep.failures.size(); ++i) {
        std::fprintf(f, "%s\"%s\"", i ? ", " : "", rep.failures[i].c_str());
      }
      std::fprintf(f, "]}\n");
      std::fclose(f);
    }
  }
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "[C1] oracle equivalence: %llu instances (grid + %u boundary), %llu mismatches, "
                "%.1fs (target < 300s)",
                static_cast<unsigned long long>(rep.instances), 100u,
                static_cast<unsigned long long>(rep.mismatches), secs);
  report(buf, rep.mismatches == 0);
}

void criterion2() {
  Rng rng(2);
  bool pass = true;
  char buf[256];

  {
    const std::size_t n = 64;
    std::vector<std::array<RepShare<16>, 3>> sh(n);
    for (auto& s : sh) s = share<16>(rng.ring<16>(), rng);
    auto res = run_parties(2001, [&](PartyCtx& ctx) {
      const unsigned i = party_index(ctx.id) - 1;
      std::vector<RepShare<16>> lanes(n);
      for (std::size_t k = 0; k < n; ++k) lanes[k] = sh[k][i];
      return msb_batch<16>(ctx, lanes);
    });
    const auto st = std::get<0>(res[0]).stats;
    pass = pass && st.and_gates == 29 && st.rounds == 15;
    std::snprintf(buf, sizeof(buf), "[C2] msb over Z_2^16: %llu ANDs / %llu rounds (expected 29/15)",
                  static_cast<unsigned long long>(st.and_gates),
                  static_cast<unsigned long long>(st.rounds));
    std::printf("%s\n", buf);
  }
  {
    const std::size_t n = 64;
    std::vector<std::array<RepShare<32>, 3>> sh(n);
    for (auto& s : sh) s = share<32>(rng.ring<32>(), rng);
    auto res = run_parties(2002, [&](PartyCtx& ctx) {
      const unsigned i = party_index(ctx.id) - 1;
      std::vector<RepShare<32>> lanes(n);
      for (std::size_t k = 0; k < n; ++k) lanes[k] = sh[k][i];
      return msb_batch<32>(ctx, lanes);
    });
    const auto st = std::get<0>(res[0]).stats;
    pass = pass && st.and_gates == 61 && st.rounds == 31;
    std::snprintf(buf, sizeof(buf), "[C2] msb over Z_2^32: %llu ANDs / %llu rounds (expected 61/31)",
                  static_cast<unsigned long long>(st.and_gates),
                  static_cast<unsigned long long>(st.rounds));
    std::printf("%s\n", buf);
  }
  report("[C2] exact MSB gate/round accounting", pass);
}

void criterion3() {
  Rng rng(3);
  bool pass = true;
  for (const std::size_t len : {std::size_t{10}, std::size_t{1000}, std::size_t{12800}}) {
    std::vector<std::array<RepShare<16>, 3>> xs(len), ys(len);
    for (std::size_t i = 0; i < len; ++i) {
      xs[i] = share<16>(R16(rng.below(2)), rng);
      ys[i] = share<16>(R16(rng.below(2)), rng);
    }
    auto res = run_parties(3000 + len, [&](PartyCtx& ctx) {
      const unsigned i = party_index(ctx.id) - 1;
      std::vector<PrepShare<16>> px(len);
      std::vector<RepShare<16>> py(len);
      for (std::size_t j = 0; j < len; ++j) {
        px[j] = preprocess(xs[j][i]);
        py[j] = ys[j][i];
      }
      return dot_product<16>(ctx, px, py, Phase::dot);
    });
    for (const auto& r : res) {
      const auto bytes = std::get<1>(r).phase(Phase::dot).bytes_sent;
      if (bytes != 2) pass = false;
    }
    std::printf("[C3] dot product len=%zu: 2 bytes per party (k/8, k=16)\n", len);
  }
  report("[C3] dot-product communication independent of vector length", pass);
}

void criterion4() {
  Rng rng(4);
  const std::size_t l = 64;
  bool pass = true;
  for (const std::size_t s : {std::size_t{100}, std::size_t{10000}}) {
    IrisDb db(l);
    for (std::size_t i = 0; i < s; ++i) db.add(random_record(l, rng, 0.8));
    const auto q = random_record(l, rng, 0.8);
    EngineConfig cfg = equiv::grid_cfg(Backend::replicated, Variant::plain_mask, l, 0.375);
    auto out = run_membership_local(cfg, q, db, 4000 + s);
    for (const auto& led : out.ledgers) {
      if (led.phase(Phase::dot).bytes_sent != 2 * s) pass = false;
    }
    std::printf("[C4] plain-mask dot phase at s=%zu: %llu bytes per party (expected %zu)\n", s,
                static_cast<unsigned long long>(out.ledgers[0].phase(Phase::dot).bytes_sent),
                2 * s);
  }
  std::printf("[C4] extrapolation: 2 bytes/row -> 2 MB at s = 10^6 rows\n");
  report("[C4] hamming-phase communication scales as 2s bytes per party", pass);
}

void criterion5() {
  const std::size_t n = 100000;
  const std::size_t l = 12800;
  struct Row {
    Variant v;
    double expect_kb;
    double tol;
  };
  const Row rows[] = {
      {Variant::plain_mask, 362.0, 0.01},
      {Variant::mpc_lift, 2138.0, 0.03},
      {Variant::const_lift, 763.0, 0.01},
      {Variant::no_lift, 763.0, 0.01},
  };
  bool pass = true;
  for (const auto& row : rows) {
    const auto cfg = equiv::grid_cfg(Backend::replicated, row.v, l, 0.375);
    const auto lanes = synth_lanes(n, l, 50 + static_cast<unsigned>(row.v));
    const auto out = run_comparison_local(cfg, lanes, /*with_or_tree=*/false, 5000);
    const double kb = comparison_kb(out);
    const bool ok = within(kb, row.expect_kb, row.tol);
    char buf[256];
    std::snprintf(buf, sizeof(buf), "[C5] %-11s %8.2f kB per party (expected %.0f +-%.0f%%)",
                  to_string(row.v), kb, row.expect_kb, row.tol * 100);
    report(buf, ok);
    pass = pass && ok;
  }
  {
    std::vector<std::uint8_t> bits(n, 0);
    bits[12345] = 1;  // single planted match among 100k
    const auto out = run_or_tree_local(bits, 5001);
    if (!out.aggregate) {
      report("[C5] or-tree lost the planted bit", false);
      pass = false;
    }
    std::uint64_t total = 0;
    for (const auto& led : out.ledgers) total += led.phase(Phase::or_tree).bytes_sent;
    // subtract the final 1-bit opening (2 parties send 1 byte each)
    total -= 2;
    const double kb = static_cast<double>(total) / 3.0 / 1000.0;
    const bool ok = within(kb, 12.0, 0.03);
    char buf[320];
    std::snprintf(buf, sizeof(buf), "[C5] %-11s %8.2f kB per party (expected 12 +-3%%)", "or-tree",
                  kb);
    report(buf, ok);
    if (!ok) {
      std::printf(
          "     note: an OR tree over 100000 bits needs exactly 99999 AND gates = 12.49987 kB\n"
          "     per party, the minimum any correct tree can send; the table value 12 is that\n"
          "     number printed as an integer, and 12.5 lies outside a 3%% band around 12.\n"
          "     The measured value matches the exact n-1 formula; see the decisions ledger.\n");
    }
    pass = pass && ok;
  }
  report("[C5] comparison-phase communication table at n = 100k", pass);
}

void criterion6() {
  const std::size_t n = 100000;
  const auto cfg = equiv::grid_cfg(Backend::replicated, Variant::mpc_lift, 12800, 0.375);
  const auto lanes = synth_lanes(n, 12800, 6);
  const auto out = run_comparison_local(cfg, lanes, false, 6000);
  const double per_cmp = comparison_kb(out) * 1000.0 / static_cast<double>(n);
  const bool ok = within(per_cmp, 21.0, 0.10);
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "[C6] mpc-lift bytes per comparison per party: %.2f (expected 21 +-10%%)", per_cmp);
  report(buf, ok);
}

void criterion7() {
  bool pass = true;

  // executable bound checks
  EngineConfig good = equiv::grid_cfg(Backend::replicated, Variant::plain_mask, 12800, 0.375);
  try {
    good.validate();
    std::printf("[C7] (l=12800, t=2^16) accepted by the public-mask overflow bound\n");
  } catch (const BoundsError&) {
    pass = false;
  }
  EngineConfig bad = good;
  bad.l = 20000;
  try {
    bad.validate();
    pass = false;
  } catch (const BoundsError&) {
    std::printf("[C7] (l=20000, t=2^16) rejected by the public-mask overflow bound\n");
  }

  // exhaustive comparison-as-MSB equivalence at l = 64 within bounds
  const auto params = MatchParams::make(0.375, 16);
  const double f = 1.0 - 2.0 * params.match_ratio;
  std::uint64_t checked = 0;
  for (std::int64_t ml = 0; ml <= 64; ++ml) {
    for (std::int64_t dot = -ml; dot <= ml; ++dot) {
      // public-mask form over Z_2^16
      const auto t16 = static_cast<std::int64_t>(std::ceil(f * static_cast<double>(ml)));
      const R16 diff16 = R16::from_signed(t16) - R16::from_signed(dot);
      if (diff16.msb() != (dot > t16)) pass = false;
      // shared-mask form over Z_2^32
      const R32 diff32 = R32(params.a) * R32::from_signed(ml) - R32(params.b) * R32::from_signed(dot);
      const bool want = static_cast<std::int64_t>(params.b) * dot >
                        static_cast<std::int64_t>(params.a) * ml;
      if (diff32.msb() != want) pass = false;
      ++checked;
    }
  }
  std::printf("[C7] exhaustive l=64 MSB-comparison equivalence: %llu (ml, dot) cases\n",
              static_cast<unsigned long long>(checked));
  report("[C7] overflow bounds as executable checks", pass);
}

void criterion8() {
  Rng rng(8);
  const std::size_t l = 256, s = 32;
  IrisDb db(l);
  for (std::size_t i = 0; i < s; ++i) db.add(random_record(l, rng, 0.8));

  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / "irismpc_acceptance_c8";
  fs::create_directories(dir);

  std::size_t rep_size = 0, shamir_size = 0;
  for (const Backend b : {Backend::replicated, Backend::shamir}) {
    Rng deal_rng(88);
    const auto payload = deal_db_payload(db, b, Variant::mpc_lift, deal_rng);
    for (unsigned p = 1; p <= 3; ++p) {
      ShareFileHeader h;
      h.backend = b;
      h.variant = Variant::mpc_lift;
      h.party = p;
      h.l = static_cast<std::uint32_t>(l);
      h.s = s;
      const auto path = (dir / (std::string("db.") + to_string(b) + ".p" + std::to_string(p) +
                                ".irs")).string();
      write_share_file(path, h, payload[p - 1]);
      if (p == 1) {
        if (b == Backend::replicated) {
          rep_size = file_size(path);
        } else {
          shamir_size = file_size(path);
        }
      }
    }
  }
  const double ratio = static_cast<double>(shamir_size) / static_cast<double>(rep_size);
  // exactly half up to the 24-byte headers
  const bool ok = std::llabs(2 * static_cast<long long>(shamir_size) -
                             static_cast<long long>(rep_size)) <= 24 &&
                  ratio > 0.49 && ratio < 0.51;
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "[C8] share files for the same db: shamir %zu B vs replicated %zu B (ratio %.4f)",
                shamir_size, rep_size, ratio);
  report(buf, ok);
}

void criterion9() {
  const std::size_t n = 100000;
  // throughput: comparison phase of the deployed variant (mpc-lift), best
  // of 3 repetitions, single thread per party
  double best_ms = 1e30;
  const auto cfg = equiv::grid_cfg(Backend::replicated, Variant::mpc_lift, 12800, 0.375);
  const auto lanes = synth_lanes(n, 12800, 9);
  for (int rep = 0; rep < 3; ++rep) {
    const auto out = run_comparison_local(cfg, lanes, false, 9000 + rep);
    if (out.wall_ms < best_ms) best_ms = out.wall_ms;
  }
  const double throughput = static_cast<double>(n) / (best_ms / 1000.0);
  const bool ok_tp = throughput > 100000.0;
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "[C9] comparison throughput at n=100k: %.0f cmp/s (must exceed 100000)",
                throughput);
  report(buf, ok_tp);

  // backend workload: the packed dot does exactly half the MACs
  Rng rng(99);
  const std::size_t l = 12800, rows = 64;
  kernels::PrepMatrix<16> rm;
  rm.rows = rows;
  rm.len = l;
  rm.own_sum.resize(rows * l);
  rm.prev.resize(rows * l);
  for (auto& v : rm.own_sum) v = rng.ring<16>();
  for (auto& v : rm.prev) v = rng.ring<16>();
  std::vector<R16> q_sum(l), q_prev(l), out_r(rows);
  kernels::reset_mac_count();
  kernels::dot_prep_rows<16>(rm, q_sum, q_prev, out_r, false);
  const auto rep_macs = kernels::mac_count();

  kernels::GrMatrix<16> gm;
  gm.rows = rows;
  gm.len = l / 2;
  gm.c0.resize(rows * l / 2);
  gm.c1.resize(rows * l / 2);
  std::vector<R16> g0(l / 2), g1(l / 2), out_g(rows);
  kernels::reset_mac_count();
  kernels::dot_gr_ct_rows<16>(gm, g0, g1, out_g, false);
  const auto shamir_macs = kernels::mac_count();
  const bool ok_macs = rep_macs == 2 * shamir_macs && shamir_macs == rows * l;
  std::snprintf(buf, sizeof(buf),
                "[C9] multiply-accumulate per %zu rows: replicated %llu, shamir %llu (factor 2)",
                rows, static_cast<unsigned long long>(rep_macs),
                static_cast<unsigned long long>(shamir_macs));
  report(buf, ok_macs);
}

void criterion10() {
  Rng rng(10);
  const std::size_t l = 128;
  const unsigned persons = 32, r = 31;
  bool pass = true;

  // lane accounting against the ledger
  {
    IrisDb db(l);
    db.add(random_record(l, rng, 0.85));
    db.add(random_record(l, rng, 0.85));
    std::vector<std::pair<IrisRecord, IrisRecord>> batch;
    for (unsigned i = 0; i < persons; ++i) {
      batch.emplace_back(random_record(l, rng, 0.85), random_record(l, rng, 0.85));
    }
    EngineConfig cfg = equiv::grid_cfg(Backend::replicated, Variant::plain_mask, l, 0.375);
    cfg.rotations = r;
    const auto out = run_batch_local(cfg, batch, db, 10000);
    const std::uint64_t codes = 2ull * r * persons;  // 1984
    const std::uint64_t db_lanes = codes * db.size();
    const std::uint64_t inner = static_cast<std::uint64_t>(persons) * (persons - 1) / 2 * 4 * r;
    const std::uint64_t lanes = db_lanes + inner;
    pass = pass && out.output().lane_count == lanes;
    for (const auto& led : out.ledgers) {
      if (led.phase(Phase::dot).bytes_sent != 2 * lanes) pass = false;
    }
    std::printf(
        "[C10] batch of %u persons: %llu query codes -> %llu db comparisons (s=%zu) + %llu "
        "inner-batch pairings, ledger %llu bytes = 2 per lane\n",
        persons, static_cast<unsigned long long>(codes),
        static_cast<unsigned long long>(db_lanes), db.size(),
        static_cast<unsigned long long>(inner),
        static_cast<unsigned long long>(out.ledgers[0].phase(Phase::dot).bytes_sent));
    pass = pass && codes == 1984;
  }

  // planted duplicate person, empty database. The short test length needs
  // a strict ratio: at l=128 a 0.375 threshold would be crossed by random
  // pairs a few times in ~900 rotation comparisons per person.
  {
    IrisDb empty(l);
    std::vector<std::pair<IrisRecord, IrisRecord>> batch;
    for (unsigned i = 0; i < 8; ++i) {
      batch.emplace_back(random_record(l, rng, 0.9), random_record(l, rng, 0.9));
    }
    IrisRecord dup(BitVec::random(l, rng), BitVec(l));
    for (std::size_t i = 0; i < l; ++i) dup.mask.set(i, true);
    batch[2].first = dup;
    batch[6].second = dup;
    EngineConfig cfg = equiv::grid_cfg(Backend::replicated, Variant::mpc_lift, l, 0.2);
    cfg.rotations = r;
    const auto out = run_batch_local(cfg, batch, empty, 10001);
    pass = pass && out.output().person_match[2] == 1 && out.output().person_match[6] == 1;
    std::uint64_t matches = 0;
    for (const auto m : out.output().person_match) matches += m;
    std::printf("[C10] duplicate person in empty-db batch: %llu persons flagged\n",
                static_cast<unsigned long long>(matches));
    pass = pass && matches == 2;
  }
  report("[C10] batch semantics: 1984 codes per row plus inner-batch matching", pass);
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      only = std::atoi(argv[i + 1]);
      ++i;
    }
  }
  using Fn = void (*)();
  const Fn criteria[] = {criterion1, criterion2, criterion3, criterion4, criterion5,
                         criterion6, criterion7, criterion8, criterion9, criterion10};
  if (only >= 1 && only <= 10) {
    criteria[only - 1]();
  } else {
    for (const auto fn : criteria) fn();
  }
  if (g_failures) std::printf("%d acceptance check(s) failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
