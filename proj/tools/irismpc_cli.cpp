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

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <random>

#include "irismpc/cluster.hpp"
#include "irismpc/io.hpp"
#include "irismpc/tcp.hpp"

using namespace irismpc;
using nlohmann::json;

namespace {

namespace fs = std::filesystem;

struct CliConfig {
  unsigned party = 1;
  std::array<Endpoint, 3> endpoints;
  Backend backend = Backend::replicated;
  std::uint32_t l = 12800;
  double match_ratio = 0.375;
  unsigned precision_bits = 16;
  unsigned rotations = 31;
  std::string share_dir;
};

Endpoint parse_endpoint(const std::string& s) {
  const auto colon = s.rfind(':');
  if (colon == std::string::npos) throw Error("endpoint must be host:port: " + s);
  Endpoint ep;
  ep.host = s.substr(0, colon);
  ep.port = static_cast<std::uint16_t>(std::stoul(s.substr(colon + 1)));
  return ep;
}

CliConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open config: " + path);
  json j;
  f >> j;
  CliConfig cfg;
  cfg.party = j.value("party", 1u);
  std::vector<std::string> eps = j.at("endpoints").get<std::vector<std::string>>();
  // IRISMPC_ENDPOINTS=host:port,host:port,host:port overrides the file
  if (const char* env = std::getenv("IRISMPC_ENDPOINTS")) {
    eps.clear();
    std::stringstream ss(env);
    std::string item;
    while (std::getline(ss, item, ',')) eps.push_back(item);
  }
  if (eps.size() != 3) throw Error("config needs exactly 3 endpoints");
  for (int i = 0; i < 3; ++i) cfg.endpoints[i] = parse_endpoint(eps[i]);
  cfg.backend = backend_from_string(j.value("backend", std::string("replicated")));
  cfg.l = j.value("l", 12800u);
  cfg.match_ratio = j.value("match_ratio", 0.375);
  cfg.precision_bits = j.value("precision_bits", 16u);
  cfg.rotations = j.value("rotations", 31u);
  cfg.share_dir = j.value("share_dir", std::string("."));
  return cfg;
}

EngineConfig engine_cfg(const CliConfig& cli, Variant v, unsigned rotations) {
  EngineConfig cfg;
  cfg.backend = cli.backend;
  cfg.variant = v;
  cfg.l = cli.l;
  cfg.params = MatchParams::make(cli.match_ratio, cli.precision_bits);
  cfg.rotations = rotations;
  return cfg;
}

std::string share_path(const std::string& dir, Variant v, unsigned party) {
  return (fs::path(dir) / ("db." + std::string(to_string(v)) + ".p" + std::to_string(party) +
                           ".irs"))
      .string();
}

std::string seed_path(const std::string& dir, unsigned party) {
  return (fs::path(dir) / ("seeds.p" + std::to_string(party) + ".irsd")).string();
}

json stats_to_json(const QueryStats& st) {
  return json{{"variant", st.variant},
              {"backend", st.backend},
              {"s", st.s},
              {"l", st.l},
              {"batch", st.batch},
              {"phase_bytes",
               {{"dot", st.dot_bytes},
                {"lift", st.lift_bytes},
                {"msb", st.msb_bytes},
                {"or_tree", st.or_tree_bytes}}},
              {"rounds",
               {{"dot", st.dot_rounds},
                {"lift", st.lift_rounds},
                {"msb", st.msb_rounds},
                {"or_tree", st.or_tree_rounds}}},
              {"wall_ms", st.wall_ms}};
}

// --- gen-db -----------------------------------------------------------------

int cmd_gen_db(std::uint64_t size, std::uint32_t length, std::uint64_t seed, double density,
               const std::string& out) {
  Rng rng(seed);
  IrisDb db(length);
  for (std::uint64_t i = 0; i < size; ++i) db.add(random_record(length, rng, density));
  write_iris_db(out, db);
  std::printf("wrote %s: s=%llu l=%u (%zu bytes)\n", out.c_str(),
              static_cast<unsigned long long>(size), length, file_size(out));
  return 0;
}

// --- share ------------------------------------------------------------------

int cmd_share(const std::string& db_path, const std::string& backend_s,
              const std::string& variant_s, const std::string& out_dir, std::uint64_t seed) {
  const auto db = read_iris_db(db_path);
  const Backend backend = backend_from_string(backend_s);
  fs::create_directories(out_dir);

  std::vector<Variant> variants;
  if (variant_s == "all") {
    variants = {Variant::plain_mask, Variant::mpc_lift, Variant::const_lift, Variant::no_lift};
  } else {
    variants = {variant_from_string(variant_s)};
  }

  // dealer-distributed PRF seeds, one set for the whole session
  Rng seed_rng(CtrPrf::derive(CtrPrf::seed_from_u64(seed), 0x5eed));
  const auto seeds = deal_seeds(seed_rng);
  for (unsigned p = 1; p <= 3; ++p) {
    const auto prev = seeds[party_index(prev_party(static_cast<PartyId>(p))) - 1];
    write_seed_file(seed_path(out_dir, p), p, seeds[p - 1], prev);
  }

  for (const auto v : variants) {
    Rng rng(CtrPrf::derive(CtrPrf::seed_from_u64(seed), static_cast<std::uint64_t>(v) + 1));
    const auto payload = deal_db_payload(db, backend, v, rng);
    for (unsigned p = 1; p <= 3; ++p) {
      ShareFileHeader h;
      h.backend = backend;
      h.variant = v;
      h.party = p;
      h.l = db.l;
      h.s = db.size();
      const auto path = share_path(out_dir, v, p);
      write_share_file(path, h, payload[p - 1]);
      std::printf("wrote %s (%zu bytes)\n", path.c_str(), file_size(path));
    }
  }
  return 0;
}

// --- party ------------------------------------------------------------------

int cmd_party(const std::string& config_path, bool once) {
  const auto cli = load_config(config_path);
  const auto id = static_cast<PartyId>(cli.party);
  const auto [seed_own, seed_prev] = read_seed_file(seed_path(cli.share_dir, cli.party), cli.party);

  auto mesh = TcpMesh::establish(id, cli.endpoints);
  std::fprintf(stderr, "party %u: mesh established\n", cli.party);

  PartyCtx ctx{id, mesh->comm(), SeedPair{CtrPrf(seed_own), CtrPrf(seed_prev)}};

  // share payload cache per variant
  std::array<std::vector<std::uint8_t>, 4> db_cache;
  std::array<std::uint64_t, 4> db_rows{};
  std::array<bool, 4> loaded{};

  bool running = true;
  while (running) {
    auto client = mesh->accept_client();
    for (;;) {
      auto [tag, payload] = client->recv_frame();
      if (tag == kTagEnd) break;
      if (tag != kTagQuery) throw TransportError("unexpected client frame");
      if (payload.size() < 14) throw TransportError("short query frame");
      const std::uint8_t cmd = payload[0];
      const auto variant = static_cast<Variant>(payload[1]);
      std::uint32_t persons = 0;
      std::memcpy(&persons, payload.data() + 2, 4);
      std::uint64_t n = 0;
      std::memcpy(&n, payload.data() + 6, 8);
      if (payload.size() != 14 + n) throw TransportError("bad query frame length");

      const auto vi = static_cast<std::size_t>(variant);
      if (!loaded[vi]) {
        const auto [h, bytes] = read_share_file(share_path(cli.share_dir, variant, cli.party));
        if (h.backend != cli.backend || h.l != cli.l) {
          throw ConfigMismatchError("share file does not match config");
        }
        db_cache[vi] = bytes;
        db_rows[vi] = h.s;
        loaded[vi] = true;
      }

      const std::span<const std::uint8_t> query(payload.data() + 14, n);
      MembershipResult res;
      if (cmd == 1) {
        res = party_membership(ctx, engine_cfg(cli, variant, 1), db_cache[vi], db_rows[vi], query);
      } else {
        res = party_batch_query(ctx, engine_cfg(cli, variant, cli.rotations), db_cache[vi],
                                db_rows[vi], query, persons);
      }
      if (id == kOutputParty) {
        std::vector<std::uint8_t> reply;
        const auto stats = stats_to_json(res.stats).dump();
        const auto cnt = static_cast<std::uint32_t>(res.person_match.size());
        reply.resize(4);
        std::memcpy(reply.data(), &cnt, 4);
        reply.insert(reply.end(), res.person_match.begin(), res.person_match.end());
        const auto jl = static_cast<std::uint32_t>(stats.size());
        const auto off = reply.size();
        reply.resize(off + 4);
        std::memcpy(reply.data() + off, &jl, 4);
        reply.insert(reply.end(), stats.begin(), stats.end());
        client->send_frame(kTagResult, reply);
      }
    }
    if (once) running = false;
  }
  return 0;
}

// --- query ------------------------------------------------------------------

struct QueryReply {
  std::vector<std::uint8_t> matches;
  std::string stats_json;
};

QueryReply send_query(std::array<std::unique_ptr<TcpStream>, 3>& conns, Variant variant,
                      std::uint8_t cmd, unsigned persons,
                      const std::array<std::vector<std::uint8_t>, 3>& payloads) {
  for (int p = 0; p < 3; ++p) {
    std::vector<std::uint8_t> frame(14);
    frame[0] = cmd;
    frame[1] = static_cast<std::uint8_t>(variant);
    std::memcpy(frame.data() + 2, &persons, 4);
    const std::uint64_t n = payloads[p].size();
    std::memcpy(frame.data() + 6, &n, 8);
    frame.insert(frame.end(), payloads[p].begin(), payloads[p].end());
    conns[p]->send_frame(kTagQuery, frame);
  }
  auto [tag, reply] = conns[0]->recv_frame();
  if (tag != kTagResult) throw TransportError("unexpected reply tag");
  QueryReply out;
  std::uint32_t cnt = 0;
  std::memcpy(&cnt, reply.data(), 4);
  out.matches.assign(reply.begin() + 4, reply.begin() + 4 + cnt);
  std::uint32_t jl = 0;
  std::memcpy(&jl, reply.data() + 4 + cnt, 4);
  out.stats_json.assign(reply.begin() + 8 + cnt, reply.begin() + 8 + cnt + jl);
  return out;
}

int cmd_query(const std::string& config_path, const std::string& query_path, unsigned batch,
              const std::string& variant_s, const std::string& stats_path, std::uint64_t seed) {
  const auto cli = load_config(config_path);
  const auto qdb = read_iris_db(query_path);
  if (qdb.l != cli.l) throw Error("query length does not match config");

  std::vector<Variant> variants;
  if (variant_s == "all") {
    variants = {Variant::mpc_lift, Variant::const_lift, Variant::no_lift};
  } else {
    variants = {variant_from_string(variant_s)};
  }

  const std::uint8_t cmd = batch > 0 ? 2 : 1;
  const unsigned persons = batch > 0 ? batch : 0;
  if (batch > 0 && qdb.size() != 2ull * batch) {
    throw Error("batch query file must hold 2 codes per person");
  }
  if (batch == 0 && qdb.size() != 1) throw Error("membership query file must hold 1 record");

  std::array<std::unique_ptr<TcpStream>, 3> conns;
  for (int p = 0; p < 3; ++p) conns[p] = dial_client(cli.endpoints[p]);

  std::vector<QueryReply> replies;
  for (const auto v : variants) {
    Rng rng(CtrPrf::derive(CtrPrf::seed_from_u64(seed), 0x9e + static_cast<std::uint64_t>(v)));
    const auto payloads = deal_query_payload(qdb.rows, cli.backend, v, rng);
    replies.push_back(send_query(conns, v, cmd, persons, payloads));
    const auto& r = replies.back();
    std::printf("variant %s:", to_string(v));
    for (const auto m : r.matches) std::printf(" %s", m ? "true" : "false");
    std::printf("\n");
  }
  for (int p = 0; p < 3; ++p) conns[p]->send_frame(kTagEnd, {});
  for (std::size_t i = 1; i < replies.size(); ++i) {
    if (replies[i].matches != replies[0].matches) {
      throw Error("variants disagree on the match outcome");
    }
  }
  if (variants.size() > 1) std::printf("all variants agree\n");
  if (!stats_path.empty()) {
    json all = json::array();
    for (const auto& r : replies) all.push_back(json::parse(r.stats_json));
    std::ofstream f(stats_path);
    f << (all.size() == 1 ? all[0] : all).dump(2) << "\n";
    std::printf("stats written to %s\n", stats_path.c_str());
  }
  return 0;
}

// --- bench ------------------------------------------------------------------

// Full-protocol bench: one query against a random database, dot phase
// included.
int cmd_bench_full(std::size_t db_size, const std::string& variant_s,
                   const std::string& backend_s, unsigned repeat, std::uint32_t l,
                   const std::string& json_path) {
  EngineConfig cfg;
  cfg.backend = backend_from_string(backend_s);
  cfg.variant = variant_s == "all" ? Variant::mpc_lift : variant_from_string(variant_s);
  cfg.l = l;
  cfg.params = MatchParams::make(0.375, 16);
  cfg.parallel_dot = true;

  Rng rng(2);
  IrisDb db(l);
  for (std::size_t i = 0; i < db_size; ++i) db.add(random_record(l, rng, 0.9));
  const auto q = random_record(l, rng, 0.9);

  double best_ms = 1e30;
  LocalOutcome out;
  for (unsigned r = 0; r < repeat; ++r) {
    auto res = run_membership_local(cfg, q, db, 900 + r);
    if (res.output().stats.wall_ms < best_ms) best_ms = res.output().stats.wall_ms;
    out = std::move(res);
  }
  const auto& st = out.output().stats;
  std::printf("full query: backend=%s variant=%s s=%zu l=%u\n", to_string(cfg.backend),
              to_string(cfg.variant), db_size, l);
  std::printf("  wall %.2f ms, %.0f rows/s\n", best_ms,
              static_cast<double>(db_size) / (best_ms / 1e3));
  std::printf("  bytes/party: dot=%llu lift=%llu msb=%llu or_tree=%llu\n",
              static_cast<unsigned long long>(st.dot_bytes),
              static_cast<unsigned long long>(st.lift_bytes),
              static_cast<unsigned long long>(st.msb_bytes),
              static_cast<unsigned long long>(st.or_tree_bytes));
  if (!json_path.empty()) {
    std::ofstream f(json_path);
    f << stats_to_json(st).dump(2) << "\n";
  }
  return 0;
}

int cmd_bench(std::size_t comparisons, const std::string& variant_s, unsigned repeat,
              std::uint32_t l, const std::string& json_path) {
  std::vector<Variant> variants;
  if (variant_s == "all") {
    variants = {Variant::plain_mask, Variant::mpc_lift, Variant::const_lift, Variant::no_lift};
  } else {
    variants = {variant_from_string(variant_s)};
  }

  Rng rng(1);
  std::vector<std::pair<std::int64_t, std::int64_t>> lanes(comparisons);
  for (auto& [dot, ml] : lanes) {
    ml = static_cast<std::int64_t>(rng.below(l + 1));
    const auto hd = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(ml) + 1));
    dot = ml - 2 * hd;
  }

  json out = json::array();
  std::printf("%-12s %10s %12s %10s %8s\n", "protocol", "ms", "cmp/s", "kB/party", "B/cmp");
  for (const auto v : variants) {
    EngineConfig cfg;
    cfg.backend = Backend::replicated;
    cfg.variant = v;
    cfg.l = l;
    cfg.params = MatchParams::make(0.375, 16);
    double best_ms = 1e30;
    std::uint64_t bytes = 0, rounds = 0;
    for (unsigned r = 0; r < repeat; ++r) {
      const auto res = run_comparison_local(cfg, lanes, false, 777 + r);
      if (res.wall_ms < best_ms) best_ms = res.wall_ms;
      bytes = 0;
      rounds = 0;
      for (const auto& led : res.ledgers) {
        bytes += led.phase(Phase::lift).bytes_sent + led.phase(Phase::ot).bytes_sent +
                 led.phase(Phase::msb).bytes_sent;
        rounds = std::max(rounds, led.phase(Phase::lift).rounds + led.phase(Phase::ot).rounds +
                                      led.phase(Phase::msb).rounds);
      }
      bytes /= 3;
    }
    const double throughput = static_cast<double>(comparisons) / (best_ms / 1000.0);
    const double per_cmp = static_cast<double>(bytes) / static_cast<double>(comparisons);
    std::printf("%-12s %10.2f %12.0f %10.1f %8.2f\n", to_string(v), best_ms, throughput,
                static_cast<double>(bytes) / 1000.0, per_cmp);
    out.push_back(json{{"protocol", to_string(v)},
                       {"comparisons", comparisons},
                       {"ms", best_ms},
                       {"throughput_per_s", throughput},
                       {"kb_per_party", static_cast<double>(bytes) / 1000.0},
                       {"bytes_per_comparison", per_cmp},
                       {"rounds", rounds}});
  }

  // or-tree row
  {
    std::vector<std::uint8_t> bits(comparisons, 0);
    if (comparisons > 1) bits[comparisons / 2] = 1;
    double best_ms = 1e30;
    std::uint64_t bytes = 0;
    std::uint64_t rounds = 0;
    for (unsigned r = 0; r < repeat; ++r) {
      const auto res = run_or_tree_local(bits, 778 + r);
      if (res.wall_ms < best_ms) best_ms = res.wall_ms;
      bytes = 0;
      for (const auto& led : res.ledgers) bytes += led.phase(Phase::or_tree).bytes_sent;
      bytes = (bytes - 2) / 3;  // exclude the final 1-bit opening
      rounds = res.stats[0].rounds;
    }
    const double throughput = static_cast<double>(comparisons) / (best_ms / 1000.0);
    std::printf("%-12s %10.2f %12.0f %10.1f %8.2f\n", "or-tree", best_ms, throughput,
                static_cast<double>(bytes) / 1000.0,
                static_cast<double>(bytes) / static_cast<double>(comparisons));
    out.push_back(json{{"protocol", "or-tree"},
                       {"comparisons", comparisons},
                       {"ms", best_ms},
                       {"throughput_per_s", throughput},
                       {"kb_per_party", static_cast<double>(bytes) / 1000.0},
                       {"rounds", rounds}});
  }

  if (!json_path.empty()) {
    std::ofstream f(json_path);
    f << out.dump(2) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"3-party MPC membership checks for secret-shared iris codes"};
  app.require_subcommand(1);

  // gen-db
  auto* gen = app.add_subcommand("gen-db", "generate a synthetic plaintext iris database");
  std::uint64_t gen_size = 100;
  std::uint32_t gen_len = 12800;
  std::uint64_t gen_seed = 1;
  double gen_density = 0.9;
  std::string gen_out = "db.irmp";
  gen->add_option("--size", gen_size, "number of records");
  gen->add_option("--length", gen_len, "code length in bits (multiple of 8)");
  gen->add_option("--seed", gen_seed, "rng seed");
  gen->add_option("--mask-density", gen_density, "probability of a usable bit");
  gen->add_option("--out", gen_out, "output path")->required();

  // share
  auto* share = app.add_subcommand("share", "secret-share a plaintext database (dealer)");
  std::string share_db, share_backend = "replicated", share_variant = "all", share_out = "shares";
  std::uint64_t share_seed = 1;
  share->add_option("--db", share_db, "IRMP database path")->required();
  share->add_option("--backend", share_backend, "replicated | shamir-galois");
  share->add_option("--variant", share_variant,
                    "plain-mask | mpc-lift | const-lift | no-lift | all");
  share->add_option("--out-dir", share_out, "output directory");
  share->add_option("--seed", share_seed, "dealer rng seed");

  // party
  auto* party = app.add_subcommand("party", "run one MPC party");
  std::string party_cfg;
  bool party_once = false;
  party->add_option("--config", party_cfg, "config json")->required();
  party->add_flag("--once", party_once, "serve a single client session, then exit");

  // query
  auto* query = app.add_subcommand("query", "share a query and ask the parties");
  std::string query_cfg, query_file, query_variant = "mpc-lift", query_stats;
  unsigned query_batch = 0;
  std::uint64_t query_seed = 7;
  query->add_option("--config", query_cfg, "config json")->required();
  query->add_option("--query", query_file, "IRMP file with the query code(s)")->required();
  query->add_option("--batch", query_batch, "persons in the batch (0 = single membership)");
  query->add_option("--variant", query_variant,
                    "plain-mask | mpc-lift | const-lift | no-lift | all");
  query->add_option("--stats", query_stats, "write stats json here");
  query->add_option("--seed", query_seed, "client dealer seed");

  // bench
  auto* bench = app.add_subcommand("bench", "comparison-phase benchmark (Table-style)");
  std::size_t bench_n = 100000;
  std::string bench_variant = "all", bench_json, bench_phase = "comparison",
              bench_backend = "replicated";
  unsigned bench_repeat = 3;
  std::uint32_t bench_l = 12800;
  std::size_t bench_db = 1000;
  bench->add_option("--comparisons", bench_n, "parallel comparisons");
  bench->add_option("--variant", bench_variant, "variant or all");
  bench->add_option("--repeat", bench_repeat, "repetitions (best time reported)");
  bench->add_option("--length", bench_l, "iris code length");
  bench->add_option("--phase", bench_phase,
                    "comparison: synthesize dot outputs and isolate the comparison phase; "
                    "full: run a whole query");
  bench->add_option("--backend", bench_backend, "backend for --phase full");
  bench->add_option("--db-size", bench_db, "database rows for --phase full");
  bench->add_option("--json", bench_json, "write results json here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;  // flag problems are config errors
  }

  try {
    if (gen->parsed()) return cmd_gen_db(gen_size, gen_len, gen_seed, gen_density, gen_out);
    if (share->parsed()) {
      return cmd_share(share_db, share_backend, share_variant, share_out, share_seed);
    }
    if (party->parsed()) return cmd_party(party_cfg, party_once);
    if (query->parsed()) {
      return cmd_query(query_cfg, query_file, query_batch, query_variant, query_stats, query_seed);
    }
    if (bench->parsed()) {
      if (bench_phase == "full") {
        return cmd_bench_full(bench_db, bench_variant, bench_backend, bench_repeat, bench_l,
                              bench_json);
      }
      return cmd_bench(bench_n, bench_variant, bench_repeat, bench_l, bench_json);
    }
  } catch (const ConfigMismatchError& e) {
    std::fprintf(stderr, "config mismatch: %s\n", e.what());
    return 2;
  } catch (const BoundsError& e) {
    std::fprintf(stderr, "bounds violation: %s\n", e.what());
    return 4;
  } catch (const TransportError& e) {
    std::fprintf(stderr, "transport error: %s\n", e.what());
    return 3;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
