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

// Compares the per-row dot-product kernels: serial reference vs the
// OpenMP-parallel split over database rows.

#include <chrono>
#include <cstdio>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "irismpc/kernels.hpp"
#include "irismpc/prf.hpp"

using namespace irismpc;

namespace {

double run_ms(const kernels::PrepMatrix<16>& m, std::span<const R16> qs, std::span<const R16> qp,
              std::span<R16> out, bool parallel, int reps) {
  kernels::dot_prep_rows<16>(m, qs, qp, out, parallel);  // warm up
  double best = 1e30;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    kernels::dot_prep_rows<16>(m, qs, qp, out, parallel);
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    if (ms < best) best = ms;
  }
  return best;
}

double run_gr_ms(const kernels::GrMatrix<16>& m, std::span<const R16> q0, std::span<const R16> q1,
                 std::span<R16> out, bool parallel, int reps) {
  kernels::dot_gr_ct_rows<16>(m, q0, q1, out, parallel);  // warm up
  double best = 1e30;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    kernels::dot_gr_ct_rows<16>(m, q0, q1, out, parallel);
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    if (ms < best) best = ms;
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  std::size_t rows = 2000;
  const std::size_t len = 12800;
  int reps = 5;
  if (argc > 1) rows = static_cast<std::size_t>(std::atoll(argv[1]));
  if (argc > 2) reps = std::atoi(argv[2]);

#ifdef _OPENMP
  std::printf("openmp threads: %d\n", omp_get_max_threads());
#else
  std::printf("openmp: not enabled\n");
#endif

  Rng rng(1);
  kernels::PrepMatrix<16> m;
  m.rows = rows;
  m.len = len;
  m.own_sum.resize(rows * len);
  m.prev.resize(rows * len);
  for (auto& v : m.own_sum) v = rng.ring<16>();
  for (auto& v : m.prev) v = rng.ring<16>();
  std::vector<R16> qs(len), qp(len);
  for (auto& v : qs) v = rng.ring<16>();
  for (auto& v : qp) v = rng.ring<16>();

  std::vector<R16> serial(rows), parallel(rows);
  const double ms_serial = run_ms(m, qs, qp, serial, false, reps);
  const double ms_parallel = run_ms(m, qs, qp, parallel, true, reps);
  for (std::size_t i = 0; i < rows; ++i) {
    if (serial[i] != parallel[i]) {
      std::fprintf(stderr, "MISMATCH at row %zu\n", i);
      return 1;
    }
  }
  const double mdots = static_cast<double>(rows) / 1e6;
  std::printf("replicated dot rows=%zu len=%zu\n", rows, len);
  std::printf("  serial   %8.2f ms  %7.2f Mdot/s\n", ms_serial, mdots / (ms_serial / 1e3));
  std::printf("  openmp   %8.2f ms  %7.2f Mdot/s  (outputs match serial)\n", ms_parallel,
              mdots / (ms_parallel / 1e3));

  kernels::GrMatrix<16> g;
  g.rows = rows;
  g.len = len / 2;
  g.c0.resize(rows * len / 2);
  g.c1.resize(rows * len / 2);
  for (auto& v : g.c0) v = rng.ring<16>();
  for (auto& v : g.c1) v = rng.ring<16>();
  std::vector<R16> q0(len / 2), q1(len / 2);
  for (auto& v : q0) v = rng.ring<16>();
  for (auto& v : q1) v = rng.ring<16>();
  std::vector<R16> gs(rows), gp(rows);
  const double gms_serial = run_gr_ms(g, q0, q1, gs, false, reps);
  const double gms_parallel = run_gr_ms(g, q0, q1, gp, true, reps);
  for (std::size_t i = 0; i < rows; ++i) {
    if (gs[i] != gp[i]) {
      std::fprintf(stderr, "MISMATCH at row %zu\n", i);
      return 1;
    }
  }
  std::printf("galois ct dot rows=%zu len=%zu (packed %zu)\n", rows, len, len / 2);
  std::printf("  serial   %8.2f ms  %7.2f Mdot/s\n", gms_serial, mdots / (gms_serial / 1e3));
  std::printf("  openmp   %8.2f ms  %7.2f Mdot/s  (outputs match serial)\n", gms_parallel,
              mdots / (gms_parallel / 1e3));
  return 0;
}
