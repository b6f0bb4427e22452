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

#include "irismpc/kernels.hpp"

#include <atomic>

namespace irismpc::kernels {

namespace {
std::atomic<std::uint64_t> g_macs{0};
}

std::uint64_t mac_count() { return g_macs.load(std::memory_order_relaxed); }
void reset_mac_count() { g_macs.store(0, std::memory_order_relaxed); }
void add_mac_count(std::uint64_t n) { g_macs.fetch_add(n, std::memory_order_relaxed); }

template <unsigned K>
void dot_prep_rows(const PrepMatrix<K>& m, std::span<const Ring<K>> q_sum,
                   std::span<const Ring<K>> q_prev, std::span<Ring<K>> out, bool parallel) {
  const auto n = static_cast<std::ptrdiff_t>(m.rows);
#pragma omp parallel for schedule(static) if (parallel)
  for (std::ptrdiff_t r = 0; r < n; ++r) {
    out[static_cast<std::size_t>(r)] =
        dot_prep_row<K>(m.own_sum.data() + r * static_cast<std::ptrdiff_t>(m.len),
                        m.prev.data() + r * static_cast<std::ptrdiff_t>(m.len), q_sum.data(),
                        q_prev.data(), m.len);
  }
}

template <unsigned K>
void dot_gr_ct_rows(const GrMatrix<K>& m, std::span<const Ring<K>> q0, std::span<const Ring<K>> q1,
                    std::span<Ring<K>> out, bool parallel) {
  const auto n = static_cast<std::ptrdiff_t>(m.rows);
#pragma omp parallel for schedule(static) if (parallel)
  for (std::ptrdiff_t r = 0; r < n; ++r) {
    out[static_cast<std::size_t>(r)] =
        dot_gr_ct_row<K>(m.c0.data() + r * static_cast<std::ptrdiff_t>(m.len),
                         m.c1.data() + r * static_cast<std::ptrdiff_t>(m.len), q0.data(), q1.data(),
                         m.len);
  }
}

template void dot_prep_rows<16>(const PrepMatrix<16>&, std::span<const Ring<16>>,
                                std::span<const Ring<16>>, std::span<Ring<16>>, bool);
template void dot_prep_rows<32>(const PrepMatrix<32>&, std::span<const Ring<32>>,
                                std::span<const Ring<32>>, std::span<Ring<32>>, bool);
template void dot_gr_ct_rows<16>(const GrMatrix<16>&, std::span<const Ring<16>>,
                                 std::span<const Ring<16>>, std::span<Ring<16>>, bool);
template void dot_gr_ct_rows<32>(const GrMatrix<32>&, std::span<const Ring<32>>,
                                 std::span<const Ring<32>>, std::span<Ring<32>>, bool);

}  // namespace irismpc::kernels
