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

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "irismpc/galois.hpp"
#include "irismpc/ring.hpp"

namespace irismpc::kernels {

// Multiply-accumulate counter, used to compare backend workloads: the
// replicated dot product streams 2 MACs per vector entry, the packed
// Galois dot product 1.
std::uint64_t mac_count();
void reset_mac_count();
void add_mac_count(std::uint64_t n);

// One row of the replicated dot product:
//   z = <own_sum, q_sum> - <prev, q_prev>,
// where own_sum/prev are the preprocessed database row and q_sum/q_prev
// derive from the query share. Serial reference implementation.
template <unsigned K>
Ring<K> dot_prep_row(const Ring<K>* own_sum, const Ring<K>* prev, const Ring<K>* q_sum,
                     const Ring<K>* q_prev, std::size_t n) {
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += static_cast<std::uint64_t>(own_sum[i].value()) * q_sum[i].value();
    acc -= static_cast<std::uint64_t>(prev[i].value()) * q_prev[i].value();
  }
  add_mac_count(2 * n);
  return Ring<K>(acc);
}

// One row of the Galois constant-term dot product over SoA coefficients:
//   z = sum_i (x0_i y0_i + x1_i y1_i).
template <unsigned K>
Ring<K> dot_gr_ct_row(const Ring<K>* x0, const Ring<K>* x1, const Ring<K>* y0, const Ring<K>* y1,
                      std::size_t n) {
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += static_cast<std::uint64_t>(x0[i].value()) * y0[i].value();
    acc += static_cast<std::uint64_t>(x1[i].value()) * y1[i].value();
  }
  add_mac_count(2 * n);
  return Ring<K>(acc);
}

// Row-major SoA matrix of preprocessed replicated shares.
template <unsigned K>
struct PrepMatrix {
  std::size_t rows = 0;
  std::size_t len = 0;
  std::vector<Ring<K>> own_sum;  // rows * len
  std::vector<Ring<K>> prev;
};

template <unsigned K>
struct GrMatrix {
  std::size_t rows = 0;
  std::size_t len = 0;  // packed length (pairs)
  std::vector<Ring<K>> c0;
  std::vector<Ring<K>> c1;
};

// All-rows kernels. `parallel` turns on the OpenMP split over rows; the
// serial path is the reference the tests compare against.
template <unsigned K>
void dot_prep_rows(const PrepMatrix<K>& m, std::span<const Ring<K>> q_sum,
                   std::span<const Ring<K>> q_prev, std::span<Ring<K>> out, bool parallel);

template <unsigned K>
void dot_gr_ct_rows(const GrMatrix<K>& m, std::span<const Ring<K>> q0, std::span<const Ring<K>> q1,
                    std::span<Ring<K>> out, bool parallel);

}  // namespace irismpc::kernels
