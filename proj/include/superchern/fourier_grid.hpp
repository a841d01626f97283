// Copyright 2026 The superchern Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Frequency indexing for trigonometric polynomials on T^n = (R/2πZ)^n and
// separable transforms between dense coefficient cubes [-K,K]^n and uniform
// sample grids with N points per axis.

#include <superchern/common.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

namespace superchern {

inline constexpr int kMaxBaseDim = 4;

using Freq = std::array<int, kMaxBaseDim>;
using Point = std::array<double, kMaxBaseDim>;

inline int ipow(int base, int exp) {
  int r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

inline bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

/// Dense index of frequency k in the cube [-K,K]^n (axis 0 fastest).
inline int freq_index(int n, int bandwidth, const Freq& k) {
  const int side = 2 * bandwidth + 1;
  int idx = 0;
  for (int j = n - 1; j >= 0; --j) idx = idx * side + (k[static_cast<std::size_t>(j)] + bandwidth);
  return idx;
}

inline Freq freq_at(int n, int bandwidth, int idx) {
  const int side = 2 * bandwidth + 1;
  Freq k{};
  for (int j = 0; j < n; ++j) {
    k[static_cast<std::size_t>(j)] = idx % side - bandwidth;
    idx /= side;
  }
  return k;
}

inline bool in_band(int n, int bandwidth, const Freq& k) {
  for (int j = 0; j < n; ++j) {
    if (std::abs(k[static_cast<std::size_t>(j)]) > bandwidth) return false;
  }
  return true;
}

/// Grid point m (axis 0 fastest) of the uniform N^n grid, x_j = 2π m_j / N.
inline Point grid_point(int n, int grid_n, int idx) {
  Point x{};
  for (int j = 0; j < n; ++j) {
    x[static_cast<std::size_t>(j)] = kTwoPi * static_cast<double>(idx % grid_n) / grid_n;
    idx /= grid_n;
  }
  return x;
}

namespace detail {

/// Applies out[m] = Σ_k in[k] * w(k, m) along one axis of a row-major cube
/// where axis `axis` has `in_len` entries in the input and `out_len` in the
/// output; `w` is a dense out_len x in_len table.
inline std::vector<cplx> transform_axis(const std::vector<cplx>& in, int n, const std::vector<int>& shape,
                                        int axis, const std::vector<cplx>& table, int out_len) {
  const int in_len = shape[static_cast<std::size_t>(axis)];
  int inner = 1;
  for (int j = 0; j < axis; ++j) inner *= shape[static_cast<std::size_t>(j)];
  int outer = 1;
  for (int j = axis + 1; j < n; ++j) outer *= shape[static_cast<std::size_t>(j)];
  std::vector<cplx> out(static_cast<std::size_t>(inner) * out_len * outer, cplx{});
  for (int o = 0; o < outer; ++o) {
    for (int m = 0; m < out_len; ++m) {
      const cplx* row = &table[static_cast<std::size_t>(m) * in_len];
      for (int k = 0; k < in_len; ++k) {
        const cplx w = row[k];
        const cplx* src = &in[(static_cast<std::size_t>(o) * in_len + k) * inner];
        cplx* dst = &out[(static_cast<std::size_t>(o) * out_len + m) * inner];
        for (int i = 0; i < inner; ++i) dst[i] += w * src[i];
      }
    }
  }
  return out;
}

inline cplx unit_root(long long num, int grid_n) {
  long long r = num % grid_n;
  if (r < 0) r += grid_n;
  const double angle = kTwoPi * static_cast<double>(r) / grid_n;
  return {std::cos(angle), std::sin(angle)};
}

}  // namespace detail

/// f(x_m) = Σ_k c_k e^{i k·x_m} for a dense coefficient cube of bandwidth K.
inline std::vector<cplx> synthesize_grid(int n, int bandwidth, const std::vector<cplx>& coeffs, int grid_n) {
  const int side = 2 * bandwidth + 1;
  std::vector<cplx> table(static_cast<std::size_t>(grid_n) * side);
  for (int m = 0; m < grid_n; ++m) {
    for (int k = 0; k < side; ++k) {
      table[static_cast<std::size_t>(m) * side + k] = detail::unit_root(static_cast<long long>(k - bandwidth) * m, grid_n);
    }
  }
  std::vector<int> shape(static_cast<std::size_t>(n), side);
  std::vector<cplx> cur = coeffs;
  for (int axis = 0; axis < n; ++axis) {
    cur = detail::transform_axis(cur, n, shape, axis, table, grid_n);
    shape[static_cast<std::size_t>(axis)] = grid_n;
  }
  return cur;
}

/// c_k = N^{-n} Σ_m f(x_m) e^{-i k·x_m} for |k_j| <= K_out. K_out must stay
/// below the Nyquist index N/2, whose (aliased) coefficient is reported
/// separately through `nyquist_max` when requested.
inline std::vector<cplx> analyze_grid(int n, int grid_n, const std::vector<cplx>& values, int bandwidth_out,
                                      double* nyquist_max = nullptr) {
  if (2 * bandwidth_out >= grid_n) throw GuardError("analyze_grid: output bandwidth reaches the Nyquist index");
  const int side = 2 * bandwidth_out + 1;
  std::vector<cplx> table(static_cast<std::size_t>(side) * grid_n);
  const double norm = 1.0 / grid_n;
  for (int k = 0; k < side; ++k) {
    for (int m = 0; m < grid_n; ++m) {
      table[static_cast<std::size_t>(k) * grid_n + m] =
          norm * detail::unit_root(-static_cast<long long>(k - bandwidth_out) * m, grid_n);
    }
  }
  std::vector<int> shape(static_cast<std::size_t>(n), grid_n);
  std::vector<cplx> cur = values;
  for (int axis = 0; axis < n; ++axis) {
    cur = detail::transform_axis(cur, n, shape, axis, table, side);
    shape[static_cast<std::size_t>(axis)] = side;
  }
  if (nyquist_max != nullptr) {
    // sup norm of the Nyquist slice along each axis: content the output
    // coefficients cannot represent
    std::vector<cplx> nyq_table(static_cast<std::size_t>(grid_n));
    for (int m = 0; m < grid_n; ++m) nyq_table[static_cast<std::size_t>(m)] = norm * ((m % 2 == 0) ? 1.0 : -1.0);
    double mx = 0.0;
    for (int axis = 0; axis < n; ++axis) {
      std::vector<int> s2(static_cast<std::size_t>(n), grid_n);
      for (const cplx& v : detail::transform_axis(values, n, s2, axis, nyq_table, 1)) mx = std::max(mx, std::abs(v));
    }
    *nyquist_max = mx;
  }
  return cur;
}

/// Σ_k c_k e^{i k·x} for a dense coefficient cube.
inline cplx evaluate_dense(int n, int bandwidth, const std::vector<cplx>& coeffs, const Point& x) {
  cplx acc{};
  for (std::size_t idx = 0; idx < coeffs.size(); ++idx) {
    const Freq k = freq_at(n, bandwidth, static_cast<int>(idx));
    double phase = 0.0;
    for (int j = 0; j < n; ++j) phase += k[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
    acc += coeffs[idx] * cplx{std::cos(phase), std::sin(phase)};
  }
  return acc;
}

}  // namespace superchern
