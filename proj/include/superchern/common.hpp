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

#include <Eigen/Dense>

#include <bit>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace superchern {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr cplx kI{0.0, 1.0};

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input (shapes, parities, parameter domains).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// A numerical precondition guard was violated (aliasing, truncation, ...).
class GuardError : public Error {
 public:
  using Error::Error;
};

/// A numeric routine failed or a certified bound did not hold.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Input document does not match the expected schema.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// Exterior multi-indices I ⊆ {1..n} are stored as bitmasks: bit j-1 <-> dx_j.
using MultiIndex = unsigned;

inline int degree(MultiIndex mask) { return std::popcount(mask); }

/// Sign of dx^I ∧ dx^J -> ±dx^{I∪J}; 0 when I and J overlap.
inline int wedge_sign(MultiIndex a, MultiIndex b) {
  if ((a & b) != 0U) return 0;
  int swaps = 0;
  // every index of b must move left past the larger indices of a
  for (MultiIndex rest = b; rest != 0U; rest &= rest - 1U) {
    const MultiIndex bit = rest & (~rest + 1U);
    swaps += std::popcount(a & ~(bit - 1U) & ~bit);
  }
  return (swaps % 2 == 0) ? 1 : -1;
}

inline MultiIndex top_index(int n) { return (MultiIndex{1} << n) - 1U; }

inline std::string mask_to_string(MultiIndex mask) {
  std::string out = "{";
  bool first = true;
  for (int j = 0; j < 32; ++j) {
    if ((mask >> j) & 1U) {
      if (!first) out += ",";
      out += std::to_string(j + 1);
      first = false;
    }
  }
  return out + "}";
}

inline double max_abs(const Mat& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace superchern
