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
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace superchern {
namespace {

using testing::Rng;

CliffordElement random_element(Rng& rng, int n, double eps) {
  CliffordElement a(n, eps);
  for (MultiIndex m = 0; m < static_cast<MultiIndex>(a.num_coeffs()); ++m) a.at(m) = rng.complex();
  return a;
}

double distance(const CliffordElement& a, const CliffordElement& b) {
  double d = 0.0;
  for (MultiIndex m = 0; m < static_cast<MultiIndex>(a.num_coeffs()); ++m) d = std::max(d, std::abs(a.at(m) - b.at(m)));
  return d;
}

TEST(Clifford, ReorderSign) {
  EXPECT_EQ(reorder_sign(0b01, 0b10), 1);
  EXPECT_EQ(reorder_sign(0b10, 0b01), -1);
  EXPECT_EQ(reorder_sign(0b110, 0b001), 1);
  EXPECT_EQ(reorder_sign(0b100, 0b011), 1);
  EXPECT_EQ(reorder_sign(0b010, 0b101), -1);
}

TEST(Clifford, GeneratorRelations) {
  for (int n = 1; n <= 4; ++n) {
    for (double eps : {1.0, 0.5, 0.0}) {
      for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
          const auto ei = CliffordElement::generator(n, eps, i);
          const auto ej = CliffordElement::generator(n, eps, j);
          const auto anti = clifford_mult(ei, ej) + clifford_mult(ej, ei);
          CliffordElement expect(n, eps);
          if (i == j) expect.at(0) = -2.0 * eps * eps;
          EXPECT_EQ(distance(anti, expect), 0.0) << "n=" << n << " eps=" << eps << " i=" << i << " j=" << j;
        }
      }
    }
  }
}

TEST(Clifford, ZeroEpsIsTheWedgeProduct) {
  const auto e1 = CliffordElement::generator(3, 0.0, 1);
  const auto e3 = CliffordElement::generator(3, 0.0, 3);
  const auto e13 = clifford_mult(e1, e3);
  EXPECT_EQ(e13.at(0b101), cplx{1.0});
  EXPECT_EQ(clifford_mult(e3, e1).at(0b101), cplx{-1.0});
  EXPECT_EQ(clifford_mult(e13, e1).at(0b101), cplx{0.0});
  EXPECT_EQ(clifford_mult(e13, e1).at(0b100), cplx{0.0});
}

TEST(Clifford, Associative) {
  Rng rng;
  for (int n = 1; n <= 4; ++n) {
    const auto a = random_element(rng, n, 0.7);
    const auto b = random_element(rng, n, 0.7);
    const auto c = random_element(rng, n, 0.7);
    EXPECT_LT(distance(clifford_mult(clifford_mult(a, b), c), clifford_mult(a, clifford_mult(b, c))), 1e-13);
  }
}

TEST(Clifford, SpinorGeneratorsAreOddAndAnticommute) {
  for (int n : {2, 4}) {
    const GradedDim sd = spinor_dim(n);
    for (int i = 1; i <= n; ++i) {
      const GradedMatrix gi = spinor_generator(n, i);
      EXPECT_EQ(gi.parity(), Parity::odd);
      EXPECT_TRUE((gi * gi).entries().isApprox(-Mat::Identity(sd.total(), sd.total())));
      for (int j = i + 1; j <= n; ++j) {
        const GradedMatrix gj = spinor_generator(n, j);
        EXPECT_LT((gi * gj + gj * gi).entries().norm(), 1e-15);
      }
    }
  }
}

TEST(Clifford, SpinorGeneratorsMatchGoldenTable) {
  const json doc = read_json_file(std::string(SUPERCHERN_DATA_DIR) + "/spinor_generators.json");
  for (int n : {2, 4}) {
    const json& table = doc.at("n" + std::to_string(n));
    ASSERT_EQ(static_cast<int>(table.size()), n);
    for (int j = 1; j <= n; ++j) {
      const json& g = table[static_cast<std::size_t>(j - 1)];
      const Mat expect = detail::matrix_from_json(g.at("re"), g.at("im"), spinor_dim(n).total(), "golden");
      EXPECT_EQ((spinor_generator(n, j).entries() - expect).norm(), 0.0) << "n=" << n << " j=" << j;
    }
  }
}

TEST(Clifford, SpinorRepIsAHomomorphism) {
  Rng rng;
  for (int n : {2, 4}) {
    const auto a = random_element(rng, n, 1.0);
    const auto b = random_element(rng, n, 1.0);
    const Mat lhs = spinor_rep(clifford_mult(a, b)).entries();
    const Mat rhs = (spinor_rep(a) * spinor_rep(b)).entries();
    EXPECT_LT((lhs - rhs).norm(), 1e-12) << "n=" << n;
  }
  EXPECT_THROW(spinor_rep(CliffordElement(3, 1.0)), ArgumentError);
  EXPECT_THROW(spinor_rep(CliffordElement(2, 0.5)), ArgumentError);
}

TEST(Clifford, BerezinSupertrace) {
  EXPECT_EQ(berezin_supertrace(CliffordElement::monomial(2, 1.0, 0b11)), (cplx{0.0, -2.0}));
  EXPECT_EQ(berezin_supertrace(CliffordElement::monomial(4, 1.0, 0b1111)), cplx{-4.0});
  Rng rng;
  for (int n : {2, 4}) {
    const auto a = random_element(rng, n, 1.0);
    EXPECT_LT(std::abs(berezin_supertrace(a) - supertrace(spinor_rep(a))), 1e-12) << "n=" << n;
  }
  EXPECT_THROW(berezin_supertrace(CliffordElement(3, 1.0)), ArgumentError);
}

TEST(Clifford, SymbolAndQuantizeRoundTrip) {
  Rng rng;
  for (int n = 1; n <= 4; ++n) {
    for (double eps : {1.0, 0.3}) {
      const auto a = random_element(rng, n, eps);
      EXPECT_EQ(distance(quantize(n, eps, symbol(a)), a), 0.0);
      const auto via = symbol_via_action(a);
      const auto direct = symbol(a);
      for (std::size_t m = 0; m < direct.size(); ++m) EXPECT_LT(std::abs(via[m] - direct[m]), 1e-13);
    }
  }
  EXPECT_THROW(quantize(2, 1.0, std::vector<cplx>(3)), ArgumentError);
}

TEST(Clifford, GetzlerRescalingRates) {
  const std::vector<double> eps{0.2, 0.1, 0.05, 0.025};
  struct Case {
    MultiIndex mask;
    int l;
    double rate;
  };
  for (const Case& c : {Case{0b1, 0, -1.0}, Case{0b1, 1, 2.0}, Case{0b1, 2, 1.0}, Case{0b11, 2, 2.0}, Case{0b11, 1, -1.0},
                        Case{0b11, 3, 1.0}}) {
    const auto a = CliffordElement::monomial(3, 1.0, c.mask);
    const GetzlerReport rep = getzler_limit_check(a, c.l, eps);
    EXPECT_TRUE(rep.certified) << "mask=" << c.mask << " l=" << c.l;
    EXPECT_NEAR(rep.fitted_rate, c.rate, 0.1 * std::abs(c.rate)) << "mask=" << c.mask << " l=" << c.l;
  }
  const auto mixed = CliffordElement::monomial(2, 1.0, 0b1) + CliffordElement::monomial(2, 1.0, 0b11);
  EXPECT_THROW(getzler_limit_check(mixed, 1, eps), ArgumentError);
  EXPECT_THROW(getzler_limit_check(CliffordElement::generator(2, 1.0, 1), 1, {0.1, 0.2}), ArgumentError);
}

}  // namespace
}  // namespace superchern
