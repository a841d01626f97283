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

namespace superchern {
namespace {

using testing::Rng;

TEST(FormAlgebra, ExteriorDerivativeSquaresToZeroExactly) {
  // dyadic coefficients keep every product and sum exact, so d(d a) must be 0 bit for bit
  Rng rng;
  std::uniform_int_distribution<int> num(-64, 64);
  for (int n : {1, 2, 3, 4}) {
    FormField a = rng.form(n, {1, 1}, 3);
    a = a.map_coeffs([&](const Mat& m) {
      Mat out(m.rows(), m.cols());
      for (Eigen::Index i = 0; i < out.size(); ++i) out.data()[i] = cplx{num(rng.engine()) / 8.0, num(rng.engine()) / 16.0};
      return out;
    });
    EXPECT_EQ(ext_deriv(ext_deriv(a)).max_coeff(), 0.0) << "n = " << n;
  }
}

TEST(FormAlgebra, ExteriorDerivativeSquaresToRoundoffForGeneralInput) {
  Rng rng;
  for (int n : {1, 2, 3}) {
    const FormField a = rng.form(n, {1, 1}, 2);
    EXPECT_LT(ext_deriv(ext_deriv(a)).max_coeff(), 1e-14) << "n = " << n;
  }
}

TEST(FormAlgebra, LeibnizRuleWithTotalParity) {
  Rng rng;
  const GradedDim fib{1, 1};
  for (int da : {0, 1, 2}) {
    for (Parity pm : {Parity::even, Parity::odd}) {
      FormField a = rng.form(3, fib, 1, da);
      a = a.map_coeffs([&](const Mat& m) { return pm == Parity::even ? even_block_part(fib, m) : odd_block_part(fib, m); });
      const FormField b = rng.form(3, fib, 1);
      const double sign = a.parity() == Parity::odd ? -1.0 : 1.0;
      const FormField lhs = ext_deriv(wedge(a, b));
      const FormField rhs = wedge(ext_deriv(a), b) + cplx{sign} * wedge(a, ext_deriv(b));
      EXPECT_LT((lhs - rhs).max_coeff(), 1e-12);
    }
  }
}

TEST(FormAlgebra, WedgeIsAssociative) {
  Rng rng;
  const FormField a = rng.form(3, {2, 1}, 1);
  const FormField b = rng.form(3, {2, 1}, 1);
  const FormField c = rng.form(3, {2, 1}, 1);
  EXPECT_LT((wedge(wedge(a, b), c) - wedge(a, wedge(b, c))).max_coeff(), 1e-12);
}

TEST(FormAlgebra, SupertraceOfGradedCommutatorVanishes) {
  Rng rng;
  const GradedDim fib{2, 1};
  for (int da : {0, 1, 2}) {
    for (int db : {0, 1}) {
      FormField a = rng.form(2, fib, 1, da).map_coeffs([&](const Mat& m) { return odd_block_part(fib, m); });
      FormField b = rng.form(2, fib, 1, db).map_coeffs([&](const Mat& m) { return even_block_part(fib, m); });
      EXPECT_LT(supertrace(graded_commutator(a, b)).max_coeff(), 1e-12);
    }
  }
}

TEST(FormAlgebra, OneFormsAnticommuteWithScalarCoefficients) {
  const FormField dx = FormField::constant(2, {1, 0}, Mat::Identity(1, 1), 1U);
  const FormField dy = FormField::constant(2, {1, 0}, Mat::Identity(1, 1), 2U);
  const FormField xy = wedge(dx, dy);
  EXPECT_EQ((xy + wedge(dy, dx)).max_coeff(), 0.0);
  EXPECT_EQ(xy.component(3U).coeff(Freq{})(0, 0), cplx(1.0));
  EXPECT_EQ(wedge(dx, dx).max_coeff(), 0.0);
}

TEST(FormAlgebra, DerivativeOfPlaneWave) {
  MatrixFourier f(2, 2, 1, 1);
  f.at(Freq{1, -2})(0, 0) = 1.0;
  const FormField u = [&] {
    FormField g = FormField::scalar(2);
    g.set(0U, f);
    return g;
  }();
  const FormField du = ext_deriv(u);
  EXPECT_EQ(du.component(1U).coeff(Freq{1, -2})(0, 0), cplx(0.0, 1.0));
  EXPECT_EQ(du.component(2U).coeff(Freq{1, -2})(0, 0), cplx(0.0, -2.0));
}

TEST(FormAlgebra, ConvolutionMatchesPointwiseProduct) {
  Rng rng;
  MatrixFourier f(2, 2, 2, 2);
  MatrixFourier g(2, 1, 2, 2);
  for (int i = 0; i < f.num_modes(); ++i) f.at_index(i) = rng.matrix(2, 2);
  for (int i = 0; i < g.num_modes(); ++i) g.at_index(i) = rng.matrix(2, 2);
  const MatrixFourier fg = multiply(f, g);
  EXPECT_EQ(fg.bandwidth(), 3);
  for (int trial = 0; trial < 5; ++trial) {
    const Point x{rng.uniform(0, kTwoPi), rng.uniform(0, kTwoPi)};
    EXPECT_LT(max_abs(fg.evaluate(x) - f.evaluate(x) * g.evaluate(x)), 1e-12);
  }
}

TEST(FormAlgebra, IntegrateTopPicksMeanOfTopComponent) {
  MatrixFourier f(2, 1, 1, 1);
  f.at(Freq{0, 0})(0, 0) = 0.5;
  f.at(Freq{1, 0})(0, 0) = 3.0;
  FormField a = FormField::scalar(2);
  a.set(3U, f);
  EXPECT_NEAR(integrate_top(a).entries()(0, 0).real(), 0.5 * kTwoPi * kTwoPi, 1e-12);
}

TEST(FormAlgebra, ExpNegOfNilpotentTwoForm) {
  PointForm f(2, {1, 0});
  f[0U](0, 0) = 1.0;
  f[3U](0, 0) = 1.0;
  const PointForm e = exp_neg(f);
  EXPECT_NEAR(std::abs(e[0U](0, 0) - std::exp(-1.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(e[3U](0, 0) + std::exp(-1.0)), 0.0, 1e-15);
  EXPECT_EQ(e[1U](0, 0), cplx(0.0));
}

// Oracle: truncated power series Σ (-F)^k / k! in the pointwise algebra.
PointForm exp_series(const PointForm& f, int terms = 60) {
  PointForm acc(f.base_dim(), f.fibre());
  PointForm term(f.base_dim(), f.fibre());
  term[0U] = Mat::Identity(f.fibre().total(), f.fibre().total());
  acc += term;
  for (int k = 1; k < terms; ++k) {
    term = cplx{-1.0 / k} * (term * f);
    acc += term;
  }
  return acc;
}

TEST(FormAlgebra, ExpNegMatchesPowerSeries) {
  Rng rng;
  const GradedDim fib{1, 1};
  for (int n : {2, 3, 4}) {
    PointForm f(n, fib);
    for (MultiIndex m = 0; m < static_cast<MultiIndex>(f.num_components()); ++m) {
      const Mat r = 0.4 * rng.matrix(2, 2);
      f[m] = (degree(m) % 2 == 0) ? even_block_part(fib, r) : odd_block_part(fib, r);
    }
    EXPECT_LT((exp_neg(f) - exp_series(f)).max_coeff(), 1e-12) << "n = " << n;
  }
}

TEST(FormAlgebra, RegularRepresentationIsMultiplicative) {
  Rng rng;
  const GradedDim fib{2, 1};
  PointForm x(3, fib);
  PointForm y(3, fib);
  for (MultiIndex m = 0; m < 8; ++m) {
    x[m] = rng.matrix(3, 3);
    y[m] = rng.matrix(3, 3);
  }
  EXPECT_LT(max_abs(regular_rep(x * y).entries() - regular_rep(x).entries() * regular_rep(y).entries()), 1e-12);
  EXPECT_LT((from_regular_rep(3, fib, regular_rep(x).entries()) - x).max_coeff(), 1e-15);
}

TEST(FormAlgebra, GridProjectionRecoversBandLimitedForm) {
  Rng rng;
  const int n = 2;
  const int grid = 8;
  MatrixFourier f(n, 3, 1, 1);
  for (int i = 0; i < f.num_modes(); ++i) f.at_index(i)(0, 0) = rng.complex();
  std::vector<std::vector<cplx>> samples(static_cast<std::size_t>(grid * grid), std::vector<cplx>(4));
  for (int p = 0; p < grid * grid; ++p) samples[static_cast<std::size_t>(p)][2] = f.evaluate(grid_point(n, grid, p))(0, 0);
  ProjectionReport rep;
  const FormField g = scalar_form_from_samples(n, grid, samples, &rep);
  ASSERT_TRUE(g.has(2U));
  for (int i = 0; i < f.num_modes(); ++i) {
    EXPECT_LT(std::abs(g.component(2U).coeff(f.freq(i))(0, 0) - f.at_index(i)(0, 0)), 1e-13);
  }
  EXPECT_LT(rep.nyquist_max, 1e-13);
}

TEST(FormAlgebra, RejectsMismatchedBundles) {
  Rng rng;
  EXPECT_THROW(wedge(rng.form(2, {1, 1}, 1), rng.form(2, {2, 1}, 1)), ArgumentError);
  EXPECT_THROW(wedge(rng.form(2, {1, 1}, 1), rng.form(3, {1, 1}, 1)), ArgumentError);
  EXPECT_THROW(FormField(5, {1, 0}), ArgumentError);
}

}  // namespace
}  // namespace superchern
