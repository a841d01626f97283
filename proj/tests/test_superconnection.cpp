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

using testing::load_model;
using testing::Rng;

double form_distance(const FormField& a, const FormField& b) { return (a - b).max_coeff(); }

TEST(Superconnection, ScaleActionGroupLawIsExact) {
  const Superconnection s = load_model("t2-mixed");
  std::mt19937_64 gen(testing::kSeed);
  std::uniform_real_distribution<double> mag(0.05, 20.0);
  std::bernoulli_distribution flip(0.3);
  for (int trial = 0; trial < 100; ++trial) {
    const double a = flip(gen) ? -mag(gen) : mag(gen);
    const double b = flip(gen) ? -mag(gen) : mag(gen);
    const Superconnection lhs = scale_action(scale_action(s, a), b);
    const Superconnection rhs = scale_action(s, a * b);
    EXPECT_EQ(lhs.scale(), rhs.scale());
    EXPECT_EQ(form_distance(lhs.odd_part(), rhs.odd_part()), 0.0) << "a=" << a << " b=" << b;
  }
  EXPECT_EQ(form_distance(scale_action(s, 1.0).odd_part(), s.odd_part()), 0.0);
  EXPECT_THROW(scale_action(s, 0.0), ArgumentError);
  EXPECT_THROW(scale_action(s, std::nan("")), ArgumentError);
}

TEST(Superconnection, ScaleActsByPowerOnEachDegree) {
  const Superconnection s = load_model("t2-mixed");
  const double t = 4.0;
  const Superconnection st = scale_action(s, t);
  EXPECT_EQ(form_distance(st.connection(), s.connection()), 0.0);
  for (const auto& [i, w] : s.omegas()) {
    const FormField expect = cplx{std::pow(t, 0.5 * (1 - i))} * w;
    EXPECT_LT(form_distance(st.effective_omega(i), expect), 1e-15) << "degree " << i;
  }
  const Superconnection baked = st.baked();
  EXPECT_EQ(baked.scale(), 1.0);
  EXPECT_EQ(form_distance(baked.odd_part(), st.odd_part()), 0.0);
}

TEST(Superconnection, CurvatureOfConstantEndomorphismIsItsSquare) {
  const Superconnection s = load_model("t2-omega0-const");
  const FormField f = curvature(s);
  const Mat w = s.effective_omega(0).component(0).coeff(Freq{});
  FormField expect = FormField::constant(2, s.fibre(), w * w);
  EXPECT_LT(form_distance(f, expect), 1e-15);
  EXPECT_NEAR(expect.component(0).coeff(Freq{})(0, 0).real(), 0.64, 1e-15);
}

TEST(Superconnection, CurvatureOfCircleConnectionVanishes) {
  const Superconnection s = load_model("circle-holonomy");
  EXPECT_EQ(curvature(s).max_coeff(), 0.0);
}

TEST(Superconnection, CurvatureIsEven) {
  for (const char* name : {"t2-mixed", "t2-nonabelian", "circle-super"}) {
    EXPECT_NE(curvature(load_model(name)).parity(), Parity::odd) << name;
    EXPECT_NE(load_model(name).odd_part().parity(), Parity::even) << name;
  }
}

TEST(Superconnection, ParityRulesAreEnforced) {
  const GradedDim fib{1, 1};
  Superconnection s(2, fib);
  Mat even = Mat::Zero(2, 2);
  even(0, 0) = 1.0;
  Mat odd = Mat::Zero(2, 2);
  odd(0, 1) = 1.0;
  EXPECT_THROW(s.set_connection(FormField::constant(2, fib, odd, 0b01)), ArgumentError);
  EXPECT_THROW(s.set_connection(FormField::constant(2, fib, even, 0b00)), ArgumentError);
  EXPECT_NO_THROW(s.set_connection(FormField::constant(2, fib, even, 0b01)));
  EXPECT_THROW(s.set_omega(0, FormField::constant(2, fib, even)), ArgumentError);
  EXPECT_NO_THROW(s.set_omega(0, FormField::constant(2, fib, odd)));
  EXPECT_THROW(s.set_omega(2, FormField::constant(2, fib, even, 0b11)), ArgumentError);
  EXPECT_NO_THROW(s.set_omega(2, FormField::constant(2, fib, odd, 0b11)));
  EXPECT_THROW(s.set_omega(1, FormField::constant(2, fib, even, 0b01)), ArgumentError);
  EXPECT_THROW(s.set_omega(3, FormField(2, fib)), ArgumentError);
  EXPECT_THROW(s.set_omega(0, FormField::constant(2, GradedDim{2, 0}, Mat::Identity(2, 2))), ArgumentError);
  EXPECT_THROW(s.set_scale(0.0), ArgumentError);
}

TEST(Superconnection, ShippedModelsAreUnitary) {
  for (const char* name : {"free-circle", "circle-holonomy", "circle-super", "t2-omega0-const", "t2-omega0-wave",
                           "t2-omega1-wave", "t2-mixed", "t2-nonabelian", "detline-winding"}) {
    const UnitaryAudit audit = check_unitary(load_model(name));
    EXPECT_TRUE(audit.pass) << name << " deviation " << audit.max_deviation;
  }
}

TEST(Superconnection, UnitaryAuditFlagsWrongSymmetry) {
  const Superconnection good = load_model("t2-mixed");
  Superconnection bad(good.base_dim(), good.fibre());
  bad.set_connection(cplx{0.0, 1.0} * good.connection());
  for (const auto& [i, w] : good.omegas()) bad.set_omega(i, w);
  const UnitaryAudit audit = check_unitary(bad);
  EXPECT_FALSE(audit.pass);
  ASSERT_FALSE(audit.terms.empty());
  EXPECT_EQ(audit.terms.front().name, "A");
  EXPECT_FALSE(audit.terms.front().pass);
  for (std::size_t i = 1; i < audit.terms.size(); ++i) EXPECT_TRUE(audit.terms[i].pass) << audit.terms[i].name;
  EXPECT_FALSE(unitary_requires_hermitian(1));
  EXPECT_FALSE(unitary_requires_hermitian(2));
  EXPECT_TRUE(unitary_requires_hermitian(3));
  EXPECT_TRUE(unitary_requires_hermitian(4));
}

TEST(Superconnection, AffinePathInterpolates) {
  const Superconnection s0 = load_model("t2-omega0-const");
  const Superconnection s1 = load_model("t2-mixed");
  EXPECT_EQ(form_distance(affine_odd_part(s0, s1, 0.0), s0.odd_part()), 0.0);
  EXPECT_EQ(form_distance(affine_odd_part(s0, s1, 1.0), s1.odd_part()), 0.0);
  EXPECT_THROW(require_same_bundle(s0, load_model("t2-nonabelian"), "test"), ArgumentError);
}

}  // namespace
}  // namespace superchern
