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

std::vector<double> golden_spectrum(const std::string& model) {
  const json doc = read_json_file(std::string(SUPERCHERN_DATA_DIR) + "/golden/spectrum-" + model + ".json");
  return doc.at("eigenvalues").get<std::vector<double>>();
}

TEST(DiracSpectral, SpectraMatchGoldenFiles) {
  for (const char* name : {"free-circle", "circle-holonomy", "t2-omega0-const"}) {
    const std::vector<double> expect = golden_spectrum(name);
    const std::vector<double> got = assemble_dirac(load_model(name), 4).spectrum();
    ASSERT_EQ(got.size(), expect.size()) << name;
    for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], expect[i], 1e-12) << name << " #" << i;
  }
}

TEST(DiracSpectral, OperatorIsHermitianAndOdd) {
  for (const char* name : {"circle-super", "t2-mixed", "t2-nonabelian", "t2-omega1-wave"}) {
    for (double scale : {1.0, 0.3}) {
      const SpectralDirac d = assemble_dirac(scale_action(load_model(name), scale), 3);
      EXPECT_LT(d.hermiticity_residual(), 1e-14) << name;
      EXPECT_EQ(d.grading_residual(), 0.0) << name;
      EXPECT_TRUE(d.is_hermitian());
    }
  }
}

TEST(DiracSpectral, NonUnitaryInputIsRejected) {
  const Superconnection good = load_model("t2-mixed");
  Superconnection bad(2, good.fibre());
  bad.set_connection(cplx{0.0, 1.0} * good.connection());
  const SpectralDirac d = assemble_dirac(bad, 4);
  EXPECT_FALSE(d.is_hermitian());
  EXPECT_THROW(d.sectors(), ArgumentError);
  EXPECT_THROW(mckean_singer_index(bad, 8, 1.0, 1.0), ArgumentError);
}

TEST(DiracSpectral, AssemblyArguments) {
  EXPECT_THROW(assemble_dirac(load_model("t2-mixed"), 0), ArgumentError);
  EXPECT_THROW(assemble_dirac(Superconnection(3, {1, 0}), 4), ArgumentError);
  Superconnection wide(2, {1, 1});
  FormField w(2, {1, 1});
  MatrixFourier c(2, 3, 2, 2);
  c.at(Freq{3, 0}) = Mat::Identity(2, 2);
  c.at(Freq{-3, 0}) = Mat::Identity(2, 2);
  w.set(0b01, c);
  wide.set_connection(cplx{0.0, 1.0} * w);
  EXPECT_THROW(assemble_dirac(wide, 2), ArgumentError);
}

TEST(DiracSpectral, FreeCircleHeatDiagonalIsTheta) {
  const SpectralDirac d16 = assemble_dirac(load_model("free-circle"), 16);
  const HeatDiagonalSample p = heat_diagonal(d16, 1.0, Point{0.7});
  EXPECT_NEAR(p.value.entries()(0, 0).real(), 0.282123973456762239, 1e-14);
  EXPECT_NEAR(std::abs(supertrace(p.value)), 0.0, 1e-14);
  const SpectralDirac d32 = assemble_dirac(load_model("free-circle"), 32);
  EXPECT_NEAR(heat_diagonal(d32, 0.5, Point{2.0}).value.entries()(0, 0).real(), 0.398942282536003662, 1e-14);
}

TEST(DiracSpectral, ShiftedCircleHeatDiagonalIsShiftedTheta) {
  const SpectralDirac d = assemble_dirac(load_model("circle-holonomy"), 16);
  EXPECT_NEAR(heat_diagonal(d, 1.0, Point{1.3}).value.entries()(0, 0).real(), 0.282094791773878139, 1e-14);
}

TEST(DiracSpectral, HeatGuard) {
  const SpectralDirac d = assemble_dirac(load_model("free-circle"), 4);
  EXPECT_THROW(heat_diagonal(d, 0.5, Point{}), GuardError);
  EXPECT_NO_THROW(heat_diagonal(d, 1.25, Point{}));
  EXPECT_THROW(mckean_singer_index(load_model("t2-mixed"), 8, 0.1, 1.0), GuardError);
}

TEST(DiracSpectral, McKeanSingerIsIndependentOfTimeAndScale) {
  for (const char* name : {"t2-omega0-const", "t2-mixed"}) {
    const Superconnection s = load_model(name);
    std::vector<cplx> values;
    for (double scale : {0.5, 2.0}) {
      for (double t : {1.0, 2.0}) values.push_back(mckean_singer_index(s, 6, t, scale).value);
    }
    for (const cplx& v : values) {
      EXPECT_LT(std::abs(v - values.front()), 1e-8) << name;
      EXPECT_LT(std::abs(v - std::round(v.real())), 1e-6) << name;
    }
  }
  EXPECT_LT(std::abs(mckean_singer_index(load_model("t2-omega0-const"), 8, 1.0, 1.0).value), 1e-8);
}

TEST(DiracSpectral, LocalIndexApproachesCharacterDensity) {
  const Superconnection s = load_model("t2-omega1-wave");
  const Point x{0.0, kPi / 2};
  const std::vector<LocalIndexRow> rows = local_index_scan(s, 24, {0.2, 0.1, 0.05}, x);
  ASSERT_EQ(rows.size(), 3U);
  EXPECT_NEAR(rows.front().target.real(), -1.0 / (2.0 * kPi), 1e-12);
  double previous = std::numeric_limits<double>::infinity();
  for (const LocalIndexRow& r : rows) {
    const double gap = std::abs(r.strace - r.target);
    EXPECT_LT(gap, previous) << "t=" << r.t;
    EXPECT_LT(r.trunc_bound, 1e-6) << "t=" << r.t;
    EXPECT_EQ(r.s, 1.0 / r.t);
    previous = gap;
  }
  EXPECT_LT(previous, 0.05 / (2.0 * kPi));
  EXPECT_THROW(local_index_scan(load_model("circle-super"), 8, {1.0}, Point{}), ArgumentError);
}

TEST(DiracSpectral, AsymptoticFitRecoversSyntheticCoefficients) {
  const std::vector<cplx> a{{0.0, 0.0}, {0.25, -0.5}, {1.5, 0.0}, {-0.75, 0.125}};
  std::vector<double> t;
  std::vector<cplx> v;
  for (double tt = 0.05; tt < 1.0; tt *= 1.6) {
    t.push_back(tt);
    cplx sum{};
    for (std::size_t k = 0; k < a.size(); ++k) sum += a[k] * std::pow(tt, static_cast<double>(k) - 1.0);
    v.push_back(sum);
  }
  const AsymptoticFit fit = asymptotic_fit(t, v, 2, 4);
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_LT(std::abs(fit.coefficients[k] - a[k]), 1e-9) << k;
  EXPECT_TRUE(fit.divergence_cancels);
  EXPECT_EQ(fit.powers.front(), -1.0);
  EXPECT_THROW(asymptotic_fit({0.1, 0.2, 0.3}, {1.0, 1.0, 1.0}, 2, 2), ArgumentError);
  EXPECT_THROW(asymptotic_fit({0.50, 0.55, 0.6, 0.65, 0.7}, std::vector<cplx>(5), 2, 2), ArgumentError);
}

}  // namespace
}  // namespace superchern
