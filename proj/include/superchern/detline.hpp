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

// Determinant line of a finite-dimensional family over a parameter torus T².
// The family is a superconnection ∇ = 𝒟 + ∇̂ + Σ_{i>=2} ω_i whose degree-0
// term 𝒟(y) is the odd family operator. On the fibre det(V⁰)* ⊗ det(V¹) the
// connection 1-form is
//   θ = -sTr(A) + ½ sTr[(∇𝒟) g(𝒟)],   g(D) = (1 - e^{-D²}) D^{-1},
// where g is evaluated through its entire series and ∇𝒟 = [∇̂, 𝒟] is the
// 1-form part of the curvature. Then dθ = [sCh ∇]_2 and holonomy around a
// loop is exp(-∮ θ).

#include <superchern/chern.hpp>
#include <superchern/parallel.hpp>
#include <superchern/quadrature.hpp>
#include <superchern/superconnection.hpp>

#include <array>
#include <cmath>
#include <limits>
#include <vector>

namespace superchern {

/// g(D) = Σ_{k>=1} (-1)^{k+1} D^{2k-1} / k!, summed until the term norm drops
/// below `tol`. Entire in D, so no invertibility is needed.
inline GradedMatrix entire_g(const GradedMatrix& d, double tol = 1e-15) {
  if (d.parity() == Parity::mixed) throw ArgumentError("entire_g: D must be odd");
  if (d.parity() == Parity::even && max_abs(d.entries()) > 0.0) throw ArgumentError("entire_g: D must be odd");
  const Mat d2 = d.entries() * d.entries();
  Mat term = d.entries();
  Mat acc = term;
  for (int k = 1; k < 400; ++k) {
    term = (-1.0 / (k + 1)) * (term * d2);
    acc += term;
    if (max_abs(term) < tol) return {d.dim(), std::move(acc), Parity::odd};
  }
  throw NumericError("entire_g: series did not converge");
}

struct DetLinePoint {
  Point y{};
  GradedMatrix family;                 ///< 𝒟(y)
  std::array<cplx, 2> connection{};    ///< θ_1, θ_2
  cplx section;                        ///< det of the V⁰ -> V¹ block
  double min_singular = 0.0;           ///< of the same block
};

struct DetLineData {
  int grid_n = 0;
  Superconnection family;
  std::vector<DetLinePoint> points;    ///< grid order as in grid_point()
  FormField connection_form;           ///< Fourier fit of θ (scalar 1-form)
  int grade = 0;                       ///< dim V⁰ - dim V¹ mod 2, carried as metadata
  double max_real_part = 0.0;          ///< max |Re θ_j| over the grid
};

/// Pointwise θ(y).
inline std::array<cplx, 2> detline_connection_at(const Superconnection& s, const FormField& h, const Point& y) {
  const GradedDim fib = s.fibre();
  const GradedMatrix d(fib, s.effective_omega(0).component_or_zero(0U).evaluate(y), Parity::odd);
  const GradedMatrix g = entire_g(d);
  std::array<cplx, 2> theta{};
  for (int j = 0; j < 2; ++j) {
    const MultiIndex bit = MultiIndex{1} << j;
    const Mat a = s.connection().component_or_zero(bit).evaluate(y);
    const Mat hj = h.component_or_zero(bit).evaluate(y);
    theta[static_cast<std::size_t>(j)] = -supertrace(GradedMatrix(fib, a)) + 0.5 * supertrace(GradedMatrix(fib, hj * g.entries()));
  }
  return theta;
}

inline void require_family(const Superconnection& s) {
  if (s.base_dim() != 2) throw ArgumentError("detline: the parameter space must be T^2");
  if (s.omegas().count(0) == 0) throw ArgumentError("detline: decomposition is missing the degree-0 term");
}

/// Fills the determinant-line data on the N x N parameter grid.
inline DetLineData detline_connection(const Superconnection& s, int grid_n) {
  require_family(s);
  const FormField h = curvature(s).degree_part(1);
  detail::require_grid(grid_n, std::max(h.bandwidth(), s.bandwidth()), "detline_connection");
  DetLineData data;
  data.grid_n = grid_n;
  data.family = s;
  data.grade = ((s.fibre().even - s.fibre().odd) % 2 + 2) % 2;
  const int points = grid_n * grid_n;
  data.points.resize(static_cast<std::size_t>(points));
  const GradedDim fib = s.fibre();
  const MatrixFourier d0 = s.effective_omega(0).component_or_zero(0U);
  parallel_for(points, [&](int p) {
    DetLinePoint& pt = data.points[static_cast<std::size_t>(p)];
    pt.y = grid_point(2, grid_n, p);
    pt.family = GradedMatrix(fib, d0.evaluate(pt.y), Parity::odd);
    pt.connection = detline_connection_at(s, h, pt.y);
    if (fib.even == fib.odd) {
      const Mat block = pt.family.entries().block(fib.even, 0, fib.odd, fib.even);
      pt.section = fib.even == 0 ? cplx{1.0} : block.determinant();
      pt.min_singular = fib.even == 0 ? 1.0 : Eigen::JacobiSVD<Mat>(block).singularValues().minCoeff();
    }
  });
  std::vector<std::vector<cplx>> samples(static_cast<std::size_t>(points), std::vector<cplx>(4, cplx{}));
  for (int p = 0; p < points; ++p) {
    const DetLinePoint& pt = data.points[static_cast<std::size_t>(p)];
    samples[static_cast<std::size_t>(p)][1] = pt.connection[0];
    samples[static_cast<std::size_t>(p)][2] = pt.connection[1];
    data.max_real_part = std::max({data.max_real_part, std::abs(pt.connection[0].real()), std::abs(pt.connection[1].real())});
  }
  data.connection_form = scalar_form_from_samples(2, grid_n, samples);
  return data;
}

struct DetCurvatureReport {
  FormField curvature;           ///< dθ (exact Fourier derivative of the fit)
  FormField target;              ///< [sCh ∇]_2 on the same grid
  double max_coeff_deviation = 0.0;
  double max_point_deviation = 0.0;
  std::vector<cplx> curvature_samples;  ///< dx1∧dx2 coefficient on the grid
  std::vector<cplx> target_samples;
};

inline DetCurvatureReport detline_curvature(const DetLineData& data) {
  DetCurvatureReport r;
  r.curvature = ext_deriv(data.connection_form);
  r.target = chern_character(data.family, data.grid_n).degree_part(2);
  r.max_coeff_deviation = (r.curvature - r.target).max_coeff();
  const MatrixFourier c = r.curvature.component_or_zero(3U);
  const MatrixFourier t = r.target.component_or_zero(3U);
  r.curvature_samples = synthesize_grid(2, c.bandwidth(), c.entry_cube(0, 0), data.grid_n);
  r.target_samples = synthesize_grid(2, t.bandwidth(), t.entry_cube(0, 0), data.grid_n);
  for (std::size_t i = 0; i < r.curvature_samples.size(); ++i) {
    r.max_point_deviation = std::max(r.max_point_deviation, std::abs(r.curvature_samples[i] - r.target_samples[i]));
  }
  return r;
}

/// ∬_{[a1,b1]x[a2,b2]} of the dy1∧dy2 coefficient, exact on Fourier modes.
inline cplx rectangle_integral(const FormField& two_form, double a1, double b1, double a2, double b2) {
  if (two_form.base_dim() != 2) throw ArgumentError("rectangle_integral: needs a form on T^2");
  const MatrixFourier c = two_form.component_or_zero(3U);
  auto axis = [](int k, double a, double b) -> cplx {
    if (k == 0) return b - a;
    return (std::exp(cplx{0.0, k * b}) - std::exp(cplx{0.0, k * a})) / cplx{0.0, static_cast<double>(k)};
  };
  cplx acc{};
  for (int idx = 0; idx < c.num_modes(); ++idx) {
    const Freq k = c.freq(idx);
    acc += c.at_index(idx)(0, 0) * axis(k[0], a1, b1) * axis(k[1], a2, b2);
  }
  return acc;
}

enum class DetFrame { global, section };

struct LoopDescriptor {
  std::vector<std::array<double, 2>> vertices;  ///< closed polygon, last vertex joins the first
  int quad_order = 16;
  int panels = 8;                               ///< composite panels per edge
};

struct HolonomyResult {
  cplx holonomy;
  cplx loop_integral;        ///< ∮ θ in the global frame
  int winding = 0;           ///< winding of the section along the loop
  double min_section = 0.0;  ///< min |det| along the loop
};

/// exp(-∮ θ) by composite Gauss–Legendre quadrature along a polygonal loop.
/// In the section frame the loop must avoid the zero locus of det; the
/// frame change contributes exp(-2πi winding) = 1.
inline HolonomyResult detline_holonomy(const DetLineData& data, const LoopDescriptor& loop,
                                       DetFrame frame = DetFrame::global, double zero_threshold = 1e-8) {
  if (loop.vertices.size() < 2) throw ArgumentError("detline_holonomy: loop needs at least two vertices");
  const Superconnection& s = data.family;
  const FormField h = curvature(s).degree_part(1);
  const QuadratureRule rule = gauss_legendre(loop.quad_order, 0.0, 1.0);
  const MatrixFourier d0 = s.effective_omega(0).component_or_zero(0U);
  const GradedDim fib = s.fibre();
  auto section_at = [&](const Point& y) {
    const Mat m = d0.evaluate(y);
    if (fib.even != fib.odd || fib.even == 0) return cplx{1.0};
    return cplx{m.block(fib.even, 0, fib.odd, fib.even).determinant()};
  };
  HolonomyResult r;
  r.min_section = std::numeric_limits<double>::infinity();
  double phase = 0.0;
  cplx prev = section_at(Point{loop.vertices[0][0], loop.vertices[0][1]});
  const std::size_t nv = loop.vertices.size();
  for (std::size_t e = 0; e < nv; ++e) {
    const auto& p0 = loop.vertices[e];
    const auto& p1 = loop.vertices[(e + 1) % nv];
    const double dy1 = p1[0] - p0[0];
    const double dy2 = p1[1] - p0[1];
    for (int panel = 0; panel < loop.panels; ++panel) {
      for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        const double u = (panel + rule.nodes[q]) / loop.panels;
        const Point y{p0[0] + u * dy1, p0[1] + u * dy2};
        const std::array<cplx, 2> th = detline_connection_at(s, h, y);
        r.loop_integral += (rule.weights[q] / loop.panels) * (th[0] * dy1 + th[1] * dy2);
      }
      // section phase tracking on a fine sub-sampling of the panel
      for (int sub = 1; sub <= 16; ++sub) {
        const double u = (panel + sub / 16.0) / loop.panels;
        const cplx cur = section_at(Point{p0[0] + u * dy1, p0[1] + u * dy2});
        r.min_section = std::min(r.min_section, std::abs(cur));
        if (std::abs(cur) > 0.0 && std::abs(prev) > 0.0) phase += std::arg(cur / prev);
        prev = cur;
      }
    }
  }
  r.winding = static_cast<int>(std::lround(phase / kTwoPi));
  cplx integral = r.loop_integral;
  if (frame == DetFrame::section) {
    if (r.min_section < zero_threshold) {
      throw GuardError("detline_holonomy: loop passes through the zero locus of the section (min |det| = " +
                       std::to_string(r.min_section) + ")");
    }
    integral += cplx{0.0, kTwoPi * r.winding};
  }
  r.holonomy = std::exp(-integral);
  return r;
}

}  // namespace superchern
