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

// Characteristic forms of superconnections. Exterior calculus stays exact in
// Fourier space; exp(-F) is taken pointwise on a sample grid and projected
// back, with the unresolved (Nyquist) content and the certified-zero parity
// components reported.

#include <superchern/form_algebra.hpp>
#include <superchern/parallel.hpp>
#include <superchern/quadrature.hpp>
#include <superchern/superconnection.hpp>

#include <array>
#include <cmath>
#include <vector>

namespace superchern {

/// Bound on the form components a parity argument says must vanish.
inline constexpr double kParityCertTol = 1e-12;

struct GridDiagnostics {
  int grid_n = 0;
  int input_bandwidth = 0;
  double dropped_parity_max = 0.0;  ///< largest discarded component (certified <= 1e-12)
  double nyquist_max = 0.0;         ///< unresolved content at the Nyquist frequency
};

namespace detail {

inline void require_grid(int grid_n, int bandwidth, const char* what) {
  if (!is_power_of_two(grid_n)) throw GuardError(std::string(what) + ": grid_N must be a power of two");
  if (grid_n < 2 * bandwidth + 2) {
    throw GuardError(std::string(what) + ": grid_N = " + std::to_string(grid_n) + " aliases bandwidth " +
                     std::to_string(bandwidth) + " (need grid_N >= 2K + 2)");
  }
}

/// Projects per-point supertraces onto Fourier coefficients, keeping the
/// form degrees of parity `keep` and certifying the others vanish.
inline FormField project_supertraces(int n, int grid_n, std::vector<std::vector<cplx>>& values, int keep,
                                     GridDiagnostics* diag, const char* what) {
  double dropped = 0.0;
  for (auto& row : values) {
    for (MultiIndex m = 0; m < row.size(); ++m) {
      if (degree(m) % 2 != keep) {
        dropped = std::max(dropped, std::abs(row[m]));
        row[m] = 0.0;
      }
    }
  }
  if (dropped > kParityCertTol) {
    throw NumericError(std::string(what) + ": parity-forbidden components reach " + std::to_string(dropped));
  }
  ProjectionReport rep;
  FormField out = scalar_form_from_samples(n, grid_n, values, &rep);
  if (diag != nullptr) {
    diag->grid_n = grid_n;
    diag->dropped_parity_max = dropped;
    diag->nyquist_max = rep.nyquist_max;
  }
  return out;
}

}  // namespace detail

/// sCh(∇) = sTr exp(-∇²) as a scalar even form.
inline FormField chern_character(const Superconnection& s, int grid_n, GridDiagnostics* diag = nullptr) {
  const FormField f = curvature(s);
  detail::require_grid(grid_n, f.bandwidth(), "chern_character");
  const int n = s.base_dim();
  const std::vector<PointForm> samples = sample_grid(f, grid_n);
  std::vector<std::vector<cplx>> st(samples.size());
  parallel_for(static_cast<int>(samples.size()),
               [&](int p) { st[static_cast<std::size_t>(p)] = exp_neg(samples[static_cast<std::size_t>(p)]).supertraces(); });
  FormField out = detail::project_supertraces(n, grid_n, st, 0, diag, "chern_character");
  if (diag != nullptr) diag->input_bandwidth = f.bandwidth();
  return out;
}

namespace detail {

/// Grid samples of the pieces of F_t = F0 + t G1 + t² G2 along the affine
/// path L_t = L0 + t Δ, and of Δ itself.
struct PathSamples {
  std::vector<PointForm> f0, g1, g2, delta;
  int bandwidth = 0;
};

inline PathSamples sample_path(const Superconnection& s0, const Superconnection& s1, int grid_n, const char* what) {
  require_same_bundle(s0, s1, what);
  const FormField l0 = s0.odd_part();
  const FormField delta = s1.odd_part() - l0;
  const FormField f0 = ext_deriv(l0) + wedge(l0, l0);
  const FormField g1 = ext_deriv(delta) + wedge(l0, delta) + wedge(delta, l0);
  const FormField g2 = wedge(delta, delta);
  PathSamples ps;
  ps.bandwidth = std::max({f0.bandwidth(), g1.bandwidth(), g2.bandwidth(), delta.bandwidth()});
  require_grid(grid_n, ps.bandwidth, what);
  ps.f0 = sample_grid(f0, grid_n);
  ps.g1 = sample_grid(g1, grid_n);
  ps.g2 = sample_grid(g2, grid_n);
  ps.delta = sample_grid(delta, grid_n);
  return ps;
}

inline PointForm path_curvature(const PathSamples& ps, std::size_t p, double t) {
  return ps.f0[p] + cplx{t} * ps.g1[p] + cplx{t * t} * ps.g2[p];
}

}  // namespace detail

/// sTr[Δ e^{-F_t}] along the affine path, as a scalar odd form.
inline FormField path_transgression_density(const Superconnection& s0, const Superconnection& s1, double t,
                                            int grid_n, GridDiagnostics* diag = nullptr) {
  const detail::PathSamples ps = detail::sample_path(s0, s1, grid_n, "transgression");
  std::vector<std::vector<cplx>> st(ps.f0.size());
  parallel_for(static_cast<int>(ps.f0.size()), [&](int p) {
    const auto q = static_cast<std::size_t>(p);
    st[q] = (ps.delta[q] * exp_neg(detail::path_curvature(ps, q, t))).supertraces();
  });
  return detail::project_supertraces(s0.base_dim(), grid_n, st, 1, diag, "transgression");
}

inline Superconnection affine_point(const Superconnection& s0, const Superconnection& s1, double t) {
  require_same_bundle(s0, s1, "affine_point");
  const Superconnection b0 = s0.baked();
  const Superconnection b1 = s1.baked();
  Superconnection out(s0.base_dim(), s0.fibre());
  out.set_connection(cplx{1.0 - t} * b0.connection() + cplx{t} * b1.connection());
  for (const auto& [i, w] : b0.omegas()) out.set_omega(i, cplx{1.0 - t} * w + cplx{t} * b1.effective_omega(i));
  for (const auto& [i, w] : b1.omegas()) {
    if (b0.omegas().count(i) == 0) out.set_omega(i, cplx{t} * w);
  }
  return out;
}

struct TransgressionResult {
  FormField lhs_h;             ///< central difference with step h
  FormField lhs_half;          ///< central difference with step h/2
  FormField lhs_extrapolated;  ///< Richardson combination (4 D(h/2) - D(h)) / 3
  FormField rhs;               ///< -d sTr[∇̇ e^{-∇²}]
  double residual_h = 0.0;
  double residual_half = 0.0;
  double residual_extrapolated = 0.0;
};

/// Both sides of ∂_t sCh(∇_t) = -d sTr[∇̇_t e^{-∇_t²}] on the affine path.
inline TransgressionResult transgression_check(const Superconnection& s0, const Superconnection& s1, double t,
                                               int grid_n, double h = 1e-2) {
  if (!(h > 0.0)) throw ArgumentError("transgression_check: step must be positive");
  auto sch = [&](double tt) { return chern_character(affine_point(s0, s1, tt), grid_n); };
  TransgressionResult r;
  r.lhs_h = cplx{1.0 / (2.0 * h)} * (sch(t + h) - sch(t - h));
  r.lhs_half = cplx{1.0 / h} * (sch(t + 0.5 * h) - sch(t - 0.5 * h));
  r.lhs_extrapolated = cplx{4.0 / 3.0} * r.lhs_half - cplx{1.0 / 3.0} * r.lhs_h;
  r.rhs = cplx{-1.0} * ext_deriv(path_transgression_density(s0, s1, t, grid_n));
  r.residual_h = (r.lhs_h - r.rhs).max_coeff();
  r.residual_half = (r.lhs_half - r.rhs).max_coeff();
  r.residual_extrapolated = (r.lhs_extrapolated - r.rhs).max_coeff();
  return r;
}

/// α[S0,S1] = ∫_0^1 sTr[(S1 - S0) e^{-((1-t)S0 + tS1)²}] dt by Gauss–Legendre
/// quadrature; dα = sCh(S0) - sCh(S1).
inline FormField chern_simons(const Superconnection& s0, const Superconnection& s1, int quad_order, int grid_n,
                              GridDiagnostics* diag = nullptr) {
  const detail::PathSamples ps = detail::sample_path(s0, s1, grid_n, "chern_simons");
  const QuadratureRule rule = gauss_legendre(quad_order, 0.0, 1.0);
  std::vector<std::vector<cplx>> st(ps.f0.size());
  parallel_for(static_cast<int>(ps.f0.size()), [&](int p) {
    const auto q = static_cast<std::size_t>(p);
    std::vector<cplx> acc(std::size_t{1} << s0.base_dim(), cplx{});
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      const std::vector<cplx> v = (ps.delta[q] * exp_neg(detail::path_curvature(ps, q, rule.nodes[k]))).supertraces();
      for (std::size_t m = 0; m < acc.size(); ++m) acc[m] += rule.weights[k] * v[m];
    }
    st[q] = std::move(acc);
  });
  FormField out = detail::project_supertraces(s0.base_dim(), grid_n, st, 1, diag, "chern_simons");
  if (diag != nullptr) diag->input_bandwidth = ps.bandwidth;
  return out;
}

// ---------------------------------------------------------------------------
// Â-genus and the Mehler kernel

/// An n x n matrix of scalar 2-forms (row-major), e.g. a Riemannian curvature.
struct CurvatureMatrix {
  int n = 0;
  std::vector<FormField> entries;

  static CurvatureMatrix zero(int n) {
    CurvatureMatrix r;
    r.n = n;
    r.entries.assign(static_cast<std::size_t>(n * n), FormField::scalar(n));
    return r;
  }
  FormField& operator()(int i, int j) { return entries[static_cast<std::size_t>(i * n + j)]; }
  const FormField& operator()(int i, int j) const { return entries[static_cast<std::size_t>(i * n + j)]; }
};

inline void check_curvature_matrix(const CurvatureMatrix& r) {
  if (r.entries.size() != static_cast<std::size_t>(r.n * r.n)) throw ArgumentError("a_hat: R must be n x n");
  for (int i = 0; i < r.n; ++i) {
    for (int j = 0; j < r.n; ++j) {
      const FormField& e = r(i, j);
      if (e.base_dim() != r.n || !(e.fibre() == GradedDim{1, 0})) {
        throw ArgumentError("a_hat: entries must be scalar forms on the base");
      }
      for (const auto& [mask, f] : e.components()) {
        if (degree(mask) != 2 && f.max_coeff() > 0.0) throw ArgumentError("a_hat: entries must be 2-forms");
      }
      if ((e + r(j, i)).max_coeff() > 1e-12) throw ArgumentError("a_hat: R is not antisymmetric");
    }
  }
}

namespace detail {

inline std::vector<FormField> matrix_form_product(int n, const std::vector<FormField>& a, const std::vector<FormField>& b) {
  std::vector<FormField> out(static_cast<std::size_t>(n * n), FormField::scalar(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        out[static_cast<std::size_t>(i * n + j)] +=
            wedge(a[static_cast<std::size_t>(i * n + k)], b[static_cast<std::size_t>(k * n + j)]);
      }
    }
  }
  return out;
}

}  // namespace detail

/// Â(R) = det^{1/2}((R/2)/sinh(R/2))
///      = exp( Σ_k -(2^{2k} B_{2k} / (4k (2k)!)) tr((R/2)^{2k}) ),
/// truncated at form degree n.
inline FormField a_hat(const CurvatureMatrix& r) {
  check_curvature_matrix(r);
  const int n = r.n;
  FormField one = FormField::constant(n, {1, 0}, Mat::Identity(1, 1));
  // Bernoulli numbers B_2, B_4; degree 4k <= n <= 4 needs only k = 1
  const std::array<double, 2> bernoulli{1.0 / 6.0, -1.0 / 30.0};
  std::vector<FormField> half(r.entries.size());
  for (std::size_t i = 0; i < half.size(); ++i) half[i] = cplx{0.5} * r.entries[i];
  const std::vector<FormField> sq = detail::matrix_form_product(n, half, half);
  FormField x = FormField::scalar(n);
  std::vector<FormField> power = sq;
  for (int k = 1; 4 * k <= n; ++k) {
    if (k > static_cast<int>(bernoulli.size())) break;
    FormField tr = FormField::scalar(n);
    for (int i = 0; i < n; ++i) tr += power[static_cast<std::size_t>(i * n + i)];
    double fact = 1.0;
    for (int m = 2; m <= 2 * k; ++m) fact *= m;
    const double c = -std::pow(2.0, 2 * k) * bernoulli[static_cast<std::size_t>(k - 1)] / (4.0 * k * fact);
    x += cplx{c} * tr;
    power = detail::matrix_form_product(n, power, sq);
  }
  // exp of a nilpotent even form; every power raises the degree by >= 4
  FormField out = one;
  FormField term = one;
  for (int m = 1; 4 * m <= n; ++m) {
    term = cplx{1.0 / m} * wedge(term, x);
    out += term;
  }
  return out;
}

/// Scalar form times matrix form at a point (the scalar is even, no signs
/// beyond the wedge reordering).
inline PointForm scalar_times(const PointForm& scalar, const PointForm& m) {
  PointForm out(m.base_dim(), m.fibre());
  for (MultiIndex i = 0; i < static_cast<MultiIndex>(scalar.num_components()); ++i) {
    const cplx a = scalar[i](0, 0);
    if (a == cplx{}) continue;
    for (MultiIndex j = 0; j < static_cast<MultiIndex>(m.num_components()); ++j) {
      const int s = wedge_sign(i, j);
      if (s != 0) out[i | j] += (static_cast<double>(s) * a) * m[j];
    }
  }
  return out;
}

/// (4πt)^{-n/2} Â(tR) exp(-t F_s) at the point x, where F_s is the curvature
/// of the s-scaled superconnection.
inline PointForm mehler_diagonal(const CurvatureMatrix& r, const Superconnection& s, double t, double scale,
                                 const Point& x) {
  if (!(t > 0.0)) throw ArgumentError("mehler_diagonal: t must be positive");
  if (r.n != s.base_dim()) throw ArgumentError("mehler_diagonal: R and the superconnection disagree on n");
  const int n = s.base_dim();
  CurvatureMatrix tr = r;
  for (FormField& e : tr.entries) e *= cplx{t};
  const PointForm ahat = sample_point(a_hat(tr), x);
  const PointForm f = sample_point(curvature(scale_action(s, scale)), x);
  PointForm out = scalar_times(ahat, exp_neg(cplx{t} * f));
  out *= cplx{std::pow(4.0 * kPi * t, -0.5 * n)};
  return out;
}

/// Spinor supertrace density of the Mehler kernel: (-2i)^{n/2} sTr of the
/// top component (the Berezin integral).
inline cplx mehler_index_density(const CurvatureMatrix& r, const Superconnection& s, double t, double scale,
                                 const Point& x) {
  const int n = s.base_dim();
  if (n % 2 != 0) throw ArgumentError("mehler_index_density: n must be even");
  const PointForm m = mehler_diagonal(r, s, t, scale, x);
  return std::pow(cplx{0.0, -2.0}, n / 2) * supertrace(GradedMatrix(m.fibre(), m[top_index(n)]));
}

/// (2πi)^{-n/2} times the top coefficient of a scalar form at x.
inline cplx index_density_target(const FormField& form, const Point& x) {
  const int n = form.base_dim();
  const MultiIndex top = top_index(n);
  if (!form.has(top)) return 0.0;
  return std::pow(cplx{0.0, kTwoPi}, -0.5 * n) * form.component(top).evaluate(x)(0, 0);
}

}  // namespace superchern
