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

// η and τ invariants on the circle. The Dirac operator of d + A on S¹ has
// spectrum ∪_j {k + a_j : k ∈ Z}, where e^{-2πi a_j} are the holonomy
// eigenvalues, so everything reduces to η of an arithmetic progression.

#include <superchern/chern.hpp>
#include <superchern/superconnection.hpp>

#include <cmath>
#include <optional>
#include <vector>

namespace superchern {

/// ζ(s, a) = Σ_{k>=0} (k + a)^{-s}, continued to s ≠ 1 by Euler–Maclaurin
/// with `terms` explicit summands and Bernoulli corrections through B_12.
inline double hurwitz_zeta(double s, double a, int terms = 32) {
  if (!(a > 0.0)) throw ArgumentError("hurwitz_zeta: a must be positive");
  if (s == 1.0) throw ArgumentError("hurwitz_zeta: pole at s = 1");
  double sum = 0.0;
  for (int k = terms - 1; k >= 0; --k) sum += std::pow(k + a, -s);
  const double x = terms + a;
  sum += std::pow(x, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(x, -s);
  // Σ_j B_{2j}/(2j)! s(s+1)...(s+2j-2) x^{-s-2j+1}
  static constexpr double kB[] = {1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30, 5.0 / 66, -691.0 / 2730};
  double rising = s;  // s(s+1)...(s+2j-2)
  double fact = 2.0;  // (2j)!
  for (int j = 1; j <= 6; ++j) {
    sum += kB[j - 1] / fact * rising * std::pow(x, -s - 2.0 * j + 1.0);
    rising *= (s + 2.0 * j - 1.0) * (s + 2.0 * j);
    fact *= (2.0 * j + 1.0) * (2.0 * j + 2.0);
  }
  return sum;
}

/// a reduced to [0, 1).
inline double reduce_mod_one(double a) {
  double r = a - std::floor(a);
  if (r >= 1.0) r -= 1.0;
  return r;
}

struct EtaResult {
  double a = 0.0;            ///< reduced parameter in [0, 1)
  double eta_zeta = 0.0;     ///< ζ(0, a) - ζ(0, 1 - a)
  double eta_heat = 0.0;     ///< Richardson-extrapolated Σ sign(λ) erfc(δ|λ|)
  double difference = 0.0;
  int kernel_dim = 0;
  double xi() const { return 0.5 * (eta_zeta + kernel_dim); }
};

/// Σ_λ sign(λ) erfc(δ|λ|) over λ = k + a, a ∈ (0,1), summed smallest terms first.
inline double eta_heat_smoothed(double a, double delta) {
  const int kmax = static_cast<int>(std::ceil(7.0 / delta)) + 2;
  double sum = 0.0;
  for (int k = kmax; k >= 0; --k) sum += std::erfc(delta * (k + a)) - std::erfc(delta * (k + 1.0 - a));
  return sum;
}

/// η of the spectrum {k + a}, by Hurwitz-ζ continuation and, independently,
/// by erfc-smoothed partial sums with Richardson extrapolation in δ.
inline EtaResult eta_invariant_circle(double a) {
  if (!std::isfinite(a)) throw ArgumentError("eta_invariant_circle: a must be finite");
  EtaResult r;
  r.a = reduce_mod_one(a);
  if (r.a < 1e-14 || r.a > 1.0 - 1e-14) {
    r.a = 0.0;
    r.kernel_dim = 1;
    return r;  // symmetric spectrum with a single zero mode
  }
  r.eta_zeta = hurwitz_zeta(0.0, r.a) - hurwitz_zeta(0.0, 1.0 - r.a);
  // the smoothed sum has an error expansion in odd powers starting at δ³
  const double d = 2e-3;
  const double e1 = eta_heat_smoothed(r.a, d);
  const double e2 = eta_heat_smoothed(r.a, 0.5 * d);
  r.eta_heat = (8.0 * e2 - e1) / 7.0;
  r.difference = std::abs(r.eta_zeta - r.eta_heat);
  return r;
}

/// Parallel transport of d + A around S¹ (u' = -A_θ u), fourth-order Magnus
/// with Gauss points. Returns the holonomy matrix.
inline Mat circle_holonomy(const FormField& a, int steps = 4096) {
  if (a.base_dim() != 1) throw ArgumentError("circle_holonomy: base must be the circle");
  const int d = a.fibre().total();
  const MatrixFourier coeff = a.component_or_zero(1U);
  const double h = kTwoPi / steps;
  const double c1 = 0.5 - std::sqrt(3.0) / 6.0;
  const double c2 = 0.5 + std::sqrt(3.0) / 6.0;
  Mat u = Mat::Identity(d, d);
  for (int i = 0; i < steps; ++i) {
    const double t0 = i * h;
    const Mat b1 = -coeff.evaluate(Point{t0 + c1 * h});
    const Mat b2 = -coeff.evaluate(Point{t0 + c2 * h});
    const Mat omega = 0.5 * h * (b1 + b2) + (std::sqrt(3.0) / 12.0) * h * h * (b2 * b1 - b1 * b2);
    u = expm(omega) * u;
  }
  return u;
}

struct HolonomyMode {
  double a = 0.0;    ///< -arg(λ)/2π mod 1
  bool even = true;  ///< from the V⁰ block
};

/// Holonomy eigen-parameters of each graded block.
inline std::vector<HolonomyMode> holonomy_modes(const FormField& connection) {
  const GradedDim fib = connection.fibre();
  const Mat u = circle_holonomy(connection);
  std::vector<HolonomyMode> out;
  auto block = [&](int start, int size, bool even) {
    if (size == 0) return;
    Eigen::ComplexEigenSolver<Mat> es(u.block(start, start, size, size));
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
      out.push_back({reduce_mod_one(-std::arg(es.eigenvalues()(i)) / kTwoPi), even});
    }
  };
  block(0, fib.even, true);
  block(fib.even, fib.odd, false);
  return out;
}

struct TauResult {
  cplx tau;                ///< τ(S)
  cplx tau_connection;     ///< τ(∇̂) = e^{2πiξ}
  double xi = 0.0;         ///< supertrace-weighted Σ (η_j + dim ker_j) / 2
  cplx cs_integral;        ///< ∫_{S¹} [α[S, ∇̂]]_1
  std::vector<HolonomyMode> modes;
};

/// τ(S) = τ(∇̂) exp(∫_{S¹} α[S, ∇̂]) with ∇̂ = d + reference connection
/// (default: the connection part of S). Â = 1 on the flat circle and the
/// normalisation (2πi)^0 = 1.
inline TauResult tau_superconnection_circle(const Superconnection& s,
                                            const std::optional<FormField>& reference = std::nullopt,
                                            int quad_order = 32, int grid_n = 64) {
  if (s.base_dim() != 1) throw ArgumentError("tau_superconnection_circle: base must be the circle");
  const UnitaryAudit audit = check_unitary(s);
  if (!audit.pass) throw ArgumentError("tau_superconnection_circle: superconnection is not unitary");
  Superconnection hat(1, s.fibre());
  hat.set_connection(reference.value_or(s.connection()));
  if (!check_unitary(hat).pass) throw ArgumentError("tau_superconnection_circle: reference connection is not unitary");

  TauResult r;
  r.modes = holonomy_modes(hat.connection());
  for (const HolonomyMode& m : r.modes) {
    const EtaResult e = eta_invariant_circle(m.a);
    r.xi += (m.even ? 0.5 : -0.5) * (e.eta_zeta + e.kernel_dim);
  }
  r.tau_connection = std::exp(cplx{0.0, kTwoPi * r.xi});
  const FormField alpha = chern_simons(s, hat, quad_order, grid_n);
  r.cs_integral = integrate_top(alpha).entries()(0, 0);
  r.tau = r.tau_connection * std::exp(r.cs_integral);
  return r;
}

}  // namespace superchern
