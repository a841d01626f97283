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

// A superconnection on the trivial graded bundle T^n x V,
//   ∇ = d + A + Σ_{i≠1} ω_i,
// with A an even-matrix 1-form and ω_i an i-form whose matrix parity is
// (1 - i) mod 2, so every term is odd in the total grading. The R^x action
// is stored as a scale s and applied lazily: the effective i-form term is
// |s|^{(1-i)/2} ω_i.

#include <superchern/form_algebra.hpp>

#include <cmath>
#include <map>
#include <string>
#include <vector>

namespace superchern {

class Superconnection {
 public:
  Superconnection() = default;
  Superconnection(int n, GradedDim fibre) : n_(n), fibre_(fibre), a_(n, fibre) {}

  int base_dim() const { return n_; }
  const GradedDim& fibre() const { return fibre_; }
  const FormField& connection() const { return a_; }
  const std::map<int, FormField>& omegas() const { return omegas_; }
  double scale() const { return scale_; }

  void set_connection(FormField a) {
    require_bundle(a);
    for (const auto& [mask, f] : a.components()) {
      if (degree(mask) != 1) throw ArgumentError("Superconnection: connection must be a pure 1-form");
    }
    if (!matrix_parity_is(a, Parity::even)) throw ArgumentError("Superconnection: connection coefficients must be even");
    a_ = std::move(a);
  }

  /// Installs the i-form term ω_i (i ≠ 1; the 1-form term is the connection).
  void set_omega(int i, FormField w) {
    if (i == 1) throw ArgumentError("Superconnection: the 1-form term is the connection");
    if (i < 0 || i > n_) throw ArgumentError("Superconnection: omega degree out of range");
    require_bundle(w);
    for (const auto& [mask, f] : w.components()) {
      if (degree(mask) != i) throw ArgumentError("Superconnection: omega_" + std::to_string(i) + " must be a pure form");
    }
    if (!matrix_parity_is(w, parity_from_int(i + 1))) {
      throw ArgumentError("Superconnection: omega_" + std::to_string(i) + " must have matrix parity (1 - i) mod 2");
    }
    omegas_[i] = std::move(w);
  }

  void set_scale(double s) {
    if (s == 0.0 || !std::isfinite(s)) throw ArgumentError("Superconnection: scale must be a nonzero real");
    scale_ = s;
  }

  /// |s|^{(1-i)/2}
  double omega_factor(int i) const { return std::pow(std::abs(scale_), 0.5 * (1 - i)); }

  FormField effective_omega(int i) const {
    auto it = omegas_.find(i);
    if (it == omegas_.end()) return FormField(n_, fibre_);
    return cplx{omega_factor(i)} * it->second;
  }

  /// The odd form L = A + Σ |s|^{(1-i)/2} ω_i, so that ∇ = d + L.
  FormField odd_part() const {
    FormField l = a_;
    for (const auto& [i, w] : omegas_) l += effective_omega(i);
    return l;
  }

  /// Copy with the scale folded into the ω_i and reset to 1.
  Superconnection baked() const {
    Superconnection out(n_, fibre_);
    out.a_ = a_;
    for (const auto& [i, w] : omegas_) out.omegas_[i] = effective_omega(i);
    return out;
  }

  int bandwidth() const {
    int k = a_.bandwidth();
    for (const auto& [i, w] : omegas_) k = std::max(k, w.bandwidth());
    return k;
  }

 private:
  void require_bundle(const FormField& f) const {
    if (f.base_dim() != n_) throw ArgumentError("Superconnection: base dimension mismatch");
    if (!(f.fibre() == fibre_)) throw ArgumentError("Superconnection: fibre mismatch");
  }

  bool matrix_parity_is(const FormField& f, Parity want) const {
    for (const auto& [mask, c] : f.components()) {
      for (int idx = 0; idx < c.num_modes(); ++idx) {
        const Mat& m = c.at_index(idx);
        if (max_abs(m) <= kParityTol) continue;
        if (detect_parity(fibre_, m) != want) return false;
      }
    }
    return true;
  }

  int n_ = 0;
  GradedDim fibre_{1, 0};
  FormField a_;
  std::map<int, FormField> omegas_;
  double scale_ = 1.0;
};

/// R^x action: A fixed, ω_i -> |t|^{(1-i)/2} ω_i, realised by multiplying the
/// stored scale.
inline Superconnection scale_action(const Superconnection& s, double t) {
  if (t == 0.0 || !std::isfinite(t)) throw ArgumentError("scale_action: t must be a nonzero real");
  Superconnection out = s;
  out.set_scale(s.scale() * t);
  return out;
}

/// ∇² = dL + L∧L for ∇ = d + L; an even form.
inline FormField curvature(const Superconnection& s) {
  const FormField l = s.odd_part();
  return ext_deriv(l) + wedge(l, l);
}

/// The affine path (1-t) S0 + t S1 (effective terms, scale 1), returned as the
/// odd form L_t.
inline FormField affine_odd_part(const Superconnection& s0, const Superconnection& s1, double t) {
  return cplx{1.0 - t} * s0.odd_part() + cplx{t} * s1.odd_part();
}

inline void require_same_bundle(const Superconnection& a, const Superconnection& b, const char* what) {
  if (a.base_dim() != b.base_dim() || !(a.fibre() == b.fibre())) {
    throw ArgumentError(std::string(what) + ": superconnections live on different bundles");
  }
}

struct UnitaryTerm {
  std::string name;        ///< "A", "omega_0", ...
  int degree = 0;
  bool hermitian = false;  ///< required symmetry of the coefficient field
  double deviation = 0.0;  ///< max over Fourier modes of |c_k ∓ c_{-k}^*|
  bool pass = true;
};

struct UnitaryAudit {
  std::vector<UnitaryTerm> terms;
  double max_deviation = 0.0;
  bool pass = true;
};

/// i-form coefficients must be hermitian for i ≡ 0, 3 (mod 4) and
/// anti-hermitian for i ≡ 1, 2 (mod 4) as functions on the torus.
inline bool unitary_requires_hermitian(int i) { return i % 4 == 0 || i % 4 == 3; }

inline double hermiticity_deviation(const FormField& f, bool hermitian) {
  double dev = 0.0;
  const double sign = hermitian ? 1.0 : -1.0;
  for (const auto& [mask, c] : f.components()) {
    for (int idx = 0; idx < c.num_modes(); ++idx) {
      Freq neg = c.freq(idx);
      for (int j = 0; j < f.base_dim(); ++j) neg[static_cast<std::size_t>(j)] = -neg[static_cast<std::size_t>(j)];
      dev = std::max(dev, max_abs(c.at_index(idx) - sign * c.coeff(neg).adjoint()));
    }
  }
  return dev;
}

inline UnitaryAudit check_unitary(const Superconnection& s, double tol = 1e-12) {
  UnitaryAudit audit;
  auto add = [&](std::string name, int i, const FormField& f) {
    UnitaryTerm term;
    term.name = std::move(name);
    term.degree = i;
    term.hermitian = unitary_requires_hermitian(i);
    term.deviation = hermiticity_deviation(f, term.hermitian);
    term.pass = term.deviation <= tol;
    audit.max_deviation = std::max(audit.max_deviation, term.deviation);
    audit.pass = audit.pass && term.pass;
    audit.terms.push_back(std::move(term));
  };
  add("A", 1, s.connection());
  for (const auto& [i, w] : s.omegas()) add("omega_" + std::to_string(i), i, w);
  return audit;
}

}  // namespace superchern
