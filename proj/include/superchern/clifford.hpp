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

// Clifford algebra Cl(n) with the ε-scaled relation
//   e^i e^j + e^j e^i = -2 ε² δ^{ij},
// so c(v)² = -|v|² at ε = 1 and the product degenerates to the wedge
// product at ε = 0. Elements are stored in the monomial basis e^I, which is
// identified coefficient-for-coefficient with Λ(R^n).

#include <superchern/form_algebra.hpp>
#include <superchern/graded_core.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <vector>

namespace superchern {

/// (-1)^{#{(i,j) : i∈I, j∈J, i>j}}: the sign of sorting e^I e^J into
/// increasing order. Unlike wedge_sign this does not vanish on overlaps.
inline int reorder_sign(MultiIndex a, MultiIndex b) {
  int swaps = 0;
  for (MultiIndex rest = b; rest != 0U; rest &= rest - 1U) {
    const MultiIndex bit = rest & (~rest + 1U);
    swaps += std::popcount(a & ~(bit - 1U) & ~bit);
  }
  return (swaps % 2 == 0) ? 1 : -1;
}

class CliffordElement {
 public:
  CliffordElement() = default;
  CliffordElement(int n, double eps) : n_(n), eps_(eps), coeffs_(std::size_t{1} << n, cplx{}) {
    if (n < 0 || n > kMaxBaseDim) throw ArgumentError("CliffordElement: dimension must be in [0, 4]");
    if (!(eps >= 0.0) || !std::isfinite(eps)) throw ArgumentError("CliffordElement: metric scale must be >= 0");
  }

  static CliffordElement monomial(int n, double eps, MultiIndex mask, cplx c = 1.0) {
    CliffordElement a(n, eps);
    a.at(mask) = c;
    return a;
  }
  static CliffordElement generator(int n, double eps, int j) { return monomial(n, eps, MultiIndex{1} << (j - 1)); }

  int dim() const { return n_; }
  double eps() const { return eps_; }
  int num_coeffs() const { return static_cast<int>(coeffs_.size()); }

  cplx& at(MultiIndex mask) {
    if (mask >= coeffs_.size()) throw ArgumentError("CliffordElement: multi-index exceeds dimension");
    return coeffs_[mask];
  }
  cplx at(MultiIndex mask) const {
    if (mask >= coeffs_.size()) throw ArgumentError("CliffordElement: multi-index exceeds dimension");
    return coeffs_[mask];
  }

  /// Degree k if every nonzero coefficient has degree k, otherwise -1.
  int homogeneous_degree() const {
    int k = -1;
    for (MultiIndex m = 0; m < coeffs_.size(); ++m) {
      if (coeffs_[m] == cplx{}) continue;
      if (k >= 0 && degree(m) != k) return -1;
      k = degree(m);
    }
    return k < 0 ? 0 : k;
  }

  CliffordElement& operator+=(const CliffordElement& o) {
    require_compatible(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
  }
  CliffordElement& operator*=(cplx s) {
    for (cplx& c : coeffs_) c *= s;
    return *this;
  }
  friend CliffordElement operator+(CliffordElement a, const CliffordElement& b) { return a += b; }
  friend CliffordElement operator-(CliffordElement a, CliffordElement b) { return a += (b *= -1.0); }
  friend CliffordElement operator*(cplx s, CliffordElement a) { return a *= s; }
  friend bool operator==(const CliffordElement&, const CliffordElement&) = default;

  void require_compatible(const CliffordElement& o) const {
    if (o.n_ != n_) throw ArgumentError("CliffordElement: dimension mismatch");
    if (o.eps_ != eps_) throw ArgumentError("CliffordElement: metric scale mismatch");
  }

 private:
  int n_ = 0;
  double eps_ = 1.0;
  std::vector<cplx> coeffs_;
};

/// Product in Cl(n, ε): e^I e^J = reorder_sign(I,J) (-ε²)^{|I∩J|} e^{I△J}.
/// At ε = 0 the factor vanishes on overlaps, which is the exterior product.
inline CliffordElement clifford_mult(const CliffordElement& a, const CliffordElement& b) {
  a.require_compatible(b);
  CliffordElement out(a.dim(), a.eps());
  const double sq = -a.eps() * a.eps();
  for (MultiIndex i = 0; i < static_cast<MultiIndex>(a.num_coeffs()); ++i) {
    const cplx ai = a.at(i);
    if (ai == cplx{}) continue;
    for (MultiIndex j = 0; j < static_cast<MultiIndex>(b.num_coeffs()); ++j) {
      const cplx bj = b.at(j);
      if (bj == cplx{}) continue;
      const int overlap = degree(i & j);
      if (overlap > 0 && sq == 0.0) continue;
      double f = reorder_sign(i, j);
      for (int r = 0; r < overlap; ++r) f *= sq;
      out.at(i ^ j) += f * ai * bj;
    }
  }
  return out;
}

/// Λ ↔ Cl identification. Both directions copy coefficients.
inline std::vector<cplx> symbol(const CliffordElement& a) {
  std::vector<cplx> out(static_cast<std::size_t>(a.num_coeffs()));
  for (MultiIndex m = 0; m < out.size(); ++m) out[m] = a.at(m);
  return out;
}

inline CliffordElement quantize(int n, double eps, const std::vector<cplx>& form) {
  CliffordElement a(n, eps);
  if (form.size() != static_cast<std::size_t>(a.num_coeffs())) throw ArgumentError("quantize: coefficient count");
  for (MultiIndex m = 0; m < form.size(); ++m) a.at(m) = form[m];
  return a;
}

/// Rescaling Û_ε: degree-k coefficients multiplied by ε^{-k}.
inline CliffordElement rescale_U(const CliffordElement& a, double eps) {
  if (eps == 0.0) throw ArgumentError("rescale_U: eps must be nonzero");
  CliffordElement out = a;
  for (MultiIndex m = 0; m < static_cast<MultiIndex>(a.num_coeffs()); ++m) {
    out.at(m) = a.at(m) * std::pow(eps, -degree(m));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Spinor representation

/// Generators of the graded spinor module, even-first.
///   n = 1 (doubled):  γ1 = -iσx
///   n = 2:            γ1 = -iσx, γ2 = -iσy
///   n = 4:            Γ1,2 = γ1,2 ⊗̂ 1, Γ3,4 = 1 ⊗̂ γ1,2  (Koszul-signed)
/// Each generator is odd and squares to -1; the top monomial has supertrace
/// (-2i)^{n/2}.
inline GradedMatrix spinor_generator(int n, int j) {
  if (j < 1 || j > n) throw ArgumentError("spinor_generator: index out of range");
  const GradedDim s2{1, 1};
  Mat g1(2, 2);
  g1 << cplx{0, 0}, cplx{0, -1}, cplx{0, -1}, cplx{0, 0};
  Mat g2(2, 2);
  g2 << 0.0, -1.0, 1.0, 0.0;
  const GradedMatrix gen1(s2, g1, Parity::odd);
  const GradedMatrix gen2(s2, g2, Parity::odd);
  switch (n) {
    case 1:
    case 2:
      return j == 1 ? gen1 : gen2;
    case 4: {
      const GradedMatrix id = GradedMatrix::identity(s2);
      const GradedMatrix& g = (j % 2 == 1) ? gen1 : gen2;
      return j <= 2 ? graded_tensor(g, id) : graded_tensor(id, g);
    }
    default:
      throw ArgumentError("spinor_generator: supported dimensions are 1, 2, 4");
  }
}

inline GradedDim spinor_dim(int n) {
  switch (n) {
    case 1:
    case 2:
      return {1, 1};
    case 4:
      return {2, 2};
    default:
      throw ArgumentError("spinor_dim: supported dimensions are 1, 2, 4");
  }
}

/// Image of the monomial e^I: ordered product of generators.
inline GradedMatrix spinor_monomial(int n, MultiIndex mask) {
  GradedMatrix out = GradedMatrix::identity(spinor_dim(n));
  for (int j = 1; j <= n; ++j) {
    if ((mask >> (j - 1)) & 1U) out = out * spinor_generator(n, j);
  }
  return out;
}

inline GradedMatrix spinor_rep(const CliffordElement& a) {
  const int n = a.dim();
  if (n % 2 != 0) throw ArgumentError("spinor_rep: odd dimension has no graded spinor module");
  if (a.eps() != 1.0) throw ArgumentError("spinor_rep: requires eps = 1");
  const GradedDim sd = spinor_dim(n);
  Mat acc = Mat::Zero(sd.total(), sd.total());
  for (MultiIndex m = 0; m < static_cast<MultiIndex>(a.num_coeffs()); ++m) {
    if (a.at(m) != cplx{}) acc += a.at(m) * spinor_monomial(n, m).entries();
  }
  return GradedMatrix(sd, std::move(acc));
}

/// (-2i)^{n/2} times the top coefficient.
inline cplx berezin_supertrace(const CliffordElement& a) {
  const int n = a.dim();
  if (n % 2 != 0) throw ArgumentError("berezin_supertrace: odd dimension");
  if (a.eps() != 1.0) throw ArgumentError("berezin_supertrace: requires eps = 1");
  return std::pow(cplx{0.0, -2.0}, n / 2) * a.at(top_index(n));
}

// ---------------------------------------------------------------------------
// Action on Λ(R^n) and the rescaling limit

/// c_ε(e^j) = e^j∧ - ε² ι_j on Λ(R^n) (even-first basis); squares to -ε².
inline Mat clifford_action_generator(int n, int j, double eps) {
  return exterior_mult(n, MultiIndex{1} << (j - 1)).entries() - eps * eps * interior_mult(n, j - 1).entries();
}

/// c_ε(a) acting on Λ(R^n).
inline Mat clifford_action(const CliffordElement& a) {
  const int n = a.dim();
  const int size = 1 << n;
  std::vector<Mat> gens;
  for (int j = 1; j <= n; ++j) gens.push_back(clifford_action_generator(n, j, a.eps()));
  Mat acc = Mat::Zero(size, size);
  for (MultiIndex m = 0; m < static_cast<MultiIndex>(a.num_coeffs()); ++m) {
    if (a.at(m) == cplx{}) continue;
    Mat prod = Mat::Identity(size, size);
    for (int j = 1; j <= n; ++j) {
      if ((m >> (j - 1)) & 1U) prod = prod * gens[static_cast<std::size_t>(j - 1)];
    }
    acc += a.at(m) * prod;
  }
  return acc;
}

/// Exterior multiplication e(a) on Λ(R^n): the ε = 0 action.
inline Mat exterior_action(const CliffordElement& a) {
  const int n = a.dim();
  Mat acc = Mat::Zero(1 << n, 1 << n);
  for (MultiIndex m = 0; m < static_cast<MultiIndex>(a.num_coeffs()); ++m) {
    if (a.at(m) != cplx{}) acc += a.at(m) * exterior_mult(n, m).entries();
  }
  return acc;
}

/// Symbol map σ(a) = c_ε(a)·1 read back in the monomial basis.
inline std::vector<cplx> symbol_via_action(const CliffordElement& a) {
  const std::vector<MultiIndex> basis = lambda_basis(a.dim());
  const Mat act = clifford_action(a);
  std::vector<cplx> out(basis.size());
  for (std::size_t r = 0; r < basis.size(); ++r) out[basis[r]] = act(static_cast<Eigen::Index>(r), 0);
  return out;
}

inline double operator_norm(const Mat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues()(0);
}

enum class GetzlerRegime { converges, decays, diverges };

inline const char* to_string(GetzlerRegime r) {
  switch (r) {
    case GetzlerRegime::converges: return "converges";
    case GetzlerRegime::decays: return "decays";
    case GetzlerRegime::diverges: return "diverges";
  }
  return "?";
}

struct GetzlerReport {
  int degree = 0;
  int l = 0;
  GetzlerRegime regime = GetzlerRegime::converges;
  std::vector<double> eps;
  std::vector<double> values;  ///< distances to e(a) (l = k) or norms (l != k)
  double fitted_rate = 0.0;    ///< slope of log(value) against log(eps); NaN if values vanish
  bool exact_zero = false;     ///< every distance is exactly 0
  bool certified = false;      ///< monotone decay to 0 (l >= k) or growth (l < k)
};

/// Least-squares slope of log y against log x.
inline double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t m = x.size();
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = static_cast<double>(m) * sxx - sx * sx;
  return (static_cast<double>(m) * sxy - sx * sy) / denom;
}

/// Behaviour of ε^l c_ε(Û_ε a) as ε -> 0 for homogeneous a of degree k:
/// l = k converges to e(a), l > k decays to 0, l < k diverges.
inline GetzlerReport getzler_limit_check(const CliffordElement& a, int l, const std::vector<double>& eps_list) {
  const int k = a.homogeneous_degree();
  if (k < 0) throw ArgumentError("getzler_limit_check: input must be homogeneous");
  if (eps_list.size() < 2) throw ArgumentError("getzler_limit_check: need at least two scales");
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] > 0.0)) throw ArgumentError("getzler_limit_check: scales must be positive");
    if (i > 0 && !(eps_list[i] < eps_list[i - 1])) throw ArgumentError("getzler_limit_check: scales must decrease");
  }
  GetzlerReport rep;
  rep.degree = k;
  rep.l = l;
  rep.eps = eps_list;
  rep.regime = (l == k) ? GetzlerRegime::converges : (l > k ? GetzlerRegime::decays : GetzlerRegime::diverges);
  const Mat target = (l == k) ? exterior_action(a) : Mat::Zero(1 << a.dim(), 1 << a.dim());
  for (double e : eps_list) {
    CliffordElement ae(a.dim(), e);
    for (MultiIndex m = 0; m < static_cast<MultiIndex>(a.num_coeffs()); ++m) ae.at(m) = a.at(m);
    const Mat op = std::pow(e, l) * clifford_action(rescale_U(ae, e));
    rep.values.push_back(operator_norm(op - target));
  }
  rep.exact_zero = std::all_of(rep.values.begin(), rep.values.end(), [](double v) { return v == 0.0; });
  if (rep.exact_zero) {
    rep.fitted_rate = std::numeric_limits<double>::quiet_NaN();
    rep.certified = rep.regime != GetzlerRegime::diverges;
    return rep;
  }
  const bool positive = std::all_of(rep.values.begin(), rep.values.end(), [](double v) { return v > 0.0; });
  rep.fitted_rate = positive ? log_log_slope(rep.eps, rep.values) : std::numeric_limits<double>::quiet_NaN();
  bool monotone = positive;
  for (std::size_t i = 1; i < rep.values.size() && monotone; ++i) {
    monotone = (rep.regime == GetzlerRegime::diverges) ? rep.values[i] > rep.values[i - 1]
                                                       : rep.values[i] < rep.values[i - 1];
  }
  rep.certified = monotone && ((rep.regime == GetzlerRegime::diverges) ? rep.fitted_rate < 0.0 : rep.fitted_rate > 0.0);
  return rep;
}

}  // namespace superchern
