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

// Matrix-valued differential forms on the flat torus T^n with trigonometric
// polynomial coefficients. Exterior derivative, wedge product and top-degree
// integration act on Fourier coefficients and are exact; anything
// transcendental happens pointwise (PointForm) on sample grids.
//
// Sign convention: an element is written dx^I ⊗ M (form first), and
//   (dx^I ⊗ M)(dx^J ⊗ N) = (-1)^{|M||J|} dx^I∧dx^J ⊗ MN.
// With this convention d acts without signs on the coefficient matrices and
// satisfies the graded Leibniz rule with respect to the total degree.

#include <superchern/fourier_grid.hpp>
#include <superchern/graded_core.hpp>

#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace superchern {

/// A trigonometric polynomial with matrix coefficients, dense over the
/// frequency cube [-K,K]^n. Frequencies outside the cube are zero.
class MatrixFourier {
 public:
  MatrixFourier() = default;
  MatrixFourier(int n, int bandwidth, int rows, int cols)
      : n_(n), bandwidth_(bandwidth), rows_(rows), cols_(cols),
        coeffs_(static_cast<std::size_t>(ipow(2 * bandwidth + 1, n)), Mat::Zero(rows, cols)) {
    if (n < 0 || n > kMaxBaseDim) throw ArgumentError("MatrixFourier: base dimension must be in [0, 4]");
    if (bandwidth < 0) throw ArgumentError("MatrixFourier: negative bandwidth");
  }

  static MatrixFourier constant(int n, const Mat& m) {
    MatrixFourier f(n, 0, static_cast<int>(m.rows()), static_cast<int>(m.cols()));
    f.coeffs_[0] = m;
    return f;
  }

  int base_dim() const { return n_; }
  int bandwidth() const { return bandwidth_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int num_modes() const { return static_cast<int>(coeffs_.size()); }
  Freq freq(int idx) const { return freq_at(n_, bandwidth_, idx); }

  Mat& at(const Freq& k) {
    if (!in_band(n_, bandwidth_, k)) throw ArgumentError("MatrixFourier::at: frequency outside bandwidth");
    return coeffs_[static_cast<std::size_t>(freq_index(n_, bandwidth_, k))];
  }
  const Mat& at_index(int idx) const { return coeffs_[static_cast<std::size_t>(idx)]; }
  Mat& at_index(int idx) { return coeffs_[static_cast<std::size_t>(idx)]; }

  Mat coeff(const Freq& k) const {
    if (!in_band(n_, bandwidth_, k)) return Mat::Zero(rows_, cols_);
    return coeffs_[static_cast<std::size_t>(freq_index(n_, bandwidth_, k))];
  }

  /// Same values, larger coefficient cube.
  MatrixFourier widened(int bandwidth) const {
    if (bandwidth < bandwidth_) throw ArgumentError("MatrixFourier::widened: cannot shrink");
    MatrixFourier out(n_, bandwidth, rows_, cols_);
    for (int idx = 0; idx < num_modes(); ++idx) out.at(freq(idx)) = coeffs_[static_cast<std::size_t>(idx)];
    return out;
  }

  /// Drops frequencies above `bandwidth`; the max-abs of what was dropped is
  /// written to `dropped_norm`.
  MatrixFourier truncated(int bandwidth, double* dropped_norm = nullptr) const {
    MatrixFourier out(n_, std::min(bandwidth, bandwidth_), rows_, cols_);
    double dropped = 0.0;
    for (int idx = 0; idx < num_modes(); ++idx) {
      const Freq k = freq(idx);
      if (in_band(n_, out.bandwidth_, k)) {
        out.at(k) = coeffs_[static_cast<std::size_t>(idx)];
      } else {
        dropped = std::max(dropped, max_abs(coeffs_[static_cast<std::size_t>(idx)]));
      }
    }
    if (dropped_norm != nullptr) *dropped_norm = dropped;
    return out;
  }

  /// Smallest bandwidth carrying a coefficient above `tol`.
  int effective_bandwidth(double tol = 0.0) const {
    int kmax = 0;
    for (int idx = 0; idx < num_modes(); ++idx) {
      if (max_abs(coeffs_[static_cast<std::size_t>(idx)]) > tol) {
        const Freq k = freq(idx);
        for (int j = 0; j < n_; ++j) kmax = std::max(kmax, std::abs(k[static_cast<std::size_t>(j)]));
      }
    }
    return kmax;
  }

  double max_coeff() const {
    double m = 0.0;
    for (const Mat& c : coeffs_) m = std::max(m, max_abs(c));
    return m;
  }

  Mat evaluate(const Point& x) const {
    Mat acc = Mat::Zero(rows_, cols_);
    for (int idx = 0; idx < num_modes(); ++idx) {
      const Freq k = freq(idx);
      double phase = 0.0;
      for (int j = 0; j < n_; ++j) phase += k[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
      acc += cplx{std::cos(phase), std::sin(phase)} * coeffs_[static_cast<std::size_t>(idx)];
    }
    return acc;
  }

  /// Coefficient-wise derivative ∂/∂x_j: multiplies c_k by i k_j.
  MatrixFourier derivative(int axis) const {
    MatrixFourier out = *this;
    for (int idx = 0; idx < num_modes(); ++idx) {
      const int kj = freq(idx)[static_cast<std::size_t>(axis)];
      out.coeffs_[static_cast<std::size_t>(idx)] *= cplx{0.0, static_cast<double>(kj)};
    }
    return out;
  }

  /// coeff(-k) == conj(coeff(k)) entrywise, i.e. the sampled field is real.
  bool is_real_valued(double tol = 1e-12) const {
    for (int idx = 0; idx < num_modes(); ++idx) {
      Freq neg = freq(idx);
      for (int j = 0; j < n_; ++j) neg[static_cast<std::size_t>(j)] = -neg[static_cast<std::size_t>(j)];
      if (max_abs(coeff(neg) - coeffs_[static_cast<std::size_t>(idx)].conjugate()) > tol) return false;
    }
    return true;
  }

  MatrixFourier& operator+=(const MatrixFourier& o) {
    check_compatible(o);
    if (o.bandwidth_ > bandwidth_) *this = widened(o.bandwidth_);
    for (int idx = 0; idx < o.num_modes(); ++idx) at(o.freq(idx)) += o.coeffs_[static_cast<std::size_t>(idx)];
    return *this;
  }
  MatrixFourier& operator*=(cplx s) {
    for (Mat& c : coeffs_) c *= s;
    return *this;
  }
  friend MatrixFourier operator+(MatrixFourier a, const MatrixFourier& b) { return a += b; }
  friend MatrixFourier operator-(MatrixFourier a, MatrixFourier b) { return a += (b *= -1.0); }
  friend MatrixFourier operator*(cplx s, MatrixFourier a) { return a *= s; }

  /// Applies f to every coefficient matrix.
  template <class F>
  MatrixFourier map_coeffs(F&& f) const {
    MatrixFourier out = *this;
    for (Mat& c : out.coeffs_) c = f(c);
    if (!out.coeffs_.empty()) {
      out.rows_ = static_cast<int>(out.coeffs_.front().rows());
      out.cols_ = static_cast<int>(out.coeffs_.front().cols());
    }
    return out;
  }

  /// Exact convolution of coefficient sequences with matrix products:
  /// (f g)_k = Σ_q f_q g_{k-q}. Bandwidths add.
  friend MatrixFourier multiply(const MatrixFourier& f, const MatrixFourier& g) {
    if (f.n_ != g.n_) throw ArgumentError("MatrixFourier multiply: base dimension mismatch");
    if (f.cols_ != g.rows_) throw ArgumentError("MatrixFourier multiply: inner matrix size mismatch");
    MatrixFourier out(f.n_, f.bandwidth_ + g.bandwidth_, f.rows_, g.cols_);
    for (int a = 0; a < f.num_modes(); ++a) {
      const Mat& fa = f.coeffs_[static_cast<std::size_t>(a)];
      if (fa.isZero(0.0)) continue;
      const Freq ka = f.freq(a);
      for (int b = 0; b < g.num_modes(); ++b) {
        const Mat& gb = g.coeffs_[static_cast<std::size_t>(b)];
        if (gb.isZero(0.0)) continue;
        const Freq kb = g.freq(b);
        Freq k{};
        for (int j = 0; j < f.n_; ++j) k[static_cast<std::size_t>(j)] = ka[static_cast<std::size_t>(j)] + kb[static_cast<std::size_t>(j)];
        out.at(k) += fa * gb;
      }
    }
    return out;
  }

  /// Dense coefficient cube of one matrix entry.
  std::vector<cplx> entry_cube(int r, int c) const {
    std::vector<cplx> out(coeffs_.size());
    for (std::size_t i = 0; i < coeffs_.size(); ++i) out[i] = coeffs_[i](r, c);
    return out;
  }

 private:
  void check_compatible(const MatrixFourier& o) const {
    if (o.n_ != n_ || o.rows_ != rows_ || o.cols_ != cols_) {
      throw ArgumentError("MatrixFourier: incompatible operands");
    }
  }

  int n_ = 0;
  int bandwidth_ = 0;
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Mat> coeffs_;
};

/// An End(V)-valued differential form on T^n: a map from strictly increasing
/// multi-indices I ⊆ {1..n} (bitmasks) to Fourier coefficient fields.
/// Missing components are zero.
class FormField {
 public:
  FormField() = default;
  FormField(int n, GradedDim fibre) : n_(n), fibre_(fibre) {
    if (n < 0 || n > kMaxBaseDim) throw ArgumentError("FormField: base dimension must be in [0, 4]");
    if (fibre.total() < 1) throw ArgumentError("FormField: empty fibre");
  }

  static FormField constant(int n, GradedDim fibre, const Mat& m, MultiIndex mask = 0) {
    FormField f(n, fibre);
    f.set(mask, MatrixFourier::constant(n, m));
    return f;
  }

  /// Scalar-valued forms live on the fibre C^(1|0).
  static FormField scalar(int n) { return FormField(n, GradedDim{1, 0}); }

  int base_dim() const { return n_; }
  const GradedDim& fibre() const { return fibre_; }
  const std::map<MultiIndex, MatrixFourier>& components() const { return comps_; }

  bool has(MultiIndex mask) const { return comps_.count(mask) != 0; }
  const MatrixFourier& component(MultiIndex mask) const {
    auto it = comps_.find(mask);
    if (it == comps_.end()) throw ArgumentError("FormField: missing component " + mask_to_string(mask));
    return it->second;
  }
  MatrixFourier component_or_zero(MultiIndex mask) const {
    auto it = comps_.find(mask);
    if (it != comps_.end()) return it->second;
    return MatrixFourier(n_, 0, fibre_.total(), fibre_.total());
  }

  void set(MultiIndex mask, MatrixFourier f) {
    check_component(mask, f);
    comps_[mask] = std::move(f);
  }
  void add(MultiIndex mask, const MatrixFourier& f) {
    check_component(mask, f);
    auto it = comps_.find(mask);
    if (it == comps_.end()) {
      comps_.emplace(mask, f);
    } else {
      it->second += f;
    }
  }

  int bandwidth() const {
    int k = 0;
    for (const auto& [mask, f] : comps_) k = std::max(k, f.bandwidth());
    return k;
  }

  /// Pure-degree part.
  FormField degree_part(int k) const {
    FormField out(n_, fibre_);
    for (const auto& [mask, f] : comps_) {
      if (degree(mask) == k) out.comps_.emplace(mask, f);
    }
    return out;
  }

  /// Total parity (matrix parity + form degree); mixed unless every component agrees.
  Parity parity(double tol = kParityTol) const {
    std::optional<Parity> total;
    for (const auto& [mask, f] : comps_) {
      for (int idx = 0; idx < f.num_modes(); ++idx) {
        const Mat& c = f.at_index(idx);
        if (max_abs(c) <= tol) continue;
        const Parity mp = detect_parity(fibre_, c, tol);
        if (mp == Parity::mixed) return Parity::mixed;
        const Parity tp = add_parity(mp, parity_from_int(degree(mask)));
        if (total && *total != tp) return Parity::mixed;
        total = tp;
      }
    }
    return total.value_or(Parity::even);
  }

  double max_coeff() const {
    double m = 0.0;
    for (const auto& [mask, f] : comps_) m = std::max(m, f.max_coeff());
    return m;
  }

  template <class F>
  FormField map_coeffs(F&& fn) const {
    FormField out(n_, fibre_);
    for (const auto& [mask, f] : comps_) out.comps_.emplace(mask, f.map_coeffs(fn));
    return out;
  }

  FormField& operator+=(const FormField& o) {
    check_same_bundle(o);
    for (const auto& [mask, f] : o.comps_) add(mask, f);
    return *this;
  }
  FormField& operator*=(cplx s) {
    for (auto& [mask, f] : comps_) f *= s;
    return *this;
  }
  friend FormField operator+(FormField a, const FormField& b) { return a += b; }
  friend FormField operator-(FormField a, FormField b) { return a += (b *= -1.0); }
  friend FormField operator*(cplx s, FormField a) { return a *= s; }

  void check_same_bundle(const FormField& o) const {
    if (o.n_ != n_) throw ArgumentError("FormField: base dimension mismatch");
    if (!(o.fibre_ == fibre_)) throw ArgumentError("FormField: fibre mismatch");
  }

 private:
  void check_component(MultiIndex mask, const MatrixFourier& f) const {
    if ((mask & ~top_index(n_)) != 0U) throw ArgumentError("FormField: multi-index exceeds base dimension");
    if (f.base_dim() != n_) throw ArgumentError("FormField: coefficient base dimension mismatch");
    if (f.rows() != fibre_.total() || f.cols() != fibre_.total()) {
      throw ArgumentError("FormField: coefficient matrices do not match the fibre");
    }
  }

  int n_ = 0;
  GradedDim fibre_{1, 0};
  std::map<MultiIndex, MatrixFourier> comps_;
};

/// Graded wedge product; Fourier coefficients are convolved exactly.
inline FormField wedge(const FormField& a, const FormField& b) {
  a.check_same_bundle(b);
  FormField out(a.base_dim(), a.fibre());
  const GradedDim fib = a.fibre();
  for (const auto& [ia, fa] : a.components()) {
    for (const auto& [ib, fb] : b.components()) {
      const int s = wedge_sign(ia, ib);
      if (s == 0) continue;
      // (-1)^{|M_a||J_b|}: flip odd blocks of the left coefficient
      const MatrixFourier left = (degree(ib) % 2 == 0) ? fa : fa.map_coeffs([&](const Mat& m) { return koszul_flip(fib, m); });
      MatrixFourier prod = multiply(left, fb);
      if (s < 0) prod *= -1.0;
      out.add(ia | ib, prod);
    }
  }
  return out;
}

/// Exact exterior derivative: the coefficient at frequency k of component I
/// contributes i k_j to component I ∪ {j} with the reordering sign.
inline FormField ext_deriv(const FormField& a) {
  FormField out(a.base_dim(), a.fibre());
  for (const auto& [mask, f] : a.components()) {
    for (int j = 0; j < a.base_dim(); ++j) {
      const MultiIndex bit = MultiIndex{1} << j;
      const int s = wedge_sign(bit, mask);
      if (s == 0) continue;
      MatrixFourier df = f.derivative(j);
      if (s < 0) df *= -1.0;
      out.add(mask | bit, df);
    }
  }
  return out;
}

/// ∫_{T^n} of the top component: (2π)^n times its zero-frequency coefficient.
inline GradedMatrix integrate_top(const FormField& a) {
  const int n = a.base_dim();
  const MultiIndex top = top_index(n);
  Mat acc = Mat::Zero(a.fibre().total(), a.fibre().total());
  if (a.has(top)) acc = std::pow(kTwoPi, n) * a.component(top).coeff(Freq{});
  return GradedMatrix(a.fibre(), acc);
}

/// Pointwise Fourier summation of every component.
inline std::map<MultiIndex, GradedMatrix> eval_point(const FormField& a, const Point& x) {
  std::map<MultiIndex, GradedMatrix> out;
  for (const auto& [mask, f] : a.components()) out.emplace(mask, GradedMatrix(a.fibre(), f.evaluate(x)));
  return out;
}

/// Fibrewise supertrace: a scalar form.
inline FormField supertrace(const FormField& a) {
  FormField out = FormField::scalar(a.base_dim());
  const GradedDim fib = a.fibre();
  for (const auto& [mask, f] : a.components()) {
    out.set(mask, f.map_coeffs([&](const Mat& m) {
      Mat s(1, 1);
      s(0, 0) = supertrace(GradedMatrix(fib, m));
      return s;
    }));
  }
  return out;
}

/// Graded commutator [a, b] = a∧b - (-1)^{|a||b|} b∧a of homogeneous forms
/// (total parity).
inline FormField graded_commutator(const FormField& a, const FormField& b) {
  const Parity pa = a.parity();
  const Parity pb = b.parity();
  if (pa == Parity::mixed || pb == Parity::mixed) throw ArgumentError("graded_commutator: forms must be homogeneous");
  const cplx sign = (parity_bit(pa) * parity_bit(pb) == 1) ? -1.0 : 1.0;
  return wedge(a, b) - sign * wedge(b, a);
}

// ---------------------------------------------------------------------------
// Pointwise algebra Λ(R^n) ⊗ End(V)

/// Even-first ordering of the exterior basis {dx^I}: even-degree masks first,
/// each class in increasing mask order.
inline std::vector<MultiIndex> lambda_basis(int n) {
  std::vector<MultiIndex> out;
  const MultiIndex count = MultiIndex{1} << n;
  for (int want = 0; want < 2; ++want) {
    for (MultiIndex m = 0; m < count; ++m) {
      if (degree(m) % 2 == want) out.push_back(m);
    }
  }
  return out;
}

inline GradedDim lambda_dim(int n) {
  if (n == 0) return {1, 0};
  const int half = 1 << (n - 1);
  return {half, half};
}

/// Left exterior multiplication by dx^I on Λ(R^n) in the even-first basis.
inline GradedMatrix exterior_mult(int n, MultiIndex mask) {
  const std::vector<MultiIndex> basis = lambda_basis(n);
  const int size = static_cast<int>(basis.size());
  std::vector<int> pos(basis.size());
  for (int i = 0; i < size; ++i) pos[basis[static_cast<std::size_t>(i)]] = i;
  Mat m = Mat::Zero(size, size);
  for (int c = 0; c < size; ++c) {
    const MultiIndex j = basis[static_cast<std::size_t>(c)];
    const int s = wedge_sign(mask, j);
    if (s != 0) m(pos[mask | j], c) = s;
  }
  return {lambda_dim(n), std::move(m), parity_from_int(degree(mask))};
}

/// Interior product ι(e_j) on Λ(R^n) in the even-first basis (axis is 0-based).
inline GradedMatrix interior_mult(int n, int axis) {
  const std::vector<MultiIndex> basis = lambda_basis(n);
  const int size = static_cast<int>(basis.size());
  std::vector<int> pos(basis.size());
  for (int i = 0; i < size; ++i) pos[basis[static_cast<std::size_t>(i)]] = i;
  const MultiIndex bit = MultiIndex{1} << axis;
  Mat m = Mat::Zero(size, size);
  for (int c = 0; c < size; ++c) {
    const MultiIndex j = basis[static_cast<std::size_t>(c)];
    if ((j & bit) == 0U) continue;
    // ι_j (dx^j ∧ dx^{J\j}) = dx^{J\j}; sign from moving dx^j to the front
    const int s = wedge_sign(bit, j & ~bit);
    m(pos[j & ~bit], c) = s;
  }
  return {lambda_dim(n), std::move(m), Parity::odd};
}

/// An element of Λ(R^n) ⊗ End(V) at a single point: one matrix per
/// multi-index (dense over all 2^n masks).
class PointForm {
 public:
  PointForm() = default;
  PointForm(int n, GradedDim fibre)
      : n_(n), fibre_(fibre), comps_(std::size_t{1} << n, Mat::Zero(fibre.total(), fibre.total())) {}

  int base_dim() const { return n_; }
  const GradedDim& fibre() const { return fibre_; }
  Mat& operator[](MultiIndex mask) { return comps_[mask]; }
  const Mat& operator[](MultiIndex mask) const { return comps_[mask]; }
  int num_components() const { return static_cast<int>(comps_.size()); }

  PointForm degree_part(int k) const {
    PointForm out(n_, fibre_);
    for (MultiIndex m = 0; m < comps_.size(); ++m) {
      if (degree(m) == k) out.comps_[m] = comps_[m];
    }
    return out;
  }

  PointForm& operator+=(const PointForm& o) {
    for (std::size_t i = 0; i < comps_.size(); ++i) comps_[i] += o.comps_[i];
    return *this;
  }
  PointForm& operator*=(cplx s) {
    for (Mat& c : comps_) c *= s;
    return *this;
  }
  friend PointForm operator+(PointForm a, const PointForm& b) { return a += b; }
  friend PointForm operator-(PointForm a, PointForm b) { return a += (b *= -1.0); }
  friend PointForm operator*(cplx s, PointForm a) { return a *= s; }

  friend PointForm operator*(const PointForm& a, const PointForm& b) {
    PointForm out(a.n_, a.fibre_);
    for (MultiIndex i = 0; i < a.comps_.size(); ++i) {
      const Mat& ai = a.comps_[i];
      if (ai.isZero(0.0)) continue;
      const Mat ai_flip = koszul_flip(a.fibre_, ai);
      for (MultiIndex j = 0; j < b.comps_.size(); ++j) {
        const int s = wedge_sign(i, j);
        if (s == 0) continue;
        const Mat& bj = b.comps_[j];
        if (bj.isZero(0.0)) continue;
        const Mat& left = (degree(j) % 2 == 0) ? ai : ai_flip;
        out.comps_[i | j] += static_cast<double>(s) * (left * bj);
      }
    }
    return out;
  }

  /// Per-multi-index supertraces.
  std::vector<cplx> supertraces() const {
    std::vector<cplx> out(comps_.size());
    for (std::size_t i = 0; i < comps_.size(); ++i) out[i] = supertrace(GradedMatrix(fibre_, comps_[i]));
    return out;
  }

  double max_coeff() const {
    double m = 0.0;
    for (const Mat& c : comps_) m = std::max(m, max_abs(c));
    return m;
  }

 private:
  int n_ = 0;
  GradedDim fibre_{1, 0};
  std::vector<Mat> comps_;
};

/// Faithful left-regular representation of Λ(R^n) ⊗ End(V) on Λ(R^n) ⊗ V.
/// X = Σ dx^I ⊗ X_I maps to Σ λ(dx^I) ⊗̂ X_I (Koszul-signed tensor), so
/// rep(XY) = rep(X) rep(Y).
inline GradedMatrix regular_rep(const PointForm& x) {
  const int n = x.base_dim();
  const GradedDim fib = x.fibre();
  const GradedDim dim = tensor_dim(lambda_dim(n), fib);
  Mat acc = Mat::Zero(dim.total(), dim.total());
  for (MultiIndex m = 0; m < static_cast<MultiIndex>(x.num_components()); ++m) {
    if (x[m].isZero(0.0)) continue;
    acc += graded_tensor(exterior_mult(n, m), GradedMatrix(fib, x[m])).entries();
  }
  return GradedMatrix(dim, std::move(acc));
}

/// Inverse of regular_rep on its image: reads X_I off the action on 1 ⊗ V.
inline PointForm from_regular_rep(int n, GradedDim fibre, const Mat& rep) {
  const GradedDim lam = lambda_dim(n);
  const std::vector<MultiIndex> basis = lambda_basis(n);
  PointForm out(n, fibre);
  // 1 = dx^∅ is the first even basis vector
  for (int li = 0; li < static_cast<int>(basis.size()); ++li) {
    Mat& target = out[basis[static_cast<std::size_t>(li)]];
    for (int a = 0; a < fibre.total(); ++a) {
      for (int b = 0; b < fibre.total(); ++b) {
        target(a, b) = rep(tensor_position(lam, fibre, li, a), tensor_position(lam, fibre, 0, b));
      }
    }
  }
  return out;
}

/// exp(-F) for an even element F of Λ(R^n) ⊗ End(V), organised by exterior
/// degree through the weight-graded Duhamel exponential of its regular
/// representation.
inline PointForm exp_neg(const PointForm& f) {
  const int n = f.base_dim();
  PointForm f0(n, f.fibre());
  f0[0] = f[0];
  std::vector<WeightedTerm> terms;
  for (int w = 1; w <= n; ++w) {
    const PointForm part = f.degree_part(w);
    if (part.max_coeff() == 0.0) continue;
    terms.push_back({regular_rep(part), w});
  }
  const std::vector<GradedMatrix> graded = duhamel_exp(regular_rep(f0), terms, n);
  Mat sum = graded[0].entries();
  for (std::size_t w = 1; w < graded.size(); ++w) sum += graded[w].entries();
  return from_regular_rep(n, f.fibre(), sum);
}

inline PointForm sample_point(const FormField& a, const Point& x) {
  PointForm out(a.base_dim(), a.fibre());
  for (const auto& [mask, f] : a.components()) out[mask] = f.evaluate(x);
  return out;
}

/// Samples every component on the uniform N^n grid (grid point order as in
/// grid_point()).
inline std::vector<PointForm> sample_grid(const FormField& a, int grid_n) {
  const int n = a.base_dim();
  const int points = ipow(grid_n, n);
  const int d = a.fibre().total();
  std::vector<PointForm> out(static_cast<std::size_t>(points), PointForm(n, a.fibre()));
  for (const auto& [mask, f] : a.components()) {
    for (int r = 0; r < d; ++r) {
      for (int c = 0; c < d; ++c) {
        const std::vector<cplx> vals = synthesize_grid(n, f.bandwidth(), f.entry_cube(r, c), grid_n);
        for (int p = 0; p < points; ++p) out[static_cast<std::size_t>(p)][mask](r, c) = vals[static_cast<std::size_t>(p)];
      }
    }
  }
  return out;
}

/// Result of projecting grid samples back onto Fourier coefficients.
struct ProjectionReport {
  double nyquist_max = 0.0;  ///< largest unresolved (Nyquist) content seen
};

/// Builds a scalar form from per-point, per-mask samples. Components whose
/// samples are identically zero are omitted. Output bandwidth is N/2 - 1.
inline FormField scalar_form_from_samples(int n, int grid_n, const std::vector<std::vector<cplx>>& samples,
                                          ProjectionReport* report = nullptr) {
  FormField out = FormField::scalar(n);
  const int bandwidth = grid_n / 2 - 1;
  const int points = ipow(grid_n, n);
  const MultiIndex count = MultiIndex{1} << n;
  double nyq_all = 0.0;
  for (MultiIndex mask = 0; mask < count; ++mask) {
    std::vector<cplx> vals(static_cast<std::size_t>(points));
    bool any = false;
    for (int p = 0; p < points; ++p) {
      vals[static_cast<std::size_t>(p)] = samples[static_cast<std::size_t>(p)][mask];
      any = any || vals[static_cast<std::size_t>(p)] != cplx{};
    }
    if (!any) continue;
    double nyq = 0.0;
    const std::vector<cplx> coeffs = analyze_grid(n, grid_n, vals, bandwidth, &nyq);
    nyq_all = std::max(nyq_all, nyq);
    MatrixFourier f(n, bandwidth, 1, 1);
    for (int idx = 0; idx < f.num_modes(); ++idx) f.at_index(idx)(0, 0) = coeffs[static_cast<std::size_t>(idx)];
    out.set(mask, std::move(f));
  }
  if (report != nullptr) report->nyquist_max = nyq_all;
  return out;
}

inline PointForm to_point_form(const std::map<MultiIndex, GradedMatrix>& comps, int n, GradedDim fibre) {
  PointForm out(n, fibre);
  for (const auto& [mask, m] : comps) out[mask] = m.entries();
  return out;
}

}  // namespace superchern
