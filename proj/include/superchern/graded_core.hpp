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

// Z2-graded linear algebra on C^(p|q): graded matrices, supertrace, graded
// commutators, Koszul-signed tensor products and the weight-graded
// (Duhamel) exponential used by every Chern character computation.
//
// Storage convention: the even block always comes first. Parity is a
// structural property, checked by looking at the off-diagonal / diagonal
// blocks with absolute tolerance kParityTol.

#include <superchern/common.hpp>

#include <unsupported/Eigen/MatrixFunctions>

#include <span>
#include <utility>
#include <vector>

namespace superchern {

inline constexpr double kParityTol = 1e-12;

struct GradedDim {
  int even = 0;
  int odd = 0;

  int total() const { return even + odd; }
  bool is_even_index(int i) const { return i < even; }
  friend bool operator==(const GradedDim&, const GradedDim&) = default;
};

enum class Parity { even, odd, mixed };

inline const char* to_string(Parity p) {
  switch (p) {
    case Parity::even: return "even";
    case Parity::odd: return "odd";
    default: return "mixed";
  }
}

inline Parity parity_from_int(int p) { return (p % 2 == 0) ? Parity::even : Parity::odd; }

inline Parity add_parity(Parity a, Parity b) {
  if (a == Parity::mixed || b == Parity::mixed) return Parity::mixed;
  return (a == b) ? Parity::even : Parity::odd;
}

inline int parity_bit(Parity p) {
  if (p == Parity::mixed) throw ArgumentError("parity_bit: mixed parity has no Z2 degree");
  return p == Parity::odd ? 1 : 0;
}

/// Diagonal grading involution ε: +1 on even, -1 on odd basis vectors.
inline Mat grading_matrix(GradedDim dim) {
  Mat eps = Mat::Zero(dim.total(), dim.total());
  for (int i = 0; i < dim.total(); ++i) eps(i, i) = dim.is_even_index(i) ? 1.0 : -1.0;
  return eps;
}

/// Even part: the diagonal blocks.
inline Mat even_block_part(GradedDim dim, const Mat& m) {
  Mat out = m;
  const int p = dim.even;
  const int q = dim.odd;
  out.block(0, p, p, q).setZero();
  out.block(p, 0, q, p).setZero();
  return out;
}

/// Odd part: the off-diagonal blocks.
inline Mat odd_block_part(GradedDim dim, const Mat& m) {
  Mat out = m;
  const int p = dim.even;
  const int q = dim.odd;
  out.block(0, 0, p, p).setZero();
  out.block(p, p, q, q).setZero();
  return out;
}

/// ε M ε flips the sign of the odd part; this is the Koszul sign (-1)^{|M|}
/// applied to a possibly mixed matrix.
inline Mat koszul_flip(GradedDim dim, const Mat& m) {
  Mat out = m;
  const int p = dim.even;
  const int q = dim.odd;
  out.block(0, p, p, q) *= -1.0;
  out.block(p, 0, q, p) *= -1.0;
  return out;
}

inline Parity detect_parity(GradedDim dim, const Mat& m, double tol = kParityTol) {
  const bool odd_zero = max_abs(odd_block_part(dim, m)) <= tol;
  const bool even_zero = max_abs(even_block_part(dim, m)) <= tol;
  if (odd_zero) return Parity::even;
  if (even_zero) return Parity::odd;
  return Parity::mixed;
}

class GradedMatrix {
 public:
  GradedMatrix() = default;

  /// Parity is detected structurally.
  GradedMatrix(GradedDim dim, Mat entries) : dim_(dim), entries_(std::move(entries)) {
    check_shape();
    parity_ = detect_parity(dim_, entries_);
  }

  /// Declared parity is validated against the block structure.
  GradedMatrix(GradedDim dim, Mat entries, Parity declared)
      : dim_(dim), entries_(std::move(entries)), parity_(declared) {
    check_shape();
    if (declared == Parity::even && max_abs(odd_block_part(dim_, entries_)) > kParityTol) {
      throw ArgumentError("GradedMatrix: declared even but off-diagonal blocks are nonzero");
    }
    if (declared == Parity::odd && max_abs(even_block_part(dim_, entries_)) > kParityTol) {
      throw ArgumentError("GradedMatrix: declared odd but diagonal blocks are nonzero");
    }
  }

  static GradedMatrix identity(GradedDim dim) {
    return {dim, Mat::Identity(dim.total(), dim.total()), Parity::even};
  }
  static GradedMatrix zero(GradedDim dim) {
    return {dim, Mat::Zero(dim.total(), dim.total()), Parity::even};
  }
  static GradedMatrix grading(GradedDim dim) { return {dim, grading_matrix(dim), Parity::even}; }

  const GradedDim& dim() const { return dim_; }
  const Mat& entries() const { return entries_; }
  Parity parity() const { return parity_; }
  int size() const { return dim_.total(); }

  GradedMatrix even_part() const { return {dim_, even_block_part(dim_, entries_), Parity::even}; }
  GradedMatrix odd_part() const { return {dim_, odd_block_part(dim_, entries_), Parity::odd}; }

  GradedMatrix adjoint() const { return {dim_, entries_.adjoint(), parity_}; }

  friend GradedMatrix operator*(const GradedMatrix& a, const GradedMatrix& b) {
    require_same(a, b, "product");
    Mat prod = a.entries_ * b.entries_;
    return {a.dim_, std::move(prod), add_parity(a.parity_, b.parity_), Unchecked{}};
  }
  friend GradedMatrix operator+(const GradedMatrix& a, const GradedMatrix& b) {
    require_same(a, b, "sum");
    return GradedMatrix(a.dim_, a.entries_ + b.entries_);
  }
  friend GradedMatrix operator-(const GradedMatrix& a, const GradedMatrix& b) {
    require_same(a, b, "difference");
    return GradedMatrix(a.dim_, a.entries_ - b.entries_);
  }
  friend GradedMatrix operator*(cplx s, const GradedMatrix& a) {
    return {a.dim_, s * a.entries_, a.parity_, Unchecked{}};
  }

 private:
  struct Unchecked {};
  GradedMatrix(GradedDim dim, Mat entries, Parity p, Unchecked)
      : dim_(dim), entries_(std::move(entries)), parity_(p) {}

  void check_shape() const {
    if (dim_.even < 0 || dim_.odd < 0) throw ArgumentError("GradedMatrix: negative graded dimension");
    if (entries_.rows() != dim_.total() || entries_.cols() != dim_.total()) {
      throw ArgumentError("GradedMatrix: entry matrix is " + std::to_string(entries_.rows()) + "x" +
                          std::to_string(entries_.cols()) + " but graded dimension is " +
                          std::to_string(dim_.even) + "|" + std::to_string(dim_.odd));
    }
  }

  static void require_same(const GradedMatrix& a, const GradedMatrix& b, const char* what) {
    if (!(a.dim_ == b.dim_)) throw ArgumentError(std::string("GradedMatrix ") + what + ": dimension mismatch");
  }

  GradedDim dim_{};
  Mat entries_;
  Parity parity_ = Parity::even;
};

/// sTr = tr(even block) - tr(odd block).
inline cplx supertrace(const GradedMatrix& m) {
  const Mat& e = m.entries();
  const int p = m.dim().even;
  const int q = m.dim().odd;
  return e.block(0, 0, p, p).trace() - e.block(p, p, q, q).trace();
}

/// AB - (-1)^{|A||B|} BA for homogeneous A, B.
inline GradedMatrix graded_commutator(const GradedMatrix& a, const GradedMatrix& b) {
  if (!(a.dim() == b.dim())) throw ArgumentError("graded_commutator: dimension mismatch");
  if (a.parity() == Parity::mixed || b.parity() == Parity::mixed) {
    throw ArgumentError("graded_commutator: inputs must be homogeneous; split mixed matrices first");
  }
  const double sign = (parity_bit(a.parity()) * parity_bit(b.parity()) == 1) ? -1.0 : 1.0;
  Mat c = a.entries() * b.entries() - sign * (b.entries() * a.entries());
  return {a.dim(), std::move(c), add_parity(a.parity(), b.parity())};
}

inline GradedDim tensor_dim(GradedDim v, GradedDim w) {
  return {v.even * w.even + v.odd * w.odd, v.even * w.odd + v.odd * w.even};
}

/// Position of basis vector v_i ⊗ w_j in the even-first ordering of V ⊗ W.
/// Within each parity class the Kronecker order (i major, j minor) is kept.
inline int tensor_position(GradedDim v, GradedDim w, int i, int j) {
  const bool vi_even = v.is_even_index(i);
  const bool wj_even = w.is_even_index(j);
  const bool even = (vi_even == wj_even);
  // count Kronecker indices (i', j') < (i, j) in the same parity class
  int before = 0;
  for (int ii = 0; ii < i; ++ii) {
    before += (v.is_even_index(ii) == even) ? w.even : w.odd;
  }
  for (int jj = 0; jj < j; ++jj) {
    if ((v.is_even_index(i) == w.is_even_index(jj)) == even) ++before;
  }
  return even ? before : tensor_dim(v, w).even + before;
}

namespace detail {

inline std::vector<int> tensor_permutation(GradedDim v, GradedDim w) {
  std::vector<int> pos(static_cast<std::size_t>(v.total() * w.total()));
  for (int i = 0; i < v.total(); ++i) {
    for (int j = 0; j < w.total(); ++j) {
      pos[static_cast<std::size_t>(i * w.total() + j)] = tensor_position(v, w, i, j);
    }
  }
  return pos;
}

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline Mat permute_kron(const Mat& k, const std::vector<int>& pos) {
  Mat out(k.rows(), k.cols());
  for (Eigen::Index r = 0; r < k.rows(); ++r) {
    for (Eigen::Index c = 0; c < k.cols(); ++c) {
      out(pos[static_cast<std::size_t>(r)], pos[static_cast<std::size_t>(c)]) = k(r, c);
    }
  }
  return out;
}

}  // namespace detail

/// Koszul-signed tensor product: (A ⊗ B)(v ⊗ w) = (-1)^{|B||v|} Av ⊗ Bw, so that
/// (a⊗b)(a'⊗b') = (-1)^{|b||a'|} aa' ⊗ bb'. A mixed B is split into its
/// homogeneous parts. The result is stored even-first (see tensor_position).
inline GradedMatrix graded_tensor(const GradedMatrix& a, const GradedMatrix& b) {
  const GradedDim v = a.dim();
  const GradedDim w = b.dim();
  const Mat& ae = a.entries();
  const Mat k = detail::kron(ae, even_block_part(w, b.entries())) +
                detail::kron(ae * grading_matrix(v), odd_block_part(w, b.entries()));
  return GradedMatrix(tensor_dim(v, w), detail::permute_kron(k, detail::tensor_permutation(v, w)));
}

/// The canonical isomorphism V ⊗ W -> W ⊗ V, v ⊗ w -> (-1)^{|v||w|} w ⊗ v.
/// Both sides have the same graded dimension, so the map is an even GradedMatrix.
inline GradedMatrix braiding(GradedDim v, GradedDim w) {
  const GradedDim vw = tensor_dim(v, w);
  Mat m = Mat::Zero(vw.total(), vw.total());
  for (int i = 0; i < v.total(); ++i) {
    for (int j = 0; j < w.total(); ++j) {
      const bool both_odd = !v.is_even_index(i) && !w.is_even_index(j);
      m(tensor_position(w, v, j, i), tensor_position(v, w, i, j)) = both_odd ? -1.0 : 1.0;
    }
  }
  return {vw, std::move(m), Parity::even};
}

/// Matrix exponential backend (Padé scaling and squaring). The accuracy
/// contract is relative error <= 1e-12 for ||M|| <= 50; callers rescale
/// larger inputs.
inline Mat expm(const Mat& m) { return m.exp(); }

/// A perturbation term of the weight-graded exponential. The weight is the
/// nilpotency weight supplied by the caller (the exterior degree for forms).
struct WeightedTerm {
  GradedMatrix matrix;
  int weight = 0;
};

/// Weight-graded expansion of exp(-(F0 + Σ N)).
///
/// Entry w of the result is the sum, over ordered compositions of w into the
/// weights of the supplied terms, of the iterated Duhamel products
/// [e^{-F0}(-N)]^{#k} # e^{-F0}. All compositions are produced at once as the
/// top block row of the exponential of the block upper-triangular matrix
/// with -F0 on the diagonal and -N_{b-a} in block (a, b). Weight-0 terms are
/// not nilpotent and are folded into F0.
inline std::vector<GradedMatrix> duhamel_exp(const GradedMatrix& f0, std::span<const WeightedTerm> terms,
                                             int max_weight) {
  if (f0.parity() != Parity::even) throw ArgumentError("duhamel_exp: F0 must be even");
  if (max_weight < 0) throw ArgumentError("duhamel_exp: negative weight budget");
  const GradedDim dim = f0.dim();
  const int d = dim.total();

  Mat diag = -f0.entries();
  std::vector<Mat> by_weight(static_cast<std::size_t>(max_weight + 1), Mat::Zero(d, d));
  for (const WeightedTerm& t : terms) {
    if (!(t.matrix.dim() == dim)) throw ArgumentError("duhamel_exp: term dimension mismatch");
    if (t.weight < 0) throw ArgumentError("duhamel_exp: negative weight");
    if (t.weight > max_weight) {
      throw NumericError("duhamel_exp: term weight " + std::to_string(t.weight) + " exceeds budget " +
                         std::to_string(max_weight));
    }
    if (t.weight == 0) {
      diag -= t.matrix.entries();
    } else {
      by_weight[static_cast<std::size_t>(t.weight)] -= t.matrix.entries();
    }
  }

  const int blocks = max_weight + 1;
  Mat aug = Mat::Zero(static_cast<Eigen::Index>(blocks) * d, static_cast<Eigen::Index>(blocks) * d);
  for (int a = 0; a < blocks; ++a) {
    aug.block(a * d, a * d, d, d) = diag;
    for (int b = a + 1; b < blocks; ++b) aug.block(a * d, b * d, d, d) = by_weight[static_cast<std::size_t>(b - a)];
  }
  const Mat e = expm(aug);

  std::vector<GradedMatrix> out;
  out.reserve(static_cast<std::size_t>(blocks));
  for (int w = 0; w < blocks; ++w) out.emplace_back(dim, e.block(0, w * d, d, d));
  return out;
}

}  // namespace superchern
