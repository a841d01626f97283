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

// Fourier–Galerkin Dirac operators coupled to superconnections on T^1, T^2:
//   D = Σ_j c(dx_j) ∂_j + ĉ(L),   ĉ(dx^I ⊗ M) = c(e^I) ⊗̂ M,
// acting on spinors ⊗ V ⊗ span{e^{ik·x} : |k_j| <= K}. The spinor space for
// n = 1 is the doubled C^(1|1) with c(dθ) = -iσx.
//
// The matrix is assembled sparse. Connected components of its sparsity
// pattern are invariant subspaces, so the spectral decomposition is done
// per component with a dense hermitian solver.

#include <superchern/chern.hpp>
#include <superchern/clifford.hpp>
#include <superchern/parallel.hpp>
#include <superchern/superconnection.hpp>

#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <vector>

namespace superchern {

/// Heat computations are trusted only when t K² >= 20, i.e. neglected modes
/// carry weight below e^{-20}.
inline constexpr double kHeatGuard = 20.0;

inline void require_heat_guard(double t, int bandwidth, const char* what) {
  if (!(t > 0.0)) throw ArgumentError(std::string(what) + ": t must be positive");
  if (t * bandwidth * bandwidth < kHeatGuard) {
    throw GuardError(std::string(what) + ": t K^2 = " + std::to_string(t * bandwidth * bandwidth) +
                     " is below the resolvable threshold 20");
  }
}

struct DiracSector {
  std::vector<int> basis;  ///< global indices, increasing
  Eigen::VectorXd eigenvalues;
  Mat eigenvectors;
};

class SpectralDirac {
 public:
  using Sparse = Eigen::SparseMatrix<cplx, Eigen::ColMajor>;

  int base_dim() const { return n_; }
  int truncation() const { return k_; }
  const GradedDim& fibre() const { return fibre_; }
  /// spinor ⊗ fibre, even-first
  const GradedDim& internal_dim() const { return internal_; }
  int num_modes() const { return modes_; }
  int size() const { return modes_ * internal_.total(); }
  const Sparse& matrix() const { return matrix_; }
  double scale() const { return scale_; }
  const Superconnection& source() const { return source_; }

  Freq mode(int m) const { return freq_at(n_, k_, m); }
  int mode_of(int global) const { return global / internal_.total(); }
  int internal_of(int global) const { return global % internal_.total(); }

  /// ‖D - D*‖_max
  double hermiticity_residual() const {
    const Sparse adj = matrix_.adjoint();
    const Sparse diff = matrix_ - adj;
    double m = 0.0;
    for (int c = 0; c < diff.outerSize(); ++c) {
      for (Sparse::InnerIterator it(diff, c); it; ++it) m = std::max(m, std::abs(it.value()));
    }
    return m;
  }

  /// ‖ΓD + DΓ‖_max for the global grading Γ.
  double grading_residual() const {
    double m = 0.0;
    for (int c = 0; c < matrix_.outerSize(); ++c) {
      for (Sparse::InnerIterator it(matrix_, c); it; ++it) {
        const double gr = grading_sign(static_cast<int>(it.row()));
        const double gc = grading_sign(c);
        m = std::max(m, std::abs((gr + gc) * it.value()));
      }
    }
    return m;
  }

  double grading_sign(int global) const { return internal_.is_even_index(internal_of(global)) ? 1.0 : -1.0; }

  /// Invariant subspaces from the sparsity pattern, each diagonalised at
  /// assembly. Only available for hermitian operators.
  const std::vector<DiracSector>& sectors() const {
    if (!sectors_) {
      throw ArgumentError("SpectralDirac: operator is not hermitian (residual " +
                          std::to_string(hermiticity_residual()) + "); the superconnection is not unitary");
    }
    return *sectors_;
  }

  bool is_hermitian() const { return sectors_.has_value(); }

  /// All eigenvalues, sorted.
  std::vector<double> spectrum() const {
    std::vector<double> out;
    for (const DiracSector& s : sectors()) {
      for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i) out.push_back(s.eigenvalues(i));
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  friend SpectralDirac assemble_dirac(const Superconnection& s, int truncation);

  void diagonalize() {
    const int sz = size();
    std::vector<int> parent(static_cast<std::size_t>(sz));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int v) {
      while (parent[static_cast<std::size_t>(v)] != v) {
        parent[static_cast<std::size_t>(v)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
        v = parent[static_cast<std::size_t>(v)];
      }
      return v;
    };
    for (int c = 0; c < matrix_.outerSize(); ++c) {
      for (Sparse::InnerIterator it(matrix_, c); it; ++it) {
        if (it.value() == cplx{}) continue;
        const int a = find(static_cast<int>(it.row()));
        const int b = find(c);
        if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
      }
    }
    std::vector<int> root_to_sector(static_cast<std::size_t>(sz), -1);
    std::vector<DiracSector> secs;
    for (int v = 0; v < sz; ++v) {
      const int r = find(v);
      int& id = root_to_sector[static_cast<std::size_t>(r)];
      if (id < 0) {
        id = static_cast<int>(secs.size());
        secs.emplace_back();
      }
      secs[static_cast<std::size_t>(id)].basis.push_back(v);
    }
    parallel_for(static_cast<int>(secs.size()), [&](int si) {
      DiracSector& sec = secs[static_cast<std::size_t>(si)];
      const int m = static_cast<int>(sec.basis.size());
      Mat block = Mat::Zero(m, m);
      for (int j = 0; j < m; ++j) {
        const int c = sec.basis[static_cast<std::size_t>(j)];
        for (Sparse::InnerIterator it(matrix_, c); it; ++it) {
          const auto pos = std::lower_bound(sec.basis.begin(), sec.basis.end(), static_cast<int>(it.row()));
          block(pos - sec.basis.begin(), j) = it.value();
        }
      }
      Eigen::SelfAdjointEigenSolver<Mat> es(block);
      if (es.info() != Eigen::Success) throw NumericError("SpectralDirac: eigendecomposition failed");
      sec.eigenvalues = es.eigenvalues();
      sec.eigenvectors = es.eigenvectors();
    });
    sectors_ = std::move(secs);
  }

  int n_ = 0;
  int k_ = 0;
  GradedDim fibre_{1, 0};
  GradedDim internal_{1, 1};
  int modes_ = 0;
  double scale_ = 1.0;
  Superconnection source_;
  Sparse matrix_;
  std::optional<std::vector<DiracSector>> sectors_;
};

/// ĉ of one Fourier coefficient of a form component: c(e^I) ⊗̂ M.
inline GradedMatrix clifford_quantize(int n, MultiIndex mask, const GradedMatrix& m) {
  return graded_tensor(spinor_monomial(n, mask), m);
}

inline SpectralDirac assemble_dirac(const Superconnection& s, int truncation) {
  const int n = s.base_dim();
  if (n != 1 && n != 2) throw ArgumentError("assemble_dirac: base dimension must be 1 or 2");
  if (truncation < 1) throw ArgumentError("assemble_dirac: truncation must be positive");
  if (s.bandwidth() > truncation) {
    throw ArgumentError("assemble_dirac: coefficient bandwidth " + std::to_string(s.bandwidth()) +
                        " exceeds truncation " + std::to_string(truncation));
  }
  SpectralDirac d;
  d.n_ = n;
  d.k_ = truncation;
  d.fibre_ = s.fibre();
  d.scale_ = s.scale();
  d.source_ = s;
  const GradedDim sd = spinor_dim(n);
  d.internal_ = tensor_dim(sd, s.fibre());
  d.modes_ = ipow(2 * truncation + 1, n);
  const int in = d.internal_.total();

  std::vector<Eigen::Triplet<cplx>> trip;
  auto add_block = [&](int row_mode, int col_mode, const Mat& blk) {
    for (int r = 0; r < in; ++r) {
      for (int c = 0; c < in; ++c) {
        if (blk(r, c) != cplx{}) trip.emplace_back(row_mode * in + r, col_mode * in + c, blk(r, c));
      }
    }
  };

  // Σ_j c(dx_j) ⊗ 1 · (i k_j)
  std::vector<Mat> gens;
  const GradedMatrix id_v = GradedMatrix::identity(s.fibre());
  for (int j = 1; j <= n; ++j) gens.push_back(graded_tensor(spinor_generator(n, j), id_v).entries());
  for (int m = 0; m < d.modes_; ++m) {
    const Freq k = d.mode(m);
    Mat blk = Mat::Zero(in, in);
    for (int j = 0; j < n; ++j) blk += cplx{0.0, static_cast<double>(k[static_cast<std::size_t>(j)])} * gens[static_cast<std::size_t>(j)];
    add_block(m, m, blk);
  }

  // ĉ(L): multiplication by e^{iq·x} maps mode k to k + q
  const FormField l = s.odd_part();
  for (const auto& [mask, f] : l.components()) {
    for (int qi = 0; qi < f.num_modes(); ++qi) {
      const Mat& c = f.at_index(qi);
      if (c.isZero(0.0)) continue;
      const Freq q = f.freq(qi);
      const Mat op = clifford_quantize(n, mask, GradedMatrix(s.fibre(), c)).entries();
      for (int m = 0; m < d.modes_; ++m) {
        Freq k = d.mode(m);
        for (int j = 0; j < n; ++j) k[static_cast<std::size_t>(j)] += q[static_cast<std::size_t>(j)];
        if (!in_band(n, truncation, k)) continue;
        add_block(freq_index(n, truncation, k), m, op);
      }
    }
  }
  d.matrix_.resize(d.size(), d.size());
  d.matrix_.setFromTriplets(trip.begin(), trip.end());
  d.matrix_.prune(cplx{0.0, 0.0}, 0.0);
  if (d.hermiticity_residual() <= 1e-10) d.diagonalize();
  return d;
}

struct HeatDiagonalSample {
  double t = 0.0;
  double s = 1.0;
  Point x{};
  GradedMatrix value;
};

/// Precomputed Φ = E_x V per sector for repeated heat evaluations at x.
class HeatProbe {
 public:
  HeatProbe(const SpectralDirac& d, const Point& x) : d_(&d), x_(x) {
    const int in = d.internal_dim().total();
    const auto& secs = d.sectors();
    phi_.resize(secs.size());
    for (std::size_t si = 0; si < secs.size(); ++si) {
      const DiracSector& sec = secs[si];
      Mat e = Mat::Zero(in, static_cast<Eigen::Index>(sec.basis.size()));
      for (std::size_t b = 0; b < sec.basis.size(); ++b) {
        const int g = sec.basis[b];
        const Freq k = d.mode(d.mode_of(g));
        double phase = 0.0;
        for (int j = 0; j < d.base_dim(); ++j) phase += k[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
        e(d.internal_of(g), static_cast<Eigen::Index>(b)) = cplx{std::cos(phase), std::sin(phase)};
      }
      phi_[si] = e * sec.eigenvectors;
    }
  }

  /// p_t(x,x) = (2π)^{-n} Σ Φ diag(e^{-tλ²}) Φ*
  GradedMatrix value(double t) const {
    require_heat_guard(t, d_->truncation(), "heat_diagonal");
    const int in = d_->internal_dim().total();
    Mat acc = Mat::Zero(in, in);
    const auto& secs = d_->sectors();
    for (std::size_t si = 0; si < secs.size(); ++si) {
      const Eigen::VectorXd w = (-t * secs[si].eigenvalues.array().square()).exp();
      acc += phi_[si] * w.asDiagonal() * phi_[si].adjoint();
    }
    acc *= std::pow(kTwoPi, -d_->base_dim());
    return GradedMatrix(d_->internal_dim(), std::move(acc));
  }

  const Point& point() const { return x_; }

 private:
  const SpectralDirac* d_;
  Point x_;
  std::vector<Mat> phi_;
};

inline HeatDiagonalSample heat_diagonal(const SpectralDirac& d, double t, const Point& x) {
  require_heat_guard(t, d.truncation(), "heat_diagonal");
  HeatProbe probe(d, x);
  return {t, d.scale(), x, probe.value(t)};
}

struct IndexResult {
  cplx value;
  double distance_to_integer = 0.0;
};

inline void require_unitary(const Superconnection& s, const char* what) {
  const UnitaryAudit audit = check_unitary(s);
  if (!audit.pass) {
    throw ArgumentError(std::string(what) + ": superconnection is not unitary (max deviation " +
                        std::to_string(audit.max_deviation) + ")");
  }
}

/// Heat supertrace of an assembled operator: Σ e^{-tλ²} <v, Γ v>.
inline cplx heat_supertrace(const SpectralDirac& d, double t) {
  require_heat_guard(t, d.truncation(), "heat_supertrace");
  cplx acc{};
  for (const DiracSector& sec : d.sectors()) {
    Eigen::VectorXd g(static_cast<Eigen::Index>(sec.basis.size()));
    for (std::size_t b = 0; b < sec.basis.size(); ++b) g(static_cast<Eigen::Index>(b)) = d.grading_sign(sec.basis[b]);
    for (Eigen::Index c = 0; c < sec.eigenvectors.cols(); ++c) {
      const double gv = (sec.eigenvectors.col(c).cwiseAbs2().array() * g.array()).sum();
      acc += std::exp(-t * sec.eigenvalues(c) * sec.eigenvalues(c)) * gv;
    }
  }
  return acc;
}

/// ∫ sTr p_{t,s}(x,x) dx as the exact Fourier trace of e^{-t D(∇^s)²}.
inline IndexResult mckean_singer_index(const Superconnection& s, int truncation, double t, double scale) {
  require_unitary(s, "mckean_singer_index");
  require_heat_guard(t, truncation, "mckean_singer_index");
  const SpectralDirac d = assemble_dirac(scale_action(s, scale), truncation);
  IndexResult r;
  r.value = heat_supertrace(d, t);
  r.distance_to_integer = std::abs(r.value - std::round(r.value.real()));
  return r;
}

struct LocalIndexRow {
  double t = 0.0;
  double s = 0.0;
  cplx strace;
  cplx target;
  double trunc_bound = 0.0;
};

/// Heuristic bound on the heat-kernel weight of modes outside the cube:
/// (2π)^{-n} dim · Σ_{k ∉ [-K,K]^n} e^{-t (|k| - c)_+²}, with c a bound on
/// the zeroth-order part of D.
inline double truncation_bound(const Superconnection& s, int truncation, double t, int internal_total) {
  const int n = s.base_dim();
  double c = 0.0;
  const FormField l = s.odd_part();
  for (const auto& [mask, f] : l.components()) {
    for (int i = 0; i < f.num_modes(); ++i) c += operator_norm(f.at_index(i));
  }
  const int reach = truncation + static_cast<int>(std::ceil(c + std::sqrt(800.0 / t))) + 1;
  double sum = 0.0;
  if (n == 1) {
    for (int k = truncation + 1; k <= reach; ++k) sum += 2.0 * std::exp(-t * std::pow(std::max(0.0, k - c), 2));
  } else {
    for (int a = -reach; a <= reach; ++a) {
      for (int b = -reach; b <= reach; ++b) {
        if (std::abs(a) <= truncation && std::abs(b) <= truncation) continue;
        const double r = std::sqrt(static_cast<double>(a * a + b * b));
        sum += std::exp(-t * std::pow(std::max(0.0, r - c), 2));
      }
    }
  }
  return std::pow(kTwoPi, -n) * internal_total * sum;
}

/// Rows (t, sTr p_{t,1/t}(x,x), target) for the coupled limit, with target
/// (2πi)^{-n/2} [sCh]_n / dvol at x (Â = 1 on the flat torus).
inline std::vector<LocalIndexRow> local_index_scan(const Superconnection& s, int truncation,
                                                   const std::vector<double>& t_list, const Point& x,
                                                   int grid_n = 64) {
  if (s.base_dim() % 2 != 0) throw ArgumentError("local_index_scan: base dimension must be even");
  require_unitary(s, "local_index_scan");
  for (double t : t_list) require_heat_guard(t, truncation, "local_index_scan");
  const cplx target = index_density_target(chern_character(s, grid_n), x);
  const bool scale_free = s.omegas().empty();
  std::optional<SpectralDirac> shared;
  std::optional<HeatProbe> shared_probe;
  if (scale_free) {
    shared = assemble_dirac(s, truncation);
    shared_probe.emplace(*shared, x);
  }
  std::vector<LocalIndexRow> rows;
  for (double t : t_list) {
    LocalIndexRow row;
    row.t = t;
    row.s = 1.0 / t;
    GradedMatrix p;
    if (scale_free) {
      p = shared_probe->value(t);
    } else {
      const SpectralDirac d = assemble_dirac(scale_action(s, 1.0 / t), truncation);
      p = HeatProbe(d, x).value(t);
    }
    row.strace = supertrace(p);
    row.target = target;
    row.trunc_bound = truncation_bound(scale_action(s, 1.0 / t), truncation, t, tensor_dim(spinor_dim(s.base_dim()), s.fibre()).total());
    rows.push_back(row);
  }
  return rows;
}

struct AsymptoticFit {
  int n = 0;
  std::vector<double> powers;        ///< exponent k - n/2 of each fitted term
  std::vector<cplx> coefficients;    ///< a_k
  double residual = 0.0;             ///< max |fit - data|
  double condition_number = 0.0;     ///< of the column-scaled design matrix
  double divergent_max = 0.0;        ///< max |a_k| over k < n/2
  bool divergence_cancels = false;   ///< divergent_max <= tolerance
};

/// Least-squares fit of sTr p_t(x,x) ≈ Σ_{k<terms} a_k t^{k - n/2}.
inline AsymptoticFit asymptotic_fit(const std::vector<double>& t, const std::vector<cplx>& values, int n, int terms,
                                    double tolerance = 1e-6) {
  if (t.size() != values.size()) throw ArgumentError("asymptotic_fit: size mismatch");
  if (t.size() < 5) throw ArgumentError("asymptotic_fit: need at least 5 samples");
  if (terms < 1 || static_cast<std::size_t>(terms) > t.size()) throw ArgumentError("asymptotic_fit: bad term count");
  const double tmin = *std::min_element(t.begin(), t.end());
  const double tmax = *std::max_element(t.begin(), t.end());
  if (tmax < 2.0 * tmin) throw ArgumentError("asymptotic_fit: samples must span at least one dyadic range");
  const auto rows = static_cast<Eigen::Index>(t.size());
  Eigen::MatrixXd a(rows, terms);
  Mat b(rows, 1);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (int k = 0; k < terms; ++k) a(i, k) = std::pow(t[static_cast<std::size_t>(i)], k - 0.5 * n);
    b(i, 0) = values[static_cast<std::size_t>(i)];
  }
  const Eigen::VectorXd scale = a.colwise().norm().cwiseInverse();
  const Eigen::MatrixXd as = a * scale.asDiagonal();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(as, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd sv = svd.singularValues();
  AsymptoticFit fit;
  fit.n = n;
  fit.condition_number = sv(0) / sv(sv.size() - 1);
  if (!std::isfinite(fit.condition_number) || fit.condition_number > 1e12) {
    throw NumericError("asymptotic_fit: design matrix is ill-conditioned (cond " +
                       std::to_string(fit.condition_number) + ")");
  }
  const Mat sol = svd.solve(b.real()).cast<cplx>() + cplx{0.0, 1.0} * svd.solve(b.imag()).cast<cplx>();
  for (int k = 0; k < terms; ++k) {
    fit.powers.push_back(k - 0.5 * n);
    fit.coefficients.push_back(sol(k, 0) * scale(k));
    if (2 * k < n) fit.divergent_max = std::max(fit.divergent_max, std::abs(fit.coefficients.back()));
  }
  const Mat resid = a.cast<cplx>() * (scale.cast<cplx>().asDiagonal() * sol) - b;
  fit.residual = resid.cwiseAbs().maxCoeff();
  fit.divergence_cancels = fit.divergent_max <= tolerance;
  return fit;
}

}  // namespace superchern
