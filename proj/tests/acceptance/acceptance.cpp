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
// Acceptance gate: one PASS/FAIL line per criterion, each with its wall-clock
// budget. Exits non-zero if any criterion fails.

#include <superchern/superchern.hpp>

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace {

using namespace superchern;

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

json model_doc(const std::string& name) {
  return read_json_file(std::string(SUPERCHERN_MODELS_DIR) + "/" + name + ".json");
}

Superconnection model(const std::string& name) { return superconnection_from_json(model_doc(name).at("superconnection")); }

Outcome chern_closedness() {
  Outcome o;
  double worst = 0.0;
  for (const char* name : {"t2-omega0-const", "t2-omega0-wave", "t2-omega1-wave", "t2-mixed", "t2-nonabelian"}) {
    worst = std::max(worst, ext_deriv(chern_character(model(name), 64)).max_coeff());
  }
  o.pass = worst <= 1e-10;
  o.detail = "max |d sCh| " + sci(worst) + " over 5 models at N=64";
  return o;
}

Outcome transgression() {
  const Superconnection s1 = model("t2-mixed");
  const TransgressionResult r = transgression_check(Superconnection(2, s1.fibre()), s1, 0.5, 64, 1e-2);
  const double ratio = r.residual_h / r.residual_half;
  Outcome o;
  o.pass = r.residual_extrapolated <= 1e-8 && std::abs(ratio - 4.0) <= 0.4;
  o.detail = "residual h " + sci(r.residual_h) + ", h/2 " + sci(r.residual_half) + " (ratio " + sci(ratio) +
             "), extrapolated " + sci(r.residual_extrapolated);
  return o;
}

Outcome chern_simons_stokes() {
  const Superconnection s0 = model("t2-omega0-const");
  const Superconnection s1 = model("t2-mixed");
  const FormField diff = chern_character(s0, 32) - chern_character(s1, 32);
  Outcome o;
  double prev = -1.0;
  for (int q : {2, 4, 8, 16, 32}) {
    const double res = (ext_deriv(chern_simons(s0, s1, q, 32)) - diff).max_coeff();
    if (prev >= 0.0 && res > std::max(0.5 * prev, 1e-12)) o.pass = false;
    o.detail += (o.detail.empty() ? "residual by order:" : ",") + std::string(" q") + std::to_string(q) + " " + sci(res);
    prev = res;
  }
  o.pass = o.pass && prev <= 1e-8;
  return o;
}

Outcome scale_group_law() {
  const Superconnection s = model("t2-mixed");
  std::mt19937_64 gen(20261016);
  std::uniform_real_distribution<double> mag(0.05, 20.0);
  std::bernoulli_distribution flip(0.3);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double a = flip(gen) ? -mag(gen) : mag(gen);
    const double b = flip(gen) ? -mag(gen) : mag(gen);
    const FormField lhs = scale_action(scale_action(s, a), b).odd_part();
    const FormField rhs = scale_action(s, a * b).odd_part();
    worst = std::max(worst, (lhs - rhs).max_coeff());
  }
  return {worst == 0.0, "max coefficient residual " + sci(worst) + " over 100 pairs"};
}

Outcome berezin() {
  const CliffordElement e12 = CliffordElement::monomial(2, 1.0, 0b11);
  const cplx b = berezin_supertrace(e12);
  const cplx st = supertrace(spinor_rep(e12));
  double rel = 0.0;
  for (int n = 1; n <= 4; ++n) {
    for (int i = 1; i <= n; ++i) {
      for (int j = 1; j <= n; ++j) {
        const auto ei = CliffordElement::generator(n, 1.0, i);
        const auto ej = CliffordElement::generator(n, 1.0, j);
        const auto anti = clifford_mult(ei, ej) + clifford_mult(ej, ei);
        for (MultiIndex m = 0; m < static_cast<MultiIndex>(anti.num_coeffs()); ++m) {
          const cplx want = (m == 0 && i == j) ? cplx{-2.0} : cplx{};
          rel = std::max(rel, std::abs(anti.at(m) - want));
        }
      }
    }
  }
  for (int n : {2, 4}) {
    const int d = spinor_dim(n).total();
    for (int i = 1; i <= n; ++i) {
      for (int j = 1; j <= n; ++j) {
        const GradedMatrix gi = spinor_generator(n, i);
        const GradedMatrix gj = spinor_generator(n, j);
        const Mat want = (i == j) ? Mat(-2.0 * Mat::Identity(d, d)) : Mat(Mat::Zero(d, d));
        rel = std::max(rel, max_abs((gi * gj + gj * gi).entries() - want));
      }
    }
  }
  const cplx target{0.0, -2.0};
  return {b == target && st == target && rel <= 1e-12,
          "Berezin " + sci(b.real()) + (b.imag() < 0 ? "" : "+") + sci(b.imag()) + "i, spinor sTr " + sci(st.real()) +
              (st.imag() < 0 ? "" : "+") + sci(st.imag()) + "i, relation residual " + sci(rel)};
}

Outcome getzler() {
  std::vector<double> eps;
  for (int i = 1; i <= 12; ++i) eps.push_back(std::ldexp(1.0, -i));
  Outcome o;
  double worst = 0.0;
  for (MultiIndex mask : {MultiIndex{0b1}, MultiIndex{0b11}}) {
    const int k = degree(mask);
    for (int l = k - 1; l <= k + 1; ++l) {
      const GetzlerReport rep = getzler_limit_check(CliffordElement::monomial(2, 1.0, mask), l, eps);
      const double expected = (l == k) ? 2.0 : static_cast<double>(l - k);
      const double dev = std::abs(rep.fitted_rate - expected) / std::abs(expected);
      if (!rep.certified || !(dev <= 0.1)) o.pass = false;
      worst = std::max(worst, dev);
    }
  }
  o.detail = "max relative rate deviation " + sci(worst) + " over degrees 1, 2 and levels k-1..k+1";
  return o;
}

Outcome mckean_singer() {
  const Superconnection s = model("t2-omega0-const");
  std::vector<cplx> values;
  for (double scale : {0.5, 1.0, 2.0}) {
    for (double t : {0.5, 1.0, 2.0}) values.push_back(mckean_singer_index(s, 24, t, scale).value);
  }
  double spread = 0.0;
  double to_zero = 0.0;
  for (const cplx& v : values) {
    spread = std::max(spread, std::abs(v - values.front()));
    to_zero = std::max(to_zero, std::abs(v));
  }
  return {spread <= 1e-8 && to_zero <= 1e-6,
          "spread " + sci(spread) + ", max |index - 0| " + sci(to_zero) + " on the 3x3 (t, s) grid at K=24"};
}

Outcome local_index() {
  const Superconnection s = model("t2-omega1-wave");
  const json pt = model_doc("t2-omega1-wave").at("point");
  const Point x{pt[0].get<double>(), pt[1].get<double>()};
  const std::vector<LocalIndexRow> rows = local_index_scan(s, 32, {0.4, 0.2, 0.1, 0.05}, x);
  Outcome o;
  double prev = std::numeric_limits<double>::infinity();
  o.detail = "gap by t:";
  for (const LocalIndexRow& r : rows) {
    const double gap = std::abs(r.strace - r.target);
    if (!(gap < prev)) o.pass = false;
    o.detail += " " + sci(r.t) + ":" + sci(gap);
    prev = gap;
  }
  const double target = std::abs(rows.back().target);
  if (!(prev <= 0.05 * target)) o.pass = false;

  const std::vector<double> ts{0.4, 0.3, 0.2, 0.15, 0.1, 0.075, 0.05};
  const std::vector<LocalIndexRow> fit_rows = local_index_scan(s, 32, ts, x);
  std::vector<cplx> vals;
  for (const LocalIndexRow& r : fit_rows) vals.push_back(r.strace);
  const AsymptoticFit fit = asymptotic_fit(ts, vals, 2, 4, 1e-6);
  if (!fit.divergence_cancels) o.pass = false;
  o.detail += "; final/target " + sci(prev / target) + "; fitted t^-1 coefficient " + sci(fit.divergent_max);
  return o;
}

Outcome eta_tau() {
  const EtaResult e = eta_invariant_circle(0.25);
  const double eta_err = std::max(std::abs(e.eta_zeta - 0.5), std::abs(e.eta_heat - 0.5));
  const Superconnection s = model("circle-super");
  const FormField shifted = s.connection() + form_from_json(model_doc("circle-super").at("tau_shift"), s.fibre());
  const cplx t0 = tau_superconnection_circle(s).tau;
  const cplx t1 = tau_superconnection_circle(s, shifted).tau;
  const double dec = std::abs(t0 - t1);
  return {eta_err <= 1e-8 && dec <= 1e-6,
          "eta(1/4) error " + sci(eta_err) + " (zeta and heat); tau decomposition residual " + sci(dec)};
}

Outcome detline() {
  const json doc = model_doc("detline-winding");
  const DetLineData data = detline_connection(superconnection_from_json(doc.at("superconnection")), 32);
  const DetCurvatureReport r = detline_curvature(data);
  const HolonomyResult h = detline_holonomy(data, loop_from_json(doc.at("loop")));
  const cplx stokes = std::exp(-rectangle_integral(r.target, 0.0, kPi, 0.0, kPi));
  const double hol = std::abs(h.holonomy - stokes);
  const double curv = std::max(r.max_coeff_deviation, r.max_point_deviation);
  return {curv <= 1e-8 && data.max_real_part <= 1e-10 && hol <= 1e-6,
          "curvature deviation " + sci(curv) + ", real part " + sci(data.max_real_part) + ", holonomy vs Stokes " +
              sci(hol)};
}

PointForm exp_series(const PointForm& f) {
  PointForm out(f.base_dim(), f.fibre());
  out[0] = Mat::Identity(f.fibre().total(), f.fibre().total());
  PointForm term = out;
  for (int m = 1; m < 60; ++m) {
    term = cplx{-1.0 / m} * (term * f);
    out += term;
  }
  return out;
}

Outcome mehler() {
  const Superconnection s = model("t2-mixed");
  const Point x{0.3, 1.1};
  double series = 0.0;
  for (double t : {0.1, 1.0}) {
    for (double scale : {0.5, 2.0}) {
      const PointForm f = sample_point(curvature(scale_action(s, scale)), x);
      const PointForm want = cplx{1.0 / (4.0 * kPi * t)} * exp_series(cplx{t} * f);
      series = std::max(series, (mehler_diagonal(CurvatureMatrix::zero(2), s, t, scale, x) - want).max_coeff());
    }
  }
  const cplx target = index_density_target(chern_character(s, 64), x);
  double coupled = 0.0;
  for (double t : {1.0, 0.1, 0.01}) {
    coupled = std::max(coupled, std::abs(mehler_index_density(CurvatureMatrix::zero(2), s, t, 1.0 / t, x) - target));
  }
  return {series <= 1e-12 && coupled <= 1e-8,
          "exp-series residual " + sci(series) + ", coupled top vs character " + sci(coupled)};
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<Outcome()> body;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "chern-closedness", 30, chern_closedness},
      {2, "transgression", 60, transgression},
      {3, "chern-simons-stokes", 60, chern_simons_stokes},
      {4, "scale-group-law", 1, scale_group_law},
      {5, "berezin-identity", 1, berezin},
      {6, "getzler-trichotomy", 5, getzler},
      {7, "mckean-singer", 120, mckean_singer},
      {8, "local-index", 600, local_index},
      {9, "eta-tau", 30, eta_tau},
      {10, "detline", 120, detline},
      {11, "mehler", 10, mehler},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.budget_seconds;
    const bool pass = o.pass && in_time;
    if (!pass) ++failed;
    std::printf("%s %2d %-20s %s [%.2f s, budget %.0f s%s]\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(),
                secs, c.budget_seconds, in_time ? "" : ", over budget");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
