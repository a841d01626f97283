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

// Experiment runner behind the superchern command line tool. A JSON config
// names an experiment and a model; the runner dispatches to the library,
// writes report.json plus CSV tables into the output directory and maps the
// outcome onto the exit-code contract.

#include <superchern/superchern.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#ifndef SUPERCHERN_DEFAULT_MODELS_DIR
#define SUPERCHERN_DEFAULT_MODELS_DIR "models"
#endif

namespace superchern::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitSchema = 2;
inline constexpr int kExitGuard = 3;
inline constexpr int kExitNumeric = 4;

inline const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {
      "chern-closedness", "transgression", "chern-simons-stokes", "mckean-singer",
      "local-index-scan", "asymptotic-fit", "eta",                "tau",
      "detline-curvature", "detline-holonomy", "getzler-limit"};
  return names;
}

inline std::string models_dir() {
  if (const char* env = std::getenv("SUPERCHERN_MODELS_DIR"); env != nullptr && *env != '\0') return env;
  return SUPERCHERN_DEFAULT_MODELS_DIR;
}

/// %.17g, so CSV output round-trips and is byte-stable.
inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct CsvTable {
  std::string file;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

inline void write_csv(const std::filesystem::path& path, const CsvTable& t) {
  std::ofstream out(path);
  if (!out) throw SchemaError("cannot write " + path.string());
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << '\n';
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
}

struct ExperimentResult {
  json rows = json::array();
  bool pass = true;
  double max_residual = 0.0;
  std::vector<CsvTable> tables;

  /// Records a residual against its tolerance; NaN counts as a failure.
  bool check(double residual, double tolerance) {
    const bool ok = residual <= tolerance;
    pass = pass && ok;
    if (std::isfinite(residual)) max_residual = std::max(max_residual, residual);
    return ok;
  }
  bool require(bool ok) {
    pass = pass && ok;
    return ok;
  }
};

// ---------------------------------------------------------------------------
// Config access

class Config {
 public:
  explicit Config(json j) : j_(std::move(j)) {
    if (!j_.is_object()) throw SchemaError("config: top level must be an object");
    static const std::set<std::string> known = {
        "experiment", "description", "model", "models", "model0", "output", "seed", "K", "grid_N",
        "t_list",     "s_list",      "t",     "h",      "quad_order", "quad_orders", "terms", "point",
        "a",          "expected",    "shift", "loop",   "frame", "n", "monomials", "levels", "eps_list",
        "tolerances"};
    for (const auto& [key, value] : j_.items()) {
      if (known.count(key) == 0) throw SchemaError("config: unknown key '" + key + "'");
    }
    experiment_ = detail::get_field<std::string>(j_, "experiment", "config");
    const auto& names = experiment_names();
    if (std::find(names.begin(), names.end(), experiment_) == names.end()) {
      throw SchemaError("config: unknown experiment '" + experiment_ + "'");
    }
    if (j_.contains("tolerances") && !j_.at("tolerances").is_object()) {
      throw SchemaError("config: 'tolerances' must be an object");
    }
  }

  const json& raw() const { return j_; }
  const std::string& experiment() const { return experiment_; }
  bool has(const char* key) const { return j_.contains(key); }

  template <class T>
  T get(const char* key, T fallback) const {
    return j_.contains(key) ? detail::get_field<T>(j_, key, "config") : fallback;
  }
  template <class T>
  T require(const char* key) const {
    return detail::get_field<T>(j_, key, "config");
  }
  const json& at(const char* key) const {
    if (!j_.contains(key)) throw SchemaError(std::string("config: missing key '") + key + "'");
    return j_.at(key);
  }

  int positive_int(const char* key, int fallback) const {
    const int v = get<int>(key, fallback);
    if (v < 1) throw SchemaError(std::string("config: '") + key + "' must be positive");
    return v;
  }
  double positive_double(const char* key, double fallback) const {
    const double v = get<double>(key, fallback);
    if (!(v > 0.0) || !std::isfinite(v)) throw SchemaError(std::string("config: '") + key + "' must be positive");
    return v;
  }
  std::vector<double> positive_list(const char* key, std::vector<double> fallback) const {
    std::vector<double> v = get<std::vector<double>>(key, std::move(fallback));
    if (v.empty()) throw SchemaError(std::string("config: '") + key + "' must not be empty");
    for (double x : v) {
      if (!(x > 0.0) || !std::isfinite(x)) throw SchemaError(std::string("config: '") + key + "' entries must be positive");
    }
    return v;
  }

  /// Tolerances come from the "tolerances" object; only the names listed by
  /// the experiment are accepted.
  double tolerance(const char* name, double fallback) const {
    used_tolerances_.insert(name);
    if (!j_.contains("tolerances") || !j_.at("tolerances").contains(name)) return fallback;
    const double v = detail::get_field<double>(j_.at("tolerances"), name, "tolerances");
    if (!(v >= 0.0)) throw SchemaError(std::string("tolerances: '") + name + "' must be non-negative");
    return v;
  }
  void reject_unused_tolerances() const {
    if (!j_.contains("tolerances")) return;
    for (const auto& [key, value] : j_.at("tolerances").items()) {
      if (used_tolerances_.count(key) == 0) {
        throw SchemaError("tolerances: '" + key + "' does not apply to " + experiment_);
      }
    }
  }

 private:
  json j_;
  std::string experiment_;
  mutable std::set<std::string> used_tolerances_;
};

// ---------------------------------------------------------------------------
// Models

struct ModelDoc {
  std::string name;
  json doc;  ///< full model document (superconnection plus optional extras)
  Superconnection sc{1, GradedDim{1, 0}};
};

inline ModelDoc resolve_model(const json& ref, const std::string& dir = models_dir()) {
  ModelDoc m;
  if (ref.is_string()) {
    m.name = ref.get<std::string>();
    if (m.name.empty() || m.name.find('/') != std::string::npos || m.name.find("..") != std::string::npos) {
      throw SchemaError("model: invalid name '" + m.name + "'");
    }
    const std::filesystem::path path = std::filesystem::path(dir) / (m.name + ".json");
    if (!std::filesystem::exists(path)) throw SchemaError("model: no shipped model named '" + m.name + "'");
    m.doc = read_json_file(path.string());
  } else if (ref.is_object()) {
    m.doc = ref.contains("superconnection") ? ref : json{{"superconnection", ref}};
    m.name = m.doc.value("name", std::string("inline"));
  } else {
    throw SchemaError("model: expected a model name or an inline superconnection object");
  }
  m.sc = superconnection_from_json(detail::get_field<json>(m.doc, "superconnection", "model"));
  return m;
}

struct CatalogEntry {
  std::string name;
  std::string description;
  std::string identity;
};

inline std::vector<CatalogEntry> list_models(const std::string& dir = models_dir()) {
  std::vector<CatalogEntry> out;
  if (!std::filesystem::is_directory(dir)) return out;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() != ".json") continue;
    const json doc = read_json_file(entry.path().string());
    out.push_back({doc.value("name", entry.path().stem().string()), doc.value("description", std::string()),
                   doc.value("identity", std::string())});
  }
  std::sort(out.begin(), out.end(), [](const CatalogEntry& a, const CatalogEntry& b) { return a.name < b.name; });
  return out;
}

inline Point model_point(const Config& c, const ModelDoc& m) {
  const int n = m.sc.base_dim();
  std::vector<double> p;
  if (c.has("point")) {
    p = c.require<std::vector<double>>("point");
  } else if (m.doc.contains("point")) {
    p = detail::get_field<std::vector<double>>(m.doc, "point", "model");
  } else {
    p.assign(static_cast<std::size_t>(n), 0.0);
  }
  if (static_cast<int>(p.size()) != n) throw SchemaError("config: 'point' must have one entry per base dimension");
  Point x{};
  for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = p[static_cast<std::size_t>(i)];
  return x;
}

inline Superconnection reference_or_flat(const Config& c, const Superconnection& s1) {
  if (!c.has("model0")) return Superconnection(s1.base_dim(), s1.fibre());
  Superconnection s0 = resolve_model(c.at("model0")).sc;
  if (s0.base_dim() != s1.base_dim() || !(s0.fibre() == s1.fibre())) {
    throw SchemaError("config: model0 and model live on different bundles");
  }
  return s0;
}

inline void require_decreasing(const std::vector<double>& v, const char* key) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] < v[i - 1])) throw SchemaError(std::string("config: '") + key + "' must be strictly decreasing");
  }
}

// ---------------------------------------------------------------------------
// Experiments

inline ExperimentResult run_chern_closedness(const Config& c) {
  std::vector<json> refs;
  if (c.has("models")) {
    const json& list = c.at("models");
    if (!list.is_array() || list.empty()) throw SchemaError("config: 'models' must be a non-empty array");
    refs.assign(list.begin(), list.end());
  } else {
    refs.push_back(c.at("model"));
  }
  const int grid = c.positive_int("grid_N", 64);
  const double tol = c.tolerance("closedness", 1e-10);
  ExperimentResult r;
  CsvTable t{"closedness.csv", {"model", "grid_N", "d_sch_max", "dropped_parity_max", "nyquist_max"}, {}};
  for (const json& ref : refs) {
    const ModelDoc m = resolve_model(ref);
    GridDiagnostics diag;
    const FormField sch = chern_character(m.sc, grid, &diag);
    const double res = ext_deriv(sch).max_coeff();
    const bool ok = r.check(res, tol);
    r.rows.push_back({{"model", m.name}, {"grid_N", grid}, {"d_sch_max", res},
                      {"dropped_parity_max", diag.dropped_parity_max}, {"nyquist_max", diag.nyquist_max}, {"pass", ok}});
    t.rows.push_back({m.name, std::to_string(grid), fmt(res), fmt(diag.dropped_parity_max), fmt(diag.nyquist_max)});
  }
  r.tables.push_back(std::move(t));
  return r;
}

inline ExperimentResult run_transgression(const Config& c) {
  const ModelDoc m = resolve_model(c.at("model"));
  const Superconnection s0 = reference_or_flat(c, m.sc);
  const double tt = c.get<double>("t", 0.5);
  if (!(tt >= 0.0 && tt <= 1.0)) throw SchemaError("config: 't' must lie in [0, 1]");
  const double h = c.positive_double("h", 1e-2);
  const int grid = c.positive_int("grid_N", 64);
  const double tol = c.tolerance("extrapolated", 1e-8);
  const double ratio_tol = c.tolerance("richardson_ratio", 0.1);
  const double floor = c.tolerance("floor", 1e-10);
  const TransgressionResult tr = transgression_check(s0, m.sc, tt, grid, h);
  ExperimentResult r;
  r.check(tr.residual_extrapolated, tol);
  // second-order central differences: halving h divides the error by 4
  const double ratio = tr.residual_half > 0.0 ? tr.residual_h / tr.residual_half : 0.0;
  const bool at_floor = tr.residual_h <= floor;
  const bool order_ok = at_floor || std::abs(ratio / 4.0 - 1.0) <= ratio_tol;
  r.require(order_ok);
  r.rows.push_back({{"step", h}, {"residual", tr.residual_h}});
  r.rows.push_back({{"step", 0.5 * h}, {"residual", tr.residual_half}});
  r.rows.push_back({{"step", "extrapolated"}, {"residual", tr.residual_extrapolated}});
  r.rows.push_back({{"richardson_ratio", ratio}, {"second_order", order_ok}});
  r.tables.push_back({"transgression.csv",
                      {"step", "residual"},
                      {{fmt(h), fmt(tr.residual_h)}, {fmt(0.5 * h), fmt(tr.residual_half)}, {"extrapolated", fmt(tr.residual_extrapolated)}}});
  return r;
}

inline ExperimentResult run_chern_simons_stokes(const Config& c) {
  const ModelDoc m = resolve_model(c.at("model"));
  const Superconnection s0 = reference_or_flat(c, m.sc);
  const int grid = c.positive_int("grid_N", 64);
  std::vector<int> orders;
  if (c.has("quad_orders")) {
    orders = c.require<std::vector<int>>("quad_orders");
  } else {
    orders = {c.positive_int("quad_order", 32)};
    if (!c.has("quad_order")) orders = {4, 8, 16, 32};
  }
  if (orders.empty()) throw SchemaError("config: 'quad_orders' must not be empty");
  for (std::size_t i = 0; i < orders.size(); ++i) {
    if (orders[i] < 1 || (i > 0 && orders[i] <= orders[i - 1])) {
      throw SchemaError("config: quadrature orders must be positive and increasing");
    }
  }
  const double tol = c.tolerance("stokes", 1e-8);
  const double floor = c.tolerance("floor", 1e-12);
  const FormField diff = chern_character(s0, grid) - chern_character(m.sc, grid);
  ExperimentResult r;
  CsvTable t{"chern_simons.csv", {"quad_order", "residual"}, {}};
  double prev = -1.0;
  for (std::size_t i = 0; i < orders.size(); ++i) {
    const FormField alpha = chern_simons(s0, m.sc, orders[i], grid);
    const double res = (ext_deriv(alpha) - diff).max_coeff();
    bool halves = true;
    if (prev >= 0.0) halves = res <= std::max(0.5 * prev, floor);
    r.require(halves);
    if (i + 1 == orders.size()) r.check(res, tol);
    r.rows.push_back({{"quad_order", orders[i]}, {"residual", res}, {"halves", halves}});
    t.rows.push_back({std::to_string(orders[i]), fmt(res)});
    prev = res;
  }
  r.tables.push_back(std::move(t));
  return r;
}

inline ExperimentResult run_mckean_singer(const Config& c) {
  const ModelDoc m = resolve_model(c.at("model"));
  const int k = c.positive_int("K", 24);
  const std::vector<double> ts = c.positive_list("t_list", {0.5, 1.0, 2.0});
  const std::vector<double> ss = c.get<std::vector<double>>("s_list", {1.0});
  for (double s : ss) {
    if (s == 0.0 || !std::isfinite(s)) throw SchemaError("config: 's_list' entries must be nonzero");
  }
  const double spread_tol = c.tolerance("spread", 1e-8);
  const double int_tol = c.tolerance("integer", 1e-6);
  require_unitary(m.sc, "mckean-singer");
  for (double t : ts) require_heat_guard(t, k, "mckean-singer");
  ExperimentResult r;
  CsvTable table{"mckean_singer.csv", {"t", "s", "index_re", "index_im", "distance_to_integer"}, {}};
  std::optional<cplx> first;
  double spread = 0.0;
  double dist = 0.0;
  for (double s : ss) {
    const SpectralDirac d = assemble_dirac(scale_action(m.sc, s), k);
    for (double t : ts) {
      const cplx v = heat_supertrace(d, t);
      const double di = std::abs(v - std::round(v.real()));
      if (!first) first = v;
      spread = std::max(spread, std::abs(v - *first));
      dist = std::max(dist, di);
      r.rows.push_back({{"t", t}, {"s", s}, {"index_re", v.real()}, {"index_im", v.imag()}, {"distance_to_integer", di}});
      table.rows.push_back({fmt(t), fmt(s), fmt(v.real()), fmt(v.imag()), fmt(di)});
    }
  }
  r.check(spread, spread_tol);
  r.check(dist, int_tol);
  if (c.has("expected")) r.check(std::abs(*first - cplx{c.require<double>("expected")}), int_tol);
  r.tables.push_back(std::move(table));
  return r;
}

inline std::vector<LocalIndexRow> scan_rows(const Config& c, const ModelDoc& m, int k, const std::vector<double>& ts) {
  return local_index_scan(m.sc, k, ts, model_point(c, m), c.positive_int("grid_N", 64));
}

inline CsvTable local_index_table(const std::vector<LocalIndexRow>& rows, const Point& x, int n) {
  CsvTable t{"local_index.csv", {"t", "s"}, {}};
  for (int i = 0; i < n; ++i) t.header.push_back("x" + std::to_string(i + 1));
  for (const char* h : {"strace_re", "strace_im", "target_re", "target_im", "trunc_bound"}) t.header.push_back(h);
  for (const LocalIndexRow& row : rows) {
    std::vector<std::string> cells{fmt(row.t), fmt(row.s)};
    for (int i = 0; i < n; ++i) cells.push_back(fmt(x[static_cast<std::size_t>(i)]));
    for (double v : {row.strace.real(), row.strace.imag(), row.target.real(), row.target.imag(), row.trunc_bound}) {
      cells.push_back(fmt(v));
    }
    t.rows.push_back(std::move(cells));
  }
  return t;
}

inline ExperimentResult run_local_index_scan(const Config& c) {
  const ModelDoc m = resolve_model(c.at("model"));
  const int k = c.positive_int("K", 32);
  const std::vector<double> ts = c.positive_list("t_list", {0.4, 0.2, 0.1, 0.05});
  require_decreasing(ts, "t_list");
  const double frac = c.tolerance("gap_fraction", 0.05);
  const double floor = c.tolerance("floor", 1e-10);
  const std::vector<LocalIndexRow> rows = scan_rows(c, m, k, ts);
  ExperimentResult r;
  double prev = std::numeric_limits<double>::infinity();
  bool monotone = true;
  for (const LocalIndexRow& row : rows) {
    const double gap = std::abs(row.strace - row.target);
    monotone = monotone && gap <= prev + floor;
    prev = gap;
    r.rows.push_back({{"t", row.t}, {"s", row.s}, {"strace_re", row.strace.real()}, {"strace_im", row.strace.imag()},
                      {"target_re", row.target.real()}, {"target_im", row.target.imag()}, {"gap", gap},
                      {"trunc_bound", row.trunc_bound}});
  }
  r.require(monotone);
  const double target = std::abs(rows.back().target);
  const double final_gap = std::abs(rows.back().strace - rows.back().target);
  if (target > floor) {
    r.check(final_gap / target, frac);
  } else {
    r.check(final_gap, floor);
  }
  r.tables.push_back(local_index_table(rows, model_point(c, m), m.sc.base_dim()));
  return r;
}

inline ExperimentResult run_asymptotic_fit(const Config& c) {
  const ModelDoc m = resolve_model(c.at("model"));
  const int k = c.positive_int("K", 32);
  const std::vector<double> ts = c.positive_list("t_list", {0.4, 0.3, 0.2, 0.15, 0.1, 0.075, 0.05});
  require_decreasing(ts, "t_list");
  const int terms = c.positive_int("terms", 4);
  const double div_tol = c.tolerance("divergent", 1e-6);
  const double cons_tol = c.tolerance("consistency", 0.02);
  const std::vector<LocalIndexRow> rows = scan_rows(c, m, k, ts);
  std::vector<double> tv;
  std::vector<cplx> vv;
  for (const LocalIndexRow& row : rows) {
    tv.push_back(row.t);
    vv.push_back(row.strace);
  }
  const int n = m.sc.base_dim();
  const AsymptoticFit fit = asymptotic_fit(tv, vv, n, terms, div_tol);
  ExperimentResult r;
  r.check(fit.divergent_max, div_tol);
  const cplx target = rows.back().target;
  const std::size_t slot = static_cast<std::size_t>(n / 2);
  if (slot < fit.coefficients.size()) {
    const double dev = std::abs(fit.coefficients[slot] - target);
    if (std::abs(target) > div_tol) {
      r.check(dev / std::abs(target), cons_tol);
    } else {
      r.check(dev, div_tol);
    }
  }
  CsvTable t{"asymptotic_fit.csv", {"power", "coeff_re", "coeff_im"}, {}};
  for (std::size_t i = 0; i < fit.coefficients.size(); ++i) {
    r.rows.push_back({{"power", fit.powers[i]}, {"coeff_re", fit.coefficients[i].real()},
                      {"coeff_im", fit.coefficients[i].imag()}});
    t.rows.push_back({fmt(fit.powers[i]), fmt(fit.coefficients[i].real()), fmt(fit.coefficients[i].imag())});
  }
  r.rows.push_back({{"target_re", target.real()}, {"target_im", target.imag()}, {"fit_residual", fit.residual},
                    {"condition_number", fit.condition_number}, {"divergent_max", fit.divergent_max}});
  r.tables.push_back(std::move(t));
  r.tables.push_back(local_index_table(rows, model_point(c, m), n));
  return r;
}

inline ExperimentResult run_eta(const Config& c) {
  const json& aj = c.at("a");
  std::vector<double> as;
  if (aj.is_number()) {
    as.push_back(aj.get<double>());
  } else {
    as = c.require<std::vector<double>>("a");
  }
  std::vector<double> expected;
  if (c.has("expected")) {
    const json& ej = c.at("expected");
    expected = ej.is_number() ? std::vector<double>{ej.get<double>()} : c.require<std::vector<double>>("expected");
    if (expected.size() != as.size()) throw SchemaError("config: 'expected' must match 'a' in length");
  }
  const double tol = c.tolerance("agreement", 1e-8);
  ExperimentResult r;
  CsvTable t{"eta.csv", {"a", "eta_zeta", "eta_heat", "difference", "kernel_dim", "xi"}, {}};
  for (std::size_t i = 0; i < as.size(); ++i) {
    const EtaResult e = eta_invariant_circle(as[i]);
    r.check(e.difference, tol);
    if (!expected.empty()) r.check(std::abs(e.eta_zeta - expected[i]), tol);
    r.rows.push_back({{"a", e.a}, {"eta_zeta", e.eta_zeta}, {"eta_heat", e.eta_heat}, {"difference", e.difference},
                      {"kernel_dim", e.kernel_dim}, {"xi", e.xi()}});
    t.rows.push_back({fmt(e.a), fmt(e.eta_zeta), fmt(e.eta_heat), fmt(e.difference), std::to_string(e.kernel_dim), fmt(e.xi())});
  }
  r.tables.push_back(std::move(t));
  return r;
}

inline ExperimentResult run_tau(const Config& c) {
  const ModelDoc m = resolve_model(c.at("model"));
  const int quad = c.positive_int("quad_order", 32);
  const int grid = c.positive_int("grid_N", 64);
  const double tol = c.tolerance("decomposition", 1e-6);
  const double unit_tol = c.tolerance("unit", 1e-10);
  FormField shift;
  if (c.has("shift")) {
    shift = form_from_json(c.at("shift"), m.sc.fibre());
  } else if (m.doc.contains("tau_shift")) {
    shift = form_from_json(m.doc.at("tau_shift"), m.sc.fibre());
  } else {
    shift = cplx{0.5} * m.sc.connection();
  }
  if (shift.base_dim() != m.sc.base_dim()) throw SchemaError("config: 'shift' has the wrong base dimension");
  const std::vector<std::pair<std::string, FormField>> refs = {{"connection", m.sc.connection()},
                                                               {"shifted", m.sc.connection() - shift}};
  ExperimentResult r;
  CsvTable t{"tau.csv", {"decomposition", "tau_re", "tau_im", "xi", "cs_re", "cs_im"}, {}};
  std::optional<cplx> first;
  for (const auto& [label, ref] : refs) {
    const TauResult tau = tau_superconnection_circle(m.sc, ref, quad, grid);
    if (!first) first = tau.tau;
    r.check(std::abs(std::abs(tau.tau) - 1.0), unit_tol);
    r.check(std::abs(tau.tau - *first), tol);
    r.rows.push_back({{"decomposition", label}, {"tau_re", tau.tau.real()}, {"tau_im", tau.tau.imag()}, {"xi", tau.xi},
                      {"cs_re", tau.cs_integral.real()}, {"cs_im", tau.cs_integral.imag()}});
    t.rows.push_back({label, fmt(tau.tau.real()), fmt(tau.tau.imag()), fmt(tau.xi), fmt(tau.cs_integral.real()),
                      fmt(tau.cs_integral.imag())});
  }
  if (c.has("expected")) {
    const auto e = c.require<std::vector<double>>("expected");
    if (e.size() != 2) throw SchemaError("config: tau 'expected' must be [re, im]");
    r.check(std::abs(*first - cplx{e[0], e[1]}), tol);
  }
  r.tables.push_back(std::move(t));
  return r;
}

inline ExperimentResult run_detline_curvature(const Config& c) {
  const ModelDoc m = resolve_model(c.at("model"));
  const int grid = c.positive_int("grid_N", 32);
  const double tol = c.tolerance("curvature", 1e-8);
  const double re_tol = c.tolerance("real_part", 1e-10);
  const DetLineData data = detline_connection(m.sc, grid);
  const DetCurvatureReport rep = detline_curvature(data);
  ExperimentResult r;
  r.check(rep.max_coeff_deviation, tol);
  r.check(data.max_real_part, re_tol);
  r.rows.push_back({{"grid_N", grid}, {"max_coeff_deviation", rep.max_coeff_deviation},
                    {"max_point_deviation", rep.max_point_deviation}, {"max_real_part", data.max_real_part},
                    {"grade", data.grade}});
  CsvTable t{"detline.csv",
             {"y1", "y2", "conn1_re", "conn1_im", "conn2_re", "conn2_im", "curv_re", "curv_im", "target_re", "target_im",
              "abs_det_section"},
             {}};
  for (std::size_t p = 0; p < data.points.size(); ++p) {
    const DetLinePoint& pt = data.points[p];
    t.rows.push_back({fmt(pt.y[0]), fmt(pt.y[1]), fmt(pt.connection[0].real()), fmt(pt.connection[0].imag()),
                      fmt(pt.connection[1].real()), fmt(pt.connection[1].imag()), fmt(rep.curvature_samples[p].real()),
                      fmt(rep.curvature_samples[p].imag()), fmt(rep.target_samples[p].real()),
                      fmt(rep.target_samples[p].imag()), fmt(std::abs(pt.section))});
  }
  r.tables.push_back(std::move(t));
  return r;
}

/// Signed orientation of an axis-aligned rectangle, or 0 if the polygon is
/// not one.
inline int rectangle_orientation(const LoopDescriptor& loop) {
  const auto& v = loop.vertices;
  if (v.size() != 4) return 0;
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& a = v[i];
    const auto& b = v[(i + 1) % 4];
    const bool horizontal = a[1] == b[1] && a[0] != b[0];
    const bool vertical = a[0] == b[0] && a[1] != b[1];
    if (!(horizontal || vertical)) return 0;
  }
  double area = 0.0;
  for (std::size_t i = 0; i < 4; ++i) area += v[i][0] * v[(i + 1) % 4][1] - v[(i + 1) % 4][0] * v[i][1];
  return area > 0.0 ? 1 : -1;
}

inline ExperimentResult run_detline_holonomy(const Config& c) {
  const ModelDoc m = resolve_model(c.at("model"));
  const int grid = c.positive_int("grid_N", 32);
  LoopDescriptor loop;
  if (c.has("loop")) {
    loop = loop_from_json(c.at("loop"));
  } else if (m.doc.contains("loop")) {
    loop = loop_from_json(m.doc.at("loop"));
  } else {
    throw SchemaError("config: detline-holonomy needs a 'loop'");
  }
  const std::string frame_name = c.get<std::string>("frame", "global");
  if (frame_name != "global" && frame_name != "section") throw SchemaError("config: 'frame' must be global or section");
  const DetFrame frame = frame_name == "global" ? DetFrame::global : DetFrame::section;
  const double tol = c.tolerance("stokes", 1e-6);
  const double unit_tol = c.tolerance("unit", 1e-10);
  const DetLineData data = detline_connection(m.sc, grid);
  const HolonomyResult h = detline_holonomy(data, loop, frame);
  LoopDescriptor twice = loop;
  twice.vertices.insert(twice.vertices.end(), loop.vertices.begin(), loop.vertices.end());
  const HolonomyResult h2 = detline_holonomy(data, twice, frame);

  ExperimentResult r;
  CsvTable t{"holonomy.csv", {"check", "value_re", "value_im", "residual"}, {}};
  auto row = [&](const std::string& name, cplx v, double res) {
    r.rows.push_back({{"check", name}, {"value_re", v.real()}, {"value_im", v.imag()}, {"residual", res}});
    t.rows.push_back({name, fmt(v.real()), fmt(v.imag()), fmt(res)});
  };
  const double unit_res = std::abs(std::abs(h.holonomy) - 1.0);
  r.check(unit_res, unit_tol);
  row("holonomy", h.holonomy, unit_res);
  const double twice_res = std::abs(h2.holonomy - h.holonomy * h.holonomy);
  r.check(twice_res, tol);
  row("double_traversal", h2.holonomy, twice_res);
  if (const int orient = rectangle_orientation(loop); orient != 0) {
    double lo1 = loop.vertices[0][0], hi1 = lo1, lo2 = loop.vertices[0][1], hi2 = lo2;
    for (const auto& v : loop.vertices) {
      lo1 = std::min(lo1, v[0]);
      hi1 = std::max(hi1, v[0]);
      lo2 = std::min(lo2, v[1]);
      hi2 = std::max(hi2, v[1]);
    }
    const FormField target = chern_character(m.sc, grid).degree_part(2);
    const cplx enclosed = static_cast<double>(orient) * rectangle_integral(target, lo1, hi1, lo2, hi2);
    const cplx stokes = std::exp(-enclosed);
    const double res = std::abs(h.holonomy - stokes);
    r.check(res, tol);
    row("stokes", stokes, res);
  }
  r.rows.push_back({{"winding", h.winding}, {"min_section", h.min_section}, {"frame", frame_name}});
  r.tables.push_back(std::move(t));
  return r;
}

inline ExperimentResult run_getzler_limit(const Config& c) {
  const int n = c.get<int>("n", 2);
  if (n < 1 || n > kMaxBaseDim) throw SchemaError("config: 'n' must be in [1, 4]");
  const auto monomials = c.get<std::vector<std::vector<int>>>("monomials", {{1}, {1, 2}});
  std::vector<double> eps;
  if (c.has("eps_list")) {
    eps = c.positive_list("eps_list", {});
  } else {
    for (int i = 1; i <= 12; ++i) eps.push_back(std::ldexp(1.0, -i));
  }
  require_decreasing(eps, "eps_list");
  const double tol = c.tolerance("rate", 0.1);
  std::optional<std::vector<int>> levels;
  if (c.has("levels")) levels = c.require<std::vector<int>>("levels");

  ExperimentResult r;
  CsvTable t{"getzler.csv", {"monomial", "degree", "l", "regime", "expected_rate", "fitted_rate"}, {}};
  for (const auto& mono : monomials) {
    MultiIndex mask = 0;
    int last = 0;
    std::string label;
    for (int i : mono) {
      if (i <= last || i > n) throw SchemaError("config: monomial indices must increase within 1..n");
      mask |= MultiIndex{1} << (i - 1);
      last = i;
      label += (label.empty() ? "e" : " e") + std::to_string(i);
    }
    if (label.empty()) label = "1";
    const int k = static_cast<int>(mono.size());
    const std::vector<int> ls = levels.value_or(std::vector<int>{std::max(0, k - 1), k, k + 1});
    for (int l : ls) {
      if (l < 0) throw SchemaError("config: 'levels' must be non-negative");
      const GetzlerReport rep = getzler_limit_check(CliffordElement::monomial(n, 1.0, mask), l, eps);
      // U_eps scales degree k by eps^{-k}; the leading Clifford correction is O(eps^2)
      const double expected = (l == k) ? 2.0 : static_cast<double>(l - k);
      double res = 0.0;
      if (rep.exact_zero) {
        r.require(rep.certified);
      } else {
        res = std::abs(rep.fitted_rate - expected) / std::abs(expected);
        r.require(rep.certified);
        r.check(res, tol);
      }
      r.rows.push_back({{"monomial", label}, {"degree", k}, {"l", l}, {"regime", to_string(rep.regime)},
                        {"expected_rate", expected}, {"fitted_rate", rep.exact_zero ? json(nullptr) : json(rep.fitted_rate)},
                        {"exact_zero", rep.exact_zero}, {"certified", rep.certified}, {"relative_deviation", res}});
      t.rows.push_back({label, std::to_string(k), std::to_string(l), to_string(rep.regime), fmt(expected),
                        rep.exact_zero ? "exact" : fmt(rep.fitted_rate)});
    }
  }
  r.tables.push_back(std::move(t));
  return r;
}

inline ExperimentResult dispatch(const Config& c) {
  static const std::map<std::string, std::function<ExperimentResult(const Config&)>> table = {
      {"chern-closedness", run_chern_closedness},   {"transgression", run_transgression},
      {"chern-simons-stokes", run_chern_simons_stokes}, {"mckean-singer", run_mckean_singer},
      {"local-index-scan", run_local_index_scan},   {"asymptotic-fit", run_asymptotic_fit},
      {"eta", run_eta},                             {"tau", run_tau},
      {"detline-curvature", run_detline_curvature}, {"detline-holonomy", run_detline_holonomy},
      {"getzler-limit", run_getzler_limit}};
  ExperimentResult r = table.at(c.experiment())(c);
  c.reject_unused_tolerances();
  return r;
}

// ---------------------------------------------------------------------------
// Run and report

struct RunOptions {
  std::optional<std::string> out;
  int threads = 0;  ///< 0: SUPERCHERN_THREADS or hardware
  std::optional<std::uint64_t> seed;
};

struct RunOutcome {
  int exit_code = kExitPass;
  json report;
  std::filesystem::path out_dir;
};

/// Runs one experiment. Errors propagate as exceptions; see exit_code_for.
inline RunOutcome run(const json& config, const RunOptions& opts = {}) {
  const auto start = std::chrono::steady_clock::now();
  const Config c(config);
  if (opts.threads > 0) set_num_threads(opts.threads);
  const std::uint64_t seed = opts.seed.value_or(c.get<std::uint64_t>("seed", 0));
  RunOutcome o;
  o.out_dir = opts.out.value_or(c.get<std::string>("output", "superchern-out/" + c.experiment()));

  const ExperimentResult r = dispatch(c);
  const double runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  json inputs = c.raw();
  inputs["output"] = o.out_dir.string();
  o.report = {{"experiment", c.experiment()},
              {"inputs", inputs},
              {"rows", r.rows},
              {"summary", {{"pass", r.pass}, {"max_residual", r.max_residual}, {"runtime_seconds", runtime}}},
              {"seed", seed},
              {"threads", num_threads()}};
  std::error_code ec;
  std::filesystem::create_directories(o.out_dir, ec);
  if (ec) throw SchemaError("cannot create output directory " + o.out_dir.string() + ": " + ec.message());
  for (const CsvTable& t : r.tables) write_csv(o.out_dir / t.file, t);
  std::ofstream rep(o.out_dir / "report.json");
  if (!rep) throw SchemaError("cannot write " + (o.out_dir / "report.json").string());
  rep << o.report.dump(2) << '\n';
  o.exit_code = r.pass ? kExitPass : kExitCheckFailed;
  return o;
}

/// Exit code for an exception escaping run(). Invalid inputs that the
/// library refuses (non-unitary models, bad knobs) count as schema errors.
inline int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const SchemaError*>(&e) != nullptr) return kExitSchema;
  if (dynamic_cast<const ArgumentError*>(&e) != nullptr) return kExitSchema;
  if (dynamic_cast<const GuardError*>(&e) != nullptr) return kExitGuard;
  return kExitNumeric;
}

inline const char* error_kind(int code) {
  switch (code) {
    case kExitSchema: return "schema error";
    case kExitGuard: return "guard violation";
    default: return "numeric failure";
  }
}

}  // namespace superchern::cli
