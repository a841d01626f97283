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

// JSON documents for forms and superconnections.
//
//   FormField:       {n, K, parity, fibre?: {even, odd},
//                     components: [{I: [..], coeffs: [{k: [..], re: [[..]], im: [[..]]}]}]}
//   Superconnection: {n, fibre: {even, odd}, A: FormField,
//                     omegas: [{degree, form: FormField}], scale}
//
// Multi-indices I are 1-based and strictly increasing. Any structural
// problem is reported as SchemaError.

#include <superchern/detline.hpp>
#include <superchern/form_algebra.hpp>
#include <superchern/superconnection.hpp>

#include <nlohmann/json.hpp>

#include <fstream>
#include <optional>
#include <string>

namespace superchern {

using json = nlohmann::json;

namespace detail {

template <class T>
T get_field(const json& j, const char* key, const char* where) {
  if (!j.is_object() || !j.contains(key)) throw SchemaError(std::string(where) + ": missing key '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw SchemaError(std::string(where) + ": key '" + key + "' has the wrong type (" + e.what() + ")");
  }
}

inline Mat matrix_from_json(const json& re, const json& im, int d, const char* where) {
  if (!re.is_array() || static_cast<int>(re.size()) != d) throw SchemaError(std::string(where) + ": 're' must be a d x d array");
  if (!im.is_null() && (!im.is_array() || static_cast<int>(im.size()) != d)) {
    throw SchemaError(std::string(where) + ": 'im' must be a d x d array");
  }
  Mat m(d, d);
  for (int r = 0; r < d; ++r) {
    const json& rr = re[static_cast<std::size_t>(r)];
    if (!rr.is_array() || static_cast<int>(rr.size()) != d) throw SchemaError(std::string(where) + ": ragged 're' row");
    for (int c = 0; c < d; ++c) {
      if (!rr[static_cast<std::size_t>(c)].is_number()) throw SchemaError(std::string(where) + ": non-numeric entry");
      double vi = 0.0;
      if (!im.is_null()) {
        const json& ir = im[static_cast<std::size_t>(r)];
        if (!ir.is_array() || static_cast<int>(ir.size()) != d || !ir[static_cast<std::size_t>(c)].is_number()) {
          throw SchemaError(std::string(where) + ": malformed 'im' row");
        }
        vi = ir[static_cast<std::size_t>(c)].get<double>();
      }
      m(r, c) = cplx{rr[static_cast<std::size_t>(c)].get<double>(), vi};
    }
  }
  return m;
}

inline Parity parity_from_string(const std::string& s) {
  if (s == "even") return Parity::even;
  if (s == "odd") return Parity::odd;
  if (s == "mixed") return Parity::mixed;
  throw SchemaError("FormField: parity must be even, odd or mixed");
}

}  // namespace detail

inline json graded_dim_to_json(GradedDim d) { return {{"even", d.even}, {"odd", d.odd}}; }

inline GradedDim graded_dim_from_json(const json& j) {
  GradedDim d{detail::get_field<int>(j, "even", "fibre"), detail::get_field<int>(j, "odd", "fibre")};
  if (d.even < 0 || d.odd < 0 || d.total() < 1) throw SchemaError("fibre: dimensions must be >= 0 with total >= 1");
  return d;
}

inline json form_to_json(const FormField& f) {
  json comps = json::array();
  for (const auto& [mask, c] : f.components()) {
    json idx = json::array();
    for (int j = 0; j < f.base_dim(); ++j) {
      if ((mask >> j) & 1U) idx.push_back(j + 1);
    }
    json coeffs = json::array();
    for (int i = 0; i < c.num_modes(); ++i) {
      const Mat& m = c.at_index(i);
      if (m.isZero(0.0)) continue;
      const Freq k = c.freq(i);
      json kk = json::array();
      for (int j = 0; j < f.base_dim(); ++j) kk.push_back(k[static_cast<std::size_t>(j)]);
      json re = json::array();
      json im = json::array();
      for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json rr = json::array();
        json ir = json::array();
        for (Eigen::Index cc = 0; cc < m.cols(); ++cc) {
          rr.push_back(m(r, cc).real());
          ir.push_back(m(r, cc).imag());
        }
        re.push_back(rr);
        im.push_back(ir);
      }
      coeffs.push_back({{"k", kk}, {"re", re}, {"im", im}});
    }
    comps.push_back({{"I", idx}, {"coeffs", coeffs}});
  }
  return {{"n", f.base_dim()},
          {"K", std::max(1, f.bandwidth())},
          {"parity", to_string(f.parity())},
          {"fibre", graded_dim_to_json(f.fibre())},
          {"components", comps}};
}

/// Reads a FormField. The fibre comes from the document or, if absent, from
/// `fibre`; the declared parity is checked against the coefficients.
inline FormField form_from_json(const json& j, std::optional<GradedDim> fibre = std::nullopt) {
  const char* where = "FormField";
  const int n = detail::get_field<int>(j, "n", where);
  if (n < 1 || n > kMaxBaseDim) throw SchemaError("FormField: n must be in [1, 4]");
  const int bw = detail::get_field<int>(j, "K", where);
  if (bw < 0) throw SchemaError("FormField: K must be non-negative");
  GradedDim fib{1, 0};
  if (j.contains("fibre")) {
    fib = graded_dim_from_json(j.at("fibre"));
    if (fibre && !(*fibre == fib)) throw SchemaError("FormField: fibre disagrees with the enclosing document");
  } else if (fibre) {
    fib = *fibre;
  }
  FormField f(n, fib);
  const json comps = detail::get_field<json>(j, "components", where);
  if (!comps.is_array()) throw SchemaError("FormField: 'components' must be an array");
  for (const json& comp : comps) {
    const auto idx = detail::get_field<std::vector<int>>(comp, "I", "FormField component");
    MultiIndex mask = 0;
    int last = 0;
    for (int i : idx) {
      if (i <= last || i > n) throw SchemaError("FormField: multi-index must be strictly increasing within 1..n");
      mask |= MultiIndex{1} << (i - 1);
      last = i;
    }
    MatrixFourier c(n, bw, fib.total(), fib.total());
    const json coeffs = detail::get_field<json>(comp, "coeffs", "FormField component");
    if (!coeffs.is_array()) throw SchemaError("FormField: 'coeffs' must be an array");
    for (const json& cj : coeffs) {
      const auto k = detail::get_field<std::vector<int>>(cj, "k", "FormField coefficient");
      if (static_cast<int>(k.size()) != n) throw SchemaError("FormField: frequency vector must have n entries");
      Freq kk{};
      for (int i = 0; i < n; ++i) {
        if (std::abs(k[static_cast<std::size_t>(i)]) > bw) throw SchemaError("FormField: frequency exceeds K");
        kk[static_cast<std::size_t>(i)] = k[static_cast<std::size_t>(i)];
      }
      const json im = cj.contains("im") ? cj.at("im") : json();
      c.at(kk) += detail::matrix_from_json(detail::get_field<json>(cj, "re", "FormField coefficient"), im, fib.total(),
                                           "FormField coefficient");
    }
    f.add(mask, c);
  }
  if (j.contains("parity")) {
    const Parity declared = detail::parity_from_string(detail::get_field<std::string>(j, "parity", where));
    const Parity actual = f.parity();
    if (declared != Parity::mixed && actual != declared && f.max_coeff() > 0.0) {
      throw SchemaError(std::string("FormField: declared parity ") + to_string(declared) + " but coefficients are " +
                        to_string(actual));
    }
  }
  return f;
}

inline json superconnection_to_json(const Superconnection& s) {
  json omegas = json::array();
  for (const auto& [i, w] : s.omegas()) omegas.push_back({{"degree", i}, {"form", form_to_json(w)}});
  return {{"n", s.base_dim()},
          {"fibre", graded_dim_to_json(s.fibre())},
          {"A", form_to_json(s.connection())},
          {"omegas", omegas},
          {"scale", s.scale()}};
}

inline Superconnection superconnection_from_json(const json& j) {
  const char* where = "Superconnection";
  const int n = detail::get_field<int>(j, "n", where);
  if (n < 1 || n > kMaxBaseDim) throw SchemaError("Superconnection: n must be in [1, 4]");
  const GradedDim fib = graded_dim_from_json(detail::get_field<json>(j, "fibre", where));
  Superconnection s(n, fib);
  try {
    if (j.contains("A")) {
      FormField a = form_from_json(j.at("A"), fib);
      if (a.base_dim() != n) throw SchemaError("Superconnection: A has the wrong base dimension");
      s.set_connection(std::move(a));
    }
    if (j.contains("omegas")) {
      if (!j.at("omegas").is_array()) throw SchemaError("Superconnection: 'omegas' must be an array");
      for (const json& w : j.at("omegas")) {
        const int deg = detail::get_field<int>(w, "degree", "omega");
        FormField f = form_from_json(detail::get_field<json>(w, "form", "omega"), fib);
        if (f.base_dim() != n) throw SchemaError("Superconnection: omega has the wrong base dimension");
        s.set_omega(deg, std::move(f));
      }
    }
    if (j.contains("scale")) s.set_scale(detail::get_field<double>(j, "scale", where));
  } catch (const ArgumentError& e) {
    throw SchemaError(e.what());
  }
  return s;
}

inline LoopDescriptor loop_from_json(const json& j) {
  LoopDescriptor loop;
  const json verts = detail::get_field<json>(j, "vertices", "loop");
  if (!verts.is_array() || verts.size() < 2) throw SchemaError("loop: 'vertices' needs at least two points");
  for (const json& v : verts) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
      throw SchemaError("loop: every vertex must be [y1, y2]");
    }
    loop.vertices.push_back({v[0].get<double>(), v[1].get<double>()});
  }
  if (j.contains("quad_order")) loop.quad_order = detail::get_field<int>(j, "quad_order", "loop");
  if (j.contains("panels")) loop.panels = detail::get_field<int>(j, "panels", "loop");
  if (loop.quad_order < 1 || loop.panels < 1) throw SchemaError("loop: quad_order and panels must be positive");
  return loop;
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError(path + ": " + e.what());
  }
}

}  // namespace superchern
