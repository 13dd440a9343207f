// Copyright 2026 The effent Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// JSON encodings.
//
//   matrix:  {"rows": r, "cols": c, "data": [[re, im], ...]}   row-major; a
//            bare number is a real entry
//   state:   {"dims": [...], "amplitudes": [...]}  or  {"dims": [...], <matrix>}
//   channel: {"d_in": n, "d_out": m, "kraus": [<matrix>, ...], "cptp": true}
//   game:    {"p": [...], "q": [...], "zeta": [<state>...], "eta": [<state>...],
//            "payoff": [s][t][x][y]}

#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "effent/channels.hpp"
#include "effent/games.hpp"

namespace effent {

using Json = nlohmann::ordered_json;

/// Rounds to 12 significant digits so printed output is stable.
inline double round12(double x) {
  if (!std::isfinite(x)) return x;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

namespace detail {

inline const Json& field(const Json& j, const char* name, const std::string& ctx) {
  if (!j.is_object() || !j.contains(name)) throw ValidationError(ctx + ": missing field \"" + name + "\"");
  return j.at(name);
}

inline std::size_t size_field(const Json& j, const char* name, const std::string& ctx) {
  const Json& v = field(j, name, ctx);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    throw ValidationError(ctx + ": field \"" + name + "\" must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

inline Complex complex_entry(const Json& e, const std::string& ctx) {
  if (e.is_number()) return {e.get<double>(), 0.0};
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
    return {e[0].get<double>(), e[1].get<double>()};
  }
  throw ValidationError(ctx + ": entries must be numbers or [re, im] pairs");
}

inline Dims dims_field(const Json& j, const std::string& ctx) {
  const Json& d = field(j, "dims", ctx);
  if (!d.is_array() || d.empty()) throw ValidationError(ctx + ": field \"dims\" must be a non-empty array");
  Dims out;
  for (const auto& x : d) {
    if (!x.is_number_integer() || x.get<long long>() < 1) throw ValidationError(ctx + ": \"dims\" entries must be positive integers");
    out.push_back(x.get<std::size_t>());
  }
  return out;
}

inline std::vector<double> real_array(const Json& j, const char* name, const std::string& ctx) {
  const Json& a = field(j, name, ctx);
  if (!a.is_array()) throw ValidationError(ctx + ": field \"" + name + "\" must be an array");
  std::vector<double> out;
  for (const auto& x : a) {
    if (!x.is_number()) throw ValidationError(ctx + ": field \"" + name + "\" must hold numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

}  // namespace detail

inline Json complex_to_json(Complex z) { return Json::array({round12(z.real()), round12(z.imag())}); }

inline Json matrix_to_json(const ComplexMatrix& m) {
  Json data = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back(complex_to_json(m(i, j)));
  }
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

inline ComplexMatrix matrix_from_json(const Json& j, const std::string& ctx = "matrix") {
  const auto rows = detail::size_field(j, "rows", ctx), cols = detail::size_field(j, "cols", ctx);
  const Json& data = detail::field(j, "data", ctx);
  if (!data.is_array() || data.size() != rows * cols) {
    throw ValidationError(ctx + ": field \"data\" must hold rows * cols entries");
  }
  ComplexMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t k = 0; k < rows * cols; ++k) {
    m(static_cast<Eigen::Index>(k / cols), static_cast<Eigen::Index>(k % cols)) = detail::complex_entry(data[k], ctx + ".data");
  }
  return m;
}

inline Json state_to_json(const DensityMatrix& rho) {
  Json j{{"dims", rho.dims()}};
  j.update(matrix_to_json(rho.matrix()));
  return j;
}

inline DensityMatrix state_from_json(const Json& j, const std::string& ctx = "state") {
  const Dims dims = detail::dims_field(j, ctx);
  if (j.contains("amplitudes")) {
    const Json& a = j.at("amplitudes");
    if (!a.is_array()) throw ValidationError(ctx + ": field \"amplitudes\" must be an array");
    ComplexVector v(static_cast<Eigen::Index>(a.size()));
    for (std::size_t k = 0; k < a.size(); ++k) v(static_cast<Eigen::Index>(k)) = detail::complex_entry(a[k], ctx + ".amplitudes");
    return DensityMatrix(PureState(std::move(v), dims, 1e-9));
  }
  return DensityMatrix(matrix_from_json(j, ctx), dims);
}

inline Json channel_to_json(const KrausChannel& ch) {
  Json kraus = Json::array();
  for (const auto& k : ch.kraus()) kraus.push_back(matrix_to_json(k));
  return Json{{"d_in", ch.d_in()}, {"d_out", ch.d_out()}, {"kraus", std::move(kraus)}, {"cptp", ch.cptp()}};
}

inline KrausChannel channel_from_json(const Json& j, const std::string& ctx = "channel") {
  const Json& k = detail::field(j, "kraus", ctx);
  if (!k.is_array() || k.empty()) throw ValidationError(ctx + ": field \"kraus\" must be a non-empty array");
  std::vector<ComplexMatrix> ops;
  for (std::size_t i = 0; i < k.size(); ++i) ops.push_back(matrix_from_json(k[i], ctx + ".kraus[" + std::to_string(i) + "]"));
  const bool cptp = j.value("cptp", true);
  KrausChannel ch(std::move(ops), cptp);
  if (j.contains("d_in") && detail::size_field(j, "d_in", ctx) != ch.d_in()) {
    throw ValidationError(ctx + ": field \"d_in\" does not match the Kraus operators");
  }
  if (j.contains("d_out") && detail::size_field(j, "d_out", ctx) != ch.d_out()) {
    throw ValidationError(ctx + ": field \"d_out\" does not match the Kraus operators");
  }
  return ch;
}

inline GameSpec game_from_json(const Json& j, const std::string& ctx = "game") {
  auto p = detail::real_array(j, "p", ctx);
  auto q = detail::real_array(j, "q", ctx);
  auto states = [&](const char* name) {
    const Json& a = detail::field(j, name, ctx);
    if (!a.is_array()) throw ValidationError(ctx + ": field \"" + name + "\" must be an array");
    std::vector<DensityMatrix> out;
    for (std::size_t i = 0; i < a.size(); ++i) out.push_back(state_from_json(a[i], ctx + "." + name + "[" + std::to_string(i) + "]"));
    return out;
  };
  auto zeta = states("zeta");
  auto eta = states("eta");
  const Json& pay = detail::field(j, "payoff", ctx);
  const std::string pctx = ctx + ".payoff";
  if (!pay.is_array() || pay.size() != p.size()) throw ValidationError(pctx + ": first axis must match p");
  std::size_t n_x = 0, n_y = 0;
  std::vector<double> flat;
  for (const auto& over_t : pay) {
    if (!over_t.is_array() || over_t.size() != q.size()) throw ValidationError(pctx + ": second axis must match q");
    for (const auto& over_x : over_t) {
      if (!over_x.is_array() || over_x.empty()) throw ValidationError(pctx + ": answer axis x must be a non-empty array");
      if (n_x == 0) n_x = over_x.size();
      if (over_x.size() != n_x) throw ValidationError(pctx + ": ragged answer axis x");
      for (const auto& over_y : over_x) {
        if (!over_y.is_array() || over_y.empty()) throw ValidationError(pctx + ": answer axis y must be a non-empty array");
        if (n_y == 0) n_y = over_y.size();
        if (over_y.size() != n_y) throw ValidationError(pctx + ": ragged answer axis y");
        for (const auto& v : over_y) {
          if (!v.is_number()) throw ValidationError(pctx + ": entries must be numbers");
          flat.push_back(v.get<double>());
        }
      }
    }
  }
  return GameSpec(std::move(p), std::move(q), std::move(zeta), std::move(eta), n_x, n_y, std::move(flat));
}

inline Json game_to_json(const GameSpec& g) {
  Json zeta = Json::array(), eta = Json::array(), pay = Json::array();
  for (const auto& z : g.zeta()) zeta.push_back(state_to_json(z));
  for (const auto& e : g.eta()) eta.push_back(state_to_json(e));
  for (std::size_t s = 0; s < g.n_s(); ++s) {
    Json ts = Json::array();
    for (std::size_t t = 0; t < g.n_t(); ++t) {
      Json xs = Json::array();
      for (std::size_t x = 0; x < g.n_x(); ++x) {
        Json ys = Json::array();
        for (std::size_t y = 0; y < g.n_y(); ++y) ys.push_back(round12(g.payoff(s, t, x, y)));
        xs.push_back(std::move(ys));
      }
      ts.push_back(std::move(xs));
    }
    pay.push_back(std::move(ts));
  }
  Json p = Json::array(), q = Json::array();
  for (double x : g.p()) p.push_back(round12(x));
  for (double x : g.q()) q.push_back(round12(x));
  return Json{{"p", p}, {"q", q}, {"zeta", zeta}, {"eta", eta}, {"payoff", pay}};
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("malformed JSON in " + path + ": " + e.what());
  }
}

}  // namespace effent
