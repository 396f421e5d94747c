#pragma once

// JSON schemas for configs and reports.
//
//   matrix   {"rows": r, "cols": c, "data": [[...], ...]}
//   history  {"kind": "constant", "value": [...]}
//            {"kind": "polynomial", "coeffs": [[c0, c1, ...], ...]}
//            {"kind": "sampled", "times": [...], "values": [[...], ...]}
//
// Systems bundle matrices, delays, alpha and histories; reports are emitted
// as ordered JSON so identical inputs give byte-identical output.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "fhal/fdde_sim.hpp"
#include "fhal/halanay.hpp"
#include "fhal/history.hpp"
#include "fhal/linear_system.hpp"
#include "fhal/matrix.hpp"
#include "fhal/nfde.hpp"

namespace fhal::io {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

class parse_error : public std::runtime_error {
 public:
  explicit parse_error(const std::string& msg) : std::runtime_error(msg) {}
};

inline const json& require(const json& j, const std::string& key,
                           const std::string& context) {
  auto it = j.find(key);
  if (it == j.end())
    throw parse_error("missing field '" + key + "' in " + context);
  return *it;
}

inline double get_num(const json& j, const std::string& key,
                      const std::string& context) {
  const json& v = require(j, key, context);
  if (!v.is_number())
    throw parse_error("field '" + key + "' in " + context + " must be a number");
  return v.get<double>();
}

inline double get_num_or(const json& j, const std::string& key, double dflt) {
  auto it = j.find(key);
  if (it == j.end()) return dflt;
  if (!it->is_number())
    throw parse_error("field '" + key + "' must be a number");
  return it->get<double>();
}

inline Vector vector_from_json(const json& j, const std::string& context) {
  if (!j.is_array()) throw parse_error(context + " must be an array of numbers");
  Vector v;
  v.reserve(j.size());
  for (const auto& x : j) {
    if (!x.is_number()) throw parse_error(context + " must contain only numbers");
    v.push_back(x.get<double>());
  }
  return v;
}

inline Matrix matrix_from_json(const json& j, const std::string& name) {
  if (!j.is_object()) throw parse_error("matrix '" + name + "' must be an object");
  auto rows = static_cast<std::size_t>(get_num(j, "rows", "matrix '" + name + "'"));
  auto cols = static_cast<std::size_t>(get_num(j, "cols", "matrix '" + name + "'"));
  const json& data = require(j, "data", "matrix '" + name + "'");
  if (!data.is_array() || data.size() != rows)
    throw parse_error("matrix '" + name + "': data must have " +
                      std::to_string(rows) + " rows");
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const json& row = data[i];
    if (!row.is_array() || row.size() != cols)
      throw parse_error("matrix '" + name + "': row " + std::to_string(i) +
                        " must have " + std::to_string(cols) + " entries");
    for (std::size_t k = 0; k < cols; ++k) {
      if (!row[k].is_number())
        throw parse_error("matrix '" + name + "': non-numeric entry");
      m(i, k) = row[k].get<double>();
    }
  }
  return m;
}

inline ojson matrix_to_json(const Matrix& m) {
  ojson j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  ojson data = ojson::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    ojson row = ojson::array();
    for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    data.push_back(std::move(row));
  }
  j["data"] = std::move(data);
  return j;
}

inline HistoryFunction history_from_json(const json& j, const std::string& name) {
  if (!j.is_object()) throw parse_error("history '" + name + "' must be an object");
  std::string kind = require(j, "kind", "history '" + name + "'").get<std::string>();
  if (kind == "constant")
    return HistoryFunction::constant(
        vector_from_json(require(j, "value", name), "history '" + name + "'.value"));
  if (kind == "polynomial") {
    const json& cj = require(j, "coeffs", "history '" + name + "'");
    if (!cj.is_array()) throw parse_error("history '" + name + "'.coeffs must be an array");
    std::vector<Vector> coeffs;
    for (const auto& c : cj)
      coeffs.push_back(vector_from_json(c, "history '" + name + "'.coeffs"));
    return HistoryFunction::polynomial(std::move(coeffs));
  }
  if (kind == "sampled") {
    Vector times = vector_from_json(require(j, "times", name), name + ".times");
    const json& vj = require(j, "values", "history '" + name + "'");
    std::vector<Vector> values;
    for (const auto& v : vj) values.push_back(vector_from_json(v, name + ".values"));
    return HistoryFunction::sampled(std::move(times), std::move(values));
  }
  throw parse_error("history '" + name + "': unknown kind '" + kind + "'");
}

inline CoupledLinearSystem system_from_json(const json& j) {
  CoupledLinearSystem s;
  s.alpha = get_num(j, "alpha", "system");
  s.tau1 = get_num(j, "tau1", "system");
  s.tau2 = get_num(j, "tau2", "system");
  s.tau3 = get_num(j, "tau3", "system");
  s.A = matrix_from_json(require(j, "A", "system"), "A");
  s.B = matrix_from_json(require(j, "B", "system"), "B");
  s.E = matrix_from_json(require(j, "E", "system"), "E");
  s.C = matrix_from_json(require(j, "C", "system"), "C");
  s.D = matrix_from_json(require(j, "D", "system"), "D");
  s.phi = history_from_json(require(j, "phi", "system"), "phi");
  s.psi = history_from_json(require(j, "psi", "system"), "psi");
  s.validate();
  return s;
}

inline HalanayParams halanay_from_json(const json& j) {
  HalanayParams p;
  p.alpha = get_num(j, "alpha", "halanay params");
  p.a = get_num(j, "a", "halanay params");
  p.b = get_num_or(j, "b", 0.0);
  p.c = get_num_or(j, "c", 0.0);
  p.d = get_num_or(j, "d", 0.0);
  p.e = get_num_or(j, "e", 0.0);
  p.f = get_num_or(j, "f", 0.0);
  p.tau1 = get_num(j, "tau1", "halanay params");
  p.tau2 = get_num(j, "tau2", "halanay params");
  p.tau3 = get_num(j, "tau3", "halanay params");
  return p;
}

inline ContractivityParams contractivity_from_json(const json& j) {
  ContractivityParams p;
  p.alpha = get_num(j, "alpha", "contractivity params");
  p.tau = get_num(j, "tau", "contractivity params");
  p.a1 = get_num(j, "a1", "contractivity params");
  p.b1 = get_num_or(j, "b1", 0.0);
  p.c1 = get_num_or(j, "c1", 0.0);
  p.k1 = get_num_or(j, "k1", 0.0);
  p.N_norm2 = get_num_or(j, "N_norm2", 0.0);
  return p;
}

inline DissipativityParams dissipativity_from_json(const json& j) {
  DissipativityParams p;
  p.alpha = get_num(j, "alpha", "dissipativity params");
  p.tau = get_num(j, "tau", "dissipativity params");
  p.gamma = get_num(j, "gamma", "dissipativity params");
  p.a2 = get_num(j, "a2", "dissipativity params");
  p.b2 = get_num_or(j, "b2", 0.0);
  p.c2 = get_num_or(j, "c2", 0.0);
  p.k2 = get_num_or(j, "k2", 0.0);
  p.N_norm2 = get_num_or(j, "N_norm2", 0.0);
  return p;
}

// Neutral test problems are configured through a linear family:
//   f(t, y, y_tau, w) = P y + Q y_tau + S w + c0 + cs sin(omega t) + cc cos(omega t)
//   g(t, xi, y) = G y
inline NeutralSystem neutral_from_json(const json& j) {
  NeutralSystem sys;
  sys.alpha = get_num(j, "alpha", "neutral system");
  sys.tau = get_num(j, "tau", "neutral system");
  sys.N = matrix_from_json(require(j, "N", "neutral system"), "N");
  sys.phi = history_from_json(require(j, "phi", "neutral system"), "phi");
  const std::size_t n = sys.N.rows();
  const json& fj = require(j, "f", "neutral system");
  Matrix P(n, n), Q(n, n), S(n, n);
  if (fj.contains("P")) P = matrix_from_json(fj["P"], "f.P");
  if (fj.contains("Q")) Q = matrix_from_json(fj["Q"], "f.Q");
  if (fj.contains("S")) S = matrix_from_json(fj["S"], "f.S");
  Vector c0(n, 0.0), cs(n, 0.0), cc(n, 0.0);
  if (fj.contains("const")) c0 = vector_from_json(fj["const"], "f.const");
  if (fj.contains("sin_amp")) cs = vector_from_json(fj["sin_amp"], "f.sin_amp");
  if (fj.contains("cos_amp")) cc = vector_from_json(fj["cos_amp"], "f.cos_amp");
  double omega = get_num_or(fj, "omega", 1.0);
  sys.f = [=](double t, const Vector& y, const Vector& ydel,
              const Vector& w) -> Vector {
    Vector r = P * y + Q * ydel + S * w;
    double sn = std::sin(omega * t), csn = std::cos(omega * t);
    for (std::size_t i = 0; i < r.size(); ++i)
      r[i] += c0[i] + cs[i] * sn + cc[i] * csn;
    return r;
  };
  if (j.contains("g")) {
    Matrix G = matrix_from_json(require(j["g"], "G", "neutral system g"), "g.G");
    sys.g = [G](double, double, const Vector& y) { return G * y; };
  }
  return sys;
}

inline ojson num_or_null(double v) {
  if (std::isinf(v)) return nullptr;
  return v;
}

inline ojson envelope_to_json(const DecayEnvelope& env) {
  ojson j;
  j["alpha"] = env.alpha;
  j["M"] = env.M;
  j["lambda_star"] = env.lambda_star;
  j["gamma1"] = env.gamma1;
  j["gamma2"] = env.gamma2;
  j["v_scale"] = env.v_scale;
  j["v_geometric_extension"] = env.v_geometric_extension;
  if (env.v_geometric_extension) j["v_geo_amp"] = env.v_geo_amp;
  return j;
}

inline ojson stability_report_to_json(const StabilityReport& r) {
  ojson j;
  ojson c;
  c["a0"] = r.coeffs.a0;
  c["b0"] = r.coeffs.b0;
  c["c0"] = r.coeffs.c0;
  c["d0"] = r.coeffs.d0;
  c["e0"] = r.coeffs.e0;
  j["coefficients"] = std::move(c);
  j["margin"] = r.margin;
  j["feasible"] = r.feasible;
  j["criterion"] = r.feasible ? "globally attractive (Mittag-Leffler bound holds)"
                              : "inconclusive (sufficient criterion not met)";
  if (!r.feasible) {
    j["reason"] = r.infeasible_reason;
    return j;
  }
  j["lambda_0"] = num_or_null(r.lambda_0);
  j["lambda_star"] = r.lambda_star;
  j["envelope"] = envelope_to_json(*r.envelope);
  j["sup_u0"] = r.sup_u0;
  j["sup_v0"] = r.sup_v0;
  j["compat_residual"] = r.compat_residual;
  j["lifted_dim_x"] = r.lifted_dim_x;
  j["lifted_dim_y"] = r.lifted_dim_y;
  j["note"] = r.m_note;
  return j;
}

inline ojson nfde_report_to_json(const NfdeReport& r) {
  ojson j;
  j["mode"] = r.dissipative_mode ? "dissipativity" : "contractivity";
  j["feasible"] = r.feasible;
  if (!r.feasible) {
    j["reason"] = r.infeasible_reason;
    return j;
  }
  j["K"] = r.K;
  j["lambda_paper"] = r.lambda_paper;
  j["lambda_mapped"] = r.lambda_mapped ? ojson(*r.lambda_mapped) : ojson(nullptr);
  j["mapped_status"] = r.mapped_status;
  j["lambda_star"] = r.lambda_star;
  if (r.dissipative_mode) {
    j["R"] = r.R;
    j["absorbing_radius"] = std::sqrt(r.R);
  }
  ojson m;
  m["a"] = r.mapped.a;
  m["b"] = r.mapped.b;
  m["c"] = r.mapped.c;
  m["d"] = r.mapped.d;
  m["e"] = r.mapped.e;
  m["f"] = r.mapped.f;
  j["mapped_params"] = std::move(m);
  return j;
}

}  // namespace fhal::io
