#pragma once

#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "curvid/curvature.hpp"
#include "curvid/errors.hpp"
#include "curvid/geometry.hpp"
#include "curvid/identity_lab.hpp"
#include "curvid/polynomial.hpp"
#include "curvid/variation.hpp"

namespace curvid {

using Json = nlohmann::ordered_json;

inline constexpr const char* kReportSchema = "report-v1";

namespace detail {

inline Json integer_json(const Integer& z) {
  if (z.fits_slong_p()) return Json(z.get_si());
  return Json(z.get_str());
}

inline Integer integer_from_json(const Json& j) {
  if (j.is_number_integer()) return Integer(j.get<long>());
  if (j.is_string()) return Integer(j.get<std::string>());
  throw ParseError("expected an integer");
}

}  // namespace detail

/// [num, den]
inline Json to_json(const Rational& q) {
  return Json::array({detail::integer_json(q.get_num()), detail::integer_json(q.get_den())});
}

inline Rational rational_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw ParseError("rational must be [num, den]");
  Rational q(detail::integer_from_json(j[0]), detail::integer_from_json(j[1]));
  if (q.get_den() == 0) throw ParseError("zero denominator");
  q.canonicalize();
  return q;
}

inline Json to_json(const InvariantPolynomial& p) {
  Json terms = Json::array();
  for (const auto& [m, c] : p.terms())
    terms.push_back({{"monomial", to_string(m)},
                     {"coeff_num", detail::integer_json(c.get_num())},
                     {"coeff_den", detail::integer_json(c.get_den())}});
  return {{"valence", std::string(to_string(p.valence()))}, {"weight", p.weight()}, {"terms", terms}};
}

inline InvariantPolynomial polynomial_from_json(const Json& j) {
  InvariantPolynomial p(parse_valence(j.at("valence").get<std::string>()), j.at("weight").get<int>());
  for (const auto& t : j.at("terms")) {
    Rational c(detail::integer_from_json(t.at("coeff_num")), detail::integer_from_json(t.at("coeff_den")));
    c.canonicalize();
    p.add_term(parse_monomial(t.at("monomial").get<std::string>()), c);
  }
  return p;
}

/// Sparse form: only nonzero components, as {index: [...], value: [num, den]}.
inline Json to_json(const CurvatureData<Rational>& c) {
  Json entries = Json::array();
  const int m = c.dim();
  for (int d = 0; d <= c.max_deriv(); ++d) {
    const auto vals = c.values(d);
    const std::size_t slots = 4 + static_cast<std::size_t>(d);
    for (std::size_t off = 0; off < vals.size(); ++off) {
      if (is_zero(vals[off])) continue;
      std::vector<int> idx(slots);
      std::size_t r = off;
      for (std::size_t s = slots; s-- > 0;) {
        idx[s] = static_cast<int>(r % static_cast<std::size_t>(m));
        r /= static_cast<std::size_t>(m);
      }
      entries.push_back({{"index", idx}, {"value", to_json(vals[off])}});
    }
  }
  return {{"dim", m}, {"max_deriv", c.max_deriv()}, {"entries", entries}};
}

inline CurvatureData<Rational> curvature_from_json(const Json& j) {
  CurvatureData<Rational> c(j.at("dim").get<int>(), j.at("max_deriv").get<int>());
  for (const auto& e : j.at("entries")) {
    const auto idx = e.at("index").get<std::vector<int>>();
    if (idx.size() < 4 || idx.size() > 4 + static_cast<std::size_t>(c.max_deriv()))
      throw ParseError("curvature index has the wrong number of slots");
    for (int i : idx)
      if (i < 0 || i >= c.dim()) throw ParseError("curvature index out of range");
    c.at(idx) = rational_from_json(e.at("value"));
  }
  return c;
}

inline Json to_json(const KernelReport& r) {
  Json cols = Json::array();
  for (const auto& m : r.columns) cols.push_back(to_string(m));
  Json basis = Json::array();
  for (const auto& v : r.basis) {
    Json row = Json::array();
    for (const auto& x : v) row.push_back(to_json(x));
    basis.push_back(row);
  }
  Json prim = Json::array();
  for (const auto& v : r.primitive_basis()) {
    Json row = Json::array();
    for (const auto& x : v) row.push_back(detail::integer_json(x));
    prim.push_back(row);
  }
  return {{"dim", r.dim},
          {"weight", r.weight},
          {"valence", std::string(to_string(r.valence))},
          {"columns", cols},
          {"basis", basis},
          {"primitive", prim},
          {"samples", r.samples},
          {"sampler", r.sampler},
          {"seeds", r.seeds}};
}

inline KernelReport kernel_report_from_json(const Json& j) {
  KernelReport r;
  r.dim = j.at("dim").get<int>();
  r.weight = j.at("weight").get<int>();
  r.valence = parse_valence(j.at("valence").get<std::string>());
  for (const auto& c : j.at("columns")) r.columns.push_back(parse_monomial(c.get<std::string>()));
  for (const auto& row : j.at("basis")) {
    RationalVector v;
    for (const auto& x : row) v.push_back(rational_from_json(x));
    if (v.size() != r.columns.size()) throw ParseError("basis vector length does not match columns");
    r.basis.push_back(std::move(v));
  }
  r.samples = j.at("samples").get<std::size_t>();
  r.sampler = j.value("sampler", std::string("automatic"));
  r.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  return r;
}

inline Json to_json(const PiMultiple& p) { return {{"coeff", to_json(p.coeff)}, {"pi_power", p.power}}; }

inline Json to_json(const VariationReport& r) {
  Json j = {{"m", r.m},
            {"n", r.n},
            {"seed", r.seed},
            {"epsilon", r.epsilon},
            {"background_amplitude", r.background_amplitude},
            {"background", r.background},
            {"perturbation", r.perturbation},
            {"derivative_eps", r.derivative_eps},
            {"derivative_half", r.derivative_half},
            {"derivative", r.derivative},
            {"pairing", r.pairing},
            {"scale", r.scale},
            {"d", nullptr},
            {"refinement_residual", r.refinement_residual},
            {"quadrature_residual", r.quadrature_residual},
            {"panels", r.panels}};
  if (r.d) j["d"] = *r.d;
  return j;
}

}  // namespace curvid
