#ifndef ASEPX_JSON_IO_HPP
#define ASEPX_JSON_IO_HPP

// JSON encodings. A PolyT is an array of coefficient strings, lowest degree
// first ("3", "-1/2"); a rational function is {"num": [...], "den": [...]}.

#include <string>

#include <json.hpp>

#include "asepx/algebra_checks.hpp"
#include "asepx/asep_core.hpp"
#include "asepx/ctm.hpp"
#include "asepx/mlq.hpp"
#include "asepx/scalar.hpp"

namespace asepx {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "asepx/1";

inline Json to_json(const Rational& r) { return to_string(r); }

inline Json to_json(const PolyT& p) {
  Json a = Json::array();
  for (const auto& c : p.coefficients()) a.push_back(to_string(c));
  return a;
}

/// Polynomials collapse to their coefficient array.
inline Json to_json(const RationalFunctionT& f) {
  if (f.is_polynomial() && f.den().coeff(0) == 1) return to_json(f.num());
  return Json{{"num", to_json(f.num())}, {"den", to_json(f.den())}};
}

inline Json to_json(const SectorVector& v) {
  Json o = Json::object();
  for (std::size_t k = 0; k < v.size(); ++k) o[config_to_string(v.basis[k])] = to_json(v.values[k]);
  return o;
}

inline Json to_json(const CheckReport& r) {
  Json o{{"check", r.name},         {"passed", r.passed},      {"points", r.points},
         {"degree_bound", r.degree_bound}, {"bound_variable", r.bound_variable}, {"witness", r.witness}};
  Json d = Json::object();
  for (const auto& [k, v] : r.details) d[k] = v;
  o["details"] = d;
  return o;
}

inline Json to_json(const Mlq& q) {
  Json rows = Json::array();
  for (const auto& r : q.balls.rows) rows.push_back(r.to_string());
  Json arrows = Json::array();
  for (const auto& a : q.arrows) arrows.push_back(Json::array({a.source, a.target, a.row}));
  return Json{{"rows", rows}, {"arrows", arrows}, {"config", config_to_string(q.config)}, {"weight", to_json(q.weight)}};
}

inline Json to_json(const XOperator& x, int alpha) {
  Json terms = Json::array();
  for (const auto& [zdeg, word] : x.listing()) terms.push_back(Json{{"zdeg", zdeg}, {"word", word}});
  return Json{{"alpha", alpha}, {"modes", x.modes}, {"terms", terms}};
}

}  // namespace asepx

#endif  // ASEPX_JSON_IO_HPP
