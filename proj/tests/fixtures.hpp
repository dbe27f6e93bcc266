#ifndef ASEPX_TESTS_FIXTURES_HPP
#define ASEPX_TESTS_FIXTURES_HPP

// Published small-sector stationary states, given by one representative per
// cyclic class; the full vector is the sum over all cyclic shifts.

#include <string>
#include <utility>
#include <vector>

#include "asepx/asep_core.hpp"

namespace fixtures {

struct Xi {
  std::vector<int> m;
  std::vector<std::pair<std::string, std::vector<long>>> terms;  // config, coefficients low degree first
};

inline const std::vector<Xi>& xi_table() {
  static const std::vector<Xi> table = {
      {{1, 1, 1}, {{"012", {2, 1}}, {"021", {1, 2}}}},
      {{2, 1, 1}, {{"0012", {3, 1}}, {"0102", {2, 2}}, {"1002", {1, 3}}}},
      {{1, 2, 1}, {{"0112", {2, 1, 1}}, {"1012", {1, 2, 1}}, {"1102", {1, 1, 2}}}},
      {{1, 1, 2}, {{"1220", {3, 1}}, {"2120", {2, 2}}, {"2210", {1, 3}}}},
      {{1, 2, 2},
       {{"11220", {3, 1, 1}},
        {"12120", {2, 2, 1}},  // printed as 2+t+2t^2, which is not stationary
        {"12210", {1, 3, 1}},
        {"21120", {2, 1, 2}},
        {"21210", {1, 2, 2}},
        {"22110", {1, 1, 3}}}},
      {{2, 1, 2},
       {{"00221", {1, 6, 7, 6}},
        {"02021", {2, 7, 6, 5}},
        {"02201", {3, 7, 7, 3}},  // (1+t)(3+4t+3t^2)
        {"20021", {3, 7, 7, 3}},
        {"20201", {5, 6, 7, 2}},
        {"22001", {6, 7, 6, 1}}}},
      {{2, 2, 1},
       {{"00112", {3, 1, 1}},
        {"01012", {2, 2, 1}},
        {"01102", {2, 1, 2}},
        {"10012", {1, 3, 1}},
        {"10102", {1, 2, 2}},
        {"11002", {1, 1, 3}}}},
      {{1, 1, 1, 1},
       {{"0123", {9, 7, 7, 1}},
        {"0213", {3, 11, 5, 5}},
        {"1023", {3, 9, 9, 3}},  // 3(1+t)^3
        {"1203", {5, 5, 11, 3}},
        {"2013", {3, 9, 9, 3}},
        {"2103", {1, 7, 7, 9}}}},
  };
  return table;
}

inline asepx::PolyT poly(const std::vector<long>& c) {
  std::vector<asepx::Rational> v;
  for (long x : c) v.emplace_back(x);
  return asepx::PolyT(v);
}

/// xi(1,2,2) exactly as printed, including the non-stationary |12120> coefficient.
inline Xi xi122_as_printed() {
  Xi xi = xi_table()[4];
  xi.terms[1].second = {2, 1, 2};
  return xi;
}

/// Sum over k of C^k xi, as a vector over the lexicographic sector basis.
inline asepx::SectorVector expand(const Xi& xi) {
  asepx::SectorVector v{asepx::SectorBasis(asepx::Multiplicity(xi.m))};
  for (const auto& [s, coeffs] : xi.terms) {
    asepx::Config c = asepx::parse_config(s);
    for (std::size_t k = 0; k < c.size(); ++k) {
      v.at(c) += asepx::RationalFunctionT(poly(coeffs));
      c = asepx::cyclic_shift(c);
    }
  }
  return v;
}

/// The 12x12 Markov matrix of sector (2,1,1) as printed, rows/columns in the order below.
inline const std::vector<std::string>& paper_order_211() {
  static const std::vector<std::string> order = {"0012", "0102", "1002", "0120", "1020", "0021",
                                                 "1200", "0201", "0210", "2001", "2010", "2100"};
  return order;
}

// A=-2t-1, B=-2t-2, C=-t-2
inline const std::vector<std::string>& paper_matrix_211() {
  static const std::vector<std::string> m = {
      "A 1 0 0 0 1 0 0 0 0 t 0", "t B 1 1 0 0 0 0 0 0 0 t", "0 t C 0 1 0 0 0 0 t 0 0",
      "0 t 0 A 1 0 0 0 1 0 0 0", "0 0 t t B 1 1 0 0 0 0 0", "t 0 0 0 t C 0 1 0 0 0 0",
      "0 0 0 0 t 0 A 1 0 0 0 1", "0 0 0 0 0 t t B 1 1 0 0", "0 0 0 t 0 0 0 t C 0 1 0",
      "0 0 1 0 0 0 0 t 0 A 1 0", "1 0 0 0 0 0 0 0 t t B 1", "0 1 0 0 0 0 t 0 0 0 t C"};
  return m;
}

inline asepx::PolyT paper_symbol(const std::string& s) {
  using asepx::PolyT;
  const PolyT t = PolyT::t();
  if (s == "0") return {};
  if (s == "1") return PolyT(1);
  if (s == "t") return t;
  if (s == "A") return PolyT(-1) - PolyT(2) * t;
  if (s == "B") return PolyT(-2) - PolyT(2) * t;
  if (s == "C") return PolyT(-2) - t;
  throw asepx::Error("unknown matrix symbol " + s);
}

}  // namespace fixtures

#endif  // ASEPX_TESTS_FIXTURES_HPP
