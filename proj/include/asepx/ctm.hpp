#ifndef ASEPX_CTM_HPP
#define ASEPX_CTM_HPP

// Matrix product operators X_0(z), ..., X_n(z) for the n-species ASEP. They act
// on n(n-1)/2 oscillators; modes 1..n-1 belong to the rightmost column and the
// rank n-1 operators sit on modes n, n+1, ...
//
//   X_alpha(z) = sum_i Xtilde_i(z) T(z)_{i alpha}

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "asepx/asep_core.hpp"
#include "asepx/operator_sum.hpp"
#include "asepx/oscillator.hpp"
#include "asepx/scalar.hpp"

namespace asepx {

/// z^zdeg times a tensor product of words.
struct XTerm {
  int zdeg = 0;
  MultiWord words;
  friend bool operator==(const XTerm&, const XTerm&) = default;
  friend auto operator<=>(const XTerm& a, const XTerm& b) {
    if (auto c = a.zdeg <=> b.zdeg; c != 0) return c;
    return a.words <=> b.words;
  }
};

struct XOperator {
  int n = 0;
  int modes = 0;
  std::vector<XTerm> terms;

  /// Terms as (zdeg, "w_1|w_2|...") in the stored order.
  std::vector<std::pair<int, std::string>> listing() const {
    std::vector<std::pair<int, std::string>> out;
    for (const auto& t : terms) out.emplace_back(t.zdeg, multiword_to_string(t.words, modes));
    return out;
  }
};

inline int mode_count(int n) { return n * (n - 1) / 2; }

/// T(z)_{ij}, 0 <= i <= n-1, 0 <= j <= n; nullopt marks a zero entry.
using TMatrix = std::vector<std::vector<std::optional<XTerm>>>;

inline TMatrix build_T(int n) {
  if (n < 1) throw Error("build_T needs n >= 1");
  TMatrix T(static_cast<std::size_t>(n), std::vector<std::optional<XTerm>>(static_cast<std::size_t>(n + 1)));
  const OscWord ap = OscWord::parse("+"), am = OscWord::parse("-"), k = OscWord::parse("k");
  for (int i = 0; i < n; ++i) {
    XTerm first;
    if (i > 0) first.words[i] = ap;
    T[static_cast<std::size_t>(i)][0] = first;
    for (int j = i + 1; j <= n; ++j) {
      XTerm e;
      e.zdeg = 1;
      if (j >= i + 2) {
        if (i > 0) e.words[i] *= ap;
        e.words[j - 1] *= am;
      }
      for (int r = j; r <= n - 1; ++r) e.words[r] *= k;
      T[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = e;
    }
  }
  return T;
}

namespace detail {

inline MultiWord shift_modes(const MultiWord& w, int by) {
  MultiWord out;
  for (const auto& [mu, word] : w) out[mu + by] = word;
  return out;
}

inline std::vector<std::vector<XTerm>> build_all_X(int n) {
  if (n == 0) return {{XTerm{}}};
  if (n == 1) return {{XTerm{}}, {XTerm{1, {}}}};
  const auto lower = build_all_X(n - 1);
  const TMatrix T = build_T(n);
  std::vector<std::vector<XTerm>> out(static_cast<std::size_t>(n + 1));
  for (int alpha = 0; alpha <= n; ++alpha)
    for (int i = 0; i <= n - 1; ++i) {
      const auto& entry = T[static_cast<std::size_t>(i)][static_cast<std::size_t>(alpha)];
      if (!entry) continue;
      for (const auto& x : lower[static_cast<std::size_t>(i)]) {
        XTerm t;
        t.zdeg = x.zdeg + entry->zdeg;
        t.words = shift_modes(x.words, n - 1) * entry->words;
        out[static_cast<std::size_t>(alpha)].push_back(std::move(t));
      }
    }
  return out;
}

}  // namespace detail

inline XOperator build_X(int n, int alpha) {
  if (n < 0) throw Error("build_X needs n >= 0");
  if (alpha < 0 || alpha > n) throw Error("build_X: alpha must lie in 0.." + std::to_string(n));
  return {n, mode_count(n), detail::build_all_X(n)[static_cast<std::size_t>(alpha)]};
}

/// All of X_0, ..., X_n at once.
inline std::vector<XOperator> build_X_all(int n) {
  if (n < 0) throw Error("build_X needs n >= 0");
  std::vector<XOperator> out;
  for (auto& terms : detail::build_all_X(n)) out.push_back({n, mode_count(n), std::move(terms)});
  return out;
}

/// z0^zdeg * words, as a numeric operator sum.
inline OperatorSum to_operator_sum(const std::vector<XTerm>& terms, const Rational& z0) {
  OperatorSum s;
  for (const auto& t : terms) s.add(power(z0, t.zdeg), t.words);
  return s;
}

inline OperatorSum to_operator_sum(const XOperator& x, const Rational& z0) { return to_operator_sum(x.terms, z0); }

inline OperatorSum to_operator_sum(const std::optional<XTerm>& t, const Rational& z0) {
  return t ? to_operator_sum(std::vector<XTerm>{*t}, z0) : OperatorSum{};
}

/// Matrix of X(z0) on the truncated space F_D^{(x) modes}; index = sum_mu d_mu D^{mu-1}.
inline SparseMatrixRF x_matrix(const XOperator& x, const Rational& z0, const FockTruncation& trunc) {
  const int D = trunc.dim;
  if (D < 2) throw Error("x_matrix needs a Fock dimension of at least 2");
  const int modes = x.modes;
  std::size_t dim = 1;
  for (int mu = 0; mu < modes; ++mu) dim *= static_cast<std::size_t>(D);
  if (dim > 2000000) throw Error("x_matrix: truncated space too large");
  SparseMatrixRF m;
  m.dim = dim;
  const PolyT t = PolyT::t();
  for (std::size_t col = 0; col < dim; ++col) {
    for (const auto& term : x.terms) {
      PolyT v = PolyT(power(z0, term.zdeg));
      std::size_t row = 0, stride = 1, rest = col;
      bool dead = false;
      for (int mu = 1; mu <= modes && !dead; ++mu, stride *= static_cast<std::size_t>(D)) {
        const int d = static_cast<int>(rest % static_cast<std::size_t>(D));
        rest /= static_cast<std::size_t>(D);
        auto it = term.words.find(mu);
        if (it == term.words.end()) {
          row += static_cast<std::size_t>(d) * stride;
          continue;
        }
        auto r = act(it->second, d, t, D);
        if (!r || r->second.is_zero()) {
          dead = true;
          break;
        }
        v *= r->second;
        row += static_cast<std::size_t>(r->first) * stride;
      }
      if (!dead && !v.is_zero()) m.add(row, col, RationalFunctionT(v));
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// Matrix product traces

namespace detail {

/// tr(w) at q = 1 as sum_c a_c / (1 - t^c); throws if the series diverges.
inline const GeometricSum& mode_trace(const std::string& word, std::unordered_map<std::string, GeometricSum>& memo) {
  auto it = memo.find(word);
  if (it != memo.end()) return it->second;
  GeometricSum g = trace_series(normal_order(OscWord::parse(word)), 1);
  auto zero = g.by_exponent.find(0);
  if (zero != g.by_exponent.end() && !zero->second.is_zero())
    throw DivergentTrace("divergent trace: non-basic sector or internal error");
  return memo.emplace(word, std::move(g)).first->second;
}

using ExponentPolys = std::map<std::vector<int>, PolyT>;  // sorted exponent multiset -> numerator

struct TraceAccumulator {
  int modes = 0;
  std::unordered_map<std::string, GeometricSum> memo;

  // sum over tuples[lo, hi) sharing words for modes < level
  ExponentPolys eval(const std::vector<std::pair<std::vector<std::string>, Rational>>& tuples, std::size_t lo,
                     std::size_t hi, int level) {
    ExponentPolys out;
    if (level == modes) {
      Rational c = 0;
      for (std::size_t k = lo; k < hi; ++k) c += tuples[k].second;
      if (c != 0) out[{}] = PolyT(c);
      return out;
    }
    std::size_t k = lo;
    while (k < hi) {
      std::size_t e = k;
      const std::string& w = tuples[k].first[static_cast<std::size_t>(level)];
      while (e < hi && tuples[e].first[static_cast<std::size_t>(level)] == w) ++e;
      const ExponentPolys inner = eval(tuples, k, e, level + 1);
      const GeometricSum& g = mode_trace(w, memo);
      for (const auto& [c, a] : g.by_exponent)
        for (const auto& [exps, p] : inner) {
          std::vector<int> key = exps;
          key.insert(std::upper_bound(key.begin(), key.end(), c), c);
          auto& slot = out[key];
          slot += a * p;
        }
      k = e;
    }
    return out;
  }
};

// per mode: min and max ladder shift over the terms of one operator
struct ShiftRange {
  std::vector<int> lo, hi;
};

}  // namespace detail

/// tr(X_{s_1}(z0) ... X_{s_L}(z0)) over the n(n-1)/2 oscillators, exact in t.
inline RationalFunctionT mp_trace(const Config& sigma, const Rational& z0 = 1) {
  int n = 0;
  for (int s : sigma) n = std::max(n, s);
  if (sigma.empty() || !Multiplicity::of(sigma, n).basic())
    throw Error("mp_trace needs a configuration of a basic sector, got " + config_to_string(sigma));
  const auto X = build_X_all(n);
  const int modes = mode_count(n);
  const std::size_t L = sigma.size();

  std::vector<detail::ShiftRange> range(X.size());
  for (std::size_t a = 0; a < X.size(); ++a) {
    range[a].lo.assign(static_cast<std::size_t>(modes), 1 << 20);
    range[a].hi.assign(static_cast<std::size_t>(modes), -(1 << 20));
    for (const auto& term : X[a].terms)
      for (int mu = 1; mu <= modes; ++mu) {
        auto it = term.words.find(mu);
        const int s = it == term.words.end() ? 0 : it->second.imbalance();
        auto& lo = range[a].lo[static_cast<std::size_t>(mu - 1)];
        auto& hi = range[a].hi[static_cast<std::size_t>(mu - 1)];
        lo = std::min(lo, s);
        hi = std::max(hi, s);
      }
  }
  // reachable shift from position k to the end
  std::vector<std::vector<int>> sufLo(L + 1, std::vector<int>(static_cast<std::size_t>(modes), 0));
  std::vector<std::vector<int>> sufHi = sufLo;
  for (std::size_t k = L; k-- > 0;)
    for (int mu = 0; mu < modes; ++mu) {
      const auto& r = range[static_cast<std::size_t>(sigma[k])];
      sufLo[k][static_cast<std::size_t>(mu)] = sufLo[k + 1][static_cast<std::size_t>(mu)] + r.lo[static_cast<std::size_t>(mu)];
      sufHi[k][static_cast<std::size_t>(mu)] = sufHi[k + 1][static_cast<std::size_t>(mu)] + r.hi[static_cast<std::size_t>(mu)];
    }

  std::map<std::vector<std::string>, Rational> tuples;
  std::vector<std::string> words(static_cast<std::size_t>(modes));
  std::vector<int> shift(static_cast<std::size_t>(modes), 0);
  std::vector<Rational> zpow;
  for (int d = 0; d <= n * static_cast<int>(L); ++d) zpow.push_back(power(z0, d));

  auto dfs = [&](auto&& self, std::size_t k, int zdeg) -> void {
    if (k == L) {
      tuples[words] += zpow[static_cast<std::size_t>(zdeg)];
      return;
    }
    for (const auto& term : X[static_cast<std::size_t>(sigma[k])].terms) {
      bool ok = true;
      for (int mu = 1; mu <= modes && ok; ++mu) {
        auto it = term.words.find(mu);
        const int s = shift[static_cast<std::size_t>(mu - 1)] + (it == term.words.end() ? 0 : it->second.imbalance());
        ok = s + sufLo[k + 1][static_cast<std::size_t>(mu - 1)] <= 0 && s + sufHi[k + 1][static_cast<std::size_t>(mu - 1)] >= 0;
      }
      if (!ok) continue;
      std::vector<std::size_t> lens(static_cast<std::size_t>(modes));
      for (int mu = 1; mu <= modes; ++mu) lens[static_cast<std::size_t>(mu - 1)] = words[static_cast<std::size_t>(mu - 1)].size();
      for (const auto& [mu, w] : term.words) {
        words[static_cast<std::size_t>(mu - 1)] += w.to_string();
        shift[static_cast<std::size_t>(mu - 1)] += w.imbalance();
      }
      self(self, k + 1, zdeg + term.zdeg);
      for (const auto& [mu, w] : term.words) {
        words[static_cast<std::size_t>(mu - 1)].resize(lens[static_cast<std::size_t>(mu - 1)]);
        shift[static_cast<std::size_t>(mu - 1)] -= w.imbalance();
      }
    }
  };
  dfs(dfs, 0, 0);

  if (modes == 0) {
    Rational s = 0;
    for (const auto& [w, c] : tuples) s += c;
    return s;
  }
  std::vector<std::pair<std::vector<std::string>, Rational>> flat(tuples.begin(), tuples.end());
  detail::TraceAccumulator acc{modes, {}};
  const auto sums = acc.eval(flat, 0, flat.size(), 0);
  // group numerators over the common denominator of each exponent multiset
  RationalFunctionT out;
  for (const auto& [exps, p] : sums) {
    if (p.is_zero()) continue;
    PolyT den(1);
    for (int c : exps) den *= PolyT::one_minus(1, c);
    out += RationalFunctionT(p, den);
  }
  return out;
}

/// Matrix product vector over the sector, canonicalized.
inline SectorVector mp_stationary(const Multiplicity& m) {
  if (!m.basic()) throw Error("mp_stationary needs a basic sector, got " + m.to_string());
  SectorBasis basis(m);
  SectorVector v(basis);
  std::map<Config, RationalFunctionT> byClass;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const Config rep = cyclic_representative(basis[i]);
    auto it = byClass.find(rep);
    if (it == byClass.end()) it = byClass.emplace(rep, mp_trace(rep)).first;
    v.values[i] = it->second;
  }
  return canonicalize(v);
}

}  // namespace asepx

#endif  // ASEPX_CTM_HPP
