#ifndef ASEPX_ALGEBRA_CHECKS_HPP
#define ASEPX_ALGEBRA_CHECKS_HPP

// The R matrix, the L operators and their oscillator contraction, and exact
// checks of the identities that lead from Yang-Baxter to H P = 0.
//
// Identities among scalar matrices (Yang-Baxter, RLL, quasi-periodicity) keep
// t symbolic and fix the spectral parameters at rational points. Identities
// among oscillator operators fix t as well and compare on the safe window of a
// truncated Fock space (see operator_sum.hpp).

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "asepx/asep_core.hpp"
#include "asepx/ctm.hpp"
#include "asepx/mlq.hpp"
#include "asepx/operator_sum.hpp"
#include "asepx/oscillator.hpp"
#include "asepx/scalar.hpp"

namespace asepx {

/// Outcome of an identity check. `points` counts evaluation points; the
/// identity has degree at most `degree_bound` in `bound_variable`.
struct CheckReport {
  std::string name;
  bool passed = true;
  int points = 0;
  int degree_bound = 0;
  std::string bound_variable;
  std::string witness;
  std::map<std::string, std::string> details;

  void fail(const std::string& w) {
    if (passed) witness = w;
    passed = false;
  }
};

// ---------------------------------------------------------------- R matrix

/// R(z0)^{a,b}_{i,j} with t symbolic.
inline RationalFunctionT r_element(const Rational& z0, int i, int j, int a, int b) {
  const PolyT den = PolyT::one_minus(z0, 1);  // 1 - z0 t
  if (i == j) return (a == i && b == j) ? RationalFunctionT(1) : RationalFunctionT();
  if (a == i && b == j) return {PolyT::monomial(1 - z0, i < j ? 1 : 0), den};
  if (a == j && b == i) return {PolyT::monomial(i > j ? z0 : Rational(1), 0) * PolyT::one_minus(1, 1), den};
  return {};
}

/// R(z0)^{a,b}_{i,j} at t = t0; throws at the pole t0 z0 = 1.
inline Rational r_element(const Rational& z0, const Rational& t0, int i, int j, int a, int b) {
  if (t0 * z0 == 1 && i != j && ((a == i && b == j) || (a == j && b == i)))
    throw Error("R matrix pole: t z = 1 at z = " + to_string(z0) + ", t = " + to_string(t0));
  return r_element(z0, i, j, a, b)(t0);
}

/// All entries of R(z0) for rank n, indexed by ((i*(n+1)+j)*(n+1)+a)*(n+1)+b.
class RMatrix {
 public:
  RMatrix(int n, const Rational& z0) : n_(n), e_(static_cast<std::size_t>((n + 1) * (n + 1) * (n + 1) * (n + 1))) {
    for (int i = 0; i <= n; ++i)
      for (int j = 0; j <= n; ++j)
        for (int a = 0; a <= n; ++a)
          for (int b = 0; b <= n; ++b) e_[idx(i, j, a, b)] = r_element(z0, i, j, a, b);
  }
  int n() const { return n_; }
  const RationalFunctionT& operator()(int i, int j, int a, int b) const { return e_[idx(i, j, a, b)]; }

 private:
  std::size_t idx(int i, int j, int a, int b) const {
    const int N = n_ + 1;
    return static_cast<std::size_t>(((i * N + j) * N + a) * N + b);
  }
  int n_;
  std::vector<RationalFunctionT> e_;
};

namespace detail {

using Triple = std::array<int, 3>;
using TripleVector = std::map<Triple, RationalFunctionT>;

// Rcheck = P R acting on factors (pos, pos+1) of V^{(x)3}
inline TripleVector apply_rcheck(const TripleVector& v, int pos, const RMatrix& R) {
  TripleVector out;
  const int n = R.n();
  for (const auto& [key, c] : v) {
    const int i = key[pos], j = key[pos + 1];
    for (int a = 0; a <= n; ++a)
      for (int b = 0; b <= n; ++b) {
        const auto& r = R(i, j, a, b);
        if (r.is_zero()) continue;
        Triple k = key;
        k[pos] = b;
        k[pos + 1] = a;
        auto& slot = out[k];
        slot += r * c;
      }
  }
  for (auto it = out.begin(); it != out.end();) it = it->second.is_zero() ? out.erase(it) : std::next(it);
  return out;
}

inline std::string triple_str(const Triple& t) {
  return std::to_string(t[0]) + std::to_string(t[1]) + std::to_string(t[2]);
}

}  // namespace detail

/// Rcheck_23(y) Rcheck_12(xy) Rcheck_23(x) = Rcheck_12(x) Rcheck_23(xy) Rcheck_12(y), t symbolic.
inline CheckReport check_ybe(int n, const Rational& x0, const Rational& y0) {
  CheckReport rep;
  rep.name = "ybe";
  rep.points = 1;
  rep.degree_bound = 4;
  rep.bound_variable = "x";
  const RMatrix Rx(n, x0), Ry(n, y0), Rxy(n, x0 * y0);
  for (int i = 0; i <= n && rep.passed; ++i)
    for (int j = 0; j <= n && rep.passed; ++j)
      for (int k = 0; k <= n && rep.passed; ++k) {
        const detail::TripleVector in{{{i, j, k}, RationalFunctionT(1)}};
        const auto lhs = detail::apply_rcheck(detail::apply_rcheck(detail::apply_rcheck(in, 1, Rx), 0, Rxy), 1, Ry);
        const auto rhs = detail::apply_rcheck(detail::apply_rcheck(detail::apply_rcheck(in, 0, Ry), 1, Rxy), 0, Rx);
        if (lhs == rhs) continue;
        for (int a = 0; a <= n; ++a)
          for (int b = 0; b <= n; ++b)
            for (int c = 0; c <= n; ++c) {
              const detail::Triple out{a, b, c};
              auto l = lhs.find(out), r = rhs.find(out);
              const RationalFunctionT lv = l == lhs.end() ? RationalFunctionT() : l->second;
              const RationalFunctionT rv = r == rhs.end() ? RationalFunctionT() : r->second;
              if (lv != rv && rep.passed)
                rep.fail("entry <" + detail::triple_str(out) + "|.|" + detail::triple_str({i, j, k}) + ">: " +
                         lv.to_string() + " vs " + rv.to_string());
            }
      }
  return rep;
}

/// R(z)^{a,b}_{i',j'} = z^{[j'=0]-[b=0]} t^{-[i'!=0, j'=0] + [a=0, b!=0]} R(z)^{a-1,b-1}_{i'-1,j'-1}, indices mod n+1.
inline CheckReport check_quasi_periodicity(int n, const Rational& z0) {
  CheckReport rep;
  rep.name = "qp";
  rep.points = 1;
  rep.degree_bound = 2;
  rep.bound_variable = "z";
  if (z0 == 0) throw Error("quasi-periodicity needs z != 0");
  const RMatrix R(n, z0);
  const RationalFunctionT t(PolyT::t()), tinv(PolyT(1), PolyT::t());
  auto dec = [n](int x) { return (x + n) % (n + 1); };
  for (int a = 0; a <= n; ++a)
    for (int b = 0; b <= n; ++b)
      for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j) {
          const int ze = (j == 0) - (b == 0);
          const int te = -static_cast<int>(i != 0 && j == 0) + static_cast<int>(a == 0 && b != 0);
          RationalFunctionT rhs = R(dec(i), dec(j), dec(a), dec(b));
          rhs *= ze >= 0 ? RationalFunctionT(power(z0, ze)) : RationalFunctionT(1 / power(z0, -ze));
          if (te > 0) rhs *= t;
          if (te < 0) rhs *= tinv;
          const auto& lhs = R(i, j, a, b);
          if (lhs != rhs)
            rep.fail("R^{" + std::to_string(a) + std::to_string(b) + "}_{" + std::to_string(i) + std::to_string(j) +
                     "}: " + lhs.to_string() + " vs " + rhs.to_string());
        }
  return rep;
}

// ---------------------------------------------------------------- L operator

using Composition = std::vector<int>;

/// D_l: compositions of l into n+1 nonnegative parts, lexicographic.
inline std::vector<Composition> compositions(int n, int l) {
  std::vector<Composition> out;
  Composition c(static_cast<std::size_t>(n + 1), 0);
  std::function<void(int, int)> rec = [&](int pos, int left) {
    if (pos == n) {
      c[static_cast<std::size_t>(n)] = left;
      out.push_back(c);
      return;
    }
    for (int v = left; v >= 0; --v) {
      c[static_cast<std::size_t>(pos)] = v;
      rec(pos + 1, left - v);
    }
  };
  rec(0, l);
  std::sort(out.begin(), out.end());
  return out;
}

/// L(z0)^{beta,b}_{alpha,a} with t symbolic.
inline PolyT l_element(const Rational& z0, int beta, const Composition& b, int alpha, const Composition& a) {
  if (a.size() != b.size()) throw Error("l_element: compositions of different length");
  const int n = static_cast<int>(a.size()) - 1;
  Composition lhs = a, rhs = b;
  lhs[static_cast<std::size_t>(alpha)] += 1;
  rhs[static_cast<std::size_t>(beta)] += 1;
  if (lhs != rhs) return PolyT();
  int e = 0;
  for (int r = beta + 1; r <= n; ++r) e += a[static_cast<std::size_t>(r)];
  const int ab = a[static_cast<std::size_t>(beta)];
  const PolyT factor = alpha == beta ? PolyT::one_minus(z0, ab) : PolyT::one_minus(1, ab);
  return PolyT::monomial(alpha > beta ? z0 : Rational(1), e) * factor;
}

inline Rational l_element(const Rational& z0, const Rational& t0, int beta, const Composition& b, int alpha,
                          const Composition& a) {
  return l_element(z0, beta, b, alpha, a)(t0);
}

/// L(z0)^beta_alpha |a> as a single (composition, coefficient), or nothing.
inline std::optional<std::pair<Composition, PolyT>> l_apply(const Rational& z0, int beta, int alpha, const Composition& a) {
  Composition b = a;
  b[static_cast<std::size_t>(alpha)] += 1;
  if (--b[static_cast<std::size_t>(beta)] < 0) return std::nullopt;
  PolyT v = l_element(z0, beta, b, alpha, a);
  if (v.is_zero()) return std::nullopt;
  return std::make_pair(std::move(b), std::move(v));
}

namespace detail {

using CompVector = std::map<Composition, RationalFunctionT>;

inline CompVector l_apply_vec(const Rational& z0, int beta, int alpha, const CompVector& v) {
  CompVector out;
  for (const auto& [c, x] : v)
    if (auto r = l_apply(z0, beta, alpha, c)) out[r->first] += x * RationalFunctionT(r->second);
  for (auto it = out.begin(); it != out.end();) it = it->second.is_zero() ? out.erase(it) : std::next(it);
  return out;
}

inline void add_into(CompVector& acc, const CompVector& v, const RationalFunctionT& c) {
  if (c.is_zero()) return;
  for (const auto& [k, x] : v) acc[k] += c * x;
  for (auto it = acc.begin(); it != acc.end();) it = it->second.is_zero() ? acc.erase(it) : std::next(it);
}

inline std::string comp_str(const Composition& c) {
  std::string s;
  for (int v : c) s += (s.empty() ? "" : ",") + std::to_string(v);
  return "(" + s + ")";
}

}  // namespace detail

/// RLL = LLR on F_l for all a, b, i, j, with t symbolic.
inline CheckReport check_rll(int n, int l, const Rational& x0, const Rational& y0) {
  CheckReport rep;
  rep.name = "rll";
  rep.points = 1;
  rep.degree_bound = 4;
  rep.bound_variable = "x";
  if (y0 == 0) throw Error("rll needs y != 0");
  const RMatrix R(n, x0 / y0);
  const auto basis = compositions(n, l);
  for (const auto& m : basis) {
    const detail::CompVector in{{m, RationalFunctionT(1)}};
    for (int i = 0; i <= n; ++i)
      for (int j = 0; j <= n; ++j)
        for (int a = 0; a <= n; ++a)
          for (int b = 0; b <= n; ++b) {
            detail::CompVector lhs, rhs;
            for (int ap = 0; ap <= n; ++ap)
              for (int bp = 0; bp <= n; ++bp) {
                const auto& r = R(i, j, ap, bp);
                if (r.is_zero()) continue;
                detail::add_into(lhs, detail::l_apply_vec(y0, b, bp, detail::l_apply_vec(x0, a, ap, in)), r);
              }
            for (int ip = 0; ip <= n; ++ip)
              for (int jp = 0; jp <= n; ++jp) {
                const auto& r = R(ip, jp, a, b);
                if (r.is_zero()) continue;
                detail::add_into(rhs, detail::l_apply_vec(x0, ip, i, detail::l_apply_vec(y0, jp, j, in)), r);
              }
            if (lhs != rhs)
              rep.fail("a,b,i,j = " + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(i) + "," +
                       std::to_string(j) + " on |" + detail::comp_str(m) + ">");
          }
  }
  return rep;
}

// ---------------------------------------------------------------- oscillator contraction of L

/// Entries calL^beta_alpha on modes 1..n; nullopt below the diagonal.
struct CalL {
  int n = 0;
  std::vector<std::vector<std::optional<MultiWord>>> entry;  // entry[alpha][beta]

  const std::optional<MultiWord>& operator()(int alpha, int beta) const {
    return entry[static_cast<std::size_t>(alpha)][static_cast<std::size_t>(beta)];
  }
};

inline CalL build_calL(int n) {
  if (n < 1) throw Error("build_calL needs n >= 1");
  CalL c;
  c.n = n;
  c.entry.assign(static_cast<std::size_t>(n + 1), std::vector<std::optional<MultiWord>>(static_cast<std::size_t>(n + 1)));
  const OscWord ap = OscWord::parse("+"), am = OscWord::parse("-"), k = OscWord::parse("k");
  for (int alpha = 0; alpha <= n; ++alpha)
    for (int beta = alpha; beta <= n; ++beta) {
      MultiWord w;
      if (alpha < beta) {
        if (alpha > 0) w[alpha] *= ap;
        w[beta] *= am;
      }
      for (int r = beta + 1; r <= n; ++r) w[r] *= k;
      c.entry[static_cast<std::size_t>(alpha)][static_cast<std::size_t>(beta)] = w;
    }
  return c;
}

namespace detail {

inline bool same_operator(const MultiWord& a, const MultiWord& b) {
  std::set<int> modes;
  for (const auto& [mu, w] : a) modes.insert(mu);
  for (const auto& [mu, w] : b) modes.insert(mu);
  static const OscWord kEmpty;
  for (int mu : modes) {
    auto ia = a.find(mu), ib = b.find(mu);
    const OscWord& wa = ia == a.end() ? kEmpty : ia->second;
    const OscWord& wb = ib == b.end() ? kEmpty : ib->second;
    if (!(normal_order(wa) == normal_order(wb))) return false;
  }
  return true;
}

}  // namespace detail

/// calL^beta_alpha = T(z)_{alpha,beta+1} (a-_n)^{[beta=n]} (z^{-1} k_n)^{[beta!=n]}, T_{alpha,n+1} := T_{alpha,0}.
inline CheckReport check_LtT(int n, const Rational& z0) {
  CheckReport rep;
  rep.name = "lt-link";
  rep.points = 1;
  rep.degree_bound = 1;
  rep.bound_variable = "z";
  if (z0 == 0) throw Error("lt-link needs z != 0");
  const CalL L = build_calL(n);
  const TMatrix T = build_T(n);
  for (int alpha = 0; alpha <= n - 1; ++alpha)
    for (int beta = 0; beta <= n; ++beta) {
      const auto& t = T[static_cast<std::size_t>(alpha)][static_cast<std::size_t>(beta == n ? 0 : beta + 1)];
      const auto& lhs = L(alpha, beta);
      const std::string where = "alpha=" + std::to_string(alpha) + ", beta=" + std::to_string(beta);
      if (!t || !lhs) {
        if (t.has_value() != lhs.has_value()) rep.fail(where + ": zero pattern differs");
        continue;
      }
      MultiWord w = t->words;
      w[n] *= OscWord::parse(beta == n ? "-" : "k");
      const Rational coeff = power(z0, t->zdeg) / (beta == n ? Rational(1) : z0);
      if (coeff != 1) rep.fail(where + ": scalar factor " + to_string(coeff));
      else if (!detail::same_operator(*lhs, w))
        rep.fail(where + ": " + multiword_to_string(*lhs, n) + " vs " + multiword_to_string(w, n));
    }
  return rep;
}

/// calL agrees with L(0) on F_l after forgetting the occupation of component 0.
inline CheckReport check_calL_projection(int n, int l) {
  CheckReport rep;
  rep.name = "lt-projection";
  rep.points = 1;
  const CalL L = build_calL(n);
  const PolyT t = PolyT::t();
  for (const auto& m : compositions(n, l))
    for (int alpha = 0; alpha <= n; ++alpha)
      for (int beta = 0; beta <= n; ++beta) {
        const auto got = l_apply(0, beta, alpha, m);
        std::optional<std::pair<Composition, PolyT>> want;
        if (const auto& w = L(alpha, beta)) {
          Composition out = m;
          PolyT v(1);
          bool alive = true;
          for (int mu = 1; mu <= n && alive; ++mu) {
            auto it = w->find(mu);
            if (it == w->end()) continue;
            auto r = act(it->second, m[static_cast<std::size_t>(mu)], t, 1 << 30);
            if (!r || r->second.is_zero()) alive = false;
            else {
              out[static_cast<std::size_t>(mu)] = r->first;
              v = v * r->second;
            }
          }
          int rest = l;
          for (int mu = 1; mu <= n; ++mu) rest -= out[static_cast<std::size_t>(mu)];
          out[0] = rest;
          if (alive && rest >= 0) want = std::make_pair(out, v);
        }
        if (got != want)
          rep.fail("alpha=" + std::to_string(alpha) + ", beta=" + std::to_string(beta) + " on |" + detail::comp_str(m) + ">");
      }
  return rep;
}

// ---------------------------------------------------------------- operator identities

namespace detail {

inline std::string operator_witness(const std::string& where, const WindowCheck& w) { return where + ": " + w.witness; }

inline std::vector<OperatorSum> x_sums(const std::vector<XOperator>& X, const Rational& z0) {
  std::vector<OperatorSum> out;
  for (const auto& x : X) out.push_back(to_operator_sum(x, z0));
  return out;
}

inline int letters_without_aplus(const OperatorSum& s) {
  int best = 0;
  for (const auto& t : s.terms()) {
    int c = 0;
    for (const auto& [mu, w] : t.words) c += w.count(Gen::AMINUS) + w.count(Gen::K);
    best = std::max(best, c);
  }
  return best;
}

}  // namespace detail

/// Rank-reducing RTT = TTR at (x0, y0, t0) on the safe window.
inline CheckReport check_rtt(int n, const Rational& x0, const Rational& y0, const Rational& t0, const FockTruncation& trunc) {
  CheckReport rep;
  rep.name = "rtt";
  rep.points = 1;
  rep.degree_bound = 3;
  rep.bound_variable = "x";
  const TMatrix T = build_T(n);
  const Rational z = y0 / x0;
  auto Tx = [&](int i, int j) { return to_operator_sum(T[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], x0); };
  auto Ty = [&](int i, int j) { return to_operator_sum(T[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], y0); };
  for (int a = 0; a <= n; ++a)
    for (int b = 0; b <= n; ++b)
      for (int i = 0; i <= n - 1; ++i)
        for (int j = 0; j <= n - 1; ++j) {
          OperatorSum lhs, rhs;
          for (int ap = 0; ap <= n - 1; ++ap)
            for (int bp = 0; bp <= n - 1; ++bp) {
              const Rational r = r_element(z, t0, i, j, ap, bp);
              if (r != 0) lhs += r * (Ty(bp, b) * Tx(ap, a));
            }
          for (int ip = 0; ip <= n; ++ip)
            for (int jp = 0; jp <= n; ++jp) {
              const Rational r = r_element(z, t0, ip, jp, a, b);
              if (r != 0) rhs += r * (Tx(i, ip) * Ty(j, jp));
            }
          const auto w = check_equal_on_window(lhs, rhs, t0, trunc.dim);
          if (!w.zero)
            rep.fail(detail::operator_witness("a,b,i,j = " + std::to_string(a) + "," + std::to_string(b) + "," +
                                                  std::to_string(i) + "," + std::to_string(j),
                                              w));
        }
  return rep;
}

/// X_alpha(z) = sum_i Xtilde_i(z) T(z)_{i alpha} on the safe window, where
/// Xtilde are the rank n-1 operators moved to modes n..n(n-1)/2.
inline CheckReport check_recursion(int n, const Rational& z0, const Rational& t0, const FockTruncation& trunc) {
  CheckReport rep;
  rep.name = "recursion";
  rep.points = 1;
  rep.degree_bound = n;
  rep.bound_variable = "z";
  if (n < 2) throw Error("recursion needs n >= 2");
  const auto lower = build_X_all(n - 1);
  const TMatrix T = build_T(n);
  for (int alpha = 0; alpha <= n; ++alpha) {
    OperatorSum rhs;
    for (int i = 0; i < n; ++i) {
      std::vector<XTerm> shifted;
      for (const auto& term : lower[static_cast<std::size_t>(i)].terms)
        shifted.push_back({term.zdeg, detail::shift_modes(term.words, n - 1)});
      rhs += to_operator_sum(shifted, z0) * to_operator_sum(T[static_cast<std::size_t>(i)][static_cast<std::size_t>(alpha)], z0);
    }
    const auto w = check_equal_on_window(to_operator_sum(build_X(n, alpha), z0), rhs, t0, trunc.dim);
    if (!w.zero) rep.fail(detail::operator_witness("alpha=" + std::to_string(alpha), w));
  }
  return rep;
}

/// X_alpha(y) X_beta(x) = sum R(y/x)^{beta,alpha}_{gamma,delta} X_gamma(x) X_delta(y) on the safe window.
inline CheckReport check_zf(int n, const Rational& x0, const Rational& y0, const Rational& t0, const FockTruncation& trunc) {
  CheckReport rep;
  rep.name = "zf";
  rep.points = 1;
  rep.degree_bound = n + 2;
  rep.bound_variable = "x";
  const auto X = build_X_all(n);
  const auto Xx = detail::x_sums(X, x0), Xy = detail::x_sums(X, y0);
  const Rational z = y0 / x0;
  for (int alpha = 0; alpha <= n; ++alpha)
    for (int beta = 0; beta <= n; ++beta) {
      const OperatorSum lhs = Xy[static_cast<std::size_t>(alpha)] * Xx[static_cast<std::size_t>(beta)];
      OperatorSum rhs;
      for (int g = 0; g <= n; ++g)
        for (int d = 0; d <= n; ++d) {
          const Rational r = r_element(z, t0, g, d, beta, alpha);
          if (r != 0) rhs += r * (Xx[static_cast<std::size_t>(g)] * Xy[static_cast<std::size_t>(d)]);
        }
      const auto w = check_equal_on_window(lhs, rhs, t0, trunc.dim);
      if (!w.zero) rep.fail(detail::operator_witness("alpha=" + std::to_string(alpha) + ", beta=" + std::to_string(beta), w));
    }
  return rep;
}

/// Xhat = (1 - t) dX/dz at z = 1: sum of c * word, all times (1 - t).
struct HatOperator {
  int n = 0;
  int modes = 0;
  std::vector<std::pair<int, MultiWord>> terms;

  std::vector<std::pair<int, std::string>> listing() const {
    std::vector<std::pair<int, std::string>> out;
    for (const auto& [c, w] : terms) out.emplace_back(c, multiword_to_string(w, modes));
    return out;
  }
};

inline std::vector<HatOperator> hat_operators(int n) {
  std::vector<HatOperator> out;
  for (const auto& x : build_X_all(n)) {
    std::map<MultiWord, int> acc;
    std::vector<MultiWord> order;
    for (const auto& t : x.terms) {
      if (t.zdeg == 0) continue;
      if (!acc.count(t.words)) order.push_back(t.words);
      acc[t.words] += t.zdeg;
    }
    HatOperator h{n, x.modes, {}};
    for (const auto& w : order) h.terms.emplace_back(acc[w], w);
    out.push_back(std::move(h));
  }
  return out;
}

inline OperatorSum to_operator_sum(const HatOperator& h, const Rational& t0) {
  OperatorSum s;
  for (const auto& [c, w] : h.terms) s.add((1 - t0) * c, w);
  return s;
}

/// t^{[a>b]} X_b X_a - t^{[a<b]} X_a X_b = X_a Xhat_b - Xhat_a X_b at t = t0 on the safe window.
/// The report's degree bound is the degree in t of the window matrix elements.
inline CheckReport check_hat(int n, const Rational& t0, const FockTruncation& trunc) {
  CheckReport rep;
  rep.name = "hat";
  rep.points = 1;
  rep.bound_variable = "t";
  const auto X = detail::x_sums(build_X_all(n), 1);
  std::vector<OperatorSum> H;
  for (const auto& h : hat_operators(n)) H.push_back(to_operator_sum(h, t0));
  for (int a = 0; a <= n; ++a)
    for (int b = 0; b <= n; ++b) {
      const auto& Xa = X[static_cast<std::size_t>(a)];
      const auto& Xb = X[static_cast<std::size_t>(b)];
      const OperatorSum lhs = (a > b ? t0 : Rational(1)) * (Xb * Xa) - (a < b ? t0 : Rational(1)) * (Xa * Xb);
      const OperatorSum rhs = Xa * H[static_cast<std::size_t>(b)] - H[static_cast<std::size_t>(a)] * Xb;
      rep.degree_bound = std::max(
          rep.degree_bound,
          std::max(detail::letters_without_aplus(lhs), detail::letters_without_aplus(rhs)) * (trunc.dim - 1) + 2);
      const auto w = check_equal_on_window(lhs, rhs, t0, trunc.dim);
      if (!w.zero) rep.fail(detail::operator_witness("alpha=" + std::to_string(a) + ", beta=" + std::to_string(b), w));
    }
  return rep;
}

// ---------------------------------------------------------------- M = S and H P = 0

/// m_element = s_element on random row data, each at every q in qs.
inline CheckReport check_ms(int instances, const std::vector<Rational>& qs, std::uint64_t seed, int maxL = 7, int maxM = 5) {
  CheckReport rep;
  rep.name = "ms-theorem";
  rep.bound_variable = "q";
  std::mt19937_64 rng(seed);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  auto row_from = [](int L, const std::vector<int>& ones) {
    std::vector<int> b(static_cast<std::size_t>(L), 0);
    for (int c : ones) b[static_cast<std::size_t>(c)] = 1;
    return Row(b);
  };
  int nonzero = 0;
  for (int k = 0; k < instances; ++k) {
    const int L = pick(2, maxL);
    const int m = pick(1, std::min(maxM, L));
    const int l = pick(0, m - 1);
    std::vector<int> cols(static_cast<std::size_t>(L));
    std::iota(cols.begin(), cols.end(), 0);
    std::shuffle(cols.begin(), cols.end(), rng);
    const Row j = row_from(L, {cols.begin(), cols.begin() + m});
    std::shuffle(cols.begin(), cols.end(), rng);
    const Row i = row_from(L, {cols.begin(), cols.begin() + l});
    // a is a random l-subset of j's balls, b the rest of j
    std::vector<int> jb;
    for (int c = 0; c < L; ++c)
      if (j[c]) jb.push_back(c);
    std::shuffle(jb.begin(), jb.end(), rng);
    const Row a = row_from(L, {jb.begin(), jb.begin() + l});
    const Row b = row_from(L, {jb.begin() + l, jb.end()});
    for (const auto& q : qs) {
      ++rep.points;
      const auto mv = m_element(q, i, j, a, b);
      const auto sv = s_element(q, i, j, a, b);
      if (!mv.is_zero()) ++nonzero;
      if (mv != sv)
        rep.fail("i=" + i.to_string() + " j=" + j.to_string() + " a=" + a.to_string() + " b=" + b.to_string() +
                 " q=" + to_string(q) + ": " + mv.to_string() + " vs " + sv.to_string());
    }
  }
  rep.details["instances"] = std::to_string(instances);
  rep.details["nonzero_values"] = std::to_string(nonzero);
  return rep;
}

/// H P_mp = 0 exactly, and kernel, MLQ(q=1) and matrix-product vectors agree after canonicalization.
inline CheckReport verify_stationary(const Multiplicity& m) {
  CheckReport rep;
  rep.name = "stationary";
  rep.points = 1;
  const SectorVector mp = mp_stationary(m);
  const auto image = markov_sector(mp.basis).apply(mp.values);
  for (std::size_t k = 0; k < image.size(); ++k)
    if (!image[k].is_zero()) {
      rep.fail("H P has nonzero entry at " + config_to_string(mp.basis[k]) + ": " + image[k].to_string());
      break;
    }
  rep.details["h_times_p_zero"] = rep.passed ? "true" : "false";
  const SectorVector kern = canonicalize(stationary_kernel(m));
  const SectorVector mlq = canonicalize(mlq_state(m, 1));
  bool agree = true;
  for (std::size_t k = 0; k < mp.size(); ++k) {
    const Config& c = mp.basis[k];
    if (kern.at(c) != mp.values[k] || mlq.at(c) != mp.values[k]) {
      agree = false;
      rep.fail("methods disagree at " + config_to_string(c) + ": kernel " + kern.at(c).to_string() + ", mlq " +
               mlq.at(c).to_string() + ", mp " + mp.values[k].to_string());
      break;
    }
  }
  rep.details["three_way_equal"] = agree ? "true" : "false";
  rep.details["sector_size"] = std::to_string(mp.size());
  return rep;
}

// ---------------------------------------------------------------- drivers

struct LadderOptions {
  int n = 2;
  int l = 1;
  int fock_dim = 10;
  int trials = 5;
  std::uint64_t seed = 1;
  std::optional<Multiplicity> mult;  // for "stationary"; defaults to (1, ..., 1)
};

inline const std::vector<std::string>& ladder_names() {
  static const std::vector<std::string> names = {"ybe", "rll", "lt-link", "qp", "rtt", "zf", "hat", "ms-theorem", "stationary"};
  return names;
}

namespace detail {

// Folds a one-point report into the running total.
inline void absorb(CheckReport& total, const CheckReport& one, const std::string& point) {
  total.points += one.points;
  total.degree_bound = std::max(total.degree_bound, one.degree_bound);
  if (!one.bound_variable.empty()) total.bound_variable = one.bound_variable;
  if (!one.passed) total.fail(one.witness + " at " + point);
}

inline std::uint64_t mix(std::uint64_t seed, std::uint64_t k) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (k + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace detail

/// Runs one rung of the identity ladder at max(trials, degree_bound + 1)
/// points whose values of the bound variable are pairwise distinct.
inline CheckReport run_ladder_check(const std::string& name, const LadderOptions& o) {
  CheckReport total;
  total.name = name;
  const FockTruncation trunc{o.fock_dim};
  const int n = o.n;
  std::set<Rational> used;  // distinct values of the bound variable
  std::uint64_t draw = 0;
  auto fresh = [&](bool track) {
    Rational r = random_point(detail::mix(o.seed, draw++), track ? used : std::set<Rational>{}, 1000);
    if (track) used.insert(r);
    return r;
  };
  auto target = [&](int bound) { return std::max(o.trials, bound + 1); };

  if (name == "ybe" || name == "rll" || name == "rtt" || name == "zf") {
    const int bound = name == "zf" ? n + 2 : name == "rtt" ? 3 : 4;
    for (int k = 0; k < target(bound); ++k) {
      const Rational x = fresh(true), y = fresh(false);
      const bool numeric = name == "rtt" || name == "zf";
      Rational t0 = numeric ? fresh(false) : Rational(0);
      while (numeric && (t0 * y == x || t0 * x == y || t0 == 0)) t0 = fresh(false);
      const std::string point = "x=" + to_string(x) + ", y=" + to_string(y) + (numeric ? ", t=" + to_string(t0) : "");
      CheckReport one;
      if (name == "ybe") one = check_ybe(n, x, y);
      else if (name == "rll") one = check_rll(n, o.l, x, y);
      else if (name == "rtt") one = check_rtt(n, x, y, t0, trunc);
      else one = check_zf(n, x, y, t0, trunc);
      detail::absorb(total, one, point);
    }
  } else if (name == "qp" || name == "lt-link") {
    const int bound = name == "qp" ? 2 : 1;
    for (int k = 0; k < target(bound); ++k) {
      const Rational z = fresh(true);
      detail::absorb(total, name == "qp" ? check_quasi_periodicity(n, z) : check_LtT(n, z), "z=" + to_string(z));
    }
    if (name == "lt-link")
      for (int l = 1; l <= std::max(o.l, 2); ++l) detail::absorb(total, check_calL_projection(n, l), "l=" + std::to_string(l));
  } else if (name == "hat") {
    const CheckReport tasep = check_hat(n, 0, trunc);  // also the point t = 0
    const int bound = tasep.degree_bound;
    detail::absorb(total, tasep, "t=0");
    for (int k = 0; k < target(bound); ++k) {
      const Rational t0 = fresh(true);
      detail::absorb(total, check_hat(n, t0, trunc), "t=" + to_string(t0));
    }
    total.degree_bound = bound;
  } else if (name == "ms-theorem") {
    std::vector<Rational> qs;
    for (int k = 0; k < 3; ++k) qs.push_back(fresh(true));
    total = check_ms(std::max(o.trials, 1) * 40, qs, o.seed);
    total.degree_bound = 0;
  } else if (name == "stationary") {
    Multiplicity m = o.mult ? *o.mult : Multiplicity(std::vector<int>(static_cast<std::size_t>(n + 1), 1));
    total = verify_stationary(m);
    total.details["sector"] = m.to_string();
  } else {
    throw Error("unknown check '" + name + "'");
  }
  total.name = name;
  return total;
}

}  // namespace asepx

#endif  // ASEPX_ALGEBRA_CHECKS_HPP
