#ifndef ASEPX_OSCILLATOR_HPP
#define ASEPX_OSCILLATOR_HPP

// t-oscillator algebra: k a+ = t a+ k, k a- = t^{-1} a- k, a- a+ = 1 - t k,
// a+ a- = 1 - k, acting on the Fock space by
//   k|d> = t^d |d>,  a+|d> = |d+1>,  a-|d> = (1 - t^d)|d-1>.

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "asepx/row.hpp"
#include "asepx/scalar.hpp"

namespace asepx {

/// Raised when tr(q^h w) is a divergent series.
class DivergentTrace : public Error {
 public:
  using Error::Error;
};

enum class Gen : char { APLUS = '+', AMINUS = '-', K = 'k' };

/// Product of generators of a single oscillator, written left to right.
struct OscWord {
  std::vector<Gen> letters;

  OscWord() = default;
  explicit OscWord(std::vector<Gen> l) : letters(std::move(l)) {}
  static OscWord parse(const std::string& s) {
    OscWord w;
    for (char c : s) {
      if (c == '+') w.letters.push_back(Gen::APLUS);
      else if (c == '-') w.letters.push_back(Gen::AMINUS);
      else if (c == 'k') w.letters.push_back(Gen::K);
      else throw Error("bad oscillator word '" + s + "'");
    }
    return w;
  }
  std::string to_string() const {
    std::string s;
    for (Gen g : letters) s.push_back(static_cast<char>(g));
    return s;
  }

  bool empty() const { return letters.empty(); }
  std::size_t size() const { return letters.size(); }
  int count(Gen g) const {
    int c = 0;
    for (Gen x : letters) c += x == g;
    return c;
  }
  /// Net level shift: #a+ - #a-.
  int imbalance() const { return count(Gen::APLUS) - count(Gen::AMINUS); }

  OscWord& operator*=(const OscWord& o) {
    letters.insert(letters.end(), o.letters.begin(), o.letters.end());
    return *this;
  }
  friend OscWord operator*(OscWord a, const OscWord& b) { return a *= b; }
  auto operator<=>(const OscWord&) const = default;
};

/// Index of the normally ordered monomial (a+)^p k^e (a-)^m.
struct NormalKey {
  int p = 0;
  int e = 0;
  int m = 0;
  auto operator<=>(const NormalKey&) const = default;
};

/// Linear combination of normally ordered monomials with PolyT coefficients.
class NormalForm {
 public:
  NormalForm() = default;
  static NormalForm one() { return monomial({0, 0, 0}, PolyT(1)); }
  static NormalForm monomial(NormalKey k, PolyT c) {
    NormalForm f;
    f.add(k, std::move(c));
    return f;
  }

  const std::map<NormalKey, PolyT>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add(const NormalKey& k, const PolyT& c) {
    if (c.is_zero()) return;
    auto& slot = terms_[k];
    slot += c;
    if (slot.is_zero()) terms_.erase(k);
  }

  /// Right multiplication by one generator, keeping normal order.
  NormalForm times(Gen g) const {
    NormalForm out;
    const PolyT t = PolyT::t();
    for (const auto& [k, c] : terms_) {
      switch (g) {
        case Gen::AMINUS:
          out.add({k.p, k.e, k.m + 1}, c);
          break;
        case Gen::K:
          // (a-)^m k = t^m k (a-)^m
          out.add({k.p, k.e + 1, k.m}, c * PolyT::monomial(1, k.m));
          break;
        case Gen::APLUS:
          if (k.m == 0) {
            // k^e a+ = t^e a+ k^e
            out.add({k.p + 1, k.e, 0}, c * PolyT::monomial(1, k.e));
          } else {
            // (a-)^m a+ = (a-)^{m-1} - t^m k (a-)^{m-1}
            out.add({k.p, k.e, k.m - 1}, c);
            out.add({k.p, k.e + 1, k.m - 1}, -(c * PolyT::monomial(1, k.m)));
          }
          break;
      }
    }
    return out;
  }

  NormalForm times(const OscWord& w) const {
    NormalForm f = *this;
    for (Gen g : w.letters) f = f.times(g);
    return f;
  }

  NormalForm& operator+=(const NormalForm& o) {
    for (const auto& [k, c] : o.terms_) add(k, c);
    return *this;
  }
  friend NormalForm operator+(NormalForm a, const NormalForm& b) { return a += b; }
  friend NormalForm operator*(const PolyT& c, const NormalForm& f) {
    NormalForm out;
    for (const auto& [k, v] : f.terms_) out.add(k, c * v);
    return out;
  }
  friend NormalForm operator*(const NormalForm& a, const NormalForm& b) {
    NormalForm out;
    for (const auto& [k, c] : b.terms_) {
      OscWord w;
      w.letters.insert(w.letters.end(), static_cast<std::size_t>(k.p), Gen::APLUS);
      w.letters.insert(w.letters.end(), static_cast<std::size_t>(k.e), Gen::K);
      w.letters.insert(w.letters.end(), static_cast<std::size_t>(k.m), Gen::AMINUS);
      out += c * a.times(w);
    }
    return out;
  }
  friend bool operator==(const NormalForm&, const NormalForm&) = default;

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (const auto& [k, c] : terms_) {
      if (!s.empty()) s += " + ";
      s += "(" + c.to_string() + ")";
      s += "[" + std::string(static_cast<std::size_t>(k.p), '+') + std::string(static_cast<std::size_t>(k.e), 'k') +
           std::string(static_cast<std::size_t>(k.m), '-') + "]";
    }
    return s;
  }

 private:
  std::map<NormalKey, PolyT> terms_;
};

/// Expansion of w in the monomials (a+)^p k^e (a-)^m via a- a+ -> 1 - t k,
/// k a+ -> t a+ k, a- k -> t k a-. These rules are confluent and every
/// word has a unique normal form under them.
inline NormalForm normal_order(const OscWord& w) { return NormalForm::one().times(w); }

/// Normal form of a linear combination of words.
inline NormalForm normal_order(const std::vector<std::pair<PolyT, OscWord>>& combo) {
  NormalForm out;
  for (const auto& [c, w] : combo) out += c * normal_order(w);
  return out;
}

namespace detail {

// Coefficients of prod_{j=1}^p (1 - t^j X) as a polynomial in X.
inline std::vector<PolyT> falling_product_coeffs(int p) {
  std::vector<PolyT> c{PolyT(1)};
  for (int j = 1; j <= p; ++j) {
    std::vector<PolyT> next(c.size() + 1);
    for (std::size_t s = 0; s < c.size(); ++s) {
      next[s] += c[s];
      next[s + 1] -= c[s] * PolyT::monomial(1, j);
    }
    c = std::move(next);
  }
  return c;
}

}  // namespace detail

/// Sum of coefficient(t) / (1 - q t^c) over exponents c.
struct GeometricSum {
  std::map<int, PolyT> by_exponent;

  RationalFunctionT value(const Rational& q) const {
    RationalFunctionT out;
    for (const auto& [c, a] : by_exponent) {
      if (a.is_zero()) continue;
      const PolyT den = PolyT(1) - PolyT::monomial(q, c);
      if (den.is_zero()) throw DivergentTrace("divergent trace: geometric series with q t^" + std::to_string(c) + " = 1");
      out += RationalFunctionT(a, den);
    }
    return out;
  }
};

/// tr(q^h f) as a sum of geometric series; the q^p prefactors are folded in.
inline GeometricSum trace_series(const NormalForm& f, const Rational& q) {
  GeometricSum g;
  for (const auto& [k, c] : f.terms()) {
    if (k.p != k.m) throw Error("unbalanced word: trace of an off-diagonal operator");
    // sum_{d>=p} q^d t^{e(d-p)} prod_{i=0}^{p-1} (1 - t^{d-i})
    //   = q^p sum_s c_s / (1 - q t^{e+s}),  prod_{j=1}^p (1 - t^j X) = sum_s c_s X^s
    const auto cs = detail::falling_product_coeffs(k.p);
    const Rational qp = power(q, k.p);
    for (std::size_t s = 0; s < cs.size(); ++s) {
      auto& slot = g.by_exponent[k.e + static_cast<int>(s)];
      slot += cs[s] * c * qp;
    }
  }
  for (auto it = g.by_exponent.begin(); it != g.by_exponent.end();)
    it = it->second.is_zero() ? g.by_exponent.erase(it) : std::next(it);
  return g;
}

/// Exact tr(q^h w) = sum_d q^d <d|w|d>, with q a number and t symbolic.
inline RationalFunctionT trace_qh(const NormalForm& f, const Rational& q) { return trace_series(f, q).value(q); }

inline RationalFunctionT trace_qh(const OscWord& w, const Rational& q) {
  if (w.imbalance() != 0) throw Error("unbalanced word '" + w.to_string() + "': trace of an off-diagonal operator");
  return trace_qh(normal_order(w), q);
}

/// Fock space truncated to levels 0..dim-1; a+ annihilates |dim-1>.
struct FockTruncation {
  int dim = 10;
};

/// w|d> = value |level>, or nullopt if the result is zero in the truncated space.
template <class S>
std::optional<std::pair<int, S>> act(const OscWord& w, int d, const S& t0, int dim) {
  S v(1);
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) {
    switch (*it) {
      case Gen::K:
        v = v * power(t0, d);
        break;
      case Gen::AMINUS:
        if (d == 0) return std::nullopt;
        v = v * (S(1) - power(t0, d));
        --d;
        break;
      case Gen::APLUS:
        if (d + 1 >= dim) return std::nullopt;
        ++d;
        break;
    }
  }
  return std::make_pair(d, v);
}

/// Truncated sum_{d < D - P} q0^d <d|w|d>, P = number of a+ letters.
inline Rational trace_truncated(const OscWord& w, const Rational& q0, const Rational& t0, int D) {
  if (w.imbalance() != 0) return 0;
  const int P = w.count(Gen::APLUS);
  Rational sum = 0;
  Rational qd = 1;
  for (int d = 0; d < D - P; ++d, qd *= q0) {
    auto r = act(w, d, t0, D);
    if (r && r->first == d) sum += qd * r->second;
  }
  return sum;
}

/// Dense matrix of w on the truncated space, entry [out][in].
inline std::vector<std::vector<Rational>> truncated_matrix(const OscWord& w, const Rational& t0, int D) {
  std::vector<std::vector<Rational>> m(static_cast<std::size_t>(D), std::vector<Rational>(static_cast<std::size_t>(D)));
  for (int d = 0; d < D; ++d)
    if (auto r = act(w, d, t0, D)) m[static_cast<std::size_t>(r->first)][static_cast<std::size_t>(d)] = r->second;
  return m;
}

/// Matrix of a normal form: sum of coefficient(t0) times truncated monomial matrices.
inline std::vector<std::vector<Rational>> truncated_matrix(const NormalForm& f, const Rational& t0, int D) {
  std::vector<std::vector<Rational>> m(static_cast<std::size_t>(D), std::vector<Rational>(static_cast<std::size_t>(D)));
  for (const auto& [k, c] : f.terms()) {
    OscWord w;
    w.letters.insert(w.letters.end(), static_cast<std::size_t>(k.p), Gen::APLUS);
    w.letters.insert(w.letters.end(), static_cast<std::size_t>(k.e), Gen::K);
    w.letters.insert(w.letters.end(), static_cast<std::size_t>(k.m), Gen::AMINUS);
    const auto mk = truncated_matrix(w, t0, D);
    const Rational ct = c(t0);
    for (int i = 0; i < D; ++i)
      for (int j = 0; j < D; ++j) m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] += ct * mk[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  return m;
}

// ---------------------------------------------------------------------------
// Five-vertex weights and the trace formula

enum class SWeight { ZERO, ONE, K, AMINUS, APLUS };

/// Weight S^{ab}_{ij} of the five-vertex model; nonzero only if a + b = j.
inline SWeight s_weight(int i, int a, int j, int b) {
  const int key = i * 8 + a * 4 + j * 2 + b;
  switch (key) {
    case 0b0000: return SWeight::ONE;
    case 0b1110: return SWeight::ONE;
    case 0b0011: return SWeight::K;
    case 0b0110: return SWeight::AMINUS;
    case 0b1000: return SWeight::APLUS;
    default: return SWeight::ZERO;
  }
}

/// Oscillator word of a nonzero weight (empty for ONE).
inline OscWord s_word(SWeight w) {
  switch (w) {
    case SWeight::K: return OscWord({Gen::K});
    case SWeight::AMINUS: return OscWord({Gen::AMINUS});
    case SWeight::APLUS: return OscWord({Gen::APLUS});
    case SWeight::ONE: return {};
    case SWeight::ZERO: break;
  }
  throw Error("zero five-vertex weight has no word");
}

/// (1 - q t^{m-l}) tr(q^h S^{a_1 b_1}_{i_1 j_1} ... S^{a_L b_L}_{i_L j_L}).
inline RationalFunctionT s_element(const Rational& q, const Row& i, const Row& j, const Row& a, const Row& b) {
  const int L = i.size();
  if (j.size() != L || a.size() != L || b.size() != L) throw Error("s_element: rows of unequal length");
  const int l = i.weight();
  const int m = j.weight();
  if (l >= m) throw Error("s_element needs |i| < |j|");
  OscWord w;
  for (int k = 0; k < L; ++k) {
    const SWeight s = s_weight(i[k], a[k], j[k], b[k]);
    if (s == SWeight::ZERO) return {};
    w *= s_word(s);
  }
  if (w.imbalance() != 0) return {};
  const PolyT pref = PolyT(1) - PolyT::monomial(q, m - l);
  return RationalFunctionT(pref) * trace_qh(w, q);
}

// ---------------------------------------------------------------------------
// Several commuting oscillators

/// Word per mode (mode index -> word); absent modes carry the identity.
using MultiWord = std::map<int, OscWord>;

/// "k|k|+" style text over modes 1..modes.
inline std::string multiword_to_string(const MultiWord& w, int modes) {
  std::string s;
  for (int mu = 1; mu <= modes; ++mu) {
    if (mu > 1) s += "|";
    auto it = w.find(mu);
    if (it != w.end()) s += it->second.to_string();
  }
  return s;
}

inline MultiWord parse_multiword(const std::string& s) {
  MultiWord w;
  int mu = 1;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) w[mu] = OscWord::parse(cur);
    cur.clear();
  };
  for (char c : s) {
    if (c == '|') {
      flush();
      ++mu;
    } else {
      cur.push_back(c);
    }
  }
  flush();
  return w;
}

inline MultiWord operator*(const MultiWord& a, const MultiWord& b) {
  MultiWord out = a;
  for (const auto& [mu, w] : b) {
    auto& slot = out[mu];
    slot *= w;
  }
  for (auto it = out.begin(); it != out.end();) it = it->second.empty() ? out.erase(it) : std::next(it);
  return out;
}

/// Canonical form of sums of z^d * coefficient(t) * (tensor product of words):
/// each mode is normally ordered and the products expanded.
class MultiModeForm {
 public:
  using Key = std::pair<int, std::map<int, NormalKey>>;  // z-degree, non-identity monomials per mode

  void add(int zdeg, const PolyT& c, const MultiWord& w) {
    std::map<Key, PolyT> partial{{{zdeg, {}}, c}};
    for (const auto& [mu, word] : w) {
      const NormalForm nf = normal_order(word);
      std::map<Key, PolyT> next;
      for (const auto& [key, coeff] : partial)
        for (const auto& [nk, nc] : nf.terms()) {
          Key k2 = key;
          if (!(nk == NormalKey{})) k2.second[mu] = nk;
          next[k2] += coeff * nc;
        }
      partial = std::move(next);
    }
    for (const auto& [key, coeff] : partial) {
      auto& slot = terms_[key];
      slot += coeff;
      if (slot.is_zero()) terms_.erase(key);
    }
  }
  const std::map<Key, PolyT>& terms() const { return terms_; }
  friend bool operator==(const MultiModeForm&, const MultiModeForm&) = default;

 private:
  std::map<Key, PolyT> terms_;
};

}  // namespace asepx

#endif  // ASEPX_OSCILLATOR_HPP
