#ifndef ASEPX_OPERATOR_SUM_HPP
#define ASEPX_OPERATOR_SUM_HPP

// Numeric sums of tensor products of oscillator words, and an exact test of
// whether such a sum vanishes on the part of a truncated Fock space where
// truncation cannot interfere.
//
// Every word W on one oscillator is a weighted shift, W|d> = f(d)|d + shift>,
// so a tensor product of words is a weighted shift in every mode at once. A
// sum of such products vanishes on a box of input levels iff, for each total
// shift vector, the corresponding sum of products of value vectors is zero.
// That is decided mode by mode: the value vectors of the first mode are
// reduced to a basis and the problem splits into one smaller problem per basis
// vector. This never forms the D^modes matrices.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "asepx/oscillator.hpp"
#include "asepx/scalar.hpp"

namespace asepx {

struct OpTerm {
  Rational coeff;
  MultiWord words;
};

/// A finite sum of c * (word on mode 1) (x) (word on mode 2) (x) ...
class OperatorSum {
 public:
  OperatorSum() = default;
  static OperatorSum scalar(const Rational& c) {
    OperatorSum s;
    s.add(c, {});
    return s;
  }
  static OperatorSum word(const Rational& c, MultiWord w) {
    OperatorSum s;
    s.add(c, std::move(w));
    return s;
  }

  void add(const Rational& c, MultiWord w) {
    if (c != 0) terms_.push_back({c, std::move(w)});
  }
  const std::vector<OpTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  OperatorSum& operator+=(const OperatorSum& o) {
    terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
    return *this;
  }
  friend OperatorSum operator+(OperatorSum a, const OperatorSum& b) { return a += b; }
  friend OperatorSum operator-(const OperatorSum& a) {
    OperatorSum out = a;
    for (auto& t : out.terms_) t.coeff = -t.coeff;
    return out;
  }
  friend OperatorSum operator-(OperatorSum a, const OperatorSum& b) { return a += -b; }
  friend OperatorSum operator*(const Rational& c, const OperatorSum& a) {
    OperatorSum out;
    for (const auto& t : a.terms_) out.add(c * t.coeff, t.words);
    return out;
  }
  friend OperatorSum operator*(const OperatorSum& a, const OperatorSum& b) {
    OperatorSum out;
    for (const auto& x : a.terms_)
      for (const auto& y : b.terms_) out.add(x.coeff * y.coeff, x.words * y.words);
    return out;
  }

  /// Modes carrying at least one letter.
  std::set<int> modes() const {
    std::set<int> out;
    for (const auto& t : terms_)
      for (const auto& [mu, w] : t.words)
        if (!w.empty()) out.insert(mu);
    return out;
  }

 private:
  std::vector<OpTerm> terms_;
};

/// Result of a vanishing test.
struct WindowCheck {
  bool zero = true;
  std::string witness;  // a nonzero matrix element when zero is false
};

namespace detail {

// value of W|d> without truncation: W|d> = value |d + shift>
inline Rational word_value(const OscWord& w, int d, const Rational& t0) {
  auto r = act(w, d, t0, 1 << 30);
  return r ? r->second : Rational(0);
}

struct TermRef {
  Rational coeff;
  const MultiWord* words;
};

// Row-reduces the vectors and returns coordinates of every vector in the
// basis formed by the first independent ones (vector index -> coordinates).
inline std::vector<std::vector<Rational>> coordinates_in_span(const std::vector<std::vector<Rational>>& vecs) {
  const std::size_t W = vecs.empty() ? 0 : vecs.front().size();
  std::vector<std::vector<Rational>> reduced;  // echelon rows
  std::vector<std::size_t> pivotCol;
  std::vector<std::vector<Rational>> comb;  // each echelon row as a combination of basis vectors
  std::vector<std::vector<Rational>> coords(vecs.size());
  for (std::size_t k = 0; k < vecs.size(); ++k) {
    std::vector<Rational> r = vecs[k];
    std::vector<Rational> used(reduced.size());
    for (std::size_t e = 0; e < reduced.size(); ++e) {
      const Rational f = r[pivotCol[e]];
      if (f == 0) continue;
      for (std::size_t x = 0; x < W; ++x)
        if (reduced[e][x] != 0) r[x] -= f * reduced[e][x];
      used[e] = f;
    }
    // vecs[k] = sum_e used[e] * reduced[e] + r, and reduced[e] = sum_b comb[e][b] basis_b
    std::size_t piv = W;
    for (std::size_t x = 0; x < W; ++x)
      if (r[x] != 0) {
        piv = x;
        break;
      }
    const std::size_t nb = reduced.size();
    std::vector<Rational> out(nb + (piv < W ? 1 : 0));
    for (std::size_t e = 0; e < nb; ++e)
      if (used[e] != 0)
        for (std::size_t b = 0; b < comb[e].size(); ++b) out[b] += used[e] * comb[e][b];
    if (piv < W) {
      // new echelon row r / r[piv] = (vecs[k] - sum used[e] reduced[e]) / r[piv]
      const Rational inv = 1 / r[piv];
      for (auto& x : r) x *= inv;
      std::vector<Rational> cb(nb + 1);
      for (std::size_t e = 0; e < nb; ++e)
        if (used[e] != 0)
          for (std::size_t b = 0; b < comb[e].size(); ++b) cb[b] -= inv * used[e] * comb[e][b];
      cb[nb] = inv;
      reduced.push_back(std::move(r));
      pivotCol.push_back(piv);
      comb.push_back(std::move(cb));
      // vecs[k] is itself the new basis vector
      std::fill(out.begin(), out.end(), Rational(0));
      out[nb] = 1;
    }
    coords[k] = std::move(out);
  }
  return coords;
}

class WindowChecker {
 public:
  WindowChecker(const Rational& t0, std::vector<int> modes, std::map<int, int> lo, std::map<int, int> hi)
      : t0_(t0), modes_(std::move(modes)), lo_(std::move(lo)), hi_(std::move(hi)) {}

  bool vanishes(const std::vector<TermRef>& terms, std::size_t level) {
    if (terms.empty()) return true;
    if (level == modes_.size()) {
      Rational s = 0;
      for (const auto& t : terms) s += t.coeff;
      return s == 0;
    }
    const int mu = modes_[level];
    std::vector<std::vector<Rational>> vecs;
    vecs.reserve(terms.size());
    std::map<std::string, std::size_t> seen;
    std::vector<std::size_t> which(terms.size());
    static const OscWord kEmpty;
    for (std::size_t k = 0; k < terms.size(); ++k) {
      auto it = terms[k].words->find(mu);
      const OscWord& w = it == terms[k].words->end() ? kEmpty : it->second;
      const std::string key = w.to_string();
      auto s = seen.find(key);
      if (s == seen.end()) {
        std::vector<Rational> v;
        for (int d = lo_[mu]; d <= hi_[mu]; ++d) v.push_back(word_value(w, d, t0_));
        s = seen.emplace(key, vecs.size()).first;
        vecs.push_back(std::move(v));
      }
      which[k] = s->second;
    }
    const auto coords = coordinates_in_span(vecs);
    std::size_t nbasis = 0;
    for (const auto& c : coords) nbasis = std::max(nbasis, c.size());
    std::vector<std::vector<TermRef>> sub(nbasis);
    for (std::size_t k = 0; k < terms.size(); ++k) {
      const auto& c = coords[which[k]];
      for (std::size_t b = 0; b < c.size(); ++b)
        if (c[b] != 0) sub[b].push_back({terms[k].coeff * c[b], terms[k].words});
    }
    for (auto& s : sub)
      if (!vanishes(s, level + 1)) return false;
    return true;
  }

 private:
  Rational t0_;
  std::vector<int> modes_;
  std::map<int, int> lo_, hi_;
};

}  // namespace detail

/// Safe input window in one mode: levels 0 .. D - 1 - (largest a+ count in that mode).
inline std::map<int, int> safe_window(const std::vector<const OperatorSum*>& sums, int D) {
  std::map<int, int> hi;
  for (const auto* s : sums)
    for (const auto& t : s->terms())
      for (const auto& [mu, w] : t.words) {
        const int top = D - 1 - w.count(Gen::APLUS);
        auto it = hi.find(mu);
        if (it == hi.end()) hi[mu] = top;
        else it->second = std::min(it->second, top);
      }
  return hi;
}

/// Exactly decides whether s vanishes on all input states with level_mu <= hi[mu]
/// in every mode (modes absent from hi are unrestricted). t is set to t0.
inline WindowCheck check_vanishes_on_window(const OperatorSum& s, const Rational& t0, const std::map<int, int>& hi) {
  std::set<int> modeSet = s.modes();
  std::vector<int> modes(modeSet.begin(), modeSet.end());
  std::map<int, int> lo, top;
  for (int mu : modes) {
    lo[mu] = 0;
    auto it = hi.find(mu);
    top[mu] = it == hi.end() ? 64 : it->second;
    if (top[mu] < 0) throw Error("truncation too small: empty safe window in mode " + std::to_string(mu));
  }
  // group by shift vector
  std::map<std::vector<int>, std::vector<detail::TermRef>> groups;
  for (const auto& t : s.terms()) {
    std::vector<int> shift;
    for (int mu : modes) {
      auto it = t.words.find(mu);
      shift.push_back(it == t.words.end() ? 0 : it->second.imbalance());
    }
    groups[shift].push_back({t.coeff, &t.words});
  }
  detail::WindowChecker checker(t0, modes, lo, top);
  for (const auto& [shift, terms] : groups) {
    if (checker.vanishes(terms, 0)) continue;
    WindowCheck r{false, ""};
    // locate a nonzero matrix element by scanning inputs (bounded search)
    std::vector<int> d(modes.size(), 0);
    long budget = 200000;
    while (budget-- > 0) {
      Rational v = 0;
      for (const auto& t : terms) {
        Rational p = t.coeff;
        for (std::size_t k = 0; k < modes.size() && p != 0; ++k) {
          auto it = t.words->find(modes[k]);
          if (it != t.words->end()) p *= detail::word_value(it->second, d[k], t0);
        }
        v += p;
      }
      if (v != 0) {
        std::string in, out;
        for (std::size_t k = 0; k < modes.size(); ++k) {
          in += (k ? "," : "") + std::to_string(d[k]);
          out += (k ? "," : "") + std::to_string(d[k] + shift[k]);
        }
        r.witness = "<" + out + "|residual|" + in + "> = " + to_string(v);
        return r;
      }
      std::size_t k = 0;
      while (k < d.size() && ++d[k] > top[modes[k]]) d[k++] = 0;
      if (k == d.size()) break;
    }
    r.witness = "nonzero residual in shift sector (" + std::to_string(shift.size()) + " modes)";
    return r;
  }
  return {};
}

/// lhs = rhs on the safe window of a truncation to levels 0..D-1.
inline WindowCheck check_equal_on_window(const OperatorSum& lhs, const OperatorSum& rhs, const Rational& t0, int D) {
  const auto hi = safe_window({&lhs, &rhs}, D);
  return check_vanishes_on_window(lhs - rhs, t0, hi);
}

}  // namespace asepx

#endif  // ASEPX_OPERATOR_SUM_HPP
