#ifndef ASEPX_SCALAR_HPP
#define ASEPX_SCALAR_HPP

// Exact scalars: GMP rationals, univariate polynomials in t and rational
// functions in t. q, z, x, y never appear symbolically; callers substitute
// them as Rational values before doing arithmetic here.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace asepx {

using Integer = mpz_class;
using Rational = mpq_class;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline Rational make_rational(long num, long den = 1) {
  if (den == 0) throw Error("zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

/// Parses "p/q" or "p" into a canonical rational.
inline Rational parse_rational(const std::string& text) {
  Rational r;
  if (r.set_str(text, 10) != 0) throw Error("malformed rational: '" + text + "'");
  if (r.get_den() == 0) throw Error("zero denominator in '" + text + "'");
  r.canonicalize();
  return r;
}

inline std::string to_string(const Rational& r) { return r.get_str(); }

namespace detail {

using ZPoly = std::vector<Integer>;

inline void trim(ZPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

inline Integer content(const ZPoly& p) {
  Integer g = 0;
  for (const auto& c : p) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    if (g == 1) break;
  }
  return g;
}

inline void make_primitive(ZPoly& p) {
  trim(p);
  if (p.empty()) return;
  Integer g = content(p);
  if (p.back() < 0) g = -g;
  if (g != 1)
    for (auto& c : p) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
}

// A scalar multiple of a mod b; both nonzero, result made primitive.
inline ZPoly pseudo_remainder(ZPoly a, const ZPoly& b) {
  const std::size_t db = b.size() - 1;
  const Integer& lb = b.back();
  while (!a.empty() && a.size() - 1 >= db) {
    const std::size_t shift = a.size() - 1 - db;
    const Integer la = a.back();
    Integer g;
    mpz_gcd(g.get_mpz_t(), la.get_mpz_t(), lb.get_mpz_t());
    const Integer fa = lb / g;
    const Integer fb = la / g;
    for (auto& c : a) c *= fa;
    for (std::size_t k = 0; k <= db; ++k) a[k + shift] -= fb * b[k];
    trim(a);
  }
  make_primitive(a);
  return a;
}

}  // namespace detail

/// Polynomial in t with rational coefficients, lowest degree first.
class PolyT {
 public:
  PolyT() = default;
  PolyT(int c) : PolyT(Rational(c)) {}  // NOLINT(google-explicit-constructor)
  PolyT(const Rational& c) {            // NOLINT(google-explicit-constructor)
    if (c != 0) coeffs_.push_back(c);
  }
  explicit PolyT(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) {
    for (auto& c : coeffs_) c.canonicalize();
    trim();
  }

  static PolyT t() { return monomial(1, 1); }
  static PolyT monomial(const Rational& c, int degree) {
    if (c == 0) return {};
    std::vector<Rational> v(static_cast<std::size_t>(degree) + 1);
    v.back() = c;
    PolyT p;
    p.coeffs_ = std::move(v);
    return p;
  }
  /// 1 - c t^e
  static PolyT one_minus(const Rational& c, int e) { return PolyT(1) - monomial(c, e); }

  bool is_zero() const { return coeffs_.empty(); }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<Rational>& coefficients() const { return coeffs_; }
  Rational coeff(int d) const {
    return (d >= 0 && d < static_cast<int>(coeffs_.size())) ? coeffs_[static_cast<std::size_t>(d)]
                                                            : Rational(0);
  }
  Rational leading() const { return is_zero() ? Rational(0) : coeffs_.back(); }
  bool is_constant() const { return coeffs_.size() <= 1; }

  Rational operator()(const Rational& x) const {
    Rational acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  PolyT& operator+=(const PolyT& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
    for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
    trim();
    return *this;
  }
  PolyT& operator-=(const PolyT& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
    for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
    trim();
    return *this;
  }
  PolyT& operator*=(const PolyT& o) { return *this = *this * o; }
  PolyT& operator*=(const Rational& c) {
    if (c == 0) {
      coeffs_.clear();
    } else {
      for (auto& x : coeffs_) x *= c;
    }
    return *this;
  }

  friend PolyT operator+(PolyT a, const PolyT& b) { return a += b; }
  friend PolyT operator-(PolyT a, const PolyT& b) { return a -= b; }
  friend PolyT operator-(PolyT a) {
    for (auto& c : a.coeffs_) c = -c;
    return a;
  }
  friend PolyT operator*(const PolyT& a, const PolyT& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Rational> v(a.coeffs_.size() + b.coeffs_.size() - 1);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) v[i + j] += a.coeffs_[i] * b.coeffs_[j];
    PolyT p;
    p.coeffs_ = std::move(v);
    p.trim();
    return p;
  }
  friend PolyT operator*(PolyT a, const Rational& c) { return a *= c; }
  friend PolyT operator*(const Rational& c, PolyT a) { return a *= c; }

  friend bool operator==(const PolyT& a, const PolyT& b) { return a.coeffs_ == b.coeffs_; }
  friend bool operator!=(const PolyT& a, const PolyT& b) { return !(a == b); }
  /// Arbitrary but total order (degree, then coefficients), for use as a map key.
  friend bool operator<(const PolyT& a, const PolyT& b) {
    if (a.coeffs_.size() != b.coeffs_.size()) return a.coeffs_.size() < b.coeffs_.size();
    for (std::size_t k = a.coeffs_.size(); k-- > 0;)
      if (a.coeffs_[k] != b.coeffs_[k]) return a.coeffs_[k] < b.coeffs_[k];
    return false;
  }

  /// Euclidean division over Q; throws on zero divisor.
  static std::pair<PolyT, PolyT> divmod(const PolyT& a, const PolyT& b) {
    if (b.is_zero()) throw Error("polynomial division by zero");
    PolyT rem = a;
    if (a.degree() < b.degree()) return {PolyT{}, rem};
    std::vector<Rational> quot(static_cast<std::size_t>(a.degree() - b.degree()) + 1);
    const Rational inv = 1 / b.leading();
    while (!rem.is_zero() && rem.degree() >= b.degree()) {
      const int shift = rem.degree() - b.degree();
      const Rational f = rem.leading() * inv;
      quot[static_cast<std::size_t>(shift)] = f;
      for (int k = 0; k <= b.degree(); ++k)
        rem.coeffs_[static_cast<std::size_t>(k + shift)] -= f * b.coeffs_[static_cast<std::size_t>(k)];
      rem.coeffs_.pop_back();
      rem.trim();
    }
    return {PolyT(std::move(quot)), rem};
  }

  /// Exact quotient; throws if b does not divide a.
  static PolyT exact_div(const PolyT& a, const PolyT& b) {
    auto [q, r] = divmod(a, b);
    if (!r.is_zero()) throw Error("inexact polynomial division");
    return q;
  }

  PolyT monic() const {
    if (is_zero()) return {};
    return *this * (1 / leading());
  }

  /// Monic gcd; gcd(0, 0) = 0.
  static PolyT gcd(const PolyT& a, const PolyT& b) {
    if (a.is_zero()) return b.monic();
    if (b.is_zero()) return a.monic();
    if (a.is_constant() || b.is_constant()) return PolyT(1);
    detail::ZPoly x = a.integer_primitive();
    detail::ZPoly y = b.integer_primitive();
    if (x.size() < y.size()) std::swap(x, y);
    while (!y.empty()) {
      detail::ZPoly r = detail::pseudo_remainder(x, y);
      x = std::move(y);
      y = std::move(r);
    }
    std::vector<Rational> v(x.begin(), x.end());
    return PolyT(std::move(v)).monic();
  }

  /// Positive rational c with *this = c * (primitive integer polynomial with positive lead).
  Rational content() const {
    if (is_zero()) return 0;
    Integer l = 1;
    for (const auto& c : coeffs_) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
    detail::ZPoly z;
    z.reserve(coeffs_.size());
    for (const auto& c : coeffs_) z.push_back(c.get_num() * (l / c.get_den()));
    Rational r(detail::content(z), l);
    r.canonicalize();
    return r;
  }

  /// Returns "3 + 2*t - t^2" style text (lowest degree first); "0" for zero.
  std::string to_string() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
      const Rational& c = coeffs_[k];
      if (c == 0) continue;
      Rational mag = abs(c);
      if (first) {
        if (c < 0) os << "-";
      } else {
        os << (c < 0 ? " - " : " + ");
      }
      first = false;
      if (k == 0) {
        os << mag.get_str();
        continue;
      }
      if (mag != 1) os << mag.get_str() << "*";
      os << "t";
      if (k > 1) os << "^" << k;
    }
    return os.str();
  }

 private:
  void trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
  }

  detail::ZPoly integer_primitive() const {
    Integer l = 1;
    for (const auto& c : coeffs_) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
    detail::ZPoly z;
    z.reserve(coeffs_.size());
    for (const auto& c : coeffs_) z.push_back(c.get_num() * (l / c.get_den()));
    detail::make_primitive(z);
    return z;
  }

  std::vector<Rational> coeffs_;
};

inline std::ostream& operator<<(std::ostream& os, const PolyT& p) { return os << p.to_string(); }

/// Reduced quotient num/den with monic denominator. Equality is structural.
class RationalFunctionT {
 public:
  RationalFunctionT() : den_(1) {}
  RationalFunctionT(int c) : num_(c), den_(1) {}                // NOLINT(google-explicit-constructor)
  RationalFunctionT(const Rational& c) : num_(c), den_(1) {}    // NOLINT(google-explicit-constructor)
  RationalFunctionT(PolyT p) : num_(std::move(p)), den_(1) {}   // NOLINT(google-explicit-constructor)
  RationalFunctionT(PolyT num, PolyT den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }

  const PolyT& num() const { return num_; }
  const PolyT& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.degree() == 0; }

  /// Exact value at t0; throws at a pole.
  Rational operator()(const Rational& t0) const {
    const Rational d = den_(t0);
    if (d == 0) throw Error("rational function evaluated at a pole t = " + t0.get_str());
    return num_(t0) / d;
  }

  RationalFunctionT& operator+=(const RationalFunctionT& o) { return *this = *this + o; }
  RationalFunctionT& operator-=(const RationalFunctionT& o) { return *this = *this - o; }
  RationalFunctionT& operator*=(const RationalFunctionT& o) { return *this = *this * o; }
  RationalFunctionT& operator/=(const RationalFunctionT& o) { return *this = *this / o; }

  friend RationalFunctionT operator+(const RationalFunctionT& a, const RationalFunctionT& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.den_ == b.den_) return {a.num_ + b.num_, a.den_};
    if (a.is_polynomial() && b.is_polynomial()) return from_reduced(a.num_ + b.num_, PolyT(1));
    if (a.is_polynomial()) return from_reduced(a.num_ * b.den_ + b.num_, b.den_);
    if (b.is_polynomial()) return from_reduced(a.num_ + b.num_ * a.den_, a.den_);
    // Henrici: only the common part g of the denominators can cancel
    const PolyT g = PolyT::gcd(a.den_, b.den_);
    if (g.degree() == 0) return from_reduced(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    const PolyT bg = PolyT::exact_div(b.den_, g);
    PolyT num = a.num_ * bg + b.num_ * PolyT::exact_div(a.den_, g);
    PolyT den = a.den_ * bg;
    const PolyT h = PolyT::gcd(num, g);
    if (h.degree() > 0) {
      num = PolyT::exact_div(num, h);
      den = PolyT::exact_div(den, h);
    }
    return from_reduced(std::move(num), std::move(den));
  }
  friend RationalFunctionT operator-(const RationalFunctionT& a) { return from_reduced(-a.num_, a.den_); }
  friend RationalFunctionT operator-(const RationalFunctionT& a, const RationalFunctionT& b) { return a + (-b); }
  friend RationalFunctionT operator*(const RationalFunctionT& a, const RationalFunctionT& b) {
    if (a.is_zero() || b.is_zero()) return {};
    if (a.is_polynomial() && b.is_polynomial()) return from_reduced(a.num_ * b.num_, PolyT(1));
    return cross_product(a.num_, a.den_, b.num_, b.den_);
  }
  friend RationalFunctionT operator/(const RationalFunctionT& a, const RationalFunctionT& b) {
    if (b.is_zero()) throw Error("rational function division by zero");
    const Rational lead = b.num_.leading();
    // b^{-1} = (den/lead) / (num/lead) keeps the denominator monic
    return cross_product(a.num_, a.den_, b.den_ * (1 / lead), b.num_ * (1 / lead));
  }

  friend bool operator==(const RationalFunctionT& a, const RationalFunctionT& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const RationalFunctionT& a, const RationalFunctionT& b) { return !(a == b); }

  std::string to_string() const {
    if (is_polynomial()) return num_.to_string();
    return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
  }

 private:
  // (an/ad)(bn/bd) with both inputs reduced and monic denominators
  static RationalFunctionT cross_product(const PolyT& an, const PolyT& ad, const PolyT& bn, const PolyT& bd) {
    PolyT x = an, y = bn, u = ad, v = bd;
    if (v.degree() > 0) {
      const PolyT g = PolyT::gcd(x, v);
      if (g.degree() > 0) {
        x = PolyT::exact_div(x, g);
        v = PolyT::exact_div(v, g);
      }
    }
    if (u.degree() > 0) {
      const PolyT g = PolyT::gcd(y, u);
      if (g.degree() > 0) {
        y = PolyT::exact_div(y, g);
        u = PolyT::exact_div(u, g);
      }
    }
    PolyT den = u * v;
    PolyT num = x * y;
    const Rational lead = den.leading();
    if (lead != 1) {
      num *= 1 / lead;
      den *= 1 / lead;
    }
    return from_reduced(std::move(num), std::move(den));
  }

  static RationalFunctionT from_reduced(PolyT num, PolyT den) {
    RationalFunctionT r;
    r.den_ = num.is_zero() ? PolyT(1) : std::move(den);
    r.num_ = std::move(num);
    return r;
  }

  void normalize() {
    if (den_.is_zero()) throw Error("rational function with zero denominator");
    if (num_.is_zero()) {
      den_ = PolyT(1);
      return;
    }
    if (!den_.is_constant()) {
      PolyT g = PolyT::gcd(num_, den_);
      if (g.degree() > 0) {
        num_ = PolyT::exact_div(num_, g);
        den_ = PolyT::exact_div(den_, g);
      }
    }
    const Rational lead = den_.leading();
    if (lead != 1) {
      const Rational inv = 1 / lead;
      num_ *= inv;
      den_ *= inv;
    }
  }

  PolyT num_;
  PolyT den_;
};

inline std::ostream& operator<<(std::ostream& os, const RationalFunctionT& f) { return os << f.to_string(); }

/// Builds the canonical form of num/den; throws if den is zero.
inline RationalFunctionT ratfunc_normalize(PolyT num, PolyT den) { return {std::move(num), std::move(den)}; }

inline Rational ratfunc_eval(const RationalFunctionT& f, const Rational& t0) { return f(t0); }

/// Default bound on |numerator| and denominator of random_point values.
inline constexpr long kRandomPointBound = 1000000;

/// Deterministic pseudo-random rational p/q with |p|, q <= bound, never 0 or
/// +-1 and never in `avoid`. Same (seed, avoid, bound) always gives the same value.
inline Rational random_point(std::uint64_t seed, const std::set<Rational>& avoid = {},
                             long bound = kRandomPointBound) {
  std::mt19937_64 gen(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_int_distribution<long> num_dist(-bound, bound);
  std::uniform_int_distribution<long> den_dist(1, bound);
  for (;;) {
    Rational r(num_dist(gen), den_dist(gen));
    r.canonicalize();
    if (r == 0 || r == 1 || r == -1) continue;
    if (avoid.count(r) != 0) continue;
    return r;
  }
}

/// Like random_point but with 0 < value < 1, for points where a geometric
/// tail bound or a convergent series is needed.
inline Rational random_unit_point(std::uint64_t seed, const std::set<Rational>& avoid = {},
                                  long bound = 1000) {
  std::mt19937_64 gen(seed ^ 0x5851f42d4c957f2dULL);
  std::uniform_int_distribution<long> den_dist(2, bound);
  for (;;) {
    const long den = den_dist(gen);
    std::uniform_int_distribution<long> num_dist(1, den - 1);
    Rational r(num_dist(gen), den);
    r.canonicalize();
    if (avoid.count(r) != 0) continue;
    return r;
  }
}

/// Integer power of a field element by repeated squaring.
template <class S>
S power(S base, int e) {
  if (e < 0) throw Error("negative exponent");
  S acc(1);
  while (e > 0) {
    if (e & 1) acc = acc * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return acc;
}

}  // namespace asepx

#endif  // ASEPX_SCALAR_HPP
