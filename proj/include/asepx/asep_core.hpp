#ifndef ASEPX_ASEP_CORE_HPP
#define ASEPX_ASEP_CORE_HPP

// State space, Markov matrix and exact stationary states of the n-species
// ASEP on a ring of L sites, plus a Gillespie simulator.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "asepx/scalar.hpp"

namespace asepx {

/// Ring configuration (sigma_1, ..., sigma_L), species 0..n.
using Config = std::vector<int>;

inline std::string config_to_string(const Config& c) {
  std::string s;
  s.reserve(c.size());
  for (int v : c) {
    if (v < 0 || v > 9) throw Error("species label outside 0..9 cannot be written as a digit string");
    s.push_back(static_cast<char>('0' + v));
  }
  return s;
}

inline Config parse_config(const std::string& s) {
  Config c;
  for (char ch : s) {
    if (ch < '0' || ch > '9') throw Error("bad configuration string '" + s + "'");
    c.push_back(ch - '0');
  }
  return c;
}

/// (sigma_L, sigma_1, ..., sigma_{L-1})
inline Config cyclic_shift(const Config& c) {
  Config out(c);
  if (!out.empty()) std::rotate(out.rbegin(), out.rbegin() + 1, out.rend());
  return out;
}

/// Particle content m = (m_0, ..., m_n).
struct Multiplicity {
  std::vector<int> counts;

  Multiplicity() = default;
  explicit Multiplicity(std::vector<int> c) : counts(std::move(c)) {
    if (counts.size() < 2) throw Error("multiplicity needs at least two species (n >= 1)");
    for (int x : counts)
      if (x < 0) throw Error("negative multiplicity");
  }
  static Multiplicity of(const Config& c, int n) {
    std::vector<int> m(static_cast<std::size_t>(n) + 1, 0);
    for (int v : c) {
      if (v < 0 || v > n) throw Error("species out of range");
      ++m[static_cast<std::size_t>(v)];
    }
    return Multiplicity(std::move(m));
  }

  int n() const { return static_cast<int>(counts.size()) - 1; }
  int L() const { return std::accumulate(counts.begin(), counts.end(), 0); }
  int operator[](int a) const { return counts[static_cast<std::size_t>(a)]; }
  /// l_i = m_i + ... + m_n
  int l(int i) const {
    int s = 0;
    for (int a = i; a <= n(); ++a) s += counts[static_cast<std::size_t>(a)];
    return s;
  }
  bool basic() const {
    return std::all_of(counts.begin(), counts.end(), [](int x) { return x >= 1; });
  }
  std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < counts.size(); ++i) s += (i ? "," : "") + std::to_string(counts[i]);
    return s;
  }
  friend bool operator==(const Multiplicity&, const Multiplicity&) = default;
};

/// All configurations of a sector in lexicographic order.
class SectorBasis {
 public:
  SectorBasis() = default;
  explicit SectorBasis(const Multiplicity& m) : m_(m) {
    Config c;
    for (int a = 0; a <= m.n(); ++a) c.insert(c.end(), static_cast<std::size_t>(m[a]), a);
    do {
      index_.emplace(c, configs_.size());
      configs_.push_back(c);
    } while (std::next_permutation(c.begin(), c.end()));
  }

  const Multiplicity& multiplicity() const { return m_; }
  int n() const { return m_.n(); }
  int L() const { return m_.L(); }
  std::size_t size() const { return configs_.size(); }
  const Config& operator[](std::size_t i) const { return configs_[i]; }
  const std::vector<Config>& configs() const { return configs_; }
  bool contains(const Config& c) const { return index_.count(c) != 0; }
  std::size_t index(const Config& c) const {
    auto it = index_.find(c);
    if (it == index_.end()) throw Error("configuration " + config_to_string(c) + " not in sector");
    return it->second;
  }
  friend bool operator==(const SectorBasis& a, const SectorBasis& b) { return a.m_ == b.m_; }

 private:
  Multiplicity m_;
  std::vector<Config> configs_;
  std::map<Config, std::size_t> index_;
};

/// Values indexed by the configurations of one sector.
struct SectorVector {
  SectorBasis basis;
  std::vector<RationalFunctionT> values;

  SectorVector() = default;
  explicit SectorVector(SectorBasis b) : basis(std::move(b)), values(basis.size()) {}

  std::size_t size() const { return values.size(); }
  const RationalFunctionT& at(const Config& c) const { return values[basis.index(c)]; }
  RationalFunctionT& at(const Config& c) { return values[basis.index(c)]; }
  bool is_zero() const {
    return std::all_of(values.begin(), values.end(), [](const auto& v) { return v.is_zero(); });
  }
};

/// Square sparse matrix; an absent entry is zero.
struct SparseMatrixRF {
  std::size_t dim = 0;
  std::map<std::pair<std::size_t, std::size_t>, RationalFunctionT> entries;

  RationalFunctionT at(std::size_t r, std::size_t c) const {
    auto it = entries.find({r, c});
    return it == entries.end() ? RationalFunctionT{} : it->second;
  }
  void add(std::size_t r, std::size_t c, const RationalFunctionT& v) {
    auto& e = entries[{r, c}];
    e += v;
    if (e.is_zero()) entries.erase({r, c});
  }
  std::vector<RationalFunctionT> apply(const std::vector<RationalFunctionT>& v) const {
    if (v.size() != dim) throw Error("dimension mismatch in matrix-vector product");
    std::vector<RationalFunctionT> out(dim);
    for (const auto& [rc, x] : entries)
      if (!v[rc.second].is_zero()) out[rc.first] += x * v[rc.second];
    return out;
  }
};

/// Local generator on C^{n+1} (x) C^{n+1}, basis index alpha*(n+1)+beta.
/// H|a,b> = t^{[a<b]} (|b,a> - |a,b>).
inline std::vector<std::vector<PolyT>> local_markov(int n) {
  if (n < 1) throw Error("local_markov needs n >= 1");
  const int d = n + 1;
  std::vector<std::vector<PolyT>> h(static_cast<std::size_t>(d * d), std::vector<PolyT>(static_cast<std::size_t>(d * d)));
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      if (a == b) continue;
      const PolyT rate = a < b ? PolyT::t() : PolyT(1);
      const auto col = static_cast<std::size_t>(a * d + b);
      const auto swapped = static_cast<std::size_t>(b * d + a);
      h[swapped][col] += rate;
      h[col][col] -= rate;
    }
  return h;
}

/// H = sum over cyclic nearest-neighbour pairs of H^loc, restricted to the sector.
inline SparseMatrixRF markov_sector(const SectorBasis& basis) {
  SparseMatrixRF h;
  h.dim = basis.size();
  const int L = basis.L();
  for (std::size_t col = 0; col < basis.size(); ++col) {
    const Config& c = basis[col];
    for (int i = 0; i < L; ++i) {
      const int j = (i + 1) % L;
      const int a = c[static_cast<std::size_t>(i)];
      const int b = c[static_cast<std::size_t>(j)];
      if (a == b) continue;
      const RationalFunctionT rate = a < b ? RationalFunctionT(PolyT::t()) : RationalFunctionT(1);
      Config s = c;
      std::swap(s[static_cast<std::size_t>(i)], s[static_cast<std::size_t>(j)]);
      h.add(basis.index(s), col, rate);
      h.add(col, col, -rate);
    }
  }
  return h;
}

inline SparseMatrixRF markov_sector(const Multiplicity& m) { return markov_sector(SectorBasis(m)); }

/// Clears denominators, removes the common polynomial factor and integer
/// content, and makes the first nonzero entry have a positive leading
/// coefficient. Two vectors are proportional iff their canonical forms agree.
inline std::vector<PolyT> canonicalize(const std::vector<RationalFunctionT>& v) {
  PolyT l(1);
  for (const auto& x : v) {
    if (x.is_zero() || x.den() == l) continue;
    const PolyT g = PolyT::gcd(l, x.den());
    l = PolyT::exact_div(l, g) * x.den();
  }
  std::vector<PolyT> out;
  out.reserve(v.size());
  PolyT g;
  for (const auto& x : v) {
    out.push_back(x.is_zero() ? PolyT{} : x.num() * PolyT::exact_div(l, x.den()));
    if (!(g.degree() == 0)) g = PolyT::gcd(g, out.back());
  }
  if (g.is_zero()) return out;
  if (g.degree() > 0)
    for (auto& p : out) p = PolyT::exact_div(p, g);
  // integer-primitive over all entries
  Integer den_lcm = 1;
  Integer num_gcd = 0;
  for (const auto& p : out)
    for (const auto& c : p.coefficients()) mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den_mpz_t());
  for (const auto& p : out)
    for (const auto& c : p.coefficients()) {
      const Integer z = c.get_num() * (den_lcm / c.get_den());
      mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), z.get_mpz_t());
    }
  Rational scale(den_lcm, num_gcd);
  scale.canonicalize();
  for (const auto& p : out)
    if (!p.is_zero()) {
      if (p.leading() < 0) scale = -scale;
      break;
    }
  for (auto& p : out) p *= scale;
  return out;
}

inline SectorVector canonicalize(const SectorVector& v) {
  SectorVector out(v.basis);
  auto c = canonicalize(v.values);
  for (std::size_t i = 0; i < c.size(); ++i) out.values[i] = RationalFunctionT(std::move(c[i]));
  return out;
}

/// True iff the two vectors are proportional over Q(t) (and both nonzero).
inline bool same_ray(const std::vector<RationalFunctionT>& a, const std::vector<RationalFunctionT>& b) {
  if (a.size() != b.size()) return false;
  const auto ca = canonicalize(a);
  const auto cb = canonicalize(b);
  const bool nonzero = std::any_of(ca.begin(), ca.end(), [](const PolyT& p) { return !p.is_zero(); });
  return nonzero && ca == cb;
}

namespace detail {

inline int pivot_cost(const RationalFunctionT& x) { return x.num().degree() + x.den().degree(); }

}  // namespace detail

/// Null vector of a square matrix over Q(t); throws unless the kernel is one-dimensional.
inline std::vector<RationalFunctionT> nullspace_vector(const SparseMatrixRF& a) {
  using Row = std::map<std::size_t, RationalFunctionT>;
  const std::size_t dim = a.dim;
  std::vector<Row> rows(dim);
  for (const auto& [rc, v] : a.entries) rows[rc.first][rc.second] = v;
  // column -> rows that still have an entry there (may contain stale ids)
  std::vector<bool> used(dim, false);
  std::vector<std::ptrdiff_t> pivot_row_of_col(dim, -1);
  std::vector<std::size_t> order;

  for (std::size_t col = 0; col < dim; ++col) {
    std::ptrdiff_t best = -1;
    std::pair<int, std::size_t> best_key{0, 0};
    for (std::size_t r = 0; r < dim; ++r) {
      if (used[r]) continue;
      auto it = rows[r].find(col);
      if (it == rows[r].end()) continue;
      const std::pair<int, std::size_t> key{detail::pivot_cost(it->second), rows[r].size()};
      if (best < 0 || key < best_key) {
        best = static_cast<std::ptrdiff_t>(r);
        best_key = key;
      }
    }
    if (best < 0) continue;  // free column
    const auto pr = static_cast<std::size_t>(best);
    used[pr] = true;
    pivot_row_of_col[col] = best;
    order.push_back(col);
    const Row& prow = rows[pr];
    const RationalFunctionT inv = RationalFunctionT(1) / prow.at(col);
    for (std::size_t r = 0; r < dim; ++r) {
      if (used[r]) continue;
      auto it = rows[r].find(col);
      if (it == rows[r].end()) continue;
      const RationalFunctionT f = it->second * inv;
      rows[r].erase(it);
      for (const auto& [c, v] : prow) {
        if (c == col) continue;
        auto& e = rows[r][c];
        e -= f * v;
        if (e.is_zero()) rows[r].erase(c);
      }
    }
  }

  std::vector<std::size_t> free_cols;
  for (std::size_t c = 0; c < dim; ++c)
    if (pivot_row_of_col[c] < 0) free_cols.push_back(c);
  if (free_cols.size() != 1)
    throw Error("kernel dimension is " + std::to_string(free_cols.size()) + ", expected 1");

  std::vector<RationalFunctionT> x(dim);
  x[free_cols[0]] = RationalFunctionT(1);
  // Rows were eliminated in pivot order; a pivot row only involves columns
  // whose pivots come later (or the free column), so solve in reverse order.
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const std::size_t col = *it;
    const Row& row = rows[static_cast<std::size_t>(pivot_row_of_col[col])];
    RationalFunctionT s;
    for (const auto& [c, v] : row)
      if (c != col && !x[c].is_zero()) s += v * x[c];
    x[col] = -s / row.at(col);
  }
  return x;
}

/// Lexicographically smallest rotation.
inline Config cyclic_representative(const Config& c) {
  Config best = c;
  Config r = c;
  for (std::size_t k = 1; k < c.size(); ++k) {
    r = cyclic_shift(r);
    if (r < best) best = r;
  }
  return best;
}

/// Null vector of H obtained by elimination on the translation-invariant
/// subspace (one unknown per cyclic class), then checked against the full H.
inline std::vector<RationalFunctionT> translation_invariant_null_vector(const SectorBasis& basis,
                                                                        const SparseMatrixRF& h) {
  std::map<Config, std::size_t> class_of_rep;
  std::vector<std::size_t> cls(basis.size());
  std::vector<std::size_t> rep_index;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const Config rep = cyclic_representative(basis[i]);
    auto [it, fresh] = class_of_rep.emplace(rep, rep_index.size());
    if (fresh) rep_index.push_back(basis.index(rep));
    cls[i] = it->second;
  }
  SparseMatrixRF reduced;
  reduced.dim = rep_index.size();
  for (const auto& [rc, v] : h.entries)
    if (rep_index[cls[rc.first]] == rc.first) reduced.add(cls[rc.first], cls[rc.second], v);
  const auto w = nullspace_vector(reduced);
  std::vector<RationalFunctionT> x(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) x[i] = w[cls[i]];
  for (const auto& r : h.apply(x))
    if (!r.is_zero()) throw Error("translation-invariant candidate is not annihilated by H");
  return x;
}

/// Stationary state of a basic sector, canonically normalized.
///
/// The kernel of H is one-dimensional on a basic sector and commutes with the
/// cyclic shift, so it is spanned by a translation-invariant vector; the
/// elimination runs on cyclic classes and the result is verified on the full H.
inline SectorVector stationary_kernel(const Multiplicity& m) {
  if (!m.basic()) throw Error("stationary_kernel needs a basic sector, got m=(" + m.to_string() + ")");
  SectorBasis basis(m);
  SectorVector v(basis);
  v.values = translation_invariant_null_vector(basis, markov_sector(basis));
  return canonicalize(v);
}

/// Same result by elimination on the full sector matrix. Slow beyond ~50 configurations.
inline SectorVector stationary_kernel_full(const Multiplicity& m) {
  if (!m.basic()) throw Error("stationary_kernel needs a basic sector, got m=(" + m.to_string() + ")");
  SectorBasis basis(m);
  SectorVector v(basis);
  v.values = nullspace_vector(markov_sector(basis));
  return canonicalize(v);
}

struct GillespieResult {
  SectorBasis basis;
  std::vector<double> fraction;    ///< time-averaged occupation after burn-in
  std::vector<double> std_error;   ///< batch-means standard error of each fraction
  std::uint64_t events = 0;        ///< jumps after burn-in
};

/// Continuous-time simulation with exponential waiting times. The standard
/// error comes from `batches` equal-time batches after burn-in.
inline GillespieResult gillespie(const Multiplicity& m, double t_value, double horizon, double burn_in,
                                 std::uint64_t seed, int batches = 100) {
  if (t_value < 0) throw Error("gillespie needs t >= 0");
  if (horizon <= 0 || burn_in < 0 || batches < 2) throw Error("gillespie needs horizon > 0, burn_in >= 0, batches >= 2");
  GillespieResult res;
  res.basis = SectorBasis(m);
  const std::size_t dim = res.basis.size();
  const int L = m.L();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  Config c = res.basis[0];
  std::shuffle(c.begin(), c.end(), rng);
  std::vector<std::vector<double>> batch_time(static_cast<std::size_t>(batches), std::vector<double>(dim, 0.0));
  const double batch_len = horizon / batches;
  const double end = burn_in + horizon;

  // occupation of [from, to) in state idx, split across batch boundaries
  auto record = [&](std::size_t idx, double from, double to) {
    from = std::max(from, burn_in);
    to = std::min(to, end);
    if (from >= to) return;
    auto b = std::min(static_cast<std::size_t>((from - burn_in) / batch_len), static_cast<std::size_t>(batches - 1));
    for (; from < to && b < static_cast<std::size_t>(batches); ++b) {
      const double stop = b + 1 == static_cast<std::size_t>(batches)
                              ? to
                              : std::min(to, burn_in + static_cast<double>(b + 1) * batch_len);
      if (stop > from) {
        batch_time[b][idx] += stop - from;
        from = stop;
      }
    }
  };

  std::vector<double> rates(static_cast<std::size_t>(L));
  double now = 0.0;
  while (now < end) {
    double total = 0.0;
    for (int i = 0; i < L; ++i) {
      const int a = c[static_cast<std::size_t>(i)];
      const int b = c[static_cast<std::size_t>((i + 1) % L)];
      const double r = a == b ? 0.0 : (a < b ? t_value : 1.0);
      rates[static_cast<std::size_t>(i)] = r;
      total += r;
    }
    const std::size_t idx = res.basis.index(c);
    if (total <= 0.0) {
      record(idx, now, end);
      break;
    }
    const double wait = -std::log(1.0 - unif(rng)) / total;
    record(idx, now, now + wait);
    now += wait;
    if (now >= end) break;
    double u = unif(rng) * total;
    int site = 0;
    for (; site < L - 1; ++site) {
      if (u < rates[static_cast<std::size_t>(site)]) break;
      u -= rates[static_cast<std::size_t>(site)];
    }
    while (rates[static_cast<std::size_t>(site)] == 0.0) --site;  // guards rounding at the top end
    std::swap(c[static_cast<std::size_t>(site)], c[static_cast<std::size_t>((site + 1) % L)]);
    if (now >= burn_in) ++res.events;
  }

  res.fraction.assign(dim, 0.0);
  res.std_error.assign(dim, 0.0);
  for (std::size_t k = 0; k < dim; ++k) {
    double sum = 0.0;
    double sum2 = 0.0;
    for (const auto& bt : batch_time) {
      const double f = bt[k] / batch_len;
      sum += f;
      sum2 += f * f;
    }
    const double mean = sum / batches;
    const double var = std::max(0.0, (sum2 - batches * mean * mean) / (batches - 1));
    res.fraction[k] = mean;
    res.std_error[k] = std::sqrt(var / batches);
  }
  return res;
}

/// Exact probabilities obtained by normalizing a canonical stationary vector at t0.
inline std::vector<Rational> normalized_probabilities(const SectorVector& v, const Rational& t0) {
  std::vector<Rational> p;
  Rational total = 0;
  for (const auto& x : v.values) {
    p.push_back(x(t0));
    total += p.back();
  }
  if (total == 0) throw Error("vanishing partition sum");
  for (auto& x : p) x /= total;
  return p;
}

}  // namespace asepx

#endif  // ASEPX_ASEP_CORE_HPP
