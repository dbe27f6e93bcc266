#ifndef ASEPX_MLQ_HPP
#define ASEPX_MLQ_HPP

// Multiline queues. Rows are numbered from the top; row r of a ball system
// for m = (m_0, ..., m_n) holds l_r = m_r + ... + m_n balls. Balls of a lower
// row are paired to balls of the row above by arrows running leftwards,
// cyclically, with the weight
//   (1 - t) t^skipped qeff^wrapped / (1 - qeff t^free).

#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "asepx/asep_core.hpp"
#include "asepx/row.hpp"
#include "asepx/scalar.hpp"

namespace asepx {

struct PairingStep {
  int source = 0;  // column in the lower row, 0-based
  int target = 0;  // column in the upper row, 0-based
  int wrapped = 0;
  int skipped = 0;
  int free = 0;
  int trivial = 0;
  friend bool operator==(const PairingStep&, const PairingStep&) = default;
};

struct PairingOutcome {
  Row target;                     // image of the lower row inside the upper row
  std::vector<PairingStep> steps;  // in processing order
};

/// Rows b_n, ..., b_1 stored as rows[r - 1] = b_r.
struct BallSystem {
  std::vector<Row> rows;

  int n() const { return static_cast<int>(rows.size()); }
  int L() const { return rows.empty() ? 0 : rows.front().size(); }
  const Row& row(int r) const { return rows[static_cast<std::size_t>(r - 1)]; }

  /// Multiplicity implied by the row occupancies; throws unless L > l_1 > ... > l_n >= 1.
  Multiplicity multiplicity() const {
    const int n_ = n();
    std::vector<int> counts(static_cast<std::size_t>(n_ + 1));
    int above = 0;
    for (int r = n_; r >= 1; --r) {
      const int l = row(r).weight();
      if (row(r).size() != L()) throw Error("ball system rows have unequal lengths");
      counts[static_cast<std::size_t>(r)] = l - above;
      if (l <= above) throw Error("ball system is not basic: occupancies must strictly decrease downwards");
      above = l;
    }
    counts[0] = L() - above;
    if (counts[0] < 1) throw Error("ball system is not basic: row 1 is full");
    return Multiplicity(counts);
  }
};

/// Statistics of the arrow from lower column src to upper column dst, given the free upper balls.
inline PairingStep pairing_stats(const std::vector<int>& freeUpper, int src, int dst) {
  const int L = static_cast<int>(freeUpper.size());
  PairingStep s;
  s.source = src;
  s.target = dst;
  s.free = std::accumulate(freeUpper.begin(), freeUpper.end(), 0);
  if (src == dst) {
    s.trivial = 1;
    return s;
  }
  s.wrapped = dst > src ? 1 : 0;
  for (int c = (src - 1 + L) % L; c != dst; c = (c - 1 + L) % L) s.skipped += freeUpper[static_cast<std::size_t>(c)];
  return s;
}

namespace detail {

inline void pairings_rec(const std::vector<int>& sources, std::size_t k, std::vector<int>& freeUpper, Row& target,
                         std::vector<PairingStep>& steps, std::vector<PairingOutcome>& out) {
  if (k == sources.size()) {
    out.push_back({target, steps});
    return;
  }
  const int src = sources[k];
  const int L = static_cast<int>(freeUpper.size());
  auto visit = [&](int dst) {
    steps.push_back(pairing_stats(freeUpper, src, dst));
    freeUpper[static_cast<std::size_t>(dst)] = 0;
    target[dst] = 1;
    pairings_rec(sources, k + 1, freeUpper, target, steps, out);
    target[dst] = 0;
    freeUpper[static_cast<std::size_t>(dst)] = 1;
    steps.pop_back();
  };
  if (freeUpper[static_cast<std::size_t>(src)]) {
    visit(src);  // a free ball directly above must be taken
    return;
  }
  for (int dst = 0; dst < L; ++dst)
    if (freeUpper[static_cast<std::size_t>(dst)]) visit(dst);
}

}  // namespace detail

/// Pairings of the lower row i into the upper row j, lower balls taken in the given column order.
inline std::vector<PairingOutcome> enumerate_pairings_in_order(const Row& i, const Row& j, const std::vector<int>& order) {
  if (i.size() != j.size()) throw Error("enumerate_pairings: rows of unequal length");
  if (i.weight() >= j.weight()) throw Error("enumerate_pairings needs |i| < |j|");
  std::vector<int> freeUpper(j.bits.begin(), j.bits.end());
  Row target = Row::zeros(i.size());
  std::vector<PairingStep> steps;
  std::vector<PairingOutcome> out;
  detail::pairings_rec(order, 0, freeUpper, target, steps, out);
  return out;
}

/// All pairings with lower-row balls processed left to right.
inline std::vector<PairingOutcome> enumerate_pairings(const Row& i, const Row& j) {
  std::vector<int> order;
  for (int c = 0; c < i.size(); ++c)
    if (i[c]) order.push_back(c);
  return enumerate_pairings_in_order(i, j, order);
}

inline RationalFunctionT step_weight(const PairingStep& s, const Rational& qeff) {
  if (s.trivial) return 1;
  const PolyT num = (PolyT(1) - PolyT::t()) * PolyT::monomial(s.wrapped ? qeff : Rational(1), s.skipped);
  return RationalFunctionT(num, PolyT::one_minus(qeff, s.free));
}

inline RationalFunctionT pairing_weight(const PairingOutcome& p, const Rational& qeff) {
  PolyT num(1), den(1);
  for (const auto& s : p.steps) {
    if (s.trivial) continue;
    num *= (PolyT(1) - PolyT::t()) * PolyT::monomial(s.wrapped ? qeff : Rational(1), s.skipped);
    den *= PolyT::one_minus(qeff, s.free);
  }
  return RationalFunctionT(num, den);
}

/// Sum of pairing weights grouped by image, for the pair (i, j).
inline std::map<Row, RationalFunctionT> pairing_totals(const Row& i, const Row& j, const Rational& qeff) {
  std::map<Row, RationalFunctionT> out;
  if (i.weight() == 0) {
    out[Row::zeros(i.size())] = 1;
    return out;
  }
  for (const auto& p : enumerate_pairings(i, j)) out[p.target] += pairing_weight(p, qeff);
  for (auto it = out.begin(); it != out.end();) it = it->second.is_zero() ? out.erase(it) : std::next(it);
  return out;
}

/// Generating function M(q,t)^{a,b}_{i,j} of the weights of pairings i -> j with image a.
inline RationalFunctionT m_element(const Rational& q, const Row& i, const Row& j, const Row& a, const Row& b) {
  const int L = i.size();
  if (j.size() != L || a.size() != L || b.size() != L) throw Error("m_element: rows of unequal length");
  if (i.weight() >= j.weight()) throw Error("m_element needs |i| < |j|");
  for (int k = 0; k < L; ++k)
    if (a[k] + b[k] != j[k]) return {};
  if (a.weight() != i.weight()) return {};
  const auto totals = pairing_totals(i, j, q);
  auto it = totals.find(a);
  return it == totals.end() ? RationalFunctionT() : it->second;
}

// ---------------------------------------------------------------------------
// M-check and the composition

/// Vector in V_{s_1} (x) ... (x) V_{s_k}; slots[s - 1] is slot s (slots count from the right).
struct SlotVector {
  std::vector<int> occupancy;
  std::map<std::vector<Row>, RationalFunctionT> terms;

  void add(const std::vector<Row>& key, const RationalFunctionT& v) {
    if (v.is_zero()) return;
    auto& slot = terms[key];
    slot += v;
    if (slot.is_zero()) terms.erase(key);
  }
};

/// M-check(qeff) acting on slots (s + 1, s): lower row in slot s + 1, upper row in slot s.
/// v_i (x) v_j -> sum_a M^{a, j-a}_{i,j} v_{j-a} (x) v_a.
inline SlotVector apply_mcheck(const SlotVector& v, int s, const Rational& qeff) {
  if (s < 1 || s + 1 > static_cast<int>(v.occupancy.size())) throw Error("M-check slot out of range");
  const std::size_t lo = static_cast<std::size_t>(s);       // slot s + 1
  const std::size_t up = static_cast<std::size_t>(s - 1);   // slot s
  const int l = v.occupancy[lo];
  const int m = v.occupancy[up];
  if (l >= m) throw Error("occupancy mismatch: M-check needs V_l (x) V_m with l < m, got l=" + std::to_string(l) +
                          ", m=" + std::to_string(m) + " at slots " + std::to_string(s + 1) + "," + std::to_string(s));
  SlotVector out;
  out.occupancy = v.occupancy;
  out.occupancy[lo] = m - l;
  out.occupancy[up] = l;
  std::map<std::pair<Row, Row>, std::map<Row, RationalFunctionT>> cache;
  for (const auto& [key, coeff] : v.terms) {
    const Row& i = key[lo];
    const Row& j = key[up];
    if (i.weight() != l || j.weight() != m) throw Error("occupancy mismatch: slot contents disagree with slot type");
    auto it = cache.find({i, j});
    if (it == cache.end()) it = cache.emplace(std::make_pair(i, j), pairing_totals(i, j, qeff)).first;
    for (const auto& [a, w] : it->second) {
      std::vector<Row> k2 = key;
      Row b = j;
      for (int c = 0; c < b.size(); ++c) b[c] -= a[c];
      k2[lo] = b;
      k2[up] = a;
      out.add(k2, coeff * w);
    }
  }
  return out;
}

/// Two-slot form: v over B_l (x) B_m keyed by (i, j), result keyed by (b, a).
inline std::map<std::pair<Row, Row>, RationalFunctionT> mcheck_apply(
    const Rational& q, const std::map<std::pair<Row, Row>, RationalFunctionT>& v) {
  std::map<std::pair<Row, Row>, RationalFunctionT> out;
  for (const auto& [ij, coeff] : v) {
    const auto& [i, j] = ij;
    if (i.weight() >= j.weight()) throw Error("mcheck_apply needs |i| < |j|");
    for (const auto& [a, w] : pairing_totals(i, j, q)) {
      Row b = j;
      for (int c = 0; c < b.size(); ++c) b[c] -= a[c];
      auto& slot = out[{b, a}];
      slot += coeff * w;
    }
  }
  for (auto it = out.begin(); it != out.end();) it = it->second.is_zero() ? out.erase(it) : std::next(it);
  return out;
}

/// Initial slot vector: row r of the ball system in slot r.
inline SlotVector slot_vector(const BallSystem& b) {
  b.multiplicity();
  SlotVector v;
  for (int r = 1; r <= b.n(); ++r) v.occupancy.push_back(b.row(r).weight());
  v.terms[b.rows] = 1;
  return v;
}

/// The composition A_{n-1} ... A_1, A_j = M(q^{n-j})_{j+1,j} ... M(q)_{n,n-1};
/// afterwards slot s holds the color n + 1 - s balls of row 1.
inline SlotVector bigM_apply(const Rational& q, SlotVector v) {
  const int n = static_cast<int>(v.occupancy.size());
  for (int j = 1; j <= n - 1; ++j)
    for (int s = n - 1; s >= j; --s) v = apply_mcheck(v, s, power(q, n - s));
  return v;
}

inline SlotVector bigM_apply(const Rational& q, const BallSystem& b) { return bigM_apply(q, slot_vector(b)); }

/// v_{c_1} (x) ... (x) v_{c_n} -> |c_1 + 2 c_2 + ... + n c_n>, with c_r read from slot n + 1 - r.
inline SectorVector project_pi(const SlotVector& v) {
  const int n = static_cast<int>(v.occupancy.size());
  if (v.terms.empty() && n == 0) throw Error("project_pi: empty slot vector");
  std::vector<int> counts(static_cast<std::size_t>(n + 1));
  int L = v.terms.empty() ? 0 : v.terms.begin()->first.front().size();
  int used = 0;
  for (int r = 1; r <= n; ++r) {
    counts[static_cast<std::size_t>(r)] = v.occupancy[static_cast<std::size_t>(n - r)];
    used += counts[static_cast<std::size_t>(r)];
  }
  counts[0] = L - used;
  if (counts[0] < 0) throw Error("project_pi: occupancies exceed the lattice length");
  SectorVector out{SectorBasis(Multiplicity(counts))};
  for (const auto& [key, coeff] : v.terms) {
    Config c(static_cast<std::size_t>(L), 0);
    for (int r = 1; r <= n; ++r) {
      const Row& row = key[static_cast<std::size_t>(n - r)];
      if (row.weight() != counts[static_cast<std::size_t>(r)]) throw Error("project_pi: slot occupancy mismatch");
      for (int k = 0; k < L; ++k) {
        if (!row[k]) continue;
        if (c[static_cast<std::size_t>(k)] != 0) throw Error("project_pi: overlapping supports at site " + std::to_string(k + 1));
        c[static_cast<std::size_t>(k)] = r;
      }
    }
    out.at(c) += coeff;
  }
  return out;
}

/// Every ball system of the sector, as rows[r - 1] = b_r.
inline std::vector<BallSystem> ball_systems(const Multiplicity& m) {
  if (!m.basic()) throw Error("ball systems need a basic sector");
  std::vector<BallSystem> out{BallSystem{}};
  for (int r = 1; r <= m.n(); ++r) {
    std::vector<BallSystem> next;
    const auto rows = rows_with_weight(m.L(), m.l(r));
    for (const auto& b : out)
      for (const auto& row : rows) {
        BallSystem b2 = b;
        b2.rows.push_back(row);
        next.push_back(std::move(b2));
      }
    out = std::move(next);
  }
  return out;
}

/// Pi(M(q,t) sum_b v_{b_n} (x) ... (x) v_{b_1}).
inline SectorVector mlq_state(const Multiplicity& m, const Rational& q) {
  if (!m.basic()) throw Error("mlq_state needs a basic sector, got " + m.to_string());
  SlotVector v;
  for (int r = 1; r <= m.n(); ++r) v.occupancy.push_back(m.l(r));
  for (const auto& b : ball_systems(m)) v.terms[b.rows] = 1;
  return project_pi(bigM_apply(q, std::move(v)));
}

// ---------------------------------------------------------------------------
// Whole-queue enumeration

struct MlqArrow {
  int row = 0;     // lower row of the arrow; it ends in row - 1
  int source = 0;  // 1-based columns
  int target = 0;
  int color = 0;
};

struct Mlq {
  BallSystem balls;
  std::vector<MlqArrow> arrows;
  Config config;  // colors of row 1
  RationalFunctionT weight;
};

namespace detail {

struct MlqWalker {
  const Rational& q;
  int n = 0;
  int L = 0;
  const std::function<void(const Mlq&)>& emit;
  Mlq cur;
  std::vector<std::vector<int>> present;  // present[r - 1][col]
  PolyT num{1}, den{1};

  // round for color c, currently pairing the balls `sources` of row r into row r - 1
  void row_step(int c, int r, const std::vector<int>& sources, std::size_t k, std::vector<int>& images) {
    if (k == sources.size()) {
      std::vector<int> sorted = images;
      std::sort(sorted.begin(), sorted.end());
      if (r - 1 == 1) {
        finish_round(c, sorted);
      } else {
        std::vector<int> nextImages;
        row_step(c, r - 1, sorted, 0, nextImages);
      }
      return;
    }
    auto& upper = present[static_cast<std::size_t>(r - 2)];
    const int src = sources[k];
    const Rational qeff = power(q, c - r + 1);
    auto visit = [&](int dst) {
      const PairingStep s = pairing_stats(upper, src, dst);
      const PolyT saveNum = num, saveDen = den;
      if (!s.trivial) {
        num *= (PolyT(1) - PolyT::t()) * PolyT::monomial(s.wrapped ? qeff : Rational(1), s.skipped);
        den *= PolyT::one_minus(qeff, s.free);
      }
      upper[static_cast<std::size_t>(dst)] = 0;
      images.push_back(dst);
      cur.arrows.push_back({r, src + 1, dst + 1, c});
      row_step(c, r, sources, k + 1, images);
      cur.arrows.pop_back();
      images.pop_back();
      upper[static_cast<std::size_t>(dst)] = 1;
      num = saveNum;
      den = saveDen;
    };
    if (upper[static_cast<std::size_t>(src)]) {
      visit(src);
      return;
    }
    for (int dst = 0; dst < L; ++dst)
      if (upper[static_cast<std::size_t>(dst)]) visit(dst);
  }

  // the images in row 1 take color c; every ball paired in this round leaves the system
  void finish_round(int c, const std::vector<int>& row1Images) {
    const auto savedPresent = present;
    const Config savedConfig = cur.config;
    for (int col : row1Images) cur.config[static_cast<std::size_t>(col)] = c;
    for (const auto& a : cur.arrows)
      if (a.color == c) {
        present[static_cast<std::size_t>(a.row - 1)][static_cast<std::size_t>(a.source - 1)] = 0;
        present[static_cast<std::size_t>(a.row - 2)][static_cast<std::size_t>(a.target - 1)] = 0;
      }
    round(c - 1);
    present = savedPresent;
    cur.config = savedConfig;
  }

  void round(int c) {
    if (c <= 1) {
      Config conf = cur.config;
      for (int col = 0; col < L; ++col)
        if (present[0][static_cast<std::size_t>(col)]) conf[static_cast<std::size_t>(col)] = 1;
      Mlq out = cur;
      out.config = std::move(conf);
      out.weight = RationalFunctionT(num, den);
      emit(out);
      return;
    }
    std::vector<int> sources;
    for (int col = 0; col < L; ++col)
      if (present[static_cast<std::size_t>(c - 1)][static_cast<std::size_t>(col)]) sources.push_back(col);
    std::vector<int> images;
    row_step(c, c, sources, 0, images);
  }
};

}  // namespace detail

/// Calls emit for every multiline queue on the ball system b.
inline void for_each_mlq(const BallSystem& b, const Rational& q, const std::function<void(const Mlq&)>& emit) {
  b.multiplicity();
  detail::MlqWalker w{q, b.n(), b.L(), emit, {}, {}};
  w.cur.balls = b;
  w.cur.config.assign(static_cast<std::size_t>(b.L()), 0);
  for (const auto& row : b.rows) w.present.push_back(row.bits);
  w.round(b.n());
}

/// Calls emit for every multiline queue over the sector.
inline void for_each_mlq(const Multiplicity& m, const Rational& q, const std::function<void(const Mlq&)>& emit) {
  if (!m.basic()) throw Error("multiline queues need a basic sector, got " + m.to_string());
  for (const auto& b : ball_systems(m)) for_each_mlq(b, q, emit);
}

/// Sum over all multiline queues of wt(Q) |pi(Q)>.
inline SectorVector mlq_enumerate_direct(const Multiplicity& m, const Rational& q) {
  SectorVector out{SectorBasis(m)};
  for_each_mlq(m, q, [&](const Mlq& Q) { out.at(Q.config) += Q.weight; });
  return out;
}

}  // namespace asepx

#endif  // ASEPX_MLQ_HPP
