#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "asepx/mlq.hpp"
#include "fixtures.hpp"

using namespace asepx;

namespace {

const PolyT T = PolyT::t();
const PolyT ONE_T = PolyT(1) - PolyT::t();

RationalFunctionT rf(const PolyT& n, const PolyT& d) { return RationalFunctionT(n, d); }

Row random_row(std::mt19937_64& rng, int L, int w) {
  std::vector<int> b(static_cast<std::size_t>(L), 0);
  std::fill(b.begin(), b.begin() + w, 1);
  std::shuffle(b.begin(), b.end(), rng);
  return Row(b);
}

// Arrow statistics recomputed from cyclic distances rather than by walking.
PairingStep traced(const Row& j, const Row& taken, int src, int dst) {
  const int L = j.size();
  PairingStep s;
  s.source = src;
  s.target = dst;
  for (int c = 0; c < L; ++c) s.free += j[c] && !taken[c];
  if (src == dst) {
    s.trivial = 1;
    return s;
  }
  s.wrapped = dst > src;
  const int span = ((src - dst) % L + L) % L;
  for (int c = 0; c < L; ++c) {
    const int dist = ((src - c) % L + L) % L;
    if (dist > 0 && dist < span && j[c] && !taken[c]) ++s.skipped;
  }
  return s;
}

BallSystem example_system() {
  return BallSystem{{Row::parse("011111101"), Row::parse("110100010"), Row::parse("001010000")}};
}

}  // namespace

TEST(Mlq, PairingsOnFourCycle) {
  const auto outs = enumerate_pairings(Row::parse("0100"), Row::parse("1011"));
  ASSERT_EQ(outs.size(), 3u);
  std::map<std::string, PairingStep> byTarget;
  for (const auto& o : outs) {
    ASSERT_EQ(o.steps.size(), 1u);
    byTarget[o.target.to_string()] = o.steps[0];
  }
  const Row j = Row::parse("1011");
  const Row none = Row::zeros(4);
  EXPECT_EQ(byTarget["1000"], traced(j, none, 1, 0));
  EXPECT_EQ(byTarget["0010"], traced(j, none, 1, 2));
  EXPECT_EQ(byTarget["0001"], traced(j, none, 1, 3));
  EXPECT_EQ(byTarget["1000"].wrapped, 0);
  EXPECT_EQ(byTarget["1000"].skipped, 0);
  EXPECT_EQ(byTarget["0010"].wrapped, 1);
  EXPECT_EQ(byTarget["0010"].skipped, 2);
  EXPECT_EQ(byTarget["0001"].skipped, 1);
  for (const auto& [k, s] : byTarget) EXPECT_EQ(s.free, 3);
}

TEST(Mlq, PairingStatsAgreeWithTracer) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const int L = 2 + static_cast<int>(rng() % 6);
    const int m = 1 + static_cast<int>(rng() % static_cast<unsigned>(L));
    const int l = static_cast<int>(rng() % static_cast<unsigned>(m));
    const Row i = random_row(rng, L, l), j = random_row(rng, L, m);
    for (const auto& o : enumerate_pairings(i, j)) {
      Row taken = Row::zeros(L);
      for (const auto& s : o.steps) {
        EXPECT_EQ(s, traced(j, taken, s.source, s.target));
        taken[s.target] = 1;
      }
      EXPECT_EQ(taken, o.target);
      EXPECT_EQ(o.target.weight(), l);
    }
  }
}

TEST(Mlq, ForcedAndEmptyPairings) {
  const auto forced = enumerate_pairings(Row::parse("0100"), Row::parse("0110"));
  ASSERT_EQ(forced.size(), 1u);
  EXPECT_EQ(forced[0].steps[0].trivial, 1);
  EXPECT_EQ(forced[0].steps[0].wrapped, 0);
  EXPECT_EQ(forced[0].steps[0].skipped, 0);
  EXPECT_EQ(pairing_weight(forced[0], 1), RationalFunctionT(1));

  const auto empty = enumerate_pairings(Row::parse("000"), Row::parse("010"));
  ASSERT_EQ(empty.size(), 1u);
  EXPECT_TRUE(empty[0].steps.empty());
  EXPECT_THROW(enumerate_pairings(Row::parse("011"), Row::parse("110")), Error);
}

TEST(Mlq, SingleStepWeight) {
  const Rational q = make_rational(2, 3);
  for (int s = 1; s <= 4; ++s) {
    PairingOutcome p{Row::zeros(1), {PairingStep{0, 0, 1, s, s + 1, 0}}};
    EXPECT_EQ(pairing_weight(p, q), rf(ONE_T * PolyT::monomial(q, s), PolyT::one_minus(q, s + 1)));
    EXPECT_EQ(pairing_weight(p, q), step_weight(p.steps[0], q));
  }
}

TEST(Mlq, ExampleQueueWeights) {
  const Rational q = make_rational(3, 5);
  const RationalFunctionT p1 = rf(PolyT::monomial(q, 2) * ONE_T, PolyT::one_minus(q, 4));
  const RationalFunctionT p2 = rf(ONE_T, PolyT::one_minus(q, 3));
  const RationalFunctionT p3 = rf(T * ONE_T, PolyT::one_minus(q * q, 6));
  const RationalFunctionT p4 = rf(PolyT::monomial(q, 2) * ONE_T, PolyT::one_minus(q, 5));
  const Config expect = parse_config("021323101");
  bool found = false;
  RationalFunctionT sameImage;
  for_each_mlq(example_system(), q, [&](const Mlq& Q) {
    if (Q.config != expect) return;
    sameImage += Q.weight;
    // arrows: row 3 col 3 -> 8, row 3 col 5 -> 4, row 2 col 4 -> 4, row 2 col 8 -> 6, row 2 col 1 -> 5, row 2 col 2 -> 2
    std::vector<std::tuple<int, int, int>> arrows;
    for (const auto& a : Q.arrows) arrows.emplace_back(a.row, a.source, a.target);
    std::sort(arrows.begin(), arrows.end());
    const std::vector<std::tuple<int, int, int>> want = {{2, 1, 5}, {2, 2, 2}, {2, 4, 4}, {2, 8, 6}, {3, 3, 8}, {3, 5, 4}};
    if (arrows == want) {
      found = true;
      EXPECT_EQ(Q.weight, p1 * p2 * p3 * p4);
    }
  });
  EXPECT_TRUE(found);

  const SectorVector viaOperator = project_pi(bigM_apply(q, example_system()));
  EXPECT_EQ(viaOperator.at(expect), sameImage);
}

TEST(Mlq, WeightTableOfSector121) {
  const Rational q = make_rational(-2, 7);
  const Multiplicity m({1, 2, 1});
  std::map<std::string, std::vector<RationalFunctionT>> table;
  for_each_mlq(m, q, [&](const Mlq& Q) { table[config_to_string(Q.config)].push_back(Q.weight); });
  auto sorted = [](std::vector<RationalFunctionT> v) {
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.to_string() < b.to_string(); });
    return v;
  };
  const PolyT den = PolyT::one_minus(q, 3);
  EXPECT_EQ(sorted(table["1012"]), sorted({RationalFunctionT(1), rf(PolyT::monomial(q, 1) * ONE_T, den)}));
  EXPECT_EQ(sorted(table["1021"]), sorted({RationalFunctionT(1), rf(PolyT::monomial(q, 2) * ONE_T, den)}));
  EXPECT_EQ(sorted(table["2011"]), sorted({RationalFunctionT(1), rf(ONE_T, den)}));

  const SectorVector direct = mlq_enumerate_direct(m, q);
  EXPECT_EQ(direct.at(parse_config("2011")), RationalFunctionT(1) + rf(ONE_T, den));
}

TEST(Mlq, SumAtQEqualsOneMatchesPublishedState) {
  const SectorVector v = mlq_state(Multiplicity({1, 2, 1}), 1);
  // (1 + t + t^2) P = (1+t)^2 |1012> + (1+t+2t^2) |1021> + (2+t+t^2) |2011> + shifts
  const PolyT s = PolyT(1) + T + T * T;
  EXPECT_EQ(v.at(parse_config("1012")) * s, RationalFunctionT((PolyT(1) + T) * (PolyT(1) + T)));
  EXPECT_EQ(v.at(parse_config("1021")) * s, RationalFunctionT(PolyT(1) + T + PolyT(2) * T * T));
  EXPECT_EQ(v.at(parse_config("2011")) * s, RationalFunctionT(PolyT(2) + T + T * T));
  EXPECT_TRUE(same_ray(v.values, fixtures::expand(fixtures::xi_table()[2]).values));
}

TEST(Mlq, ElementClosedForm) {
  for (int alpha = 1; alpha <= 3; ++alpha)
    for (int beta = 1; beta <= 3; ++beta) {
      auto build = [&](std::vector<int> head, int mid, std::vector<int> tailFill, int tailVal) {
        std::vector<int> r;
        r.push_back(head[0]);
        for (int k = 0; k < beta - 1; ++k) r.push_back(mid);
        r.insert(r.end(), tailFill.begin(), tailFill.end());
        for (int k = 0; k < alpha; ++k) r.push_back(tailVal);
        return Row(r);
      };
      const Row a = build({1}, 0, {0, 1, 0}, 0);
      const Row b = build({0}, 1, {0, 0, 0}, 1);
      const Row i = build({0}, 0, {1, 0, 1}, 0);
      const Row j = build({1}, 1, {0, 1, 0}, 1);
      for (const Rational& q : {Rational(1), make_rational(1, 3), make_rational(5, 2)}) {
        const RationalFunctionT expect(PolyT::monomial(1, beta - 1) * ONE_T * ONE_T * (PolyT(1) + PolyT::monomial(q, alpha + beta)),
                                       PolyT::one_minus(q, alpha + beta) * PolyT::one_minus(q, alpha + beta + 1));
        EXPECT_EQ(m_element(q, i, j, a, b), expect) << alpha << "," << beta;
      }
    }
}

TEST(Mlq, ElementConservationAndEmptyRow) {
  const Rational q = make_rational(1, 4);
  EXPECT_TRUE(m_element(q, Row::parse("0100"), Row::parse("1011"), Row::parse("1000"), Row::parse("0010")).is_zero());
  EXPECT_EQ(m_element(q, Row::parse("0000"), Row::parse("1011"), Row::parse("0000"), Row::parse("1011")), RationalFunctionT(1));
  EXPECT_TRUE(m_element(q, Row::parse("0000"), Row::parse("1011"), Row::parse("0000"), Row::parse("1010")).is_zero());
  EXPECT_THROW(m_element(q, Row::parse("0110"), Row::parse("1010"), Row::parse("0010"), Row::parse("1000")), Error);
}

TEST(Mlq, ProcessingOrderDoesNotMatter) {
  std::mt19937_64 rng(17);
  const Rational q = make_rational(2, 9);
  for (int trial = 0; trial < 60; ++trial) {
    const int L = 3 + static_cast<int>(rng() % 4);
    const int m = 2 + static_cast<int>(rng() % static_cast<unsigned>(L - 1));
    const int l = 1 + static_cast<int>(rng() % static_cast<unsigned>(std::min(m - 1, 3)));
    const Row i = random_row(rng, L, l), j = random_row(rng, L, m);
    std::vector<int> order;
    for (int c = 0; c < L; ++c)
      if (i[c]) order.push_back(c);
    const auto reference = pairing_totals(i, j, q);
    do {
      std::map<Row, RationalFunctionT> totals;
      for (const auto& p : enumerate_pairings_in_order(i, j, order)) totals[p.target] += pairing_weight(p, q);
      for (auto it = totals.begin(); it != totals.end();) it = it->second.is_zero() ? totals.erase(it) : std::next(it);
      EXPECT_EQ(totals, reference) << i.to_string() << " " << j.to_string();
    } while (std::next_permutation(order.begin(), order.end()));
  }
}

TEST(Mlq, McheckApply) {
  const Rational q = make_rational(1, 2);
  std::map<std::pair<Row, Row>, RationalFunctionT> v;
  v[{Row::parse("0000"), Row::parse("0110")}] = 3;
  const auto out = mcheck_apply(q, v);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out.begin()->first.first, Row::parse("0110"));
  EXPECT_EQ(out.begin()->first.second, Row::parse("0000"));
  EXPECT_EQ(out.begin()->second, RationalFunctionT(3));

  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const int L = 4 + static_cast<int>(rng() % 3);
    const Row i = random_row(rng, L, 2), j = random_row(rng, L, 3);
    std::map<std::pair<Row, Row>, RationalFunctionT> single{{{i, j}, RationalFunctionT(1)}};
    RationalFunctionT total, viaApply;
    for (const auto& p : enumerate_pairings(i, j)) total += pairing_weight(p, q);
    for (const auto& [ba, w] : mcheck_apply(q, single)) {
      viaApply += w;
      Row sum = ba.first;
      for (int c = 0; c < L; ++c) sum[c] += ba.second[c];
      EXPECT_EQ(sum, j);
      EXPECT_EQ(w, m_element(q, i, j, ba.second, ba.first));
    }
    EXPECT_EQ(viaApply, total);
  }
}

TEST(Mlq, CompositionBasics) {
  const Rational q = make_rational(3, 7);
  // n = 1: nothing to apply
  BallSystem one{{Row::parse("0110")}};
  const SlotVector v1 = bigM_apply(q, one);
  ASSERT_EQ(v1.terms.size(), 1u);
  EXPECT_EQ(v1.terms.begin()->first[0], Row::parse("0110"));
  // n = 2: a single M-check on slots (2, 1)
  BallSystem two{{Row::parse("1101"), Row::parse("0100")}};
  const SlotVector v2 = bigM_apply(q, two);
  const SlotVector direct = apply_mcheck(slot_vector(two), 1, q);
  EXPECT_EQ(v2.terms, direct.terms);
  EXPECT_EQ(v2.occupancy, (std::vector<int>{1, 2}));

  SlotVector bad;
  bad.occupancy = {1, 2};
  bad.terms[{Row::parse("100"), Row::parse("011")}] = 1;
  EXPECT_THROW(apply_mcheck(bad, 1, q), Error);
  EXPECT_THROW((BallSystem{{Row::parse("100"), Row::parse("011")}}.multiplicity()), Error);
}

TEST(Mlq, Projection) {
  SlotVector v;
  v.occupancy = {1, 1};  // slot 1 holds c_2, slot 2 holds c_1
  v.terms[{Row::parse("001"), Row::parse("100")}] = 1;
  const SectorVector s = project_pi(v);
  EXPECT_EQ(s.at(parse_config("102")), RationalFunctionT(1));
  v.terms.clear();
  v.terms[{Row::parse("100"), Row::parse("100")}] = 1;
  EXPECT_THROW(project_pi(v), Error);
}

TEST(Mlq, OperatorFormEqualsDirectEnumeration) {
  std::mt19937_64 rng(31);
  for (const auto& counts : std::vector<std::vector<int>>{{1, 2, 1}, {2, 1, 1}, {1, 1, 2}, {1, 1, 1, 1}, {2, 1, 1, 1}, {1, 2, 1, 1}}) {
    const Multiplicity m(counts);
    for (const Rational& q : {Rational(1), make_rational(static_cast<long>(rng() % 9) + 2, 11)}) {
      const SectorVector a = mlq_state(m, q);
      const SectorVector b = mlq_enumerate_direct(m, q);
      EXPECT_EQ(a.values, b.values) << m.to_string();
      for (std::size_t k = 0; k < a.size(); ++k) EXPECT_FALSE(a.values[k].is_zero());
    }
  }
}

TEST(Mlq, ShiftInvarianceAndUniformity) {
  const SectorVector v = mlq_state(Multiplicity({2, 1, 2}), 1);
  for (const auto& c : v.basis.configs()) EXPECT_EQ(v.at(c), v.at(cyclic_shift(c)));
  const SectorVector u = mlq_state(Multiplicity({2, 3}), 1);
  for (const auto& x : u.values) EXPECT_EQ(x, u.values.front());
  const SectorVector ug = mlq_state(Multiplicity({3, 2}), make_rational(1, 3));
  for (const auto& x : ug.values) EXPECT_EQ(x, ug.values.front());
}

TEST(Mlq, StationaryAtQEqualsOne) {
  for (const auto& counts : std::vector<std::vector<int>>{{2, 1, 1}, {1, 2, 2}, {2, 2, 1}, {1, 1, 1, 1}}) {
    const Multiplicity m(counts);
    EXPECT_TRUE(same_ray(mlq_state(m, 1).values, stationary_kernel(m).values)) << m.to_string();
  }
}
