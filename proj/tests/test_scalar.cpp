#include <gtest/gtest.h>

#include <set>

#include "asepx/scalar.hpp"

using namespace asepx;

namespace {

PolyT P(std::initializer_list<long> c) {
  std::vector<Rational> v;
  for (long x : c) v.emplace_back(x);
  return PolyT(v);
}

const PolyT t = PolyT::t();

}  // namespace

TEST(PolyT, ArithmeticAndTrim) {
  EXPECT_TRUE((P({1, 2}) - P({1, 2})).is_zero());
  EXPECT_EQ(P({1, 1}) * P({1, -1}), P({1, 0, -1}));
  EXPECT_EQ(P({0, 0, 0}).degree(), -1);
  EXPECT_EQ(P({3, 1}).to_string(), "3 + t");
  EXPECT_EQ((-t * t + PolyT(make_rational(1, 2))).to_string(), "1/2 - t^2");
}

TEST(PolyT, DivmodRoundTrip) {
  const PolyT a = P({5, -3, 0, 2, 7});
  const PolyT b = P({1, 0, 3});
  auto [q, r] = PolyT::divmod(a, b);
  EXPECT_EQ(q * b + r, a);
  EXPECT_LT(r.degree(), b.degree());
  EXPECT_THROW(PolyT::divmod(a, PolyT{}), Error);
}

TEST(PolyT, GcdOfKnownFactors) {
  const PolyT f = P({1, 1});        // 1+t
  const PolyT g = P({1, -1, 1});    // 1-t+t^2
  const PolyT h = P({2, 0, 0, 5});
  EXPECT_EQ(PolyT::gcd(f * g * h, f * f * h), (f * h).monic());
  EXPECT_EQ(PolyT::gcd(f, g), PolyT(1));
  EXPECT_EQ(PolyT::gcd(PolyT{}, P({2, 4})), P({1, 2}).monic());
}

TEST(RationalFunctionT, NormalizeExamples) {
  auto a = ratfunc_normalize(t * t - PolyT(1), t - PolyT(1));
  EXPECT_EQ(a.num(), t + PolyT(1));
  EXPECT_EQ(a.den(), PolyT(1));

  auto b = ratfunc_normalize(PolyT{}, PolyT(7) * t + PolyT(3));
  EXPECT_TRUE(b.num().is_zero());
  EXPECT_EQ(b.den(), PolyT(1));

  // (1-t)^2 / ((1-t)(1-t^2)) = (1-t)/(1-t^2) = 1/(1+t)
  const PolyT omt = PolyT(1) - t;
  auto c = ratfunc_normalize(omt * omt, omt * (PolyT(1) - t * t));
  EXPECT_EQ(c.num(), PolyT(1));
  EXPECT_EQ(c.den(), t + PolyT(1));
  EXPECT_EQ(c.den().leading(), 1);

  EXPECT_THROW(ratfunc_normalize(t, PolyT{}), Error);
}

TEST(RationalFunctionT, Evaluation) {
  const PolyT omt = PolyT(1) - t;
  EXPECT_EQ(ratfunc_eval({PolyT(2) + t, PolyT(1) - t * t}, 0), 2);
  EXPECT_EQ(ratfunc_eval({PolyT(1), omt}, make_rational(1, 2)), 2);
  // (1-t)^2(1+t^2)/((1-t^2)(1-t^3)) at 1/3: (4/9)(10/9) / ((8/9)(26/27)) = 15/26
  RationalFunctionT f(omt * omt * (PolyT(1) + t * t), (PolyT(1) - t * t) * (PolyT(1) - t * t * t));
  EXPECT_EQ(ratfunc_eval(f, make_rational(1, 3)), make_rational(15, 26));
  EXPECT_THROW(ratfunc_eval({PolyT(1), omt}, 1), Error);
}

TEST(RationalFunctionT, CanonicalFormIgnoresCommonFactor) {
  const PolyT a = P({1, 2, 3});
  const PolyT b = P({-4, 0, 1, 1});
  for (const PolyT& c : {P({1, 1}), P({-3, 0, 2}), P({5})}) {
    EXPECT_EQ(ratfunc_normalize(a * c, b * c), ratfunc_normalize(a, b));
  }
}

TEST(RationalFunctionT, FieldAxiomsOnRandomTriples) {
  auto rnd_poly = [](std::uint64_t seed) {
    std::vector<Rational> v;
    for (int k = 0; k < 3; ++k) v.push_back(random_point(seed * 7 + static_cast<std::uint64_t>(k), {}, 20));
    return PolyT(v);
  };
  for (std::uint64_t s = 1; s <= 20; ++s) {
    RationalFunctionT f(rnd_poly(s), rnd_poly(s + 100));
    RationalFunctionT g(rnd_poly(s + 200), rnd_poly(s + 300));
    RationalFunctionT h(rnd_poly(s + 400), rnd_poly(s + 500));
    EXPECT_EQ((f + g) + h, f + (g + h));
    EXPECT_EQ((f * g) * h, f * (g * h));
    EXPECT_EQ(f * (g + h), f * g + f * h);
    EXPECT_EQ(f + g, g + f);
    EXPECT_EQ(f * g, g * f);
    EXPECT_TRUE((f - f).is_zero());
    EXPECT_EQ(f / f, RationalFunctionT(1));
    // evaluation is a ring homomorphism
    const Rational t0 = random_point(s + 1000, {}, 50);
    EXPECT_EQ((f * g)(t0), f(t0) * g(t0));
    EXPECT_EQ((f + g)(t0), f(t0) + g(t0));
  }
}

TEST(RandomPoint, DeterministicAndAvoiding) {
  const Rational r1 = random_point(1);
  EXPECT_EQ(r1, random_point(1));
  EXPECT_NE(r1, 0);
  EXPECT_NE(r1, 1);
  EXPECT_NE(r1, -1);
  EXPECT_LE(abs(r1.get_num()), kRandomPointBound);
  EXPECT_LE(r1.get_den(), kRandomPointBound);
  EXPECT_NE(random_point(1, {r1}), r1);

  std::set<Rational> seen;
  for (std::uint64_t s = 0; s < 1000; ++s) seen.insert(random_point(s));
  EXPECT_EQ(seen.size(), 1000u);

  for (std::uint64_t s = 0; s < 100; ++s) {
    const Rational u = random_unit_point(s);
    EXPECT_GT(u, 0);
    EXPECT_LT(u, 1);
  }
}

TEST(Power, Basics) {
  EXPECT_EQ(power(Rational(2), 10), 1024);
  EXPECT_EQ(power(t + PolyT(1), 2), P({1, 2, 1}));
  EXPECT_THROW(power(Rational(2), -1), Error);
}
