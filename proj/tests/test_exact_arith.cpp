#include <gtest/gtest.h>

#include <cmath>
#include <string>

#include "gen.hpp"
#include "oracles.hpp"
#include "psg/exact_arith.hpp"

using psg::RationalExponent;

TEST(RationalExponent, ReducesAndOrders) {
  const RationalExponent g(18, 20);
  EXPECT_EQ(g.num(), 9u);
  EXPECT_EQ(g.den(), 10u);
  EXPECT_EQ(g.to_string(), "9/10");
  EXPECT_TRUE(RationalExponent(7, 7).is_one());
  EXPECT_EQ(RationalExponent(7, 7).to_string(), "1");
  EXPECT_LT(RationalExponent(2, 3), RationalExponent(7, 10));
  EXPECT_EQ(RationalExponent::parse(" 49/50 "), RationalExponent(49, 50));
  EXPECT_EQ(RationalExponent::parse("1"), RationalExponent(1, 1));
}

TEST(RationalExponent, RejectsOutOfRangeAndDecimals) {
  EXPECT_THROW(RationalExponent(1, 2), psg::ConfigError);
  EXPECT_THROW(RationalExponent(11, 10), psg::ConfigError);
  EXPECT_THROW(RationalExponent(0, 3), psg::ConfigError);
  EXPECT_THROW(RationalExponent::parse("0.9"), psg::ConfigError);
  EXPECT_THROW(RationalExponent::parse("9/"), psg::ConfigError);
  EXPECT_THROW(RationalExponent::parse(""), psg::ConfigError);
}

TEST(IntegerRoot, SmallCasesAndExactness) {
  EXPECT_EQ(psg::integer_root(mpz_class(0), 3).root, 0);
  EXPECT_EQ(psg::integer_root(mpz_class(1), 5).root, 1);
  auto r = psg::integer_root(mpz_class(1000), 3);
  EXPECT_EQ(r.root, 10);
  EXPECT_TRUE(r.exact);
  r = psg::integer_root(mpz_class(999), 3);
  EXPECT_EQ(r.root, 9);
  EXPECT_FALSE(r.exact);
  mpz_class big;
  mpz_ui_pow_ui(big.get_mpz_t(), 3, 400);
  r = psg::integer_root(big, 100);
  EXPECT_EQ(r.root, 81);
  EXPECT_TRUE(r.exact);
  EXPECT_THROW(psg::integer_root(mpz_class(-8), 3), psg::ConfigError);
}

TEST(IntegerRoot, PropertyMatchesGmpRoot) {
  gen::Gen g(11);
  gmp_randclass rc(gmp_randinit_default);
  rc.seed(11);
  for (int i = 0; i < 3000; ++i) {
    mpz_class x = rc.get_z_bits(g.uint(1, 900));
    x += g.uint(0, 5);
    const auto k = static_cast<unsigned>(g.uint(1, 40));
    mpz_class want;
    const int exact = mpz_root(want.get_mpz_t(), x.get_mpz_t(), k);
    const auto got = psg::integer_root(x, k);
    ASSERT_EQ(got.root, want) << "k=" << k;
    ASSERT_EQ(got.exact, exact != 0);
  }
}

TEST(FloorPow, PropertyAgreesWithRootOracle) {
  gen::Gen g(12);
  for (int i = 0; i < 20000; ++i) {
    const auto e = g.exponent();
    const std::uint64_t n = g.uint(1, i % 2 ? 1'000'000'000'000ull : 100'000);
    const std::uint64_t want = oracle::floor_pow(n, e);
    ASSERT_EQ(psg::floor_pow(n, e), want) << n << "^" << e.to_string();
    ASSERT_EQ(psg::floor_pow_exact(n, e), want);
    const std::uint64_t c = psg::ceil_pow(n, e);
    ASSERT_TRUE(c == want || c == want + 1);
  }
}

TEST(FloorPow, PerfectPowersAreExact) {
  const RationalExponent two_thirds(2, 3);
  for (std::uint64_t b = 1; b < 3000; ++b) {
    const std::uint64_t n = b * b * b;  // n^(2/3) = b^2 exactly
    ASSERT_EQ(psg::floor_pow(n, two_thirds), b * b);
    ASSERT_EQ(psg::ceil_pow(n, two_thirds), b * b);
    if (n > 1) ASSERT_EQ(psg::ceil_pow(n - 1, two_thirds), b * b);
  }
  EXPECT_THROW(psg::floor_pow(0, two_thirds), psg::ConfigError);
}

TEST(PsMembership, MatchesForwardEnumerationSmall) {
  for (const auto* text : {"2/3", "7/10", "9/10", "19/20", "599/600", "51/100"}) {
    const auto e = RationalExponent::parse(text);
    const auto set = oracle::ps_set(e, 50'000);
    for (std::uint64_t m = 1; m <= 50'000; ++m) {
      ASSERT_EQ(psg::is_ps_member(m, e), set[m] == 1) << "m=" << m << " g=" << text;
    }
  }
}

TEST(PsMembership, GammaOneIsEverything) {
  for (std::uint64_t m = 1; m < 100; ++m) EXPECT_TRUE(psg::is_ps_member(m, RationalExponent(1, 1)));
}

TEST(FracPow, MatchesHighPrecisionReference) {
  struct Case {
    std::uint64_t n;
    RationalExponent g;
    double frac;
  };
  const Case cases[] = {
      {2, {2, 3}, 0.587401051968199474751705639272},
      {1000003, {9, 10}, 0.321360192787406561426018520394},
      {123456789, {599, 600}, 0.387640696933938902390190044641},
      {999999937, {19, 20}, 0.997994079357686158184683201493},
      {1099511627791ull, {7, 10}, 0.00256347656249475419620867714705},
  };
  for (const auto& c : cases) {
    const auto f = psg::frac_pow(c.n, c.g);
    EXPECT_NEAR(f.frac_double(), c.frac, 1e-16) << c.n;
    EXPECT_EQ(f.int_part, psg::floor_pow(c.n, c.g));
    EXPECT_EQ(f.err_ulp, 1u);
  }
}

TEST(FracPow, ExactPowerHasZeroError) {
  const auto f = psg::frac_pow(27, RationalExponent(2, 3));
  EXPECT_EQ(f.int_part, 9u);
  EXPECT_EQ(f.frac, 0);
  EXPECT_TRUE(f.exact());
  EXPECT_DOUBLE_EQ(psg::psi_neg(f), -0.5);
  EXPECT_DOUBLE_EQ(psg::psi(f), -0.5);
}

TEST(FracPow, MoreBitsRefinesSameValue) {
  gen::Gen g(13);
  for (int i = 0; i < 300; ++i) {
    const auto e = g.exponent(200);
    const std::uint64_t n = g.uint(2, 1'000'000'000);
    const auto lo = psg::frac_pow(n, e, 96);
    const auto hi = psg::frac_pow(n, e, 192);
    mpz_class top;
    mpz_fdiv_q_2exp(top.get_mpz_t(), hi.scaled().get_mpz_t(), 96);
    ASSERT_EQ(top, lo.scaled());
  }
  EXPECT_THROW(psg::frac_pow(5, RationalExponent(2, 3), 64), psg::ConfigError);
  EXPECT_THROW(psg::frac_pow(5, RationalExponent(2, 3), psg::kMaxFracBits * 2), psg::CapacityError);
}

TEST(Psi, DifferenceIsMembershipMinusGap) {
  gen::Gen g(14);
  for (int i = 0; i < 4000; ++i) {
    const auto e = g.exponent(1000);
    const std::uint64_t p = g.uint(2, 50'000'000);
    const double lhs = psg::psi_neg_pow(p + 1, e) - psg::psi_neg_pow(p, e);
    const double member = psg::is_ps_member(p, e) ? 1.0 : 0.0;
    ASSERT_NEAR(lhs, member - oracle::pow_gap(p, e), 1e-12) << p << " " << e.to_string();
  }
}

TEST(Psi, RangeAndSign) {
  gen::Gen g(15);
  for (int i = 0; i < 2000; ++i) {
    const auto e = g.exponent();
    const std::uint64_t n = g.uint(2, 1ull << 40);
    const double a = psg::psi_pow(n, e);
    const double b = psg::psi_neg_pow(n, e);
    ASSERT_GE(a, -0.5);
    ASSERT_LT(a, 0.5);
    ASSERT_NEAR(a + b, 0.0, 1e-15);  // psi(-t) = -psi(t) off the integers
  }
}

TEST(CertifiedFrac, FromDoubleRoundTrip) {
  for (double v : {0.0, 0.5, 1.25, 3.0e9 + 0.125, 12345.678}) {
    const auto c = psg::CertifiedFrac::from_double(v);
    EXPECT_DOUBLE_EQ(c.to_double(), v);
    EXPECT_TRUE(c.exact());
  }
  const auto tiny = psg::CertifiedFrac::from_double(1e-40);
  EXPECT_FALSE(tiny.exact());
  EXPECT_TRUE(tiny.floor_ambiguous());
  EXPECT_THROW(psg::CertifiedFrac::from_double(-1.0), psg::ConfigError);
}
