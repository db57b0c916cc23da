#include <gtest/gtest.h>

#include "gen.hpp"
#include "psg/singular.hpp"

TEST(SingularSeries, MatchesHighPrecisionReference) {
  const psg::PrimeTable table(100'000);
  const std::pair<std::uint64_t, double> cases[] = {
      {3, 1.5339743623569910769},      {15, 1.4159763344833763786},     {101, 2.3007291466519864146},
      {100001, 2.2756762243040630217}, {999999, 1.4559837503023367916}, {30031, 2.3002568272756893132},
  };
  for (const auto& [n, want] : cases) {
    EXPECT_NEAR(psg::singular_series(n, 10'000, table).value, want, want * 1e-12) << n;
  }
}

TEST(SingularSeries, EvenIsExactlyZero) {
  const psg::PrimeTable table(100'000);
  gen::Gen g(41);
  for (int i = 0; i < 200; ++i) {
    const std::uint64_t n = 2 * g.uint(2, 5'000'000'000ull);
    ASSERT_EQ(psg::singular_series(n, 1000, table).value, 0.0);
  }
}

TEST(SingularSeries, OddIsPositiveAndBounded) {
  const psg::PrimeTable table(100'000);
  const psg::SingularSeries s(1000, table);
  // the product over p = 3, 5, ... of (1 - 1/(p-1)^2) is Hardy-Littlewood's 2 C_2 = 1.3203...
  for (std::uint64_t n = 3; n <= 100'001; n += 2) {
    const double v = s(n).value;
    ASSERT_GT(v, 1.3203 * 0.99) << n;
    ASSERT_LT(v, 2.31) << n;
  }
}

TEST(SingularSeries, BatchAgreesWithDirect) {
  const psg::PrimeTable table(100'000);
  const psg::SingularSeries batch(10'000, table);
  gen::Gen g(42);
  for (int i = 0; i < 300; ++i) {
    const std::uint64_t n = g.uint(3, 9'000'000'000ull) | 1;
    ASSERT_NEAR(batch(n).value, psg::singular_series(n, 10'000, table).value, 1e-13) << n;
  }
}

TEST(SingularSeries, TailBoundCoversDoubling) {
  const psg::PrimeTable table(200'000);
  gen::Gen g(43);
  for (std::uint64_t P : {1000ull, 10'000ull, 100'000ull}) {
    for (int i = 0; i < 20; ++i) {
      const std::uint64_t n = g.uint(3, 10'000'000'000ull) | 1;
      const auto a = psg::singular_series(n, P, table);
      const auto b = psg::singular_series(n, 2 * P, table);
      ASSERT_LE(std::fabs(a.value - b.value), a.tail_bound) << n << " P=" << P;
    }
  }
}

TEST(SingularSeries, PrimeDivisorsAboveP) {
  // 100003 is prime, above P = 1000
  const psg::PrimeTable table(100'000);
  const auto with = psg::singular_series(3 * 100'003, 1000, table).value;
  const auto base = psg::singular_series(3, 1000, table).value;
  const double q = 100'002.0;
  EXPECT_NEAR(with, base * (1.0 - 1.0 / (q * q)) / 1.0, 1e-12);
}

TEST(SingularSeries, Errors) {
  const psg::PrimeTable table(1000);
  EXPECT_THROW(psg::singular_series(2, 100, table), psg::ConfigError);
  EXPECT_THROW(psg::singular_series(9, 50, table), psg::ConfigError);
  EXPECT_THROW(psg::singular_series(9, 5000, table), psg::RangeError);
  EXPECT_THROW(psg::singular_series(1'000'001ull * 1'000'003ull, 100, table), psg::RangeError);
}
