#include <gtest/gtest.h>

#include <cmath>

#include "gen.hpp"
#include "oracles.hpp"
#include "psg/expsum.hpp"

using psg::PsProfile;

TEST(PsiFourier, ErrorWithinEnvelope) {
  for (double H : {4.0, 16.0, 100.0}) {
    const double c = psg::psi_fourier_constant(H, 1e-3);
    EXPECT_LT(c, 1.0) << H;
    EXPECT_GT(c, 0.01) << H;
  }
  EXPECT_THROW(psg::psi_fourier_error(0.3, 1.0), psg::ConfigError);
  const auto at_int = psg::psi_fourier_error(3.0, 10.0);
  EXPECT_DOUBLE_EQ(at_int.envelope, 1.0);
  EXPECT_NEAR(at_int.error, -0.5, 1e-12);
}

TEST(PsiDiff, WeightsMatchMembershipMinusGap) {
  const psg::PrimeTable table(200'000);
  const auto prof = PsProfile::parse("g=599/600,299/300,199/200");
  const psg::PsiDiffSeries series(prof, 200'000, table);
  const auto& primes = series.primes();
  for (std::size_t i = 0; i < primes.size(); i += 7) {
    const std::uint64_t p = primes[i];
    double want = std::pow(static_cast<double>(p), prof.sigma_double());
    for (const auto& g : prof.gammas()) want *= (psg::is_ps_member(p, g) ? 1.0 : 0.0) - oracle::pow_gap(p, g);
    ASSERT_NEAR(series.weights()[i], want, 1e-12 * std::max(1.0, std::fabs(want))) << p;
  }
}

TEST(PsiDiff, BfWeightsMatchMembershipMinusGap) {
  const psg::PrimeTable table(100'000);
  const auto prof = PsProfile::parse("g=9/10");
  const psg::PsiDiffSeries series(prof, 100'000, table, psg::PsiDiffMode::kBalogFriedlander);
  const auto& g = prof.gammas()[0];
  for (std::size_t i = 0; i < series.primes().size(); i += 5) {
    const std::uint64_t p = series.primes()[i];
    // psi((p+1)^g) - psi(p^g) = D - (floor((p+1)^g) - floor(p^g))
    const double jump = static_cast<double>(oracle::floor_pow(p + 1, g) - oracle::floor_pow(p, g));
    const double want = std::pow(static_cast<double>(p), 0.1) * (oracle::pow_gap(p, g) - jump) / 0.9;
    ASSERT_NEAR(series.weights()[i], want, 1e-11) << p;
  }
  EXPECT_THROW(psg::PsiDiffSeries(PsProfile::parse("g=9/10,4/5"), 100, table, psg::PsiDiffMode::kBalogFriedlander),
               psg::ConfigError);
}

TEST(PsiDiff, TrivialProfilesVanishExactly) {
  const psg::PrimeTable table(100'000);
  for (std::size_t k = 1; k <= 4; ++k) {
    for (double a : {0.0, 0.1, 0.5, 0.7071}) {
      const auto s = psg::psi_diff_sum(100'000, a, PsProfile::trivial(k), table);
      ASSERT_EQ(s.real(), 0.0);
      ASSERT_EQ(s.imag(), 0.0);
    }
  }
  // any unit entry kills every weight
  const auto s = psg::psi_diff_sum(50'000, 0.3, PsProfile::parse("g=1,9/10,4/5"), table);
  EXPECT_EQ(std::abs(s), 0.0);
}

TEST(PsiDiff, SumMatchesDirectQuadOracle) {
  const psg::PrimeTable table(50'000);
  const auto prof = PsProfile::parse("g=19/20,9/10");
  const psg::PsiDiffSeries series(prof, 50'000, table);
  for (double a : {0.0, 0.123, 0.618}) {
    long double re = 0, im = 0;
    for (std::size_t i = 0; i < series.primes().size(); ++i) {
      const std::uint64_t p = series.primes()[i];
      long double w = powl(static_cast<long double>(p), prof.sigma_double());
      for (const auto& g : prof.gammas()) w *= (psg::is_ps_member(p, g) ? 1.0L : 0.0L) - oracle::pow_gap(p, g);
      const long double ang = 2.0L * 3.14159265358979323846264338327950288L * fmodl(a * static_cast<long double>(p), 1.0L);
      re += w * cosl(ang);
      im += w * sinl(ang);
    }
    const auto s = series.sum(a, 50'000);
    EXPECT_NEAR(s.real(), static_cast<double>(re), 1e-9);
    EXPECT_NEAR(s.imag(), static_cast<double>(im), 1e-9);
  }
}

TEST(PsiDiff, PrefixSumsAndWorkerIndependence) {
  const psg::PrimeTable table(100'000);
  const auto prof = PsProfile::parse("g=49/50,24/25");
  const psg::PsiDiffSeries series(prof, 100'000, table, psg::PsiDiffMode::kStandard, 1);
  const psg::PsiDiffSeries again(prof, 100'000, table, psg::PsiDiffMode::kStandard, 4);
  EXPECT_EQ(series.weights(), again.weights());
  const auto a = series.sum(0.3, 60'000, 1), b = series.sum(0.3, 60'000, 5);
  EXPECT_EQ(a, b);
  EXPECT_EQ(series.prime_count(60'000), table.count(60'000));
  EXPECT_THROW(series.sum(0.3, 100'001), psg::RangeError);
  EXPECT_THROW(psg::PsiDiffSeries(prof, 100'001, table), psg::RangeError);
}

TEST(DecayCondition, ConstantsAndSupremum) {
  const auto p3 = PsProfile::parse("g=599/600,299/300,199/200");
  const auto c = psg::decay_condition(p3);
  EXPECT_EQ(c.omega, 12);
  EXPECT_EQ(c.omega_star, 52);
  EXPECT_EQ(c.rhs, 1 - mpq_class(1, 24));
  const mpq_class sup = psg::max_admissible_delta(p3);
  EXPECT_EQ(sup, (1 - mpq_class(1, 24) - mpq_class(12, 100)) / 52);
  EXPECT_FALSE(psg::decay_admissible(p3, sup));
  EXPECT_TRUE(psg::decay_admissible(p3, sup - mpq_class(1, 1'000'000)));
  EXPECT_FALSE(psg::decay_admissible(p3, -mpq_class(1, 10)));

  const auto p1 = PsProfile::parse("g=49/50");
  EXPECT_EQ(psg::max_admissible_delta(p1), mpq_class(1, 50));  // cap delta <= 1 - gamma binds
  EXPECT_TRUE(psg::decay_admissible(p1, mpq_class(1, 50)));
  EXPECT_FALSE(psg::decay_admissible(p1, mpq_class(1, 50) + mpq_class(1, 1'000'000)));
  EXPECT_EQ(psg::max_admissible_delta(PsProfile::parse("g=19/20")), mpq_class(11, 240));
  const auto p1b = PsProfile::parse("g=9/10");  // 9 * 1/10 = 0.9: sup = 0.1 / 12
  EXPECT_EQ(psg::max_admissible_delta(p1b), mpq_class(1, 120));

  const auto p2 = PsProfile::parse("g=49/50,24/25");
  EXPECT_EQ(psg::decay_condition(p2).omega_star, 38);
  const auto p4 = PsProfile::parse("g=999/1000,998/1000,997/1000,996/1000");
  EXPECT_EQ(psg::decay_condition(p4).omega, 16);
  EXPECT_EQ(psg::decay_condition(p4).omega_star, 80);
  EXPECT_EQ(psg::decay_condition(p4).rhs, 1 - mpq_class(1, 64));
  EXPECT_THROW(psg::max_admissible_delta(PsProfile::parse("g=3/5,4/7,5/9")), psg::ConfigError);
}

TEST(DecayScan, RejectsInadmissibleAndReportsRows) {
  const psg::PrimeTable table(1 << 16);
  const auto prof = PsProfile::parse("g=599/600,299/300,199/200");
  const auto alphas = psg::golden_alpha_grid(16, 7);
  EXPECT_THROW(psg::scan_decay(prof, {1 << 14}, alphas, 0.5, table), psg::ConfigError);
  const double delta = psg::max_admissible_delta(prof).get_d() * 0.5;
  const auto scan = psg::scan_decay(prof, {1 << 16, 1 << 14, 1 << 15}, alphas, delta, table);
  ASSERT_EQ(scan.rows.size(), 3u);
  EXPECT_EQ(scan.rows[0].N, 1u << 14);
  for (const auto& r : scan.rows) {
    EXPECT_EQ(r.prime_count, table.count(r.N));
    EXPECT_DOUBLE_EQ(r.ratio, r.max_abs / std::pow(static_cast<double>(r.N), 1.0 - delta));
  }
}

TEST(AlphaGrid, SeededAndInUnitInterval) {
  const auto a = psg::golden_alpha_grid(128, 20240517), b = psg::golden_alpha_grid(128, 20240517);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, psg::golden_alpha_grid(128, 1));
  for (double x : a) {
    EXPECT_GE(x, 0.0);
    EXPECT_LT(x, 1.0);
  }
}
