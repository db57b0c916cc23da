#pragma once

// Sums of psi-differences over primes,
//
//   standard:  sum_{p <= N} p^sigma e(alpha p) prod_j (psi(-(p+1)^g_j) - psi(-p^g_j))
//   bf (k=1):  (1/g) sum_{p <= N} e(alpha p) p^(1-g) (psi((p+1)^g) - psi(p^g))
//
// with psi(t) = t - floor(t) - 1/2 evaluated on certified fixed-point powers,
// plus the truncated Fourier expansion of psi and the decay scan.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "psg/errors.hpp"
#include "psg/exact_arith.hpp"
#include "psg/expsum/phase.hpp"
#include "psg/expsum/sums.hpp"
#include "psg/parallel.hpp"
#include "psg/psets.hpp"
#include "psg/sieve.hpp"

namespace psg {

struct PsiFourierError {
  double error = 0.0;     // psi(theta) + sum_{h <= H} sin(2 pi h theta) / (pi h)
  double envelope = 0.0;  // min(1, 1 / (H ||theta||))
};

inline double dist_to_int(double x) { return std::fabs(x - std::nearbyint(x)); }

inline PsiFourierError psi_fourier_error(double theta, double H) {
  if (!(H > 1.0)) throw ConfigError("H must exceed 1");
  if (!std::isfinite(theta)) throw ConfigError("theta must be finite");
  const double frac = theta - std::floor(theta);
  double series = 0.0;
  const auto hmax = static_cast<std::uint64_t>(std::floor(H));
  for (std::uint64_t h = hmax; h >= 1; --h) {  // small terms first
    const double hf = static_cast<double>(h);
    const double x = std::fmod(hf * frac, 1.0);
    series += std::sin(2.0 * std::numbers::pi * x) / (std::numbers::pi * hf);
  }
  const double psi = frac - 0.5;
  const double d = dist_to_int(theta);
  return {psi + series, d == 0.0 ? 1.0 : std::min(1.0, 1.0 / (H * d))};
}

/// max |error| / envelope over theta = step, 2 step, ... < 1.
inline double psi_fourier_constant(double H, double step = 1e-4) {
  if (!(step > 0.0 && step < 1.0)) throw ConfigError("step must lie in (0, 1)");
  double worst = 0.0;
  const auto count = static_cast<std::uint64_t>(std::ceil(1.0 / step));
  for (std::uint64_t i = 1; i < count; ++i) {
    const auto r = psi_fourier_error(static_cast<double>(i) * step, H);
    worst = std::max(worst, std::fabs(r.error) / r.envelope);
  }
  return worst;
}

enum class PsiDiffMode { kStandard, kBalogFriedlander };

/// Per-prime weights for p <= N, computed once and reused across alpha.
class PsiDiffSeries {
 public:
  PsiDiffSeries(const PsProfile& profile, std::uint64_t N, const PrimeTable& table,
                PsiDiffMode mode = PsiDiffMode::kStandard, unsigned workers = 0)
      : N_(N) {
    if (N > table.limit()) throw RangeError("psi-difference sum: N above sieve limit");
    if (mode == PsiDiffMode::kBalogFriedlander && profile.k() != 1) {
      throw ConfigError("the single-exponent psi-difference sum needs k = 1");
    }
    primes_ = N >= 2 ? table.primes_upto(N) : std::vector<std::uint32_t>{};
    weights_.assign(primes_.size(), 0.0);
    const auto& gs = profile.gammas();
    if (std::any_of(gs.begin(), gs.end(), [](const RationalExponent& g) { return g.is_one(); })) return;

    const double sigma = profile.sigma_double();
    const ChunkLayout layout{primes_.size(), 1024};
    parallel_chunks(layout.count(), workers, [&](std::size_t c) {
      for (std::size_t i = layout.begin(c); i < layout.end(c); ++i) {
        const std::uint64_t p = primes_[i];
        const double pd = static_cast<double>(p);
        if (mode == PsiDiffMode::kStandard) {
          double w = std::pow(pd, sigma);
          for (const auto& g : gs) w *= psi_neg_pow(p + 1, g) - psi_neg_pow(p, g);
          weights_[i] = w;
        } else {
          const auto& g = gs[0];
          weights_[i] = std::pow(pd, 1.0 - g.value()) * (psi_pow(p + 1, g) - psi_pow(p, g)) / g.value();
        }
      }
    });
  }

  std::uint64_t limit() const { return N_; }
  const std::vector<std::uint32_t>& primes() const { return primes_; }
  const std::vector<double>& weights() const { return weights_; }

  /// Number of primes <= N.
  std::size_t prime_count(std::uint64_t N) const {
    return static_cast<std::size_t>(std::upper_bound(primes_.begin(), primes_.end(), N) - primes_.begin());
  }

  Complex sum(double alpha, std::uint64_t N, unsigned workers = 0) const {
    if (N > N_) throw RangeError("psi-difference sum: N above the precomputed range");
    return chunked_reduce<Complex>(prime_count(N), kSumChunk, workers, [&](std::size_t lo, std::size_t hi) {
      Complex acc{};
      for (std::size_t i = lo; i < hi; ++i) {
        if (weights_[i] != 0.0) acc += weights_[i] * e_turns(mul_turns(alpha, primes_[i]));
      }
      return acc;
    });
  }

 private:
  std::uint64_t N_;
  std::vector<std::uint32_t> primes_;
  std::vector<double> weights_;
};

inline Complex psi_diff_sum(std::uint64_t N, double alpha, const PsProfile& profile, const PrimeTable& table,
                            PsiDiffMode mode = PsiDiffMode::kStandard, unsigned workers = 0) {
  return PsiDiffSeries(profile, N, table, mode, workers).sum(alpha, N, workers);
}

/// alpha_i = frac(x0 + i / phi) with x0 drawn from the seed.
inline std::vector<double> golden_alpha_grid(std::size_t size, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const double x0 = std::ldexp(static_cast<double>(rng() >> 11), -53);
  const double step = std::numbers::phi - 1.0;
  std::vector<double> out(size);
  for (std::size_t i = 0; i < size; ++i) {
    const double v = x0 + static_cast<double>(i) * step;
    out[i] = v - std::floor(v);
  }
  return out;
}

/// Omega sigma + Omega_* delta < rhs, the decay condition for k factors.
struct DecayCondition {
  mpq_class omega;
  mpq_class omega_star;
  mpq_class rhs;
  mpq_class delta_cap;  // delta < delta_cap (or <= for k = 1, where it is 1 - gamma)
  bool cap_inclusive = false;
};

inline DecayCondition decay_condition(const PsProfile& profile) {
  const std::size_t k = profile.k();
  DecayCondition c;
  c.delta_cap = mpq_class(1, 2);
  if (k == 1) {
    c.omega = 9;
    c.omega_star = 12;
    c.rhs = 1;
    c.delta_cap = profile.sigma();
    c.cap_inclusive = true;
  } else if (k == 2) {
    c.omega = 12;
    c.omega_star = 38;
    c.rhs = 1;
  } else if (k == 3) {
    c.omega = 12;
    c.omega_star = 52;
    c.rhs = 1 - mpq_class(1, 24);
  } else {
    c.omega = 4 * static_cast<long>(k);
    c.omega_star = 4 * static_cast<long>(k * (k + 1));
    c.rhs = 1 - varpi(k);
  }
  return c;
}

inline bool decay_admissible(const PsProfile& profile, const mpq_class& delta) {
  const auto c = decay_condition(profile);
  if (delta < 0) return false;
  if (c.cap_inclusive ? delta > c.delta_cap : delta >= c.delta_cap) return false;
  return c.omega * profile.sigma() + c.omega_star * delta < c.rhs;
}

/// Supremum of admissible delta (not itself admissible unless the cap binds
/// inclusively). Throws when no delta >= 0 is admissible.
inline mpq_class max_admissible_delta(const PsProfile& profile) {
  const auto c = decay_condition(profile);
  if (!(c.omega * profile.sigma() < c.rhs)) throw ConfigError("no admissible delta for this profile");
  mpq_class sup = (c.rhs - c.omega * profile.sigma()) / c.omega_star;
  if (c.delta_cap < sup) sup = c.delta_cap;
  return sup;
}

struct DecayRow {
  std::uint64_t N = 0;
  std::size_t prime_count = 0;
  double max_abs = 0.0;
  double argmax_alpha = 0.0;
  double ratio = 0.0;  // max_abs / N^(1 - delta)
};

struct DecayScan {
  std::vector<DecayRow> rows;
  double delta = 0.0;
  bool final_le_first = false;
  bool monotone = false;
};

/// max over the alpha grid of |psi_diff_sum| / N^(1-delta) for each N.
inline DecayScan scan_decay(const PsProfile& profile, std::vector<std::uint64_t> Ns, const std::vector<double>& alphas,
                            double delta, const PrimeTable& table, PsiDiffMode mode = PsiDiffMode::kStandard,
                            unsigned workers = 0) {
  if (Ns.empty() || alphas.empty()) throw ConfigError("scan_decay needs N values and alpha points");
  if (!std::isfinite(delta) || !decay_admissible(profile, mpq_class(delta))) {
    throw ConfigError("inadmissible (profile, delta) pair");
  }
  std::sort(Ns.begin(), Ns.end());
  Ns.erase(std::unique(Ns.begin(), Ns.end()), Ns.end());
  const PsiDiffSeries series(profile, Ns.back(), table, mode, workers);

  // moduli[a * Ns.size() + i] = |sum at alpha a up to Ns[i]|
  std::vector<double> moduli(alphas.size() * Ns.size());
  parallel_chunks(alphas.size(), workers, [&](std::size_t a) {
    for (std::size_t i = 0; i < Ns.size(); ++i) moduli[a * Ns.size() + i] = std::abs(series.sum(alphas[a], Ns[i], 1));
  });

  DecayScan out;
  out.delta = delta;
  for (std::size_t i = 0; i < Ns.size(); ++i) {
    DecayRow row;
    row.N = Ns[i];
    row.prime_count = series.prime_count(Ns[i]);
    for (std::size_t a = 0; a < alphas.size(); ++a) {
      const double v = moduli[a * Ns.size() + i];
      if (v > row.max_abs) {
        row.max_abs = v;
        row.argmax_alpha = alphas[a];
      }
    }
    row.ratio = row.max_abs / std::pow(static_cast<double>(row.N), 1.0 - delta);
    out.rows.push_back(row);
  }
  out.final_le_first = out.rows.back().ratio <= out.rows.front().ratio;
  out.monotone = true;
  for (std::size_t i = 1; i < out.rows.size(); ++i) out.monotone = out.monotone && out.rows[i].ratio <= out.rows[i - 1].ratio;
  return out;
}

}  // namespace psg
