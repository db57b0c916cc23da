#pragma once

// Phases mod 1 as unsigned 64-bit "turns" (units of 2^-64). Wraparound of the
// integer type is reduction mod 1, so phases are accumulated exactly and only
// converted to floating point inside e().

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

#include <gmpxx.h>

#include "psg/exact_arith.hpp"

namespace psg {

using Turns = std::uint64_t;

namespace detail {

struct SplitDouble {
  std::int64_t mant = 0;  // |mant| < 2^53
  int exp = 0;            // value = mant * 2^exp
};

inline SplitDouble split_double(double a) {
  if (!std::isfinite(a)) throw ConfigError("phase coefficient must be finite");
  int e = 0;
  const double m = std::frexp(a, &e);
  return {static_cast<std::int64_t>(std::ldexp(m, 53)), e - 53};
}

inline Turns negate_if(Turns t, bool negative) { return negative ? Turns{0} - t : t; }

}  // namespace detail

/// e(t) = exp(2 pi i t) for a phase in turns.
inline std::complex<double> e_turns(Turns t) {
  const double x = std::ldexp(static_cast<double>(static_cast<std::int64_t>(t)), -64);  // [-1/2, 1/2)
  const double a = 2.0 * std::numbers::pi * x;
  return {std::cos(a), std::sin(a)};
}

/// Signed representative of a phase in [-1/2, 1/2).
inline double turns_to_signed(Turns t) { return std::ldexp(static_cast<double>(static_cast<std::int64_t>(t)), -64); }

/// x mod 1 in turns (rounded down to a multiple of 2^-64).
inline Turns turns_of(double x) {
  if (!std::isfinite(x)) throw ConfigError("phase must be finite");
  const double f = x - std::floor(x);
  const double scaled = std::ldexp(f, 64);
  if (scaled >= 0x1p64) return 0;
  return static_cast<Turns>(scaled);
}

/// a * m mod 1, exact up to the final truncation to 2^-64.
inline Turns mul_turns(double a, std::uint64_t m) {
  if (a == 0.0 || m == 0) return 0;
  const auto [mant, e] = detail::split_double(a);
  const bool neg = mant < 0;
  const unsigned __int128 p = static_cast<unsigned __int128>(neg ? -mant : mant) * m;
  const int s = e + 64;
  Turns r = 0;
  if (s >= 128 || s <= -128) {
    r = 0;
  } else if (s >= 0) {
    r = static_cast<Turns>(p << s);
  } else {
    r = static_cast<Turns>(p >> -s);
  }
  return detail::negate_if(r, neg);
}

/// a * t mod 1 for a certified non-negative real t. The error is at most
/// |a| * t.err_ulp * 2^-t.bits plus one turn.
inline Turns mul_turns(double a, const CertifiedFrac& t) {
  if (a == 0.0) return 0;
  const auto [mant, e] = detail::split_double(a);
  const bool neg = mant < 0;
  mpz_class p = t.scaled();
  p *= static_cast<unsigned long>(neg ? -mant : mant);
  const long s = static_cast<long>(e) + 64 - static_cast<long>(t.bits);
  if (s >= 64) return 0;
  if (s >= 0) {
    mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), static_cast<mp_bitcnt_t>(s));
  } else {
    mpz_fdiv_q_2exp(p.get_mpz_t(), p.get_mpz_t(), static_cast<mp_bitcnt_t>(-s));
  }
  mpz_fdiv_r_2exp(p.get_mpz_t(), p.get_mpz_t(), 64);
  return detail::negate_if(detail::to_u64(p), neg);
}

/// Fractional bits needed so that |a| * 2^-bits stays below 2^-96.
inline unsigned phase_bits_for(double a) {
  int e = 0;
  std::frexp(a, &e);
  return kMinFracBits + static_cast<unsigned>(std::max(0, e));
}

/// a * m^g mod 1 through a certified fixed-point power.
inline Turns power_phase(double a, std::uint64_t m, const RationalExponent& g) {
  if (a == 0.0) return 0;
  if (g.is_one()) return mul_turns(a, m);
  return mul_turns(a, frac_pow(m, g, phase_bits_for(a)));
}

}  // namespace psg
