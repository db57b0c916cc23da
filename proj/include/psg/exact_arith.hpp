#pragma once

// Exact arithmetic for powers n^(u/v) with rational exponents.
//
// Every floor or fractional-part decision about n^gamma goes through an integer
// v-th root of a big integer, so no decision ever rests on a rounded float. The
// only floating shortcut (in floor_pow) is a filter that is taken when the
// double estimate sits at least 1e-11 relative away from an integer, which is
// four orders of magnitude wider than the error of a correctly rounded pow.

#include <gmpxx.h>

#include <cmath>
#include <compare>
#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>

#include "psg/errors.hpp"

namespace psg {

/// An exponent gamma = num/den in lowest terms with 1/2 < gamma <= 1.
class RationalExponent {
 public:
  RationalExponent(std::uint32_t num, std::uint32_t den) {
    if (num == 0 || den == 0) throw ConfigError("exponent terms must be positive");
    const std::uint32_t g = std::gcd(num, den);
    num_ = num / g;
    den_ = den / g;
    // 1/2 < num/den <= 1
    if (!(2ull * num_ > den_ && num_ <= den_)) {
      throw ConfigError("exponent " + std::to_string(num) + "/" + std::to_string(den) +
                        " outside (1/2, 1]");
    }
  }

  /// Parses "u/v" or "1". Decimal literals are rejected: exponents are exact.
  static RationalExponent parse(std::string_view text) {
    auto trim = [](std::string_view s) {
      while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
      while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
      return s;
    };
    text = trim(text);
    auto parse_uint = [&](std::string_view s) -> std::uint32_t {
      s = trim(s);
      if (s.empty() || s.size() > 9) throw ConfigError("bad exponent literal '" + std::string(text) + "'");
      std::uint32_t v = 0;
      for (char c : s) {
        if (c < '0' || c > '9') throw ConfigError("bad exponent literal '" + std::string(text) + "'");
        v = v * 10 + static_cast<std::uint32_t>(c - '0');
      }
      return v;
    };
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) return RationalExponent(parse_uint(text), 1);
    return RationalExponent(parse_uint(text.substr(0, slash)), parse_uint(text.substr(slash + 1)));
  }

  std::uint32_t num() const { return num_; }
  std::uint32_t den() const { return den_; }
  bool is_one() const { return num_ == den_; }
  double value() const { return static_cast<double>(num_) / den_; }
  long double value_ld() const { return static_cast<long double>(num_) / den_; }
  mpq_class exact() const { return mpq_class(num_, den_); }

  std::string to_string() const {
    return is_one() ? std::string("1") : std::to_string(num_) + "/" + std::to_string(den_);
  }

  friend bool operator==(const RationalExponent& a, const RationalExponent& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const RationalExponent& a, const RationalExponent& b) {
    return static_cast<std::uint64_t>(a.num_) * b.den_ <=> static_cast<std::uint64_t>(b.num_) * a.den_;
  }

 private:
  std::uint32_t num_ = 1;
  std::uint32_t den_ = 1;
};

struct RootResult {
  mpz_class root;
  bool exact = false;  // root^k == x
};

/// floor(x^(1/k)) by integer Newton iteration.
///
/// The start value comes from a long double estimate; one unconditional step
/// lifts any positive start to at least the floor root, after which the
/// iteration decreases strictly until it stops at the floor root.
inline RootResult integer_root(const mpz_class& x, unsigned k) {
  if (k == 0) throw ConfigError("root degree must be positive");
  if (sgn(x) < 0) throw ConfigError("integer_root of a negative number");
  if (k == 1 || x < 2) return {x, true};

  signed long exp2 = 0;
  const double mant = mpz_get_d_2exp(&exp2, x.get_mpz_t());  // x ~ mant * 2^exp2
  const long q = exp2 / static_cast<long>(k);
  const long r = exp2 % static_cast<long>(k);
  const long double t = std::pow(std::ldexp(static_cast<long double>(mant), static_cast<int>(r)),
                                 1.0L / static_cast<long double>(k));
  mpz_class y(static_cast<unsigned long>(std::ldexp(t, 62)));
  if (q >= 62) {
    mpz_mul_2exp(y.get_mpz_t(), y.get_mpz_t(), static_cast<mp_bitcnt_t>(q - 62));
  } else {
    mpz_fdiv_q_2exp(y.get_mpz_t(), y.get_mpz_t(), static_cast<mp_bitcnt_t>(62 - q));
  }
  if (y == 0) y = 1;

  mpz_class power;
  mpz_class next;
  auto step = [&](const mpz_class& cur) {
    mpz_pow_ui(power.get_mpz_t(), cur.get_mpz_t(), k - 1);
    mpz_fdiv_q(next.get_mpz_t(), x.get_mpz_t(), power.get_mpz_t());
    mpz_addmul_ui(next.get_mpz_t(), cur.get_mpz_t(), k - 1);
    mpz_fdiv_q_ui(next.get_mpz_t(), next.get_mpz_t(), k);
  };
  step(y);
  y = next;
  for (;;) {
    step(y);
    if (next >= y) break;
    y.swap(next);
  }
  // power == y^(k-1) from the final step
  mpz_class full = power * y;
  return {std::move(y), full == x};
}

namespace detail {

inline mpz_class pow_mpz(std::uint64_t n, std::uint32_t e) {
  mpz_class out;
  mpz_ui_pow_ui(out.get_mpz_t(), static_cast<unsigned long>(n), e);
  return out;
}

inline std::uint64_t to_u64(const mpz_class& v) {
  return static_cast<std::uint64_t>(mpz_get_ui(v.get_mpz_t()));
}

/// Double filter for floor(n^gamma). Returns false when undecided.
inline bool floor_pow_filter(std::uint64_t n, const RationalExponent& g, std::uint64_t& out) {
  if (n >= (1ull << 53)) return false;
  const double y = std::pow(static_cast<double>(n), g.value());
  const double fl = std::floor(y);
  const double margin = 1e-11 * y + 1e-11;
  if (y - fl > margin && (fl + 1.0) - y > margin) {
    out = static_cast<std::uint64_t>(fl);
    return true;
  }
  return false;
}

}  // namespace detail

/// floor(n^gamma) computed exactly as the integer den-th root of n^num.
inline std::uint64_t floor_pow_exact(std::uint64_t n, const RationalExponent& g) {
  if (n == 0) throw ConfigError("floor_pow requires n >= 1");
  if (g.is_one()) return n;
  return detail::to_u64(integer_root(detail::pow_mpz(n, g.num()), g.den()).root);
}

/// floor(n^gamma): r with r^den <= n^num < (r+1)^den.
inline std::uint64_t floor_pow(std::uint64_t n, const RationalExponent& g) {
  if (n == 0) throw ConfigError("floor_pow requires n >= 1");
  if (g.is_one()) return n;
  std::uint64_t r = 0;
  if (detail::floor_pow_filter(n, g, r)) return r;
  return floor_pow_exact(n, g);
}

/// ceil(n^gamma), exact.
inline std::uint64_t ceil_pow(std::uint64_t n, const RationalExponent& g) {
  if (n == 0) throw ConfigError("ceil_pow requires n >= 1");
  if (g.is_one()) return n;
  std::uint64_t r = 0;
  if (detail::floor_pow_filter(n, g, r)) return r + 1;
  const RootResult root = integer_root(detail::pow_mpz(n, g.num()), g.den());
  return detail::to_u64(root.root) + (root.exact ? 0 : 1);
}

/// Membership of m in the Piatetski-Shapiro set {floor(k^(1/gamma)) : k >= 1}.
///
/// m = floor(k^(1/gamma)) iff m^gamma <= k < (m+1)^gamma, so m is a member iff
/// the half-open interval [m^gamma, (m+1)^gamma) holds an integer, i.e.
/// ceil((m+1)^gamma) - ceil(m^gamma) = 1. This is the same count as
/// floor(-m^gamma) - floor(-(m+1)^gamma).
inline bool is_ps_member(std::uint64_t m, const RationalExponent& g) {
  if (m == 0) throw ConfigError("is_ps_member requires m >= 1");
  if (g.is_one()) return true;
  return ceil_pow(m + 1, g) > ceil_pow(m, g);
}

/// A non-negative real carried as int_part + frac / 2^bits, certified to lie
/// within err_ulp * 2^-bits of that value. err_ulp == 0 means exact.
struct CertifiedFrac {
  std::uint64_t int_part = 0;
  mpz_class frac;  // 0 <= frac < 2^bits
  unsigned bits = 96;
  std::uint32_t err_ulp = 0;

  bool exact() const { return err_ulp == 0; }

  /// Fractional part as a double (truncated to 64 bits first).
  double frac_double() const {
    return std::ldexp(static_cast<double>(frac_turns()), -64);
  }

  double to_double() const { return static_cast<double>(int_part) + frac_double(); }

  /// Top 64 bits of the fraction: the value mod 1 in units of 2^-64.
  std::uint64_t frac_turns() const {
    if (bits >= 64) {
      mpz_class top;
      mpz_fdiv_q_2exp(top.get_mpz_t(), frac.get_mpz_t(), bits - 64);
      return detail::to_u64(top);
    }
    return detail::to_u64(frac) << (64 - bits);
  }

  /// int_part * 2^bits + frac.
  mpz_class scaled() const {
    mpz_class out(static_cast<unsigned long>(int_part));
    mpz_mul_2exp(out.get_mpz_t(), out.get_mpz_t(), bits);
    out += frac;
    return out;
  }

  /// True when [value - err, value + err] may contain an integer other than
  /// the exact value itself.
  bool floor_ambiguous() const {
    if (err_ulp == 0) return false;
    if (frac < err_ulp) return true;
    mpz_class top = frac + err_ulp;
    return mpz_sizeinbase(top.get_mpz_t(), 2) > bits;  // frac + err >= 2^bits
  }

  /// Exact conversion of a non-negative double; rounds down with err_ulp = 1
  /// when the value needs more than `bits` fractional bits.
  static CertifiedFrac from_double(double v, unsigned bits = 96) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError("CertifiedFrac needs a finite value >= 0");
    CertifiedFrac out;
    out.bits = bits;
    const double ip = std::floor(v);
    out.int_part = static_cast<std::uint64_t>(ip);
    int e = 0;
    const double m = std::frexp(v - ip, &e);  // v - ip = m * 2^e, m in [0.5, 1)
    if (v - ip == 0.0) {
      out.frac = 0;
      return out;
    }
    const mpz_class mant(std::ldexp(m, 53));  // exact 53-bit integer
    const long shift = static_cast<long>(bits) + e - 53;
    if (shift >= 0) {
      mpz_mul_2exp(out.frac.get_mpz_t(), mant.get_mpz_t(), static_cast<mp_bitcnt_t>(shift));
    } else {
      mpz_class rem;
      mpz_fdiv_r_2exp(rem.get_mpz_t(), mant.get_mpz_t(), static_cast<mp_bitcnt_t>(-shift));
      mpz_fdiv_q_2exp(out.frac.get_mpz_t(), mant.get_mpz_t(), static_cast<mp_bitcnt_t>(-shift));
      if (rem != 0) out.err_ulp = 1;
    }
    return out;
  }
};

inline constexpr unsigned kMinFracBits = 96;
inline constexpr unsigned kMaxFracBits = 1u << 14;

/// n^gamma as a CertifiedFrac with `bits` fractional bits: the exact floor of
/// n^gamma * 2^bits, i.e. the integer den-th root of n^num * 2^(bits*den).
/// The integer part agrees with floor_pow; err_ulp is 0 for exact powers, else 1.
inline CertifiedFrac frac_pow(std::uint64_t n, const RationalExponent& g, unsigned bits = kMinFracBits) {
  if (n == 0) throw ConfigError("frac_pow requires n >= 1");
  if (bits < kMinFracBits) throw ConfigError("frac_pow needs at least 96 fractional bits");
  if (bits > kMaxFracBits) throw CapacityError("frac_pow bit count above the hard cap");
  mpz_class x = detail::pow_mpz(n, g.num());
  mpz_mul_2exp(x.get_mpz_t(), x.get_mpz_t(), static_cast<mp_bitcnt_t>(bits) * g.den());
  RootResult root = integer_root(x, g.den());
  CertifiedFrac out;
  out.bits = bits;
  out.err_ulp = root.exact ? 0 : 1;
  mpz_fdiv_r_2exp(out.frac.get_mpz_t(), root.root.get_mpz_t(), bits);
  mpz_fdiv_q_2exp(root.root.get_mpz_t(), root.root.get_mpz_t(), bits);
  out.int_part = detail::to_u64(root.root);
  return out;
}

/// psi(t) = t - floor(t) - 1/2.
inline double psi(const CertifiedFrac& t) {
  if (t.floor_ambiguous()) throw AmbiguousFloor("psi: certified interval straddles an integer");
  return t.frac_double() - 0.5;
}

/// psi(-t) = ceil(t) - t - 1/2.
inline double psi_neg(const CertifiedFrac& t) {
  if (t.floor_ambiguous()) throw AmbiguousFloor("psi: certified interval straddles an integer");
  if (t.frac == 0) return -0.5;  // exact integer
  return 0.5 - t.frac_double();
}

/// psi(-n^gamma), escalating precision until the floor is decided.
inline double psi_neg_pow(std::uint64_t n, const RationalExponent& g) {
  if (g.is_one()) return -0.5;
  for (unsigned bits = kMinFracBits;; bits *= 2) {
    try {
      return psi_neg(frac_pow(n, g, bits));
    } catch (const AmbiguousFloor&) {
      if (bits * 2 > kMaxFracBits) throw;
    }
  }
}

/// psi(n^gamma), escalating precision until the floor is decided.
inline double psi_pow(std::uint64_t n, const RationalExponent& g) {
  if (g.is_one()) return -0.5;
  for (unsigned bits = kMinFracBits;; bits *= 2) {
    try {
      return psi(frac_pow(n, g, bits));
    } catch (const AmbiguousFloor&) {
      if (bits * 2 > kMaxFracBits) throw;
    }
  }
}

}  // namespace psg
