#pragma once

// The singular series of the ternary problem,
//
//   S(n) = prod_{p | n} (1 - 1/(p-1)^2) * prod_{p !| n} (1 + 1/(p-1)^3),
//
// truncated at p <= P for the coprime part. The divisor part uses every prime
// factor of n. Since sum_{p > P} 1/(p-1)^3 <= 1/(2 (P-1)^2), the omitted factor
// lies in [1, exp(1/(2 (P-1)^2))] and the reported tail bound is
// value * expm1(1/(2 (P-1)^2)).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "psg/errors.hpp"
#include "psg/sieve.hpp"

namespace psg {

inline constexpr std::uint64_t kDefaultTruncation = 100'000;

struct SingularValue {
  std::uint64_t n = 0;
  double value = 0.0;
  std::uint64_t truncation_prime = 0;
  double tail_bound = 0.0;
};

/// Distinct prime divisors of n by trial division with the table's primes.
inline std::vector<std::uint64_t> prime_divisors(std::uint64_t n, const PrimeTable& table) {
  std::vector<std::uint64_t> out;
  if (n < 2) return out;
  const std::uint64_t lim = table.limit();
  if (lim < detail::isqrt(n)) {
    throw RangeError("cannot factor " + std::to_string(n) + ": sieve limit below sqrt(n)");
  }
  std::uint64_t rest = n;
  table.for_each_prime(2, detail::isqrt(n), [&](std::uint64_t p) {
    if (p * p > rest) return;
    if (rest % p == 0) {
      out.push_back(p);
      while (rest % p == 0) rest /= p;
    }
  });
  if (rest > 1) out.push_back(rest);
  return out;
}

inline double singular_tail_sum_bound(std::uint64_t P) {
  const double pm1 = static_cast<double>(P) - 1.0;
  return 1.0 / (2.0 * pm1 * pm1);
}

/// S_P(n) with the coprime product over p <= P. Needs table.limit() >= P and
/// table.limit()^2 >= n.
inline SingularValue singular_series(std::uint64_t n, std::uint64_t P, const PrimeTable& table) {
  if (n < 3) throw ConfigError("singular_series requires n >= 3");
  if (P < 100) throw ConfigError("singular_series requires truncation P >= 100");
  if (P > table.limit()) throw RangeError("singular_series: truncation above sieve limit");
  SingularValue out{n, 0.0, P, 0.0};
  if (n % 2 == 0) return out;  // the factor at p = 2 is 1 - 1/1 = 0

  const auto divisors = prime_divisors(n, table);
  double value = 1.0;
  std::size_t next_div = 0;
  table.for_each_prime(2, P, [&](std::uint64_t p) {
    while (next_div < divisors.size() && divisors[next_div] < p) ++next_div;
    const double pm1 = static_cast<double>(p - 1);
    if (next_div < divisors.size() && divisors[next_div] == p) {
      value *= 1.0 - 1.0 / (pm1 * pm1);
    } else {
      value *= 1.0 + 1.0 / (pm1 * pm1 * pm1);
    }
  });
  for (std::uint64_t q : divisors) {
    if (q > P) {
      const double qm1 = static_cast<double>(q - 1);
      value *= 1.0 - 1.0 / (qm1 * qm1);
    }
  }
  out.value = value;
  out.tail_bound = value * std::expm1(singular_tail_sum_bound(P));
  return out;
}

/// Convenience overload that sieves the primes it needs.
inline SingularValue singular_series(std::uint64_t n, std::uint64_t P = kDefaultTruncation) {
  const PrimeTable table(std::max<std::uint64_t>({P, detail::isqrt(n) + 1, 2}));
  return singular_series(n, P, table);
}

/// Batch evaluator: caches prod_{p <= P} (1 + 1/(p-1)^3) once and corrects the
/// factors at the prime divisors of each n.
class SingularSeries {
 public:
  SingularSeries(std::uint64_t P, const PrimeTable& table) : P_(P), table_(table) {
    if (P < 100) throw ConfigError("singular_series requires truncation P >= 100");
    if (P > table.limit()) throw RangeError("singular_series: truncation above sieve limit");
    full_ = 1.0;
    table.for_each_prime(2, P, [&](std::uint64_t p) {
      const double pm1 = static_cast<double>(p - 1);
      full_ *= 1.0 + 1.0 / (pm1 * pm1 * pm1);
    });
  }

  std::uint64_t truncation() const { return P_; }

  SingularValue operator()(std::uint64_t n) const {
    if (n < 3) throw ConfigError("singular_series requires n >= 3");
    SingularValue out{n, 0.0, P_, 0.0};
    if (n % 2 == 0) return out;
    double value = full_;
    for (std::uint64_t q : prime_divisors(n, table_)) {
      const double qm1 = static_cast<double>(q - 1);
      const double div = 1.0 - 1.0 / (qm1 * qm1);
      value *= q <= P_ ? div / (1.0 + 1.0 / (qm1 * qm1 * qm1)) : div;
    }
    out.value = value;
    out.tail_bound = value * std::expm1(singular_tail_sum_bound(P_));
    return out;
  }

 private:
  std::uint64_t P_;
  const PrimeTable& table_;
  double full_ = 1.0;
};

}  // namespace psg
