#pragma once

// Linear sieve for the smallest prime factor, von Mangoldt, Moebius and
// divisor-count tables. Lambda is kept as factor data (the prime p when n = p^e,
// else 0) so callers take the logarithm at whatever precision they need.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "psg/errors.hpp"

namespace psg {

class ArithTables {
 public:
  static constexpr std::uint64_t kMaxLimit = 1ull << 28;

  explicit ArithTables(std::uint64_t limit) : limit_(limit) {
    if (limit < 1) throw ConfigError("arith table limit must be positive");
    if (limit > kMaxLimit) throw CapacityError("arith table limit " + std::to_string(limit) + " exceeds cap");
    build();
  }

  std::uint64_t limit() const { return limit_; }

  /// Smallest prime factor (0 for n = 1).
  std::uint32_t spf(std::uint64_t n) const { return spf_[checked(n)]; }

  /// p when n = p^e (e >= 1), else 0.
  std::uint32_t lambda_prime(std::uint64_t n) const { return lambda_prime_[checked(n)]; }

  /// Lambda(n) = log p for prime powers, else 0.
  double von_mangoldt(std::uint64_t n) const {
    const std::uint32_t p = lambda_prime(n);
    return p == 0 ? 0.0 : std::log(static_cast<double>(p));
  }

  int mobius(std::uint64_t n) const { return mu_[checked(n)]; }

  /// d(n), the number of divisors.
  std::uint32_t divisor_count(std::uint64_t n) const { return d_[checked(n)]; }

  /// Prime factorization as (prime, exponent) pairs in increasing order.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> factorize(std::uint64_t n) const {
    checked(n);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
    while (n > 1) {
      const std::uint32_t p = spf_[n];
      std::uint32_t e = 0;
      while (n % p == 0) {
        n /= p;
        ++e;
      }
      out.emplace_back(p, e);
    }
    return out;
  }

  /// All divisors of n in increasing order.
  std::vector<std::uint64_t> divisors(std::uint64_t n) const {
    std::vector<std::uint64_t> out{1};
    for (auto [p, e] : factorize(n)) {
      const std::size_t base = out.size();
      std::uint64_t pk = 1;
      for (std::uint32_t k = 1; k <= e; ++k) {
        pk *= p;
        for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  std::uint64_t checked(std::uint64_t n) const {
    if (n == 0 || n > limit_) throw RangeError("arith table index " + std::to_string(n) + " out of range");
    return n;
  }

  void build() {
    const std::size_t n = static_cast<std::size_t>(limit_) + 1;
    spf_.assign(n, 0);
    lambda_prime_.assign(n, 0);
    mu_.assign(n, 0);
    d_.assign(n, 0);
    std::vector<std::uint32_t> spf_power_exp(n, 0);  // exponent of spf in i
    std::vector<std::uint32_t> primes;
    if (n > 1) {
      mu_[1] = 1;
      d_[1] = 1;
    }
    for (std::uint64_t i = 2; i <= limit_; ++i) {
      if (spf_[i] == 0) {
        spf_[i] = static_cast<std::uint32_t>(i);
        primes.push_back(static_cast<std::uint32_t>(i));
        mu_[i] = -1;
        d_[i] = 2;
        spf_power_exp[i] = 1;
        lambda_prime_[i] = static_cast<std::uint32_t>(i);
      }
      for (std::uint32_t p : primes) {
        const std::uint64_t ip = i * p;
        if (p > spf_[i] || ip > limit_) break;
        spf_[ip] = p;
        if (p == spf_[i]) {
          mu_[ip] = 0;
          spf_power_exp[ip] = spf_power_exp[i] + 1;
          // d(i*p) = d(i) / (e+1) * (e+2) where e is the exponent of p in i
          d_[ip] = d_[i] / (spf_power_exp[i] + 1) * (spf_power_exp[i] + 2);
          lambda_prime_[ip] = lambda_prime_[i] == p ? p : 0;
        } else {
          mu_[ip] = static_cast<std::int8_t>(-mu_[i]);
          spf_power_exp[ip] = 1;
          d_[ip] = d_[i] * 2;
          lambda_prime_[ip] = 0;
        }
      }
    }
  }

  std::uint64_t limit_;
  std::vector<std::uint32_t> spf_;
  std::vector<std::uint32_t> lambda_prime_;
  std::vector<std::int8_t> mu_;
  std::vector<std::uint32_t> d_;
};

}  // namespace psg
