#pragma once

// Heath-Brown's identity with nu blocks and truncation z:
//
//   Lambda(n) = sum_{j=1}^{nu} (-1)^(j-1) C(nu, j)
//               sum_{n_1 ... n_2j = n, n_{j+1..2j} <= z} log(n_1) mu(n_{j+1}) ... mu(n_{2j})
//
// for n <= 2 z^nu. Two independent evaluations:
//   * explicit enumeration of ordered factorizations (hb_decompose), and
//   * a batch scan writing the inner sums as Lambda * G^{*j} with G = 1 * mu_z,
//     so HB(n) = sum_{p | n} c_p(n) log p with integer c_p. Since the log p
//     are linearly independent over Q, the identity holds exactly iff
//     c_p(n) = [n is a power of p] for every p | n.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "psg/arith_tables.hpp"
#include "psg/errors.hpp"

namespace psg {

struct HbTerm {
  unsigned j = 0;
  std::vector<std::uint64_t> factors;  // n_1 .. n_2j
  std::int64_t coefficient = 0;        // (-1)^(j-1) C(nu, j) mu(n_{j+1}) ... mu(n_2j)
  double value = 0.0;                  // coefficient * log n_1
};

namespace detail {

inline std::int64_t binomial(unsigned n, unsigned k) {
  std::int64_t r = 1;
  for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

inline void check_hb_args(std::uint64_t n, unsigned nu, double z) {
  if (n < 1) throw ConfigError("Heath-Brown identity needs n >= 1");
  if (nu < 1) throw ConfigError("Heath-Brown identity needs nu >= 1");
  if (!(z >= 1.0)) throw ConfigError("Heath-Brown identity needs z >= 1");
  if (static_cast<double>(n) > 2.0 * std::pow(z, static_cast<double>(nu))) {
    throw ConfigError("Heath-Brown identity requires n <= 2 z^nu");
  }
}

struct SmallFactorization {
  std::vector<std::pair<std::uint64_t, unsigned>> pe;
};

inline SmallFactorization factor_trial(std::uint64_t n) {
  SmallFactorization f;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    f.pe.emplace_back(p, e);
  }
  if (n > 1) f.pe.emplace_back(n, 1);
  return f;
}

/// Divisors of n with their Moebius values.
inline std::vector<std::pair<std::uint64_t, int>> divisors_with_mu(std::uint64_t n) {
  std::vector<std::pair<std::uint64_t, int>> out{{1, 1}};
  for (auto [p, e] : factor_trial(n).pe) {
    const std::size_t base = out.size();
    std::uint64_t pk = 1;
    for (unsigned k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) {
        out.emplace_back(out[i].first * pk, k == 1 ? -out[i].second : 0);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline int mobius_small(std::uint64_t n) {
  int mu = 1;
  for (auto [p, e] : factor_trial(n).pe) {
    if (e > 1) return 0;
    mu = -mu;
  }
  return mu;
}

inline double von_mangoldt_small(std::uint64_t n) {
  const auto f = factor_trial(n);
  return f.pe.size() == 1 ? std::log(static_cast<double>(f.pe[0].first)) : 0.0;
}

/// Calls visit(j, factors, coefficient) for every nonzero term.
template <class Visit>
void for_each_hb_term(std::uint64_t n, unsigned nu, double z, Visit&& visit, std::size_t max_terms) {
  check_hb_args(n, nu, z);
  const auto divs = divisors_with_mu(n);
  std::size_t emitted = 0;
  std::vector<std::uint64_t> slots;
  for (unsigned j = 1; j <= nu; ++j) {
    const std::int64_t sign_binom = (j % 2 == 1 ? 1 : -1) * binomial(nu, j);
    slots.assign(2 * j, 1);
    // Fill slots right to left: the j mu-slots (<= z, squarefree) first, then
    // the free slots, with n_1 taking the remaining cofactor.
    std::function<void(unsigned, std::uint64_t, std::int64_t)> rec = [&](unsigned slot, std::uint64_t rest,
                                                                        std::int64_t coeff) {
      if (slot == 0) {
        if (rest == 1) return;  // log 1 = 0
        slots[0] = rest;
        if (++emitted > max_terms) throw CapacityError("Heath-Brown term enumeration exceeds the cap");
        visit(j, slots, coeff);
        return;
      }
      const bool mu_slot = slot >= j;
      for (const auto& [d, mu] : divs) {
        if (d > rest) break;
        if (rest % d) continue;
        std::int64_t c = coeff;
        if (mu_slot) {
          if (static_cast<double>(d) > z || mu == 0) continue;
          c *= mu;
        }
        slots[slot] = d;
        rec(slot - 1, rest / d, c);
      }
    };
    rec(2 * j - 1, n, sign_binom);
  }
}

}  // namespace detail

/// All nonzero terms of the identity for n. Throws CapacityError past max_terms.
inline std::vector<HbTerm> hb_decompose(std::uint64_t n, unsigned nu, double z, std::size_t max_terms = 5'000'000) {
  std::vector<HbTerm> out;
  detail::for_each_hb_term(
      n, nu, z,
      [&](unsigned j, const std::vector<std::uint64_t>& f, std::int64_t c) {
        out.push_back({j, f, c, static_cast<double>(c) * std::log(static_cast<double>(f[0]))});
      },
      max_terms);
  return out;
}

/// |Lambda(n) - sum of all terms| by explicit enumeration.
inline double hb_identity_residual(std::uint64_t n, unsigned nu, double z, std::size_t max_terms = 50'000'000) {
  long double sum = 0.0L;
  detail::for_each_hb_term(
      n, nu, z,
      [&](unsigned, const std::vector<std::uint64_t>& f, std::int64_t c) {
        sum += static_cast<long double>(c) * std::log(static_cast<long double>(f[0]));
      },
      max_terms);
  return static_cast<double>(std::fabs(static_cast<long double>(detail::von_mangoldt_small(n)) - sum));
}

struct HbScanResult {
  std::uint64_t limit = 0;
  unsigned nu = 0;
  double z = 0.0;
  double max_residual = 0.0;
  std::uint64_t argmax = 0;
  std::uint64_t exact_mismatches = 0;  // n with some c_p(n) != [n = p^a]
  std::vector<double> residual;        // residual[n], index 0 unused
};

namespace detail {

inline std::vector<std::int64_t> dirichlet(const std::vector<std::int64_t>& f, const std::vector<std::int64_t>& g) {
  const std::size_t L = f.size() - 1;
  std::vector<std::int64_t> h(L + 1, 0);
  for (std::size_t a = 1; a <= L; ++a) {
    if (f[a] == 0) continue;
    for (std::size_t b = 1, ab = a; ab <= L; ++b, ab += a) h[ab] += f[a] * g[b];
  }
  return h;
}

}  // namespace detail

/// Verifies the identity for every n <= limit at once.
inline HbScanResult hb_residual_scan(std::uint64_t limit, unsigned nu, double z) {
  if (limit < 1) throw ConfigError("scan limit must be >= 1");
  detail::check_hb_args(limit, nu, z);
  const ArithTables tab(limit);
  const std::size_t L = limit;

  std::vector<std::int64_t> mu_z(L + 1, 0);
  for (std::size_t d = 1; d <= L && static_cast<double>(d) <= z; ++d) mu_z[d] = tab.mobius(d);
  std::vector<std::int64_t> ones(L + 1, 1);
  ones[0] = 0;
  const auto G = detail::dirichlet(ones, mu_z);

  // F = sum_j (-1)^(j-1) C(nu, j) G^{*j}
  std::vector<std::int64_t> F(L + 1, 0), Gj = G;
  for (unsigned j = 1; j <= nu; ++j) {
    if (j > 1) Gj = detail::dirichlet(Gj, G);
    const std::int64_t c = (j % 2 == 1 ? 1 : -1) * detail::binomial(nu, j);
    for (std::size_t n = 1; n <= L; ++n) F[n] += c * Gj[n];
  }

  HbScanResult out;
  out.limit = limit;
  out.nu = nu;
  out.z = z;
  std::vector<long double> hb(L + 1, 0.0L);
  std::vector<std::uint8_t> bad(L + 1, 0);
  for (std::size_t p = 2; p <= L; ++p) {
    if (tab.spf(p) != p) continue;
    const long double logp = std::log(static_cast<long double>(p));
    for (std::size_t n = p; n <= L; n += p) {
      std::int64_t c = 0;
      std::size_t t = n;
      while (t % p == 0) {
        t /= p;
        c += F[t];
      }
      const std::int64_t expected = t == 1 ? 1 : 0;  // n is a power of p
      if (c != expected) bad[n] = 1;
      hb[n] += static_cast<long double>(c) * logp;
    }
  }
  out.residual.assign(L + 1, 0.0);
  for (std::size_t n = 1; n <= L; ++n) {
    const long double lam = tab.lambda_prime(n) ? std::log(static_cast<long double>(tab.lambda_prime(n))) : 0.0L;
    const double r = static_cast<double>(std::fabs(lam - hb[n]));
    out.residual[n] = r;
    if (r > out.max_residual) {
      out.max_residual = r;
      out.argmax = n;
    }
    out.exact_mismatches += bad[n];
  }
  return out;
}

}  // namespace psg
