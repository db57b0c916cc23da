#pragma once

// Representations n = p1 + p2 + p3 over ordered prime triples, in four modes:
//
//   unweighted   R(n) = #{(p1, p2, p3)}                     vs  S(n) n^2 / (2 log^3 n)
//   log          sum of log p1 log p2 log p3                vs  S(n) n^2 / 2
//   bf           1/(g1 g2 g3) sum prod p_j^(1-g_j) log p_j,
//                p_j in N_{g_j}                             vs  S(n) n^2 / 2
//   constrained  C1 C2 C3 sum prod p_i^sigma_i,
//                p_i in the k-fold intersection of profile i vs  S(n) n^2 / (2 log^3 n)
//
// The weighted modes share one kernel: the three member sets are ordered by
// size (smallest outermost), the innermost set is held densely, and per-p1
// partial sums are reduced pairwise in a fixed order.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "psg/errors.hpp"
#include "psg/parallel.hpp"
#include "psg/psets.hpp"
#include "psg/sieve.hpp"
#include "psg/singular.hpp"

namespace psg {

enum class TernaryMode { kUnweighted, kLogWeighted, kBfWeighted, kConstrained };

inline std::string_view to_string(TernaryMode m) {
  switch (m) {
    case TernaryMode::kUnweighted: return "unweighted";
    case TernaryMode::kLogWeighted: return "log";
    case TernaryMode::kBfWeighted: return "bf";
    case TernaryMode::kConstrained: return "constrained";
  }
  return "?";
}

inline TernaryMode parse_ternary_mode(std::string_view s) {
  if (s == "unweighted") return TernaryMode::kUnweighted;
  if (s == "log" || s == "log-weighted") return TernaryMode::kLogWeighted;
  if (s == "bf" || s == "bf-weighted") return TernaryMode::kBfWeighted;
  if (s == "constrained") return TernaryMode::kConstrained;
  throw ConfigError("unknown ternary mode '" + std::string(s) + "'");
}

struct TernaryReport {
  std::uint64_t n = 0;
  TernaryMode mode = TernaryMode::kUnweighted;
  std::size_t k = 0;                  // profile length (0 when no profile is involved)
  std::vector<std::string> profiles;  // canonical literals, in argument order
  double count_or_sum = 0.0;
  double main_term = 0.0;
  double ratio = 0.0;                 // count_or_sum / main_term, 0 when main_term == 0
  double seconds = 0.0;

  std::string profile_string() const {
    std::string out;
    for (std::size_t i = 0; i < profiles.size(); ++i) {
      if (i) out += " | ";
      out += profiles[i];
    }
    return out;
  }
};

namespace detail {

struct WeightedSet {
  std::vector<std::uint32_t> members;  // increasing
  std::vector<double> dense;           // dense[m] = weight of m, 0 if not a member
  std::string key;                     // ordering tie-break
};

inline void check_ternary_n(std::uint64_t n, const PrimeTable& table) {
  if (n % 2 == 0) throw ConfigError("ternary sums require odd n, got " + std::to_string(n));
  if (n < 3) throw ConfigError("ternary sums require n >= 3");
  if (n > table.limit()) throw RangeError("ternary: n=" + std::to_string(n) + " above sieve limit");
}

template <class Weight>
WeightedSet weighted_set(std::uint64_t n, const PrimeTable& table, const PsProfile* profile, Weight&& weight,
                         std::string key) {
  WeightedSet s;
  s.key = std::move(key);
  s.dense.assign(n + 1, 0.0);
  table.for_each_prime(2, n, [&](std::uint64_t p) {
    if (profile == nullptr || profile->contains(p)) {
      s.members.push_back(static_cast<std::uint32_t>(p));
      s.dense[p] = weight(p);
    }
  });
  return s;
}

/// sum_{p1 in A} w(p1) sum_{p2 in B, p2 <= n-p1-2} w(p2) w_C(n - p1 - p2).
inline double triple_sum(std::uint64_t n, const WeightedSet& a, const WeightedSet& b, const WeightedSet& c,
                         unsigned workers) {
  constexpr std::size_t kChunk = 32;
  return chunked_reduce<double>(a.members.size(), kChunk, workers, [&](std::size_t lo, std::size_t hi) {
    double acc = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      const std::uint64_t p1 = a.members[i];
      if (p1 + 4 > n) break;
      const std::uint64_t rest = n - p1;
      double inner = 0.0;
      for (std::uint32_t p2 : b.members) {
        if (p2 + 2 > rest) break;
        inner += b.dense[p2] * c.dense[rest - p2];
      }
      acc += a.dense[p1] * inner;
    }
    return acc;
  });
}

/// Orders the sets smallest first (ties by key) and runs the kernel, so the
/// result does not depend on the order the caller passed them in.
inline double ordered_triple_sum(std::uint64_t n, std::array<const WeightedSet*, 3> sets, unsigned workers) {
  std::sort(sets.begin(), sets.end(), [](const WeightedSet* x, const WeightedSet* y) {
    if (x->members.size() != y->members.size()) return x->members.size() < y->members.size();
    return x->key < y->key;
  });
  return triple_sum(n, *sets[0], *sets[1], *sets[2], workers);
}

inline double singular_for(std::uint64_t n, const PrimeTable& table) {
  if (table.limit() >= kDefaultTruncation) return singular_series(n, kDefaultTruncation, table).value;
  return singular_series(n, kDefaultTruncation).value;
}

inline void finish(TernaryReport& r, std::chrono::steady_clock::time_point start) {
  r.ratio = r.main_term > 0.0 ? r.count_or_sum / r.main_term : 0.0;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

inline double main_term_log_cubed(std::uint64_t n, const PrimeTable& table) {
  const double nn = static_cast<double>(n);
  const double l = std::log(nn);
  return 0.5 * singular_for(n, table) * nn * nn / (l * l * l);
}

inline double main_term_smoothed(std::uint64_t n, const PrimeTable& table) {
  const double nn = static_cast<double>(n);
  return 0.5 * singular_for(n, table) * nn * nn;
}

}  // namespace detail

/// Exact number of ordered prime triples with p1 + p2 + p3 = n.
inline TernaryReport count_unweighted(std::uint64_t n, const PrimeTable& table, unsigned workers = 0) {
  const auto start = std::chrono::steady_clock::now();
  detail::check_ternary_n(n, table);
  const auto primes = table.primes_upto(n);
  const ChunkLayout layout{primes.size(), 32};
  std::vector<std::uint64_t> partial(layout.count(), 0);
  parallel_chunks(partial.size(), workers, [&](std::size_t c) {
    std::uint64_t acc = 0;
    for (std::size_t i = layout.begin(c); i < layout.end(c); ++i) {
      const std::uint64_t p1 = primes[i];
      if (p1 + 4 > n) break;
      const std::uint64_t rest = n - p1;
      for (std::uint32_t p2 : primes) {
        if (p2 + 2 > rest) break;
        acc += table.is_prime_unchecked(rest - p2) ? 1 : 0;
      }
    }
    partial[c] = acc;
  });
  std::uint64_t total = 0;
  for (std::uint64_t v : partial) total += v;

  TernaryReport r;
  r.n = n;
  r.mode = TernaryMode::kUnweighted;
  r.count_or_sum = static_cast<double>(total);
  r.main_term = detail::main_term_log_cubed(n, table);
  detail::finish(r, start);
  return r;
}

/// sum over ordered triples of log p1 log p2 log p3, against S(n) n^2 / 2.
inline TernaryReport sum_log_weighted(std::uint64_t n, const PrimeTable& table, unsigned workers = 0) {
  const auto start = std::chrono::steady_clock::now();
  detail::check_ternary_n(n, table);
  const auto set = detail::weighted_set(
      n, table, nullptr, [](std::uint64_t p) { return std::log(static_cast<double>(p)); }, "log");
  TernaryReport r;
  r.n = n;
  r.mode = TernaryMode::kLogWeighted;
  r.count_or_sum = detail::ordered_triple_sum(n, {&set, &set, &set}, workers);
  r.main_term = detail::main_term_smoothed(n, table);
  detail::finish(r, start);
  return r;
}

/// 1/(g1 g2 g3) sum prod p_j^(1-g_j) log p_j over p_j in N_{g_j}; each profile
/// must hold exactly one exponent.
inline TernaryReport sum_bf_weighted(std::uint64_t n, const PsProfile& p1, const PsProfile& p2,
                                     const PsProfile& p3, const PrimeTable& table, unsigned workers = 0) {
  const auto start = std::chrono::steady_clock::now();
  detail::check_ternary_n(n, table);
  if (p1.k() != 1 || p2.k() != 1 || p3.k() != 1) {
    throw ConfigError("bf-weighted sums take three single-exponent profiles");
  }
  auto make = [&](const PsProfile& p) {
    const double expo = 1.0 - p.gammas()[0].value();
    return detail::weighted_set(
        n, table, &p,
        [expo](std::uint64_t q) {
          const double x = static_cast<double>(q);
          return std::pow(x, expo) * std::log(x);
        },
        p.to_string());
  };
  const auto s1 = make(p1);
  const auto s2 = make(p2);
  const auto s3 = make(p3);
  const mpq_class scale = 1 / (p1.gamma_product() * p2.gamma_product() * p3.gamma_product());
  TernaryReport r;
  r.n = n;
  r.mode = TernaryMode::kBfWeighted;
  r.k = 1;
  r.profiles = {p1.to_string(), p2.to_string(), p3.to_string()};
  r.count_or_sum = scale.get_d() * detail::ordered_triple_sum(n, {&s1, &s2, &s3}, workers);
  r.main_term = detail::main_term_smoothed(n, table);
  detail::finish(r, start);
  return r;
}

/// C1 C2 C3 sum prod p_i^sigma_i with p_i in the intersection of profile i.
inline TernaryReport sum_constrained(std::uint64_t n, const PsProfile& p1, const PsProfile& p2,
                                     const PsProfile& p3, const PrimeTable& table, unsigned workers = 0) {
  const auto start = std::chrono::steady_clock::now();
  detail::check_ternary_n(n, table);
  if (p1.k() != p2.k() || p2.k() != p3.k()) throw ConfigError("constrained sums need profiles with one k");
  auto make = [&](const PsProfile& p) {
    const double sigma = p.sigma_double();
    return detail::weighted_set(
        n, table, &p, [sigma](std::uint64_t q) { return sigma == 0.0 ? 1.0 : std::pow(static_cast<double>(q), sigma); },
        p.to_string());
  };
  const auto s1 = make(p1);
  const auto s2 = make(p2);
  const auto s3 = make(p3);
  const mpq_class scale = 1 / (p1.gamma_product() * p2.gamma_product() * p3.gamma_product());
  TernaryReport r;
  r.n = n;
  r.mode = TernaryMode::kConstrained;
  r.k = p1.k();
  r.profiles = {p1.to_string(), p2.to_string(), p3.to_string()};
  r.count_or_sum = scale.get_d() * detail::ordered_triple_sum(n, {&s1, &s2, &s3}, workers);
  r.main_term = detail::main_term_log_cubed(n, table);
  detail::finish(r, start);
  return r;
}

}  // namespace psg
