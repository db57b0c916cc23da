#pragma once

// Seeded generators for property tests.

#include <cstdint>
#include <random>
#include <vector>

#include "psg/exact_arith.hpp"

namespace gen {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::uint64_t uint(std::uint64_t lo, std::uint64_t hi) {
    return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng_);
  }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  bool coin() { return uint(0, 1) == 1; }

  /// g = u/v with 1/2 < g < 1 and v <= max_den.
  psg::RationalExponent exponent(std::uint32_t max_den = 1000) {
    const auto v = static_cast<std::uint32_t>(uint(3, max_den));
    const auto u = static_cast<std::uint32_t>(uint(v / 2 + 1, v - 1));
    return {u, v};
  }

  /// Distinct exponents, as a profile requires.
  std::vector<psg::RationalExponent> distinct_exponents(std::size_t k, std::uint32_t max_den = 1000) {
    std::vector<psg::RationalExponent> out;
    while (out.size() < k) {
      const auto g = exponent(max_den);
      bool dup = false;
      for (const auto& h : out) dup = dup || h == g;
      if (!dup) out.push_back(g);
    }
    return out;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace gen
