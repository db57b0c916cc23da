#pragma once

// Fixed regression grids for the bound-ratio fixtures and the seeded
// Weyl-van der Corput trials.

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "psg/expsum/bounds.hpp"
#include "psg/expsum/psi_diff.hpp"
#include "psg/expsum/sums.hpp"

namespace psg {

struct SkGridEntry {
  std::string id;
  ExpSumParams params;  // alpha ignored; the alpha grid replaces it
  SkBoundVariant variant;
};

struct MaxRatio {
  std::string id;
  BoundReport at_max;  // report at the alpha (or beta) attaining the max ratio
  double max_ratio = 0.0;
};

inline std::vector<SkGridEntry> sk_regression_grid() {
  auto params = [](std::uint64_t M, std::vector<double> a, std::vector<RationalExponent> g) {
    ExpSumParams p;
    p.M = M;
    p.M1 = 2 * M;
    p.coeffs = std::move(a);
    p.gammas = std::move(g);
    return p;
  };
  const std::vector<RationalExponent> g3{{9, 10}, {4, 5}, {7, 10}};
  const std::vector<RationalExponent> g4{{19, 20}, {9, 10}, {5, 6}, {3, 4}};
  std::vector<SkGridEntry> out;
  for (auto v : {SkBoundVariant::kSecond, SkBoundVariant::kThird}) {
    const std::string tag = v == SkBoundVariant::kSecond ? "second" : "third";
    out.push_back({"sk_k3_M16384_" + tag, params(1 << 14, {1, 1, 1}, g3), v});
    out.push_back({"sk_k3_M4096_mixed_" + tag, params(1 << 12, {0.5, -2, 3}, g3), v});
    out.push_back({"sk_k4_M8192_" + tag, params(1 << 13, {1, -1, 1, -1}, g4), v});
  }
  return out;
}

/// max over the alpha grid of |S_k| / bound for every grid entry.
inline std::vector<MaxRatio> run_sk_regression(const std::vector<double>& alphas, unsigned workers = 0) {
  std::vector<MaxRatio> out;
  for (const auto& e : sk_regression_grid()) {
    const SkEvaluator eval(e.params, workers);
    MaxRatio best{e.id, {}, -1.0};
    for (double a : alphas) {
      ExpSumParams p = e.params;
      p.alpha = a;
      const auto r = sk_bound_report(std::abs(eval(a, workers)), p, e.variant);
      if (r.ratio > best.max_ratio) {
        best.max_ratio = r.ratio;
        best.at_max = r;
      }
    }
    out.push_back(best);
  }
  return out;
}

/// Second- and third-derivative test sums over fixed (beta, A) grids.
inline std::vector<MaxRatio> run_derivative_test_regression() {
  std::vector<MaxRatio> out;
  auto scan = [&](const std::string& id, const std::vector<double>& betas, std::uint64_t A, bool second) {
    MaxRatio best{id, {}, -1.0};
    for (double b : betas) {
      const auto r = second ? vdc_second_deriv_report(b, A) : vdc_third_deriv_report(b, A);
      if (r.ratio > best.max_ratio) {
        best.max_ratio = r.ratio;
        best.at_max = r;
      }
    }
    out.push_back(best);
  };
  const std::vector<double> b2{1e-6, 3e-6, 1e-5, 3e-5, 1e-4, 3e-4, 1e-3};
  const std::vector<double> b3{1e-10, 3e-10, 1e-9, 3e-9, 1e-8, 3e-8, 1e-7};
  scan("vdc2_A1000", b2, 1000, true);
  scan("vdc2_A4096", b2, 4096, true);
  scan("vdc3_A1000", b3, 1000, false);
  scan("vdc3_A4096", b3, 4096, false);
  return out;
}

struct WeylTrial {
  std::uint64_t N = 0;
  std::uint64_t Q = 0;
  WeylSides sides;
  bool holds = false;  // lhs <= 4 max(rhs, 0) + 1e-9
};

/// Seeded random sequences with |z| <= 1 on (N, 2N], N in [64, 4096],
/// Q cycling through {1, 16, 64}.
inline std::vector<WeylTrial> weyl_trials(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto unit = [&] { return std::ldexp(static_cast<double>(rng() >> 11), -53); };
  const std::uint64_t qs[3] = {1, 16, 64};
  std::vector<WeylTrial> out;
  for (std::size_t t = 0; t < count; ++t) {
    WeylTrial trial;
    trial.N = 64 + rng() % (4096 - 64 + 1);
    trial.Q = qs[t % 3];
    std::vector<Complex> z(trial.N);
    const int family = static_cast<int>(t % 4);
    const double theta = unit();
    for (std::uint64_t i = 0; i < trial.N; ++i) {
      const double r = unit();
      double phase = unit();
      if (family == 1) phase = theta * static_cast<double>(trial.N + 1 + i);  // linear phase
      if (family == 2) phase = theta * std::pow(static_cast<double>(trial.N + 1 + i), 0.9);
      const double ang = 2.0 * std::numbers::pi * phase;
      z[i] = family == 3 ? Complex(r, 0.0) : std::polar(r, ang);
    }
    trial.sides = weyl_vdc_sides(z, trial.N, trial.Q);
    trial.holds = trial.sides.lhs <= 4.0 * std::max(trial.sides.rhs, 0.0) + 1e-9;
    out.push_back(trial);
  }
  return out;
}

}  // namespace psg
