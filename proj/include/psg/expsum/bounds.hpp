#pragma once

// Upper-bound shapes for the sums in sums.hpp, paired with observed values as
// observed/bound ratios. Implied constants are never asserted; ratios are
// tracked as regression fixtures instead.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "psg/errors.hpp"
#include "psg/exact_arith.hpp"
#include "psg/expsum/phase.hpp"
#include "psg/expsum/sums.hpp"
#include "psg/psets.hpp"

namespace psg {

struct BoundReport {
  double observed = 0.0;
  double bound = 0.0;
  double ratio = 0.0;
  std::string formula;
  std::string params;
};

inline BoundReport make_report(double observed, double bound, std::string formula, std::string params) {
  if (!(bound > 0.0)) throw ConfigError("bound must be positive");
  return {observed, bound, observed / bound, std::move(formula), std::move(params)};
}

/// A lambda^(1/2) + lambda^(-1/2).
inline double bound_second_deriv(double A, double lambda1) {
  if (!(lambda1 > 0.0)) throw ConfigError("lambda must be positive");
  return A * std::sqrt(lambda1) + 1.0 / std::sqrt(lambda1);
}

/// A lambda^(1/6) + lambda^(-1/3).
inline double bound_third_deriv(double A, double lambda2) {
  if (!(lambda2 > 0.0)) throw ConfigError("lambda must be positive");
  return A * std::pow(lambda2, 1.0 / 6.0) + std::pow(lambda2, -1.0 / 3.0);
}

/// |sum_{A < m <= 2A} e(beta m^2)| against the second-derivative bound with
/// lambda = 2 beta.
inline BoundReport vdc_second_deriv_report(double beta, std::uint64_t A) {
  if (A < 6 || A > (1ull << 31)) throw ConfigError("A must lie in [6, 2^31]");
  Complex s{};
  for (std::uint64_t m = A + 1; m <= 2 * A; ++m) s += e_turns(mul_turns(beta, m * m));
  std::ostringstream os;
  os.precision(12);
  os << "beta=" << beta << ";A=" << A;
  return make_report(std::abs(s), bound_second_deriv(static_cast<double>(A), 2.0 * std::fabs(beta)),
                     "second_deriv", os.str());
}

/// |sum_{A < m <= 2A} e(beta m^3)| against the third-derivative bound with
/// lambda = 6 beta.
inline BoundReport vdc_third_deriv_report(double beta, std::uint64_t A) {
  if (A < 6 || A > (1ull << 20)) throw ConfigError("A must lie in [6, 2^20]");
  Complex s{};
  for (std::uint64_t m = A + 1; m <= 2 * A; ++m) s += e_turns(mul_turns(beta, m * m * m));
  std::ostringstream os;
  os.precision(12);
  os << "beta=" << beta << ";A=" << A;
  return make_report(std::abs(s), bound_third_deriv(static_cast<double>(A), 6.0 * std::fabs(beta)),
                     "third_deriv", os.str());
}

enum class SkBoundVariant { kSecond, kThird };

/// R^(1/2) + M R^(-1/(k+1))  or  M^(1/2) R^(1/6) + M R^(-1/(k+2)).
inline double sk_bound(double M, double R, std::size_t k, SkBoundVariant v) {
  if (k < 3) throw ConfigError("the S_k bounds need k >= 3");
  const double kd = static_cast<double>(k);
  if (v == SkBoundVariant::kSecond) return std::sqrt(R) + M * std::pow(R, -1.0 / (kd + 1.0));
  return std::sqrt(M) * std::pow(R, 1.0 / 6.0) + M * std::pow(R, -1.0 / (kd + 2.0));
}

inline BoundReport sk_bound_report(double observed, const ExpSumParams& p, SkBoundVariant v) {
  return make_report(observed, sk_bound(static_cast<double>(p.M), p.R(), p.k(), v),
                     v == SkBoundVariant::kSecond ? "sk_second" : "sk_third", p.describe());
}

inline BoundReport bound_prop31(const ExpSumParams& p, SkBoundVariant v, unsigned workers = 0) {
  if (p.k() < 3) throw ConfigError("the S_k bounds need k >= 3");
  return sk_bound_report(std::abs(exp_sum_sk(p, workers)), p, v);
}

/// Type I bound M N^(1/2) R^(1/6) + M N R^(-1/(k+2)).
inline double type_I_bound(const BilinearParams& p) {
  const double M = static_cast<double>(p.M), N = static_cast<double>(p.N), R = p.script_R();
  const double kd = static_cast<double>(p.k());
  return M * std::sqrt(N) * std::pow(R, 1.0 / 6.0) + M * N * std::pow(R, -1.0 / (kd + 2.0));
}

/// Type II bound after differencing with shift length Q:
/// sqrt(M^2 N^2 / Q + (MN/Q) (N^(1/2) R^(1/2) Q^(3/2) + X N^(1/(k+1)) R^(-1/(k+1)) Q^(k/(k+1)))).
inline double type_II_bound(const BilinearParams& p, std::uint64_t Q) {
  if (Q < 1) throw ConfigError("Q must be >= 1");
  const double M = static_cast<double>(p.M), N = static_cast<double>(p.N), R = p.script_R();
  const double X = p.X(), q = static_cast<double>(Q), kd = static_cast<double>(p.k());
  const double inner = std::sqrt(N) * std::sqrt(R) * std::pow(q, 1.5) +
                       X * std::pow(N, 1.0 / (kd + 1.0)) * std::pow(R, -1.0 / (kd + 1.0)) * std::pow(q, kd / (kd + 1.0));
  return std::sqrt(M * M * N * N / q + M * N / q * inner);
}

/// Windows for the factor sizes in the Heath-Brown decomposition.
struct TypeRangeClass {
  double X = 0.0;
  std::size_t k = 0;
  double script_R = 0.0;
  double type_II_upper = 0.0;  // script X_k
  double type_I_upper = 0.0;   // script X*_k

  TypeRangeClass(double X_, std::size_t k_, double script_R_) : X(X_), k(k_), script_R(script_R_) {
    if (k < 3) throw ConfigError("type ranges need k >= 3");
    if (!(X > 1.0) || !(script_R > 0.0)) throw ConfigError("type ranges need X > 1 and R > 0");
    if (k == 3) {
      type_II_upper = std::pow(X, 1.0 / 48.0 - 0.5) * script_R;
      type_I_upper = std::pow(X, 0.5 + 49.0 / 144.0) * std::pow(script_R, -1.0 / 3.0);
    } else {
      const double w = varpi(k).get_d();
      type_II_upper = std::pow(X, w / 2.0 - 0.5) * script_R;
      type_I_upper = std::pow(X, 0.5 + w);
    }
  }

  double type_II_lower() const { return std::cbrt(std::sqrt(X)); }  // X^(1/6)

  /// N in [X^(1/6), X_k].
  bool in_type_II(double N) const { return N >= type_II_lower() && N <= type_II_upper; }

  /// M <= X*_k.
  bool in_type_I(double M) const { return M <= type_I_upper; }
};

/// sum_{M < m <= 2M} prod_j min(1, 1 / (H_j ||(m + u_j)^g_j||)).
inline double sstar_min_sum(std::uint64_t M, const std::vector<double>& H, const std::vector<RationalExponent>& gammas,
                            const std::vector<double>& u) {
  const std::size_t s = H.size();
  if (s < 2 || gammas.size() != s || u.size() != s) throw ConfigError("sstar_min_sum needs s >= 2 matching lists");
  for (std::size_t j = 0; j < s; ++j) {
    if (!(H[j] > 1.0)) throw ConfigError("H_j must exceed 1");
    if (!(u[j] >= 0.0 && u[j] <= 1.0)) throw ConfigError("u_j must lie in [0, 1]");
  }
  if (M < 1) throw ConfigError("M must be >= 1");
  std::vector<double> terms(M);
  for (std::uint64_t i = 0; i < M; ++i) {
    const long double m = static_cast<long double>(M + 1 + i);
    double prod = 1.0;
    for (std::size_t j = 0; j < s; ++j) {
      const long double v = std::pow(m + static_cast<long double>(u[j]), gammas[j].value_ld());
      const double dist = static_cast<double>(std::fabs(v - std::nearbyint(v)));
      prod *= dist * H[j] <= 1.0 ? 1.0 : 1.0 / (H[j] * dist);
    }
    terms[i] = prod;
  }
  return pairwise_sum(terms);
}

/// M (prod H_j)^(-1) (log H)^s + H^(s/(s+1)) (log H)^s with H = max_j H_j.
inline double sstar_bound(std::uint64_t M, const std::vector<double>& H) {
  if (H.size() < 2) throw ConfigError("sstar_bound needs s >= 2");
  const double s = static_cast<double>(H.size());
  const double Hmax = *std::max_element(H.begin(), H.end());
  double prod = 1.0;
  for (double h : H) prod *= h;
  const double logs = std::pow(std::log(Hmax), s);
  return static_cast<double>(M) / prod * logs + std::pow(Hmax, s / (s + 1.0)) * logs;
}

}  // namespace psg
