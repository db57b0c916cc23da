#pragma once

// Direct evaluation of the exponential sums
//
//   S_k    = sum_{M < m <= M1} e(alpha m + a_1 m^g_1 + ... + a_k m^g_k)
//   S_I    = sum_{m ~ M} a(m) sum_{n ~ N} e(alpha mn + sum_j h_j (mn)^g_j)
//   S_II   = sum_{m ~ M} a(m) sum_{n ~ N} b(n) e(...)
//
// and both sides of the Weyl-van der Corput differencing inequality.

#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "psg/errors.hpp"
#include "psg/exact_arith.hpp"
#include "psg/expsum/phase.hpp"
#include "psg/parallel.hpp"

namespace psg {

using Complex = std::complex<double>;

inline constexpr std::size_t kSumChunk = 4096;

struct ExpSumParams {
  double alpha = 0.0;
  std::vector<double> coeffs;
  std::vector<RationalExponent> gammas;
  std::uint64_t M = 0;
  std::uint64_t M1 = 0;

  std::size_t k() const { return gammas.size(); }

  void validate() const {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in [0, 1]");
    if (coeffs.size() != gammas.size()) throw ConfigError("coefficient and exponent lists differ in length");
    if (coeffs.empty()) throw ConfigError("at least one coefficient is required");
    for (double a : coeffs) {
      if (a == 0.0 || !std::isfinite(a)) throw ConfigError("coefficients must be finite and nonzero");
    }
    if (M < 1 || M1 <= M || M1 > 2 * M) throw ConfigError("range must satisfy 1 <= M < M1 <= 2M");
  }

  /// R = sum |a_j| M^g_j.
  double R() const {
    double r = 0.0;
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
      r += std::fabs(coeffs[j]) * std::pow(static_cast<double>(M), gammas[j].value());
    }
    return r;
  }

  std::string describe() const {
    std::ostringstream os;
    os.precision(12);
    os << "alpha=" << alpha << ";M=" << M << ";M1=" << M1 << ";a=";
    for (std::size_t j = 0; j < coeffs.size(); ++j) os << (j ? "," : "") << coeffs[j];
    os << ";g=";
    for (std::size_t j = 0; j < gammas.size(); ++j) os << (j ? "," : "") << gammas[j].to_string();
    return os.str();
  }
};

/// S_k for a fixed (a, g, M, M1) at many alpha values. The alpha-free part of
/// each phase is computed once.
class SkEvaluator {
 public:
  explicit SkEvaluator(const ExpSumParams& p, unsigned workers = 0) : M_(p.M), M1_(p.M1) {
    p.validate();
    base_.resize(M1_ - M_);
    parallel_chunks(ChunkLayout{base_.size(), kSumChunk}.count(), workers, [&](std::size_t c) {
      const ChunkLayout layout{base_.size(), kSumChunk};
      for (std::size_t i = layout.begin(c); i < layout.end(c); ++i) {
        const std::uint64_t m = M_ + 1 + i;
        Turns t = 0;
        for (std::size_t j = 0; j < p.coeffs.size(); ++j) t += power_phase(p.coeffs[j], m, p.gammas[j]);
        base_[i] = t;
      }
    });
  }

  Complex operator()(double alpha, unsigned workers = 0) const {
    return chunked_reduce<Complex>(base_.size(), kSumChunk, workers, [&](std::size_t lo, std::size_t hi) {
      Complex acc{};
      for (std::size_t i = lo; i < hi; ++i) acc += e_turns(base_[i] + mul_turns(alpha, M_ + 1 + i));
      return acc;
    });
  }

  const std::vector<Turns>& base_phases() const { return base_; }

 private:
  std::uint64_t M_;
  std::uint64_t M1_;
  std::vector<Turns> base_;
};

inline Complex exp_sum_sk(const ExpSumParams& p, unsigned workers = 0) {
  return SkEvaluator(p, workers)(p.alpha, workers);
}

/// Shape of a bilinear sum: m in (M, 2M], n in (N, 2N], integer frequencies h_j.
struct BilinearParams {
  std::uint64_t M = 0;
  std::uint64_t N = 0;
  double alpha = 0.0;
  std::vector<std::int64_t> h;
  std::vector<RationalExponent> gammas;

  std::size_t k() const { return gammas.size(); }
  double X() const { return static_cast<double>(M) * static_cast<double>(N); }

  void validate() const {
    if (M < 1 || N < 1) throw ConfigError("bilinear sums need M, N >= 1");
    if (h.size() != gammas.size() || h.empty()) throw ConfigError("frequency and exponent lists differ in length");
    for (std::int64_t v : h) {
      if (v == 0) throw ConfigError("frequencies h_j must be nonzero");
    }
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in [0, 1]");
    const unsigned __int128 top = static_cast<unsigned __int128>(2 * M) * (2 * N);
    if (top >> 63) throw CapacityError("bilinear sum range too large");
  }

  /// Script R = sum |h_j| X^g_j with X = MN.
  double script_R() const {
    double r = 0.0;
    for (std::size_t j = 0; j < h.size(); ++j) {
      r += std::fabs(static_cast<double>(h[j])) * std::pow(X(), gammas[j].value());
    }
    return r;
  }
};

namespace detail {

inline void check_bounded(std::span<const Complex> c, std::size_t expected, const char* name) {
  if (c.size() != expected) throw ConfigError(std::string(name) + " has the wrong length");
  for (const Complex& v : c) {
    if (!(std::abs(v) <= 1.0 + 1e-12)) throw ConfigError(std::string(name) + " must be bounded by 1 in modulus");
  }
}

inline Complex bilinear_sum(const BilinearParams& p, std::span<const Complex> a, std::span<const Complex> b,
                            unsigned workers) {
  p.validate();
  check_bounded(a, p.M, "a(m)");
  if (!b.empty()) check_bounded(b, p.N, "b(n)");
  return chunked_reduce<Complex>(p.M, 8, workers, [&](std::size_t lo, std::size_t hi) {
    Complex outer{};
    for (std::size_t i = lo; i < hi; ++i) {
      const std::uint64_t m = p.M + 1 + i;
      Complex inner{};
      for (std::uint64_t jn = 0; jn < p.N; ++jn) {
        const std::uint64_t n = p.N + 1 + jn;
        const std::uint64_t mn = m * n;
        Turns t = mul_turns(p.alpha, mn);
        for (std::size_t j = 0; j < p.h.size(); ++j) {
          t += power_phase(static_cast<double>(p.h[j]), mn, p.gammas[j]);
        }
        const Complex e = e_turns(t);
        inner += b.empty() ? e : b[jn] * e;
      }
      outer += a[i] * inner;
    }
    return outer;
  });
}

}  // namespace detail

/// a holds a(m) for m = M+1 .. 2M.
inline Complex type_I_sum(const BilinearParams& p, std::span<const Complex> a, unsigned workers = 0) {
  return detail::bilinear_sum(p, a, {}, workers);
}

/// a holds a(m) for m = M+1 .. 2M, b holds b(n) for n = N+1 .. 2N.
inline Complex type_II_sum(const BilinearParams& p, std::span<const Complex> a, std::span<const Complex> b,
                           unsigned workers = 0) {
  if (b.empty()) throw ConfigError("type II sums need b(n)");
  return detail::bilinear_sum(p, a, b, workers);
}

struct WeylSides {
  double lhs = 0.0;
  double rhs = 0.0;
};

/// Both sides of |sum z(n)|^2 << (N/Q) sum_{|q| <= Q} (1 - |q|/Q) Re sum z(n) conj(z(n+q))
/// for z given on (N, CN]; z is zero outside that range.
inline WeylSides weyl_vdc_sides(std::span<const Complex> z, std::uint64_t N, std::uint64_t Q) {
  if (Q < 1 || Q > N) throw ConfigError("Weyl-van der Corput needs 1 <= Q <= N");
  Complex total{};
  for (const Complex& v : z) total += v;
  const std::size_t L = z.size();
  auto corr = [&](std::size_t q) {
    double re = 0.0;
    for (std::size_t i = 0; i + q < L; ++i) re += (z[i] * std::conj(z[i + q])).real();
    return re;
  };
  const double Qd = static_cast<double>(Q);
  double s = corr(0);
  for (std::uint64_t q = 1; q <= Q && q < L; ++q) s += 2.0 * (1.0 - static_cast<double>(q) / Qd) * corr(q);
  return {std::norm(total), static_cast<double>(N) / Qd * s};
}

}  // namespace psg
