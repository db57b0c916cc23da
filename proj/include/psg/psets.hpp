#pragma once

// Profiles of Piatetski-Shapiro exponents, prime counting in intersections of
// PS sets, their asymptotic main terms, and exact admissibility checks for
// ternary sums with constrained primes.

#include <gmpxx.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "psg/errors.hpp"
#include "psg/exact_arith.hpp"
#include "psg/parallel.hpp"
#include "psg/sieve.hpp"

namespace psg {

/// A non-increasing list of exponents 1/2 < g_k <= ... <= g_1 <= 1; entries
/// may repeat only at the value 1 (slots that impose no constraint).
class PsProfile {
 public:
  explicit PsProfile(std::vector<RationalExponent> gammas) : gammas_(std::move(gammas)) {
    if (gammas_.empty()) throw ConfigError("profile needs at least one exponent");
    std::sort(gammas_.begin(), gammas_.end(), std::greater<>());
    for (std::size_t i = 1; i < gammas_.size(); ++i) {
      if (gammas_[i] == gammas_[i - 1] && !gammas_[i].is_one()) {
        throw ConfigError("profile exponents must be distinct (repeats allowed only for 1)");
      }
    }
    sigma_ = static_cast<long>(gammas_.size());
    gamma_product_ = 1;
    for (const auto& g : gammas_) {
      sigma_ -= g.exact();
      gamma_product_ *= g.exact();
    }
    sigma_.canonicalize();
    gamma_product_.canonicalize();
  }

  /// k ones: no constraint at all.
  static PsProfile trivial(std::size_t k) {
    return PsProfile(std::vector<RationalExponent>(k, RationalExponent(1, 1)));
  }

  /// Parses "k=3; g=49/50,47/50,9/10" (k optional; exact rationals only).
  static PsProfile parse(std::string_view literal) {
    std::optional<std::size_t> k;
    std::optional<std::vector<RationalExponent>> gammas;
    auto trim = [](std::string_view s) {
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
      return s;
    };
    const std::string text(literal);
    std::string_view rest = literal;
    while (!rest.empty()) {
      const auto semi = rest.find(';');
      std::string_view part = trim(rest.substr(0, semi));
      rest = semi == std::string_view::npos ? std::string_view{} : rest.substr(semi + 1);
      if (part.empty()) continue;
      const auto eq = part.find('=');
      if (eq == std::string_view::npos) throw ConfigError("profile literal '" + text + "': expected key=value");
      const std::string_view key = trim(part.substr(0, eq));
      const std::string_view value = trim(part.substr(eq + 1));
      if (key == "k") {
        if (k) throw ConfigError("profile literal '" + text + "': duplicate k");
        if (value.empty() || value.size() > 3 ||
            !std::all_of(value.begin(), value.end(), [](char c) { return c >= '0' && c <= '9'; })) {
          throw ConfigError("profile literal '" + text + "': bad k");
        }
        k = static_cast<std::size_t>(std::stoul(std::string(value)));
      } else if (key == "g") {
        if (gammas) throw ConfigError("profile literal '" + text + "': duplicate g");
        gammas.emplace();
        std::string_view list = value;
        while (true) {
          const auto comma = list.find(',');
          gammas->push_back(RationalExponent::parse(list.substr(0, comma)));
          if (comma == std::string_view::npos) break;
          list = list.substr(comma + 1);
        }
      } else {
        throw ConfigError("profile literal '" + text + "': unknown key '" + std::string(key) + "'");
      }
    }
    if (!gammas) throw ConfigError("profile literal '" + text + "': missing g=");
    if (k && *k != gammas->size()) throw ConfigError("profile literal '" + text + "': k does not match g count");
    return PsProfile(std::move(*gammas));
  }

  std::size_t k() const { return gammas_.size(); }
  const std::vector<RationalExponent>& gammas() const { return gammas_; }

  /// sigma_k = k - sum(gamma_j), exact.
  const mpq_class& sigma() const { return sigma_; }
  double sigma_double() const { return sigma_.get_d(); }

  /// gamma_1 * ... * gamma_k, exact.
  const mpq_class& gamma_product() const { return gamma_product_; }

  /// C_k = 1 / (gamma_1 ... gamma_k).
  double coeff_c() const {
    const mpq_class c = 1 / gamma_product_;
    return c.get_d();
  }

  bool is_trivial() const {
    return std::all_of(gammas_.begin(), gammas_.end(), [](const auto& g) { return g.is_one(); });
  }

  /// m lies in every set N_gamma_j of the profile.
  bool contains(std::uint64_t m) const {
    for (const auto& g : gammas_) {
      if (!g.is_one() && !is_ps_member(m, g)) return false;
    }
    return true;
  }

  /// Canonical literal; parse(to_string()) reproduces the profile.
  std::string to_string() const {
    std::string out = "k=" + std::to_string(k()) + "; g=";
    for (std::size_t i = 0; i < gammas_.size(); ++i) {
      if (i) out += ',';
      out += gammas_[i].to_string();
    }
    return out;
  }

  friend bool operator==(const PsProfile& a, const PsProfile& b) { return a.gammas_ == b.gammas_; }

 private:
  std::vector<RationalExponent> gammas_;
  mpq_class sigma_;
  mpq_class gamma_product_;
};

/// pi(x; gamma_1..gamma_k): primes p <= x lying in every PS set of the profile.
inline std::uint64_t count_ps_primes(std::uint64_t x, const PsProfile& profile, const PrimeTable& table,
                                     unsigned workers = 0) {
  if (x > table.limit()) {
    throw RangeError("count_ps_primes: x=" + std::to_string(x) + " above sieve limit " +
                     std::to_string(table.limit()));
  }
  if (profile.is_trivial()) return table.count(x);
  constexpr std::uint64_t kBlock = 1ull << 16;
  const std::size_t blocks = static_cast<std::size_t>(x / kBlock + 1);
  std::vector<std::uint64_t> partial(blocks, 0);
  parallel_chunks(blocks, workers, [&](std::size_t b) {
    const std::uint64_t lo = b * kBlock;
    const std::uint64_t hi = std::min(x, lo + kBlock - 1);
    std::uint64_t c = 0;
    table.for_each_prime(lo, hi, [&](std::uint64_t p) { c += profile.contains(p) ? 1 : 0; });
    partial[b] = c;
  });
  std::uint64_t total = 0;
  for (std::uint64_t c : partial) total += c;
  return total;
}

namespace detail {

template <class F>
double simpson_adaptive(const F& f, double a, double b, double fa, double fm, double fb, double whole, double eps,
                        int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * eps) return left + right + delta / 15.0;
  return simpson_adaptive(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
         simpson_adaptive(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

/// Adaptive Simpson of f over [a, b] with absolute tolerance eps.
template <class F>
double integrate_simpson(const F& f, double a, double b, double eps) {
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_adaptive(f, a, b, fa, fm, fb, whole, eps, 48);
}

}  // namespace detail

/// gamma_1...gamma_k * integral_2^x t^(-sigma_k) / log t dt, relative error <= 1e-8.
///
/// The range is split at t = 10 and then geometrically (factor 10) so each
/// adaptive Simpson panel sees a slowly varying integrand.
inline double main_term_li(double x, const PsProfile& profile) {
  if (!(x >= 3.0)) throw ConfigError("main_term_li requires x >= 3");
  const double sigma = profile.sigma_double();
  auto f = [sigma](double t) { return std::pow(t, -sigma) / std::log(t); };
  std::vector<double> cuts{2.0};
  for (double c = 10.0; c < x; c *= 10.0) cuts.push_back(c);
  cuts.push_back(x);
  // crude magnitude for the absolute tolerance
  double scale = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    scale += (cuts[i + 1] - cuts[i]) * std::min(f(cuts[i]), f(cuts[i + 1]));
  }
  const double eps = 1e-11 * scale / static_cast<double>(cuts.size());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    total += detail::integrate_simpson(f, cuts[i], cuts[i + 1], eps);
  }
  return profile.gamma_product().get_d() * total;
}

/// gamma_1...gamma_k / (1 - sigma_k) * x^(1 - sigma_k) / log x.
inline double main_term_simple(double x, const PsProfile& profile) {
  if (!(x >= 3.0)) throw ConfigError("main_term_simple requires x >= 3");
  if (profile.sigma() >= 1) throw ConfigError("main_term_simple requires sigma_k < 1");
  const double s = 1.0 - profile.sigma_double();
  return profile.gamma_product().get_d() / s * std::pow(x, s) / std::log(x);
}

/// varpi_k: 1/36, 1/64, 1/90 for k = 3, 4, 5 and 1/(3k^2) for k >= 6.
inline mpq_class varpi(std::size_t k) {
  if (k < 3) throw ConfigError("varpi_k is defined for k >= 3");
  switch (k) {
    case 3: return mpq_class(1, 36);
    case 4: return mpq_class(1, 64);
    case 5: return mpq_class(1, 90);
    default: return mpq_class(1, static_cast<unsigned long>(3 * k * k));
  }
}

struct Inequality {
  std::string label;
  mpq_class lhs;
  mpq_class rhs;
  bool satisfied = false;  // lhs < rhs, strictly
};

struct ShortcutCheck {
  bool applicable = false;  // profile shape matches the shortcut
  mpq_class sigma;
  mpq_class threshold;
  bool satisfied = false;   // applicable and sigma < threshold
};

/// Exact evaluation of the three constraint inequalities for profiles
/// (p1, p2, p3) sharing one k >= 3.
struct AdmissibilityReport {
  std::size_t k = 0;
  mpq_class varpi;
  std::array<mpq_class, 3> sigma;
  std::array<Inequality, 3> general;                 // coefficients 4k, 2k(k+1); bound 1 - varpi_k
  std::optional<std::array<Inequality, 3>> k3_form;  // k = 3: coefficients 12, 26; bound 1 - 1/24
  ShortcutCheck equal_profiles;                         // all three profiles equal
  ShortcutCheck one_constrained;                         // two of the three profiles all ones
  bool any_order = false;  // inequalities hold for some assignment of profiles to slots

  bool general_satisfied() const {
    return std::all_of(general.begin(), general.end(), [](const auto& i) { return i.satisfied; });
  }
  bool k3_satisfied() const {
    return k3_form && std::all_of(k3_form->begin(), k3_form->end(), [](const auto& i) { return i.satisfied; });
  }
  /// For k = 3 the 12/26 form is the binding one (it implies the general form).
  bool admissible() const { return k == 3 ? k3_satisfied() && general_satisfied() : general_satisfied(); }

  /// The ternary sum is symmetric in its three primes, so the slot order is a
  /// free choice; sorting sigma decreasingly minimizes every left-hand side.
  bool admissible_any_order() const { return any_order; }
};

namespace detail {

inline std::array<Inequality, 3> three_inequalities(const std::array<mpq_class, 3>& s, const mpq_class& a,
                                                    const mpq_class& b, const mpq_class& bound,
                                                    const std::string& tag) {
  std::array<Inequality, 3> out;
  out[0] = {tag + ": a*s3", a * s[2], bound, false};
  out[1] = {tag + ": a*s2 + b*s3", a * s[1] + b * s[2], bound, false};
  out[2] = {tag + ": a*s1 + b*s2 + b*s3", a * s[0] + b * s[1] + b * s[2], bound, false};
  for (auto& i : out) {
    i.lhs.canonicalize();
    i.satisfied = i.lhs < i.rhs;
  }
  return out;
}

}  // namespace detail

/// The checker on raw sigma values (scale-free: only sigma matters).
inline AdmissibilityReport check_admissibility(std::size_t k, const mpq_class& s1, const mpq_class& s2,
                                               const mpq_class& s3, bool profiles_equal = false,
                                               bool two_trivial = false) {
  if (k < 3) throw ConfigError("admissibility needs k >= 3");
  AdmissibilityReport r;
  r.k = k;
  r.varpi = varpi(k);
  r.sigma = {s1, s2, s3};
  const mpq_class kk(static_cast<long>(k));
  const mpq_class one_minus_varpi = 1 - r.varpi;
  r.general = detail::three_inequalities(r.sigma, 4 * kk, 2 * kk * (kk + 1), one_minus_varpi, "general");
  const mpq_class k3_bound = 1 - mpq_class(1, 24);
  if (k == 3) r.k3_form = detail::three_inequalities(r.sigma, mpq_class(12), mpq_class(26), k3_bound, "k=3");

  r.equal_profiles.applicable = profiles_equal;
  r.equal_profiles.sigma = s3;
  r.equal_profiles.threshold = k == 3 ? mpq_class(k3_bound / 64) : mpq_class(one_minus_varpi / (4 * kk * kk + 8 * kk));
  r.equal_profiles.satisfied = profiles_equal && s3 < r.equal_profiles.threshold;

  std::array<mpq_class, 3> sorted = r.sigma;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  auto all_hold = [](const std::array<Inequality, 3>& a) {
    return std::all_of(a.begin(), a.end(), [](const auto& i) { return i.satisfied; });
  };
  r.any_order = all_hold(detail::three_inequalities(sorted, 4 * kk, 2 * kk * (kk + 1), one_minus_varpi, "general")) &&
                (k != 3 || all_hold(detail::three_inequalities(sorted, 12, 26, k3_bound, "k=3")));

  r.one_constrained.applicable = two_trivial;
  r.one_constrained.threshold = k == 3 ? mpq_class(k3_bound / 12) : mpq_class(one_minus_varpi / (4 * kk));
  const mpq_class constrained = std::max({s1, s2, s3});
  r.one_constrained.sigma = two_trivial ? constrained : s3;
  r.one_constrained.satisfied = two_trivial && constrained < r.one_constrained.threshold;
  r.equal_profiles.threshold.canonicalize();
  r.one_constrained.threshold.canonicalize();
  return r;
}

inline AdmissibilityReport check_admissibility(const PsProfile& p1, const PsProfile& p2, const PsProfile& p3) {
  if (p1.k() != p2.k() || p2.k() != p3.k()) throw ConfigError("admissibility: profiles must share one k");
  const int trivial = int(p1.is_trivial()) + int(p2.is_trivial()) + int(p3.is_trivial());
  return check_admissibility(p1.k(), p1.sigma(), p2.sigma(), p3.sigma(), p1 == p2 && p2 == p3, trivial >= 2);
}

}  // namespace psg
