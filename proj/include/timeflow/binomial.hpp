#pragma once

// Binomial distribution tails for the word/hour affinity score.
//
// The point mass uses Loader's saddle-point expansion, which keeps full
// relative precision for large n where lgamma differences lose digits.
// Tails are accumulated outward from the term nearest the mode so the sum
// can stop once the remaining geometric tail is negligible.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

#include <boost/math/special_functions/beta.hpp>

#include "timeflow/error.hpp"

namespace timeflow::binomial {

// Above this many trials the tails come from the regularized incomplete beta
// function instead of term summation.
inline constexpr std::int64_t kSummationLimit = 1'000'000;

namespace detail {

inline constexpr double kLn2Pi = 1.8378770664093454835606594728112;

// log(n!) - log(sqrt(2 pi n) (n/e)^n)
inline double stirlerr(std::int64_t n) {
  static const std::array<double, 16> kSmall = [] {
    std::array<double, 16> t{};
    long double log_fact = 0.0L;
    for (int i = 1; i < 16; ++i) {
      log_fact += std::log(static_cast<long double>(i));
      const long double li = std::log(static_cast<long double>(i));
      t[i] = static_cast<double>(log_fact - (i + 0.5L) * li + i -
                                 0.5L * static_cast<long double>(kLn2Pi));
    }
    return t;
  }();
  constexpr double S0 = 1.0 / 12.0;
  constexpr double S1 = 1.0 / 360.0;
  constexpr double S2 = 1.0 / 1260.0;
  constexpr double S3 = 1.0 / 1680.0;
  constexpr double S4 = 1.0 / 1188.0;
  if (n < 16) return kSmall[static_cast<std::size_t>(n)];
  const double nn = static_cast<double>(n);
  const double n1 = 1.0 / nn;
  const double n2 = n1 * n1;
  if (n > 500) return (S0 - S1 * n2) * n1;
  if (n > 80) return (S0 - (S1 - S2 * n2) * n2) * n1;
  if (n > 35) return (S0 - (S1 - (S2 - S3 * n2) * n2) * n2) * n1;
  return (S0 - (S1 - (S2 - (S3 - S4 * n2) * n2) * n2) * n2) * n1;
}

// Deviance term x log(x/np) + np - x, evaluated without cancellation.
inline double bd0(double x, double np) {
  if (std::fabs(x - np) < 0.1 * (x + np)) {
    const double v = (x - np) / (x + np);
    double s = (x - np) * v;
    double ej = 2 * x * v;
    const double v2 = v * v;
    for (int j = 1; j < 1000; ++j) {
      ej *= v2;
      const double s1 = s + ej / (2 * j + 1);
      if (s1 == s) return s1;
      s = s1;
    }
    return s;
  }
  return x * std::log(x / np) + np - x;
}

inline void check_args(std::int64_t n, double p) {
  if (n < 0 || !(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "binomial needs n >= 0 and p in [0,1]");
  }
}

}  // namespace detail

inline double log_pmf(std::int64_t k, std::int64_t n, double p) {
  detail::check_args(n, p);
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  if (k < 0 || k > n) return kNegInf;
  const double q = 1.0 - p;
  if (p == 0.0) return k == 0 ? 0.0 : kNegInf;
  if (p == 1.0) return k == n ? 0.0 : kNegInf;
  const double nn = static_cast<double>(n);
  if (k == 0) {
    if (n == 0) return 0.0;
    return p < 0.1 ? -detail::bd0(nn, nn * q) - nn * p : nn * std::log1p(-p);
  }
  if (k == n) {
    return q < 0.1 ? -detail::bd0(nn, nn * p) - nn * q : nn * std::log(p);
  }
  const double x = static_cast<double>(k);
  const double lc = detail::stirlerr(n) - detail::stirlerr(k) -
                    detail::stirlerr(n - k) - detail::bd0(x, nn * p) -
                    detail::bd0(nn - x, nn * q);
  const double lf = detail::kLn2Pi + std::log(x) + std::log1p(-x / nn);
  return lc - 0.5 * lf;
}

namespace detail {

inline constexpr double kTailCutoff = 1e-20;

// log P(X <= k) for k strictly below the mean: terms shrink monotonically
// from k down to 0.
inline double log_lower_sum(std::int64_t k, std::int64_t n, double p) {
  const double q = 1.0 - p;
  const double nn = static_cast<double>(n);
  double term = 1.0;
  double sum = 1.0;
  for (std::int64_t i = k; i >= 1; --i) {
    const double x = static_cast<double>(i);
    term *= x * q / ((nn - x + 1.0) * p);
    sum += term;
    if (term < kTailCutoff * sum) break;
  }
  return log_pmf(k, n, p) + std::log(sum);
}

// log P(X >= k) for k strictly above the mean.
inline double log_upper_sum(std::int64_t k, std::int64_t n, double p) {
  const double q = 1.0 - p;
  const double nn = static_cast<double>(n);
  double term = 1.0;
  double sum = 1.0;
  for (std::int64_t i = k; i < n; ++i) {
    const double x = static_cast<double>(i);
    term *= (nn - x) * p / ((x + 1.0) * q);
    sum += term;
    if (term < kTailCutoff * sum) break;
  }
  return log_pmf(k, n, p) + std::log(sum);
}

inline double log1m_exp(double log_x) {
  // log(1 - exp(log_x)) for log_x <= 0
  return log_x > -0.6931471805599453 ? std::log(-std::expm1(log_x))
                                     : std::log1p(-std::exp(log_x));
}

}  // namespace detail

// P(X <= k) through the incomplete beta identity I_{1-p}(n-k, k+1).
inline double cdf_incomplete_beta(std::int64_t k, std::int64_t n, double p) {
  detail::check_args(n, p);
  if (k < 0) return 0.0;
  if (k >= n || p == 0.0) return 1.0;
  if (p == 1.0) return 0.0;
  return boost::math::ibetac(static_cast<double>(k + 1),
                             static_cast<double>(n - k), p);
}

// P(X > k) through the incomplete beta identity.
inline double sf_incomplete_beta(std::int64_t k, std::int64_t n, double p) {
  detail::check_args(n, p);
  if (k < 0) return 1.0;
  if (k >= n || p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;
  return boost::math::ibeta(static_cast<double>(k + 1),
                            static_cast<double>(n - k), p);
}

// log P(X <= k) by term summation, any n.
inline double log_cdf_summation(std::int64_t k, std::int64_t n, double p) {
  detail::check_args(n, p);
  if (k < 0) return -std::numeric_limits<double>::infinity();
  if (k >= n || p == 0.0) return 0.0;
  if (p == 1.0) return -std::numeric_limits<double>::infinity();
  if (static_cast<double>(k) < static_cast<double>(n) * p) {
    return detail::log_lower_sum(k, n, p);
  }
  return detail::log1m_exp(detail::log_upper_sum(k + 1, n, p));
}

// log P(X > k) by term summation, any n.
inline double log_sf_summation(std::int64_t k, std::int64_t n, double p) {
  detail::check_args(n, p);
  if (k < 0) return 0.0;
  if (k >= n || p == 0.0) return -std::numeric_limits<double>::infinity();
  if (p == 1.0) return 0.0;
  if (static_cast<double>(k) < static_cast<double>(n) * p) {
    return detail::log1m_exp(detail::log_lower_sum(k, n, p));
  }
  return detail::log_upper_sum(k + 1, n, p);
}

inline double log_cdf(std::int64_t k, std::int64_t n, double p) {
  if (n > kSummationLimit) return std::log(cdf_incomplete_beta(k, n, p));
  return log_cdf_summation(k, n, p);
}

// Upper tail; carries the ordering of cdf() where cdf() itself rounds to 1.
inline double log_sf(std::int64_t k, std::int64_t n, double p) {
  if (n > kSummationLimit) return std::log(sf_incomplete_beta(k, n, p));
  return log_sf_summation(k, n, p);
}

// P(X <= k) = sum_{i=0}^{k} C(n,i) p^i (1-p)^(n-i)
inline double cdf(std::int64_t k, std::int64_t n, double p) {
  if (n > kSummationLimit) return cdf_incomplete_beta(k, n, p);
  return std::exp(log_cdf_summation(k, n, p));
}

}  // namespace timeflow::binomial
