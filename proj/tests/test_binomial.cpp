#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cfloat>
#include <cmath>
#include <random>

#include "timeflow/binomial.hpp"

namespace bn = timeflow::binomial;
using Big = boost::multiprecision::cpp_bin_float_50;

namespace {

// Direct summation of C(n,i) p^i (1-p)^(n-i) for i = 0..k in 50-digit
// arithmetic, term by term from i = 0.
Big exact_cdf(std::int64_t k, std::int64_t n, double p) {
  const Big bp(p);
  const Big bq = Big(1) - bp;
  Big term = boost::multiprecision::pow(bq, static_cast<int>(n));
  Big sum = term;
  for (std::int64_t i = 1; i <= k; ++i) {
    term *= Big(n - i + 1) / Big(i) * bp / bq;
    sum += term;
  }
  return sum;
}

Big exact_pmf(std::int64_t k, std::int64_t n, double p) {
  const Big bp(p);
  Big c = 1;
  for (std::int64_t i = 1; i <= k; ++i) c = c * Big(n - k + i) / Big(i);
  return c * boost::multiprecision::pow(bp, static_cast<int>(k)) *
         boost::multiprecision::pow(Big(1) - bp, static_cast<int>(n - k));
}

// Upper tail summed term by term, so tiny tails keep all their digits.
Big exact_sf(std::int64_t k, std::int64_t n, double p) {
  Big sum = 0;
  for (std::int64_t i = k + 1; i <= n; ++i) sum += exact_pmf(i, n, p);
  return sum;
}

// Relative 1e-9 in linear space; below double's normal range the value is
// compared through its logarithm.
void expect_close(double got, double got_log, const Big& want, const char* what) {
  const double w = static_cast<double>(want);
  if (w >= DBL_MIN) {
    EXPECT_LE(std::fabs(got - w), 1e-9 * w) << what << " got " << got << " want " << w;
  } else {
    const double lw = static_cast<double>(boost::multiprecision::log(want));
    EXPECT_LE(std::fabs(got_log - lw), 1e-9 * std::fabs(lw)) << what;
  }
}

}  // namespace

TEST(Binomial, SmallCases) {
  EXPECT_NEAR(bn::cdf(0, 10, 0.1), std::pow(0.9, 10), 1e-15);
  EXPECT_NEAR(bn::cdf(1, 10, 0.1), 0.7360989291, 1e-9);
  EXPECT_EQ(bn::cdf(10, 10, 0.1), 1.0);
  EXPECT_EQ(bn::cdf(0, 10, 0.0), 1.0);
  EXPECT_EQ(bn::cdf(3, 10, 0.0), 1.0);
  EXPECT_EQ(bn::cdf(0, 0, 0.5), 1.0);
  EXPECT_EQ(bn::cdf(-1, 10, 0.5), 0.0);
  EXPECT_THROW(bn::cdf(1, 10, 1.5), timeflow::Error);
}

TEST(Binomial, MatchesExactSummation) {
  std::mt19937_64 rng(12345);
  for (int trial = 0; trial < 300; ++trial) {
    const std::int64_t n = 1 + static_cast<std::int64_t>(rng() % 1000);
    const std::int64_t k = static_cast<std::int64_t>(rng() % (n + 1));
    const double p = std::uniform_real_distribution<double>(1e-4, 0.9999)(rng);
    expect_close(bn::cdf(k, n, p), bn::log_cdf(k, n, p), exact_cdf(k, n, p), "cdf");
  }
}

TEST(Binomial, ExtremeTails) {
  // Deep lower tail and a near-one CDF whose complement matters.
  expect_close(bn::cdf(0, 1000, 0.9), bn::log_cdf(0, 1000, 0.9), exact_cdf(0, 1000, 0.9),
               "lower");
  expect_close(bn::cdf(5, 1000, 0.5), bn::log_cdf(5, 1000, 0.5), exact_cdf(5, 1000, 0.5),
               "lower");
  const double ls = bn::log_sf(990, 1000, 0.5);
  expect_close(std::exp(ls), ls, exact_sf(990, 1000, 0.5), "upper");
}

TEST(Binomial, SummationAndIncompleteBetaAgree) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const std::int64_t n = 1 + static_cast<std::int64_t>(rng() % 5000);
    const std::int64_t k = static_cast<std::int64_t>(rng() % (n + 1));
    const double p = std::uniform_real_distribution<double>(1e-3, 0.999)(rng);
    const double a = std::exp(bn::log_cdf_summation(k, n, p));
    const double b = bn::cdf_incomplete_beta(k, n, p);
    if (b > 1e-280) {
      EXPECT_LE(std::fabs(a - b), 1e-9 * b) << k << " " << n << " " << p;
    }
  }
}

TEST(Binomial, LargeTrialsUseIncompleteBeta) {
  const std::int64_t n = 5'000'000;
  const double p = 1e-4;
  const std::int64_t mean = 500;
  const double below = bn::cdf(mean - 50, n, p);
  const double at = bn::cdf(mean, n, p);
  const double above = bn::cdf(mean + 50, n, p);
  EXPECT_LT(below, at);
  EXPECT_LT(at, above);
  EXPECT_NEAR(at, 0.5, 0.05);
  EXPECT_NEAR(std::exp(bn::log_cdf_summation(mean, n, p)), at, 1e-9 * at);
}

TEST(Binomial, MonotoneInK) {
  for (double p : {0.001, 0.2, 0.5, 0.93}) {
    double previous = 0.0;
    for (std::int64_t k = 0; k <= 300; ++k) {
      const double c = bn::cdf(k, 300, p);
      EXPECT_GE(c, previous);
      EXPECT_LE(c, 1.0);
      previous = c;
    }
    EXPECT_EQ(previous, 1.0);
  }
}

TEST(Binomial, LogPmfMatchesExact) {
  for (std::int64_t n : {1, 7, 40, 999}) {
    for (std::int64_t k = 0; k <= n; k += std::max<std::int64_t>(1, n / 9)) {
      const double lp = bn::log_pmf(k, n, 0.3);
      expect_close(std::exp(lp), lp, exact_pmf(k, n, 0.3), "pmf");
    }
  }
}
