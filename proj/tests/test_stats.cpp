#include <doctest.h>

#include <cmath>
#include <set>
#include <stdexcept>
#include <vector>

#include "exsel/stats.hpp"

using namespace exsel;

namespace {

// Bisection on the exact CDF; independent of the rational approximation
// inside norm_inv.
double norm_inv_bisect(double p) {
  if (p > 0.5) return -norm_inv_bisect(1.0 - p);
  double lo = -40.0, hi = 40.0;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (norm_cdf(mid) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Simpson quadrature of the Beta(a, b) density over [0, x].
double beta_cdf_quadrature(double x, double a, double b) {
  const int n = 20000;  // even
  double lbeta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
  auto pdf = [&](double t) {
    if (t <= 0.0) {
      return a == 1.0 ? std::exp(-lbeta) : 0.0;  // finite endpoint limit
    }
    if (t >= 1.0) {
      return b == 1.0 ? std::exp(-lbeta) : 0.0;
    }
    return std::exp((a - 1.0) * std::log(t) + (b - 1.0) * std::log1p(-t) -
                    lbeta);
  };
  double h = x / n;
  double acc = pdf(0.0) + pdf(x);
  for (int i = 1; i < n; ++i) {
    acc += pdf(i * h) * (i % 2 ? 4.0 : 2.0);
  }
  return acc * h / 3.0;
}

}  // namespace

TEST_CASE("mix64 avalanches and stays stable") {
  CHECK(mix64(0) != 0);
  CHECK(mix64(1) != mix64(2));
  CHECK(mix64(0x123456789abcdef0ULL) == mix64(0x123456789abcdef0ULL));
}

TEST_CASE("counter rng is keyed, deterministic, and in range") {
  CounterRng rng(42);
  std::set<double> seen;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    double u = rng.uniform(1, i, 7, 3);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    seen.insert(u);
  }
  CHECK(seen.size() == 1000);  // no collisions over distinct keys
  CHECK(rng.uniform(1, 2, 3, 4) == CounterRng(42).uniform(1, 2, 3, 4));
  CHECK(rng.uniform(1, 2, 3, 4) != CounterRng(43).uniform(1, 2, 3, 4));
}

TEST_CASE("counter rng mean is near one half") {
  CounterRng rng(7);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    sum += rng.uniform(2, static_cast<std::uint64_t>(i), 0, 0);
  }
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("normal inverse matches bisection oracle") {
  for (double p : {1e-9, 1e-4, 0.02425, 0.1, 0.3, 0.5, 0.7, 0.9, 0.975,
                   0.9999, 1.0 - 1e-9}) {
    CHECK(norm_inv(p) == doctest::Approx(norm_inv_bisect(p)).epsilon(1e-9));
  }
  CHECK(norm_inv(0.5) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(norm_inv(0.9) == doctest::Approx(1.2815515655446004).epsilon(1e-12));
  CHECK_THROWS_AS(norm_inv(0.0), std::domain_error);
  CHECK_THROWS_AS(norm_inv(1.0), std::domain_error);
}

TEST_CASE("beta cdf matches quadrature oracle") {
  struct Case {
    double a, b;
  };
  for (Case c : {Case{1.0, 1.0}, Case{2.5, 4.0}, Case{5.0, 1.2},
                 Case{3.0, 3.0}}) {
    for (double x : {0.05, 0.25, 0.5, 0.75, 0.95}) {
      CHECK(beta_cdf(x, c.a, c.b) ==
            doctest::Approx(beta_cdf_quadrature(x, c.a, c.b)).epsilon(1e-8));
    }
  }
  CHECK(beta_cdf(0.0, 2.0, 2.0) == 0.0);
  CHECK(beta_cdf(1.0, 2.0, 2.0) == 1.0);
}

TEST_CASE("beta inverse round-trips the cdf") {
  for (double a : {1.0, 2.0, 4.8}) {
    for (double b : {1.0, 3.3, 5.0}) {
      for (double p : {1e-6, 0.01, 0.2, 0.5, 0.8, 0.99, 1.0 - 1e-6}) {
        double x = beta_inv(p, a, b);
        CHECK(beta_cdf(x, a, b) == doctest::Approx(p).epsilon(1e-9));
      }
    }
  }
  CHECK(beta_inv(0.0, 2.0, 3.0) == 0.0);
  CHECK(beta_inv(1.0, 2.0, 3.0) == 1.0);
  CHECK(beta_inv(0.5, 1.0, 1.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK_THROWS_AS(beta_inv(0.5, -1.0, 1.0), std::domain_error);
}
