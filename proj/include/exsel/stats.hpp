#pragma once

#include <cstdint>

// Small numerical toolbox: counter-based uniform streams and the inverse
// CDFs needed for quantile-transform sampling. Everything here is a pure
// function, so scenario generation can be parallelized and replayed.

namespace exsel {

// SplitMix64 finalizer. Good avalanche behaviour, cheap, stateless.
std::uint64_t mix64(std::uint64_t z) noexcept;

// Stateless uniform stream keyed by (seed, a, b, c, d). Identical keys give
// identical draws regardless of evaluation order, which is what makes the
// common-random-number contract hold under parallel bank construction.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) noexcept : seed_(seed) {}

  // Uniform in [0, 1) with 53 random mantissa bits.
  double uniform(std::uint64_t a, std::uint64_t b, std::uint64_t c,
                 std::uint64_t d) const noexcept;

  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::uint64_t seed_;
};

// Standard normal CDF and its inverse. The inverse uses a rational
// approximation refined with one Halley step against std::erfc; absolute
// error is below 1e-13 over (0, 1).
double norm_cdf(double x) noexcept;
double norm_inv(double p);

// Regularized incomplete beta I_x(a, b) and its inverse in x. a, b > 0.
double beta_cdf(double x, double a, double b);
double beta_inv(double p, double a, double b);

}  // namespace exsel
