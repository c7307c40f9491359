#include "exsel/stats.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace exsel {

std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double CounterRng::uniform(std::uint64_t a, std::uint64_t b, std::uint64_t c,
                           std::uint64_t d) const noexcept {
  std::uint64_t h = mix64(seed_ ^ mix64(a ^ mix64(b ^ mix64(c ^ mix64(d)))));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

double norm_cdf(double x) noexcept {
  return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

namespace {

// Acklam's rational approximation to the inverse normal CDF.
double norm_inv_approx(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  if (p < plow) {
    double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
            c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - plow) {
    double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
             c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  double q = p - 0.5;
  double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r +
          a[5]) *
         q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double norm_inv(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error("norm_inv: p must lie in (0, 1)");
  }
  if (p > 0.5) {
    // refine in the left tail, where Phi(x) - p does not cancel
    return -norm_inv(1.0 - p);
  }
  double x = norm_inv_approx(p);
  // Halley steps: f(x) = Phi(x) - p, f'(x) = phi(x), f''(x) = -x phi(x).
  for (int it = 0; it < 2; ++it) {
    double e = norm_cdf(x) - p;
    double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
    if (pdf <= 0.0) break;
    double u = e / pdf;
    x -= u / (1.0 + 0.5 * x * u);
  }
  return x;
}

namespace {

// Continued fraction for the incomplete beta function (modified Lentz).
double beta_cf(double x, double a, double b) {
  const double tiny = 1e-300;
  const double eps = std::numeric_limits<double>::epsilon();
  double qab = a + b;
  double qap = a + 1.0;
  double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 300; ++m) {
    int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 10.0 * eps) break;
  }
  return h;
}

}  // namespace

double beta_cdf(double x, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw std::domain_error("beta_cdf: shape parameters must be positive");
  }
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double lbeta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
  double front =
      std::exp(a * std::log(x) + b * std::log1p(-x) - lbeta);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_cf(x, a, b) / a;
  }
  return 1.0 - std::exp(b * std::log1p(-x) + a * std::log(x) - lbeta) *
                   beta_cf(1.0 - x, b, a) / b;
}

double beta_inv(double p, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw std::domain_error("beta_inv: shape parameters must be positive");
  }
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::domain_error("beta_inv: p must lie in [0, 1]");
  }
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;
  double lo = 0.0, hi = 1.0;
  double x = a / (a + b);  // start from the mean
  double lbeta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
  for (int it = 0; it < 100; ++it) {
    double f = beta_cdf(x, a, b) - p;
    if (f > 0.0) {
      hi = x;
    } else {
      lo = x;
    }
    double pdf = std::exp((a - 1.0) * std::log(x) +
                          (b - 1.0) * std::log1p(-x) - lbeta);
    double step = pdf > 0.0 ? f / pdf : 0.0;
    double xn = x - step;
    if (!(xn > lo && xn < hi)) {
      xn = 0.5 * (lo + hi);  // Newton left the bracket; bisect instead
    }
    if (std::fabs(xn - x) < 1e-15 * (1.0 + std::fabs(x))) {
      return xn;
    }
    x = xn;
  }
  return x;
}

}  // namespace exsel
