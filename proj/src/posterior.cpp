#include "exsel/posterior.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace exsel {

bool eligibility(const std::vector<std::uint8_t>& x,
                 const std::uint8_t* xi_row, std::size_t xi_stride,
                 const SecondStageWiring& w) {
  for (int i : w.unconditional_triggers) {
    if (x[static_cast<std::size_t>(i)]) return true;
  }
  for (int i : w.success_triggers) {
    if (x[static_cast<std::size_t>(i)] &&
        xi_row[static_cast<std::size_t>(i) * xi_stride]) {
      return true;
    }
  }
  for (int i : w.failure_triggers) {
    if (x[static_cast<std::size_t>(i)] &&
        !xi_row[static_cast<std::size_t>(i) * xi_stride]) {
      return true;
    }
  }
  return false;
}

double evidence(const std::vector<std::uint8_t>& x, const std::uint8_t* xi_row,
                std::size_t xi_stride, const SecondStageWiring& w,
                double theta_scale) {
  double delta = 0.0;
  for (const auto& [i, theta] : w.links) {
    if (!x[static_cast<std::size_t>(i)]) continue;
    double sign = xi_row[static_cast<std::size_t>(i) * xi_stride] ? 1.0 : -1.0;
    delta += theta_scale * theta * sign;
  }
  return delta;
}

double posterior(double prior, double delta, double lo, double hi) {
  if (!(prior > 0.0 && prior < 1.0)) {
    throw std::domain_error("posterior: prior must lie in (0, 1)");
  }
  if (delta == 0.0) {
    return std::clamp(prior, lo, hi);
  }
  double logit = std::log(prior / (1.0 - prior));
  double p = 1.0 / (1.0 + std::exp(-(logit + delta)));
  return std::clamp(p, lo, hi);
}

}  // namespace exsel
