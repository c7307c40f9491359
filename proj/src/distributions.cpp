#include "exsel/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "exsel/stats.hpp"

namespace exsel {

CalibratedDistribution calibrate(const QuantileTriple& t, bool bounded) {
  CalibratedDistribution d;
  d.clip_lo = 0.0;
  d.clip_hi = bounded ? 1.0 : std::numeric_limits<double>::infinity();
  if (t.degenerate()) {
    d.kind = DistKind::Constant;
    d.value = t.q10;
    return d;
  }
  if (!bounded && t.q10 > 0.0) {
    double upper = std::log(t.q90 / t.q50);
    double lower = std::log(t.q50 / t.q10);
    bool symmetric_enough =
        upper > 0.0 && lower > 0.0 &&
        std::max(upper, lower) <= 2.0 * std::min(upper, lower);
    if (symmetric_enough) {
      d.kind = DistKind::Lognormal;
      d.mu = std::log(t.q50);
      d.sigma = std::log(t.q90 / t.q10) / (2.0 * kZ90);
      return d;
    }
  }
  d.kind = DistKind::Pert;
  d.pert_min = t.q10;
  d.pert_mode = t.q50;
  d.pert_max = t.q90;
  return d;
}

namespace {

void pert_shapes(const CalibratedDistribution& d, double& a, double& b) {
  double span = d.pert_max - d.pert_min;
  a = 1.0 + 4.0 * (d.pert_mode - d.pert_min) / span;
  b = 1.0 + 4.0 * (d.pert_max - d.pert_mode) / span;
}

}  // namespace

double sample_parameter(const CalibratedDistribution& d, double u) {
  double x = 0.0;
  switch (d.kind) {
    case DistKind::Constant:
      x = d.value;
      break;
    case DistKind::Lognormal: {
      if (d.sigma == 0.0) {
        x = std::exp(d.mu);
      } else {
        // norm_inv rejects the endpoints; nudge u off 0.
        double uu = std::max(u, 1e-300);
        x = std::exp(d.mu + d.sigma * norm_inv(uu));
      }
      break;
    }
    case DistKind::Pert: {
      double a, b;
      pert_shapes(d, a, b);
      x = d.pert_min + (d.pert_max - d.pert_min) * beta_inv(u, a, b);
      break;
    }
  }
  return std::clamp(x, d.clip_lo, d.clip_hi);
}

double distribution_mean(const CalibratedDistribution& d) {
  double m = 0.0;
  switch (d.kind) {
    case DistKind::Constant:
      m = d.value;
      break;
    case DistKind::Lognormal:
      m = std::exp(d.mu + 0.5 * d.sigma * d.sigma);
      break;
    case DistKind::Pert:
      m = (d.pert_min + 4.0 * d.pert_mode + d.pert_max) / 6.0;
      break;
  }
  return std::clamp(m, d.clip_lo, d.clip_hi);
}

double volumetric_reserve(double kappa, double area, double thickness,
                          double porosity, double water_saturation,
                          double volume_factor) {
  if (!(volume_factor > 0.0)) {
    throw std::domain_error("volumetric_reserve: volume factor must be > 0");
  }
  return kappa * area * thickness * porosity * (1.0 - water_saturation) /
         volume_factor;
}

double indicator_contribution(double lambda_oil, double lambda_gas,
                              double reserve_oil, double reserve_gas) {
  return lambda_oil * reserve_oil + lambda_gas * reserve_gas;
}

double success_npv(const EconomicParams& e, double reserve_oil,
                   double reserve_gas) {
  double profit = (e.price_oil - e.unit_cost_oil) * e.econ_coeff_oil *
                      reserve_oil +
                  (e.price_gas - e.unit_cost_gas) * e.econ_coeff_gas *
                      reserve_gas -
                  e.fixed_cost;
  return e.discount * (profit - e.tax_rate * std::max(profit, 0.0)) -
         e.capex;
}

MeanReserves project_mean_reserves(const Project& project) {
  auto phase_mean = [](const VolumetricParams& v) {
    double area = distribution_mean(calibrate(v.area, false));
    double h = distribution_mean(calibrate(v.thickness, false));
    double phi = distribution_mean(calibrate(v.porosity, true));
    double sw = distribution_mean(calibrate(v.water_saturation, true));
    double b = distribution_mean(calibrate(v.volume_factor, false));
    return volumetric_reserve(v.conversion, area, h, phi, sw, b);
  };
  return {phase_mean(project.oil), phase_mean(project.gas)};
}

}  // namespace exsel
