#pragma once

#include "exsel/types.hpp"

namespace exsel {

// Standard-normal 90th percentile used by the quantile fit.
inline constexpr double kZ90 = 1.281552;

enum class DistKind : int { Constant = 0, Lognormal = 1, Pert = 2 };

// A sampling-ready distribution fitted to a three-point estimate. Draws are
// produced by inverse-CDF transform of one uniform, then clipped to
// [clip_lo, clip_hi].
struct CalibratedDistribution {
  DistKind kind = DistKind::Constant;
  double value = 0.0;       // Constant
  double mu = 0.0;          // Lognormal: log-median
  double sigma = 0.0;       // Lognormal: log-scale, >= 0
  double pert_min = 0.0;    // Pert
  double pert_mode = 0.0;
  double pert_max = 0.0;
  double clip_lo = 0.0;
  double clip_hi = 0.0;
};

// Fits a distribution to (q10, q50, q90). Degenerate triples become
// constants. Unbounded positive parameters get a lognormal with mu = ln q50
// and sigma = ln(q90/q10) / (2 z90), unless the two half-widths ln(q90/q50)
// and ln(q50/q10) disagree by more than a factor of 2, in which case the fit
// falls back to a PERT on (q10, q50, q90). Bounded parameters always use the
// PERT, clipped to [0, 1].
CalibratedDistribution calibrate(const QuantileTriple& triple, bool bounded);

// One inverse-CDF draw from u in [0, 1), clipped to the distribution's
// bounds. Deterministic in (dist, u).
double sample_parameter(const CalibratedDistribution& dist, double u);

// Mean of the fitted distribution, clipped; used by the deterministic
// mean-value benchmark.
double distribution_mean(const CalibratedDistribution& dist);

// Reserve volume by the volumetric method: kappa * A * h * phi * (1 - Sw) / B.
double volumetric_reserve(double kappa, double area, double thickness,
                          double porosity, double water_saturation,
                          double volume_factor);

// Contribution of realized phase reserves to one indicator.
double indicator_contribution(double lambda_oil, double lambda_gas,
                              double reserve_oil, double reserve_gas);

// Success-state NPV from realized reserves and planning economics.
double success_npv(const EconomicParams& econ, double reserve_oil,
                   double reserve_gas);

struct MeanReserves {
  double oil = 0.0;
  double gas = 0.0;
};

// Reserves at the clipped means of each calibrated volumetric parameter;
// the basis for mean-value planning.
MeanReserves project_mean_reserves(const Project& project);

}  // namespace exsel
