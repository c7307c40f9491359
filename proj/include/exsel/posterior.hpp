#pragma once

#include <cstdint>
#include <vector>

#include "exsel/catalog.hpp"

namespace exsel {

// Geological-learning primitives. All are pure functions of the portfolio,
// the observed first-stage outcomes, and the catalog wiring; safe for
// parallel per-scenario evaluation.

// Eligibility of one second-stage project: 1 iff at least one selected
// success trigger succeeded, one selected failure trigger failed, or one
// unconditional trigger is selected.
bool eligibility(const std::vector<std::uint8_t>& x,
                 const std::uint8_t* xi_row, std::size_t xi_stride,
                 const SecondStageWiring& wiring);

// Net log-odds evidence received from selected informant outcomes. Each link
// contributes theta_scale * theta * (2 xi - 1) when its source is selected.
double evidence(const std::vector<std::uint8_t>& x, const std::uint8_t* xi_row,
                std::size_t xi_stride, const SecondStageWiring& wiring,
                double theta_scale = 1.0);

// Posterior success probability: the logistic update of the prior's
// log-odds, projected onto [lo, hi]. A zero evidence term returns the
// clamped prior directly, so the fixed-probability path and a zero-strength
// posterior path produce bit-identical values.
double posterior(double prior, double delta, double lo, double hi);

// Second-stage success realization against a stored uniform.
inline bool realize_second_stage(double p, double u) noexcept {
  return u <= p;
}

}  // namespace exsel
