#pragma once

#include <cstdint>

#include "exsel/catalog.hpp"

namespace exsel {

struct ParamRange {
  double lo = 0.0;
  double hi = 0.0;
};

// Controls for the synthetic catalog generator. First-stage projects are
// drawn larger than second-stage ones in drilling cost, reserve scale, and
// success-NPV dispersion; a small share of second-stage candidates are cheap
// low-value wells that look attractive on value density.
struct SyntheticCatalogSpec {
  int first_stage = 30;
  int second_stage = 50;
  std::uint64_t seed = 2025;

  ParamRange first_capex_trap{4000.0, 12000.0};
  ParamRange first_capex_other{2500.0, 8000.0};
  ParamRange second_capex{800.0, 2500.0};
  ParamRange teaser_capex{150.0, 300.0};
  double teaser_share = 0.12;

  ParamRange first_prior_direct{0.55, 0.85};   // appraisal/mature priors
  ParamRange risking_factor{0.60, 0.95};       // per-factor, trap projects
  ParamRange second_prior{0.55, 0.85};

  ParamRange first_area_trap{0.9, 4.2};        // km^2, oil
  ParamRange first_area_other{0.5, 1.9};
  ParamRange second_area{0.22, 0.95};
  ParamRange teaser_area{0.24, 0.45};

  ParamRange first_thickness{5.0, 15.0};       // m
  ParamRange second_thickness{4.0, 9.0};

  ParamRange porosity_mode{0.10, 0.22};
  ParamRange water_saturation_mode{0.25, 0.45};

  ParamRange link_strength{0.35, 0.90};        // success-trigger links
  ParamRange failure_link_strength{0.25, 0.65};
};

// Emits a validating catalog, deterministic per spec. Throws
// std::invalid_argument when the spec cannot satisfy the catalog invariants.
Catalog make_synthetic(const SyntheticCatalogSpec& spec);

}  // namespace exsel
