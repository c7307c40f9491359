#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace exsel {

// The six reserve indicators: {predicted, controlled, proved} x {oil, gas}.
enum class ReserveIndicator : int {
  PredictedOil = 0,
  PredictedGas = 1,
  ControlledOil = 2,
  ControlledGas = 3,
  ProvedOil = 4,
  ProvedGas = 5,
};

inline constexpr int kIndicatorCount = 6;

const char* indicator_name(ReserveIndicator m) noexcept;        // "po", ...
std::optional<ReserveIndicator> indicator_from_name(const std::string& s);

enum class Stage : int { First = 0, Second = 1 };
enum class Category : int { Trap = 0, Appraisal = 1, Mature = 2 };

const char* stage_name(Stage s) noexcept;
const char* category_name(Category c) noexcept;

// Three-point estimate (P10 / P50 / P90) of a positive quantity.
struct QuantileTriple {
  double q10 = 0.0;
  double q50 = 0.0;
  double q90 = 0.0;

  bool degenerate() const noexcept { return q10 == q50 && q50 == q90; }
};

// Volumetric inputs for one phase (oil or gas).
struct VolumetricParams {
  QuantileTriple area;              // km^2
  QuantileTriple thickness;         // m
  QuantileTriple porosity;          // fraction, bounded to [0,1]
  QuantileTriple water_saturation;  // fraction, bounded to [0,1]
  QuantileTriple volume_factor;     // dimensionless
  double conversion = 1.0;          // unit conversion coefficient, > 0
};

// Project-level planning economics. Money in 10^4 CNY throughout.
struct EconomicParams {
  double price_oil = 0.0;
  double price_gas = 0.0;
  double unit_cost_oil = 0.0;
  double unit_cost_gas = 0.0;
  double econ_coeff_oil = 1.0;
  double econ_coeff_gas = 1.0;
  double fixed_cost = 0.0;
  double tax_rate = 0.0;
  double discount = 1.0;
  double capex = 0.0;
  double failure_loss = 0.0;
  int well_count = 1;
};

// Classification coefficients mapping phase potential into each indicator.
struct ClassificationMap {
  std::array<double, kIndicatorCount> oil{};
  std::array<double, kIndicatorCount> gas{};
};

// Multiplicative prospect-risking factors, each in (0, 1].
struct RiskingFactors {
  double source = 1.0;
  double reservoir = 1.0;
  double trap = 1.0;
  double preservation = 1.0;
  double migration = 1.0;

  double product() const noexcept {
    return source * reservoir * trap * preservation * migration;
  }
};

struct Project {
  std::string id;
  Stage stage = Stage::First;
  Category category = Category::Trap;
  bool mandatory = false;  // first-stage only
  std::optional<double> prior_pos;
  std::optional<RiskingFactors> risking;
  VolumetricParams oil;
  VolumetricParams gas;
  EconomicParams economics;
  ClassificationMap classification;

  // Prior success probability after resolving risking factors.
  double resolved_prior() const noexcept {
    if (prior_pos) return *prior_pos;
    if (risking) return risking->product();
    return 0.0;
  }
};

// Directed information edge: a first-stage outcome shifts the log-odds of a
// second-stage project by +/- strength depending on success or failure.
struct InfoLink {
  std::string from;
  std::string to;
  double strength = 0.0;  // logit units, may be negative
};

// Eligibility triggers of one second-stage project.
struct TriggerSets {
  std::string project;
  std::vector<std::string> success_triggers;
  std::vector<std::string> failure_triggers;
  std::vector<std::string> unconditional_triggers;
};

struct ReserveTarget {
  ReserveIndicator indicator = ReserveIndicator::PredictedOil;
  double target = 0.0;       // H_m, > 0
  double probability = 0.0;  // alpha_m in (0,1)
};

struct PlanningConstraints {
  double first_stage_budget = 0.0;  // B1
  double annual_budget = 0.0;       // B
  int first_stage_wells = 0;        // N1
  int annual_wells = 0;             // N
  double trap_budget = 0.0;         // B_trap
  double appraisal_budget = 0.0;    // B_app
  std::vector<ReserveTarget> reserve_targets;  // active indicators M_act
  double joint_probability = 0.0;   // alpha_joint
  double min_success_rate = 0.0;    // rho_min
  double success_rate_probability = 0.0;  // alpha_sr
  double cvar_confidence = 0.9;     // beta
  double posterior_lo = 0.01;       // lower admissible posterior bound
  double posterior_hi = 0.99;       // upper admissible posterior bound
  double shortfall_weight = 0.0;    // gamma
};

// Binary first-stage selection vector, indexed like Catalog::first_stage.
using PortfolioGenome = std::vector<std::uint8_t>;

}  // namespace exsel
