#pragma once

#include <optional>
#include <string>
#include <vector>

#include "exsel/catalog.hpp"
#include "exsel/recourse.hpp"
#include "exsel/scenario_bank.hpp"

namespace exsel {

enum class RecourseMode : int { Exact = 0, Greedy = 1, None = 2, FixedPlan = 3 };
enum class PosteriorMode : int { Posterior = 0, Fixed = 1 };

struct EvaluationOptions {
  RecourseMode recourse_mode = RecourseMode::Exact;
  PosteriorMode posterior_mode = PosteriorMode::Posterior;
  double theta_scale = 1.0;  // multiplies every link strength
  GreedyRank greedy_rank = GreedyRank::Density;
  std::vector<std::uint8_t> fixed_plan;  // second-stage bits, FixedPlan only
  bool keep_scenario_details = false;
  bool keep_losses = false;
};

// Normalized aggregate violation. Monetary terms divide by their budget,
// count terms by the well requirement, probability terms are raw gaps.
// Per-scenario constraints enter as scenario means.
struct ViolationBreakdown {
  double first_stage_budget = 0.0;
  double first_stage_wells = 0.0;
  double annual_budget = 0.0;
  double annual_wells = 0.0;
  double trap_budget = 0.0;
  double appraisal_budget = 0.0;
  double success_rate = 0.0;
  double reserve_individual = 0.0;
  double reserve_joint = 0.0;

  double total() const noexcept {
    return first_stage_budget + first_stage_wells + annual_budget +
           annual_wells + trap_budget + appraisal_budget + success_rate +
           reserve_individual + reserve_joint;
  }
};

struct ScenarioRecourseSummary {
  int scenario = 0;
  int eligible = 0;
  int selected = 0;
  int wells = 0;
  int deficit = 0;
  double spend = 0.0;
  double spend_trap = 0.0;
  double spend_appraisal = 0.0;
  double objective = 0.0;
};

struct EvaluationReport {
  double enpv = 0.0;
  double cvar = 0.0;
  double worst_z = 0.0;          // lowest realized annual NPV
  double loss_probability = 0.0; // share of realizations with Z < 0
  double success_reliability = 0.0;
  std::vector<std::pair<ReserveIndicator, double>> indicator_reliability;
  double joint_reserve_reliability = 1.0;

  double first_stage_spend = 0.0;
  double first_stage_trap_spend = 0.0;
  double first_stage_appraisal_spend = 0.0;
  int first_stage_wells = 0;

  // Deterministic slacks (limit minus usage; min over scenarios where the
  // constraint is scenario-wise).
  double first_stage_budget_slack = 0.0;
  double annual_budget_slack_min = 0.0;
  double trap_budget_slack_min = 0.0;
  double appraisal_budget_slack_min = 0.0;
  double annual_wells_gap_mean = 0.0;

  ViolationBreakdown breakdown;
  double viol = 0.0;

  std::optional<double> mean_selected_pos;
  std::optional<double> mean_selected_pos_weighted;
  double mean_second_stage_wells = 0.0;
  double mean_recourse_spend = 0.0;

  std::vector<ScenarioRecourseSummary> scenarios;  // keep_scenario_details
  std::vector<double> losses;                      // keep_losses, (s,k) order

  // Flat record with stable field names.
  std::string to_json_string(int indent = 2) const;
};

// Realized value of one committed project: the success-state NPV when it
// succeeds, minus the failure loss otherwise. Realized annual NPV is the sum
// of this over all committed projects of both stages.
inline double realized_payoff(double success_npv, double failure_loss,
                              bool success) noexcept {
  return success ? success_npv : -failure_loss;
}

// Realized reserve contribution of one committed project to one indicator;
// failures contribute nothing.
inline double realized_reserve(double contribution, bool success) noexcept {
  return success ? contribution : 0.0;
}

// Well-weighted drilling success rate. Undefined at zero committed wells;
// the evaluator treats that case as a success-rate-violating scenario.
double drilling_success_rate(double successful_wells, double committed_wells);

// Downside loss relative to the zero-profit benchmark.
inline double downside_loss(double z) noexcept { return z < 0.0 ? -z : 0.0; }

// Finite-sample CVaR of the loss list at confidence beta, evaluated in
// closed form: the minimizing threshold is the empirical beta-quantile.
double cvar(const std::vector<double>& losses, double beta);

// Count of true outcomes over the realization set.
double empirical_probability(std::size_t true_count, std::size_t total);

// Prices one repaired first-stage portfolio against a bank: observes
// first-stage outcomes per scenario, updates eligibility and posteriors,
// solves (or applies) the recourse rule, realizes second-stage successes,
// and accumulates all (s, k)-level quantities in a fixed order.
EvaluationReport evaluate(const Catalog& catalog, const ScenarioBank& bank,
                          const PortfolioGenome& genome,
                          const EvaluationOptions& options = {});

}  // namespace exsel
