#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "exsel/types.hpp"

namespace exsel {

// One eligible second-stage candidate inside a scenario subproblem.
struct RecourseItem {
  int project = 0;  // dense second-stage index, used for reporting and ties
  double cost = 0.0;
  int wells = 1;
  Category category = Category::Appraisal;
  double value = 0.0;  // v_j^s, expected value plus shortfall compensation
  double pos = 0.0;    // posterior success probability, carried for reports
};

// Scenario-wise constrained 0-1 subproblem: maximize total value subject to
// a remaining total budget, category budgets, and an exact well-count
// requirement. Budgets and the well count are the capacities left after the
// first stage, clamped at zero.
struct RecourseInstance {
  std::vector<RecourseItem> items;
  double budget_total = 0.0;
  double budget_trap = 0.0;
  double budget_appraisal = 0.0;
  int wells_required = 0;
};

enum class RecourseStatus : int { ExactFeasible = 0, Shortfall = 1 };

struct RecourseSolution {
  std::vector<std::uint8_t> selected;  // aligned with instance.items
  double objective = 0.0;
  int wells = 0;
  double spend_total = 0.0;
  double spend_trap = 0.0;
  double spend_appraisal = 0.0;
  RecourseStatus status = RecourseStatus::ExactFeasible;
  int deficit = 0;  // wells_required - wells when status == Shortfall
};

enum class GreedyRank : int { Density = 0, Value = 1 };

struct RecourseSolverOptions {
  bool prune = true;               // disable only for dominance soundness tests
  GreedyRank greedy_rank = GreedyRank::Density;
};

// Expected economic value of one recourse candidate.
double expected_value(double pos, double mean_success_npv,
                      double failure_loss);

// Expected value plus the reserve-shortfall compensation that steers
// selection toward indicators whose first-stage tally missed the target.
double shortfall_value(double nu, double gamma, double cost, double pos,
                       const double* mean_contrib, const double* first_tally,
                       const std::vector<ReserveTarget>& targets);

// Exact solution via dynamic programming over non-dominated states, bucketed
// by well count. States compare on (total spend, trap spend, appraisal
// spend, value) quantized to 0.01 in the money dimensions; full-precision
// value arithmetic is kept for the objective. When no state reaches the
// required well count, the best state at the maximum achievable count is
// returned with a Shortfall status.
RecourseSolution solve_exact(const RecourseInstance& instance,
                             const RecourseSolverOptions& options = {});

// Ranking heuristic: sorts by value density (zero-cost items first, ties by
// project index) and adds whatever still fits. Never better than exact.
RecourseSolution solve_greedy(const RecourseInstance& instance,
                              const RecourseSolverOptions& options = {});

// Exhaustive enumeration, usable as an oracle for up to 20 items.
RecourseSolution solve_brute(const RecourseInstance& instance);

}  // namespace exsel
