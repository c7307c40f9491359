#pragma once

#include <array>
#include <functional>
#include <memory>
#include <vector>

#include "exsel/catalog.hpp"
#include "exsel/evaluator.hpp"
#include "exsel/scenario_bank.hpp"

namespace exsel {

struct Individual {
  std::vector<std::uint8_t> genome;
  std::array<double, 2> obj{};  // both minimized: (-ENPV, CVaR)
  double viol = 0.0;
  int rank = 0;
  double crowding = 0.0;
  int id = 0;
  std::shared_ptr<const EvaluationReport> report;

  bool feasible() const noexcept { return viol == 0.0; }
};

struct SearchConfig {
  int population = 100;
  int generations = 500;
  double crossover_prob = 0.9;
  double mutation_prob = -1.0;  // < 0 means 1 / genome length
  std::uint64_t seed = 1;
  bool cross_generation_archive = false;
};

// Sets every mandatory first-stage bit; other bits untouched. Idempotent.
PortfolioGenome repair(PortfolioGenome genome, const Catalog& catalog);

// Feasibility-first comparison: any feasible individual beats any infeasible
// one, infeasible pairs compare on violation, feasible pairs on Pareto
// dominance of the objective vector.
bool constrained_dominates(const Individual& a, const Individual& b);

// Fronts F1, F2, ... of indices into the population.
std::vector<std::vector<int>> nondominated_sort(
    const std::vector<Individual>& population);

// Assigns crowding distances within one front. Boundary individuals per
// objective get infinity; interior ones the normalized cuboid-side sum.
void crowding_distance(std::vector<Individual>& population,
                       const std::vector<int>& front);

struct SearchResult {
  std::vector<Individual> archive;  // feasible non-dominated, unique genomes
  bool empty_archive = false;
  Individual least_violating;      // populated when empty_archive
  std::vector<double> best_feasible_obj0;  // per-generation trace (inf until
                                           // the first feasible appears)
  std::size_t evaluations = 0;
};

// Evaluation hook: fills obj, viol, and optionally report for a repaired
// genome. Must be deterministic.
using EvalFn =
    std::function<void(const std::vector<std::uint8_t>&, Individual&)>;

// Generational NSGA-II over fixed-length bitstrings: binary tournament on
// (rank, crowding), uniform crossover, per-bit mutation, repair against the
// mandatory mask, elitist environmental selection. Deterministic per seed.
// Identical genomes are evaluated once (results are memoized).
SearchResult nsga2_run(int n_bits,
                       const std::vector<std::uint8_t>& mandatory_mask,
                       const EvalFn& eval, const SearchConfig& config);

// Portfolio search: NSGA-II over first-stage genomes, each priced by the
// SAA evaluator on the given bank. Archive members carry full reports.
SearchResult run_portfolio_search(const Catalog& catalog,
                                  const ScenarioBank& bank,
                                  const SearchConfig& config,
                                  const EvaluationOptions& eval_options = {});

// Exact 2-objective hypervolume against a reference point by sorted sweep.
// Points that do not strictly dominate the reference are excluded; their
// count is reported through `excluded` when given.
double hypervolume(std::vector<std::array<double, 2>> front,
                   const std::array<double, 2>& reference,
                   int* excluded = nullptr);

}  // namespace exsel
