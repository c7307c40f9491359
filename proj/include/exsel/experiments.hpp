#pragma once

#include <string>
#include <vector>

#include "exsel/catalog.hpp"
#include "exsel/evaluator.hpp"
#include "exsel/nsga2.hpp"
#include "exsel/scenario_bank.hpp"
#include "exsel/synthetic.hpp"

namespace exsel {

// Raised for unusable experiment specs (unknown mode, invalid catalog,
// coinciding seeds, malformed sweep lists). Maps to exit code 2.
class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ExperimentMode : int {
  Optimize = 0,
  Evaluate,
  BenchmarkDet,
  AblateRecourse,
  SensitivityBeta,
  SensitivityTheta,
  SaaStability,
  RepeatRuns,
  MakeSynthetic,
};

const char* experiment_mode_name(ExperimentMode m) noexcept;

struct SampleSpec {
  std::uint64_t seed = 0;
  int scenarios = 0;
  int subscenarios = 0;
};

struct ExperimentSpec {
  ExperimentMode mode = ExperimentMode::Optimize;
  std::string catalog_path;
  std::string out_dir;
  std::string profile = "paper";  // "paper" or "ci"
  SampleSpec in_sample;
  SampleSpec out_of_sample;
  SearchConfig search;
  std::vector<double> betas;
  std::vector<double> theta_scales;
  std::vector<int> stability_scenarios;
  int runs = 10;
  int threads = 1;

  // evaluate mode
  std::string genome_bits;
  RecourseMode recourse_mode = RecourseMode::Exact;
  PosteriorMode posterior_mode = PosteriorMode::Posterior;
  std::string bank_file;

  // reuse of a previously exported archive (ablate/sensitivity/stability)
  std::string archive_path;

  // make-synthetic mode
  SyntheticCatalogSpec synthetic;
  std::string catalog_out;

  // Parses a spec document and fills unset fields from the profile.
  static ExperimentSpec from_json_string(const std::string& text);
  std::string to_json_string() const;
};

// Exit statuses shared with the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitSpecError = 2;
inline constexpr int kExitEmptyArchive = 3;

// Runs one experiment end to end, writing all output files under
// spec.out_dir. Returns kExitOk or kExitEmptyArchive; throws SpecError for
// exit code 2 conditions and std::exception for environment failures.
int run_experiment(const ExperimentSpec& spec);

// Pieces reused by the acceptance suite and tests.
struct OptimizeOutcome {
  ScenarioBank in_bank;
  ScenarioBank oos_bank;
  SearchResult search;
  std::vector<EvaluationReport> oos_reports;  // aligned with search.archive
};

OptimizeOutcome run_optimize_core(const Catalog& catalog,
                                  const ExperimentSpec& spec);

struct BenchmarkOutcome {
  bool feasible = false;
  PortfolioGenome first_stage;          // x
  std::vector<std::uint8_t> second_stage;  // fixed y
  double deterministic_value = 0.0;
  EvaluationReport stochastic;  // out-of-sample evaluation of (x, fixed y)
};

// Deterministic mean-value benchmark: optimizes (x, scenario-independent y)
// on mean parameters with the search engine in single-objective mode, then
// prices the fixed plan on the out-of-sample bank (ineligible projects are
// dropped scenario-wise).
BenchmarkOutcome run_benchmark_core(const Catalog& catalog,
                                    const ExperimentSpec& spec,
                                    const ScenarioBank& oos_bank);

// Stable formatting used for every emitted table ("%.10g").
std::string format_number(double v);

}  // namespace exsel
