// Acceptance suite: runs every gate criterion end to end and prints one
// PASS/FAIL line per criterion. Returns the number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "exsel/catalog.hpp"
#include "exsel/distributions.hpp"
#include "exsel/evaluator.hpp"
#include "exsel/experiments.hpp"
#include "exsel/nsga2.hpp"
#include "exsel/posterior.hpp"
#include "exsel/recourse.hpp"
#include "exsel/scenario_bank.hpp"
#include "exsel/stats.hpp"
#include "exsel/synthetic.hpp"

#ifndef EXSEL_CLI_PATH
#define EXSEL_CLI_PATH "exsel-cli"
#endif
#ifndef EXSEL_REPO_DIR
#define EXSEL_REPO_DIR "."
#endif

using namespace exsel;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

double elapsed(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

bool close_rel(double a, double b, double tol) {
  return std::fabs(a - b) <= tol * std::max({std::fabs(a), std::fabs(b), 1.0});
}

// ---- shared fixtures ------------------------------------------------------

struct Fixture {
  Catalog bundled;
  std::optional<OptimizeOutcome> ci;  // CI-profile search on the bundled set
  ExperimentSpec ci_spec;

  Fixture() {
    bundled = Catalog::load_file(std::string(EXSEL_REPO_DIR) +
                                 "/data/catalog_30_50.json");
    require_valid(bundled);
    ci_spec.in_sample = {1234567, 40, 5};
    ci_spec.out_of_sample = {7654321, 200, 5};
    ci_spec.search.population = 20;
    ci_spec.search.generations = 50;
    ci_spec.search.seed = 42;
  }

  const OptimizeOutcome& ci_outcome() {
    if (!ci) {
      ci = run_optimize_core(bundled, ci_spec);
    }
    return *ci;
  }
};

Fixture* fx = nullptr;

// ---- criterion 1 ----------------------------------------------------------

RecourseInstance random_instance(std::uint64_t seed, int n) {
  CounterRng rng(seed);
  RecourseInstance inst;
  double total_cost = 0.0;
  int total_wells = 0;
  for (int t = 0; t < n; ++t) {
    auto ti = static_cast<std::uint64_t>(t);
    RecourseItem item;
    item.project = t;
    item.cost = std::round(rng.uniform(1, ti, 0, 0) * 40000.0) / 100.0;
    item.wells = 1 + static_cast<int>(rng.uniform(2, ti, 0, 0) * 2.0);
    item.value =
        std::round((rng.uniform(3, ti, 0, 0) - 0.25) * 8000.0) / 100.0;
    double uc = rng.uniform(4, ti, 0, 0);
    item.category = uc < 0.45 ? Category::Appraisal
                              : (uc < 0.8 ? Category::Trap : Category::Mature);
    inst.items.push_back(item);
    total_cost += item.cost;
    total_wells += item.wells;
  }
  inst.budget_total = total_cost * (0.25 + 0.5 * rng.uniform(5, 0, 0, 0));
  inst.budget_trap = total_cost * (0.1 + 0.5 * rng.uniform(6, 0, 0, 0));
  inst.budget_appraisal = total_cost * (0.1 + 0.5 * rng.uniform(7, 0, 0, 0));
  inst.wells_required =
      static_cast<int>(rng.uniform(8, 0, 0, 0) * total_wells * 0.6);
  return inst;
}

bool criterion_recourse_oracle(std::string& note) {
  auto start = Clock::now();
  for (int t = 0; t < 1000; ++t) {
    int n = 4 + t % 9;  // up to 12 eligible projects
    RecourseInstance inst =
        random_instance(static_cast<std::uint64_t>(t) + 77, n);
    RecourseSolution exact = solve_exact(inst);
    RecourseSolution brute = solve_brute(inst);
    if (exact.status != brute.status || exact.wells != brute.wells ||
        !close_rel(exact.objective, brute.objective, 1e-9)) {
      note = "instance " + std::to_string(t) + " diverged";
      return false;
    }
  }
  double secs = elapsed(start);
  char buf[96];
  std::snprintf(buf, sizeof(buf), "1000 instances in %.1f s", secs);
  note = buf;
  return secs < 60.0;
}

// ---- criterion 2 ----------------------------------------------------------

double cvar_grid_oracle(const std::vector<double>& losses, double beta) {
  double max_l = *std::max_element(losses.begin(), losses.end());
  auto objective = [&](double alpha) {
    double tail = 0.0;
    for (double l : losses) tail += std::max(l - alpha, 0.0);
    return alpha + tail / ((1.0 - beta) * static_cast<double>(losses.size()));
  };
  double best = objective(0.0);
  for (int g = 0; g <= 10000; ++g) {
    best = std::min(best, objective(max_l * g / 10000.0));
  }
  for (double l : losses) best = std::min(best, objective(l));
  return best;
}

bool criterion_cvar_oracle(std::string& note) {
  CounterRng rng(9);
  for (int t = 0; t < 200; ++t) {
    int n = 3 + t % 300;
    std::vector<double> losses;
    for (int i = 0; i < n; ++i) {
      double u = rng.uniform(1, static_cast<std::uint64_t>(t),
                             static_cast<std::uint64_t>(i), 0);
      losses.push_back(u < 0.5 ? 0.0 : u * u * 750.0);
    }
    double prev = -1.0;
    for (double beta : {0.5, 0.8, 0.9, 0.95, 0.99}) {
      double closed = cvar(losses, beta);
      double grid = cvar_grid_oracle(losses, beta);
      if (!close_rel(closed, grid, 1e-6)) {
        note = "vector " + std::to_string(t) + " at beta " +
               std::to_string(beta);
        return false;
      }
      if (closed < prev - 1e-12) {
        note = "CVaR decreased in beta on vector " + std::to_string(t);
        return false;
      }
      prev = closed;
    }
  }
  note = "200 vectors, five confidence levels each";
  return true;
}

// ---- criterion 3 ----------------------------------------------------------

bool criterion_posterior(std::string& note) {
  if (std::fabs(posterior(0.5, std::log(3.0), 0.01, 0.99) - 0.75) > 1e-12) {
    note = "logit update off at the pinned point";
    return false;
  }
  CounterRng rng(17);
  for (int t = 0; t < 100000; ++t) {
    auto ti = static_cast<std::uint64_t>(t);
    double p0 = 0.001 + 0.998 * rng.uniform(1, ti, 0, 0);
    double delta = 60.0 * rng.uniform(2, ti, 0, 0) - 30.0;
    double p = posterior(p0, delta, 0.01, 0.99);
    if (!(p >= 0.01 && p <= 0.99)) {
      note = "clamp violated";
      return false;
    }
  }

  // zero-strength links must collapse onto fixed probabilities, bit for bit
  Catalog zeroed = fx->bundled;
  for (auto& l : zeroed.links) l.strength = 0.0;
  zeroed.finalize();
  ScenarioBank bank = build_bank(zeroed, 31, 30, 4);
  PortfolioGenome genome(zeroed.first_count(), 0);
  for (std::size_t i = 0; i < genome.size(); i += 3) genome[i] = 1;
  genome = repair(std::move(genome), zeroed);
  EvaluationOptions post_opts, fixed_opts;
  post_opts.keep_losses = fixed_opts.keep_losses = true;
  post_opts.keep_scenario_details = fixed_opts.keep_scenario_details = true;
  fixed_opts.posterior_mode = PosteriorMode::Fixed;
  EvaluationReport a = evaluate(zeroed, bank, genome, post_opts);
  EvaluationReport b = evaluate(zeroed, bank, genome, fixed_opts);
  if (a.to_json_string() != b.to_json_string() || a.losses != b.losses) {
    note = "zero-strength evaluation differs from fixed mode";
    return false;
  }
  note = "pinned point, 1e5 clamps, bit-identical zero-strength evaluation";
  return true;
}

// ---- criterion 4 ----------------------------------------------------------

bool criterion_frequency(std::string& note) {
  const int S = 10000;
  ScenarioBank bank = build_bank(fx->bundled, 4242, S, 1);
  for (int i = 0; i < bank.first_count; ++i) {
    double p = fx->bundled.first_project(static_cast<std::size_t>(i))
                   .resolved_prior();
    double mean = 0.0;
    for (int s = 0; s < S; ++s) {
      mean += bank.success_first[bank.first_at(i, s)];
    }
    mean /= S;
    double se = std::sqrt(p * (1.0 - p) / S);
    if (std::fabs(mean - p) > 3.0 * se) {
      note = "project " + std::to_string(i) + " outside 3 standard errors";
      return false;
    }
  }

  QuantileTriple t{50.0, 100.0, 200.0};
  CalibratedDistribution d = calibrate(t, false);
  CounterRng rng(5);
  std::vector<double> draws;
  for (int i = 0; i < 100000; ++i) {
    draws.push_back(sample_parameter(
        d, rng.uniform(3, static_cast<std::uint64_t>(i), 0, 0)));
  }
  std::sort(draws.begin(), draws.end());
  double q50 = draws[draws.size() / 2];
  if (std::fabs(q50 - t.q50) > 0.02 * t.q50) {
    note = "lognormal median " + std::to_string(q50);
    return false;
  }
  note = "all 30 priors within 3 standard errors; median round-trip ok";
  return true;
}

// ---- criterion 5 ----------------------------------------------------------

bool criterion_toy_optimality(std::string& note) {
  auto start = Clock::now();
  SyntheticCatalogSpec spec;
  spec.first_stage = 6;
  spec.second_stage = 8;
  spec.seed = 2030;
  Catalog cat = make_synthetic(spec);
  ScenarioBank bank = build_bank(cat, 57, 20, 5);

  std::set<std::pair<double, double>> expected;
  {
    std::vector<Individual> all;
    std::set<PortfolioGenome> seen;
    for (int mask = 0; mask < 64; ++mask) {
      PortfolioGenome g(6, 0);
      for (int b = 0; b < 6; ++b) {
        g[static_cast<std::size_t>(b)] = mask >> b & 1;
      }
      g = repair(std::move(g), cat);
      if (!seen.insert(g).second) continue;
      EvaluationReport rep = evaluate(cat, bank, g);
      Individual ind;
      ind.genome = g;
      ind.obj = {-rep.enpv, rep.cvar};
      ind.viol = rep.viol;
      all.push_back(ind);
    }
    for (const auto& a : all) {
      if (!a.feasible()) continue;
      bool dominated = false;
      for (const auto& b : all) {
        if (b.feasible() && constrained_dominates(b, a)) {
          dominated = true;
          break;
        }
      }
      if (!dominated) expected.insert({a.obj[0], a.obj[1]});
    }
  }
  if (expected.empty()) {
    note = "toy catalog has no feasible portfolio";
    return false;
  }

  SearchConfig config;
  config.population = 24;
  config.generations = 40;
  config.seed = 5;
  SearchResult result = run_portfolio_search(cat, bank, config);
  std::set<std::pair<double, double>> got;
  for (const auto& ind : result.archive) {
    got.insert({ind.obj[0], ind.obj[1]});
  }
  double secs = elapsed(start);
  if (got != expected) {
    note = "archive has " + std::to_string(got.size()) +
           " objective vectors, enumeration has " +
           std::to_string(expected.size());
    return false;
  }
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%zu Pareto points matched in %.1f s",
                expected.size(), secs);
  note = buf;
  return secs < 120.0;
}

// ---- criterion 6 ----------------------------------------------------------

struct AblationRow {
  double enpv = 0.0, cvar = 0.0, pos = 0.0;
  bool has_pos = false;
};

AblationRow ablation_row(const Catalog& cat, const ScenarioBank& oos,
                         const std::vector<PortfolioGenome>& genomes,
                         RecourseMode rm, PosteriorMode pm) {
  AblationRow row;
  double pos_sum = 0.0;
  int pos_n = 0;
  for (const auto& g : genomes) {
    EvaluationOptions opts;
    opts.recourse_mode = rm;
    opts.posterior_mode = pm;
    EvaluationReport rep = evaluate(cat, oos, g, opts);
    row.enpv += rep.enpv;
    row.cvar += rep.cvar;
    if (rep.mean_selected_pos) {
      pos_sum += *rep.mean_selected_pos;
      ++pos_n;
    }
  }
  row.enpv /= static_cast<double>(genomes.size());
  row.cvar /= static_cast<double>(genomes.size());
  if (pos_n > 0) {
    row.pos = pos_sum / pos_n;
    row.has_pos = true;
  }
  return row;
}

bool criterion_ablation(std::string& note) {
  const auto& outcome = fx->ci_outcome();
  if (outcome.search.archive.empty()) {
    note = "empty archive";
    return false;
  }
  std::vector<PortfolioGenome> genomes;
  double enpv_lo = 1e300, enpv_hi = -1e300;
  for (const auto& ind : outcome.search.archive) {
    genomes.push_back(ind.genome);
    enpv_lo = std::min(enpv_lo, -ind.obj[0]);
    enpv_hi = std::max(enpv_hi, -ind.obj[0]);
  }
  if (genomes.size() < 2 || !(enpv_hi > enpv_lo)) {
    note = "frontier is trivial";
    return false;
  }
  const auto& cat = fx->bundled;
  const auto& oos = outcome.oos_bank;
  AblationRow none = ablation_row(cat, oos, genomes, RecourseMode::None,
                                  PosteriorMode::Posterior);
  AblationRow fixed = ablation_row(cat, oos, genomes, RecourseMode::Exact,
                                   PosteriorMode::Fixed);
  AblationRow post = ablation_row(cat, oos, genomes, RecourseMode::Exact,
                                  PosteriorMode::Posterior);
  AblationRow greedy = ablation_row(cat, oos, genomes, RecourseMode::Greedy,
                                    PosteriorMode::Posterior);
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "ENPV none %.0f < greedy %.0f <= exact %.0f; CVaR %.1f vs "
                "%.1f; PoS %.4f vs %.4f",
                none.enpv, greedy.enpv, post.enpv, post.cvar, none.cvar,
                post.pos, fixed.pos);
  note = buf;
  return none.enpv < greedy.enpv && greedy.enpv <= post.enpv &&
         post.cvar <= none.cvar && fixed.has_pos && post.has_pos &&
         post.pos >= fixed.pos;
}

// ---- criterion 7 ----------------------------------------------------------

bool criterion_sensitivity(std::string& note) {
  const auto& outcome = fx->ci_outcome();
  if (outcome.search.archive.empty()) {
    note = "empty archive";
    return false;
  }
  // beta sweep re-prices the stored loss vectors; nothing else moves
  for (const auto& rep : outcome.oos_reports) {
    double prev = -1.0;
    for (double beta : {0.80, 0.90, 0.95}) {
      double c = cvar(rep.losses, beta);
      if (c < prev - 1e-12) {
        note = "CVaR not monotone in beta";
        return false;
      }
      prev = c;
    }
  }

  const auto& cat = fx->bundled;
  const auto& oos = outcome.oos_bank;
  std::vector<PortfolioGenome> genomes;
  for (const auto& ind : outcome.search.archive) {
    genomes.push_back(ind.genome);
  }
  double prev_enpv = -1e30, prev_cvar = 1e30;
  double wells_min = 1e30, wells_max = -1e30;
  for (double scale : {0.0, 1.0, 2.0}) {
    double enpv = 0.0, cv = 0.0, wells = 0.0;
    for (const auto& g : genomes) {
      EvaluationOptions opts;
      opts.theta_scale = scale;
      EvaluationReport rep = evaluate(cat, oos, g, opts);
      enpv += rep.enpv;
      cv += rep.cvar;
      wells += rep.mean_second_stage_wells;
    }
    enpv /= static_cast<double>(genomes.size());
    cv /= static_cast<double>(genomes.size());
    wells /= static_cast<double>(genomes.size());
    if (enpv < prev_enpv - 1e-9) {
      note = "ENPV decreased with learning strength";
      return false;
    }
    if (cv > prev_cvar + 1e-9) {
      note = "CVaR increased with learning strength";
      return false;
    }
    prev_enpv = enpv;
    prev_cvar = cv;
    wells_min = std::min(wells_min, wells);
    wells_max = std::max(wells_max, wells);
  }
  double wells_var = (wells_max - wells_min) / std::max(wells_min, 1e-9);
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "beta repricing monotone; theta sweep monotone; wells vary "
                "%.2f%%",
                100.0 * wells_var);
  note = buf;
  return wells_var < 0.05;
}

// ---- criterion 8 ----------------------------------------------------------

bool criterion_stability(std::string& note) {
  auto start = Clock::now();
  const auto& outcome = fx->ci_outcome();
  if (outcome.search.archive.empty()) {
    note = "empty archive";
    return false;
  }
  std::vector<PortfolioGenome> genomes;
  for (const auto& ind : outcome.search.archive) {
    genomes.push_back(ind.genome);
  }
  const auto& cat = fx->bundled;
  auto cv_of = [](const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m += x;
    m /= static_cast<double>(v.size());
    double acc = 0.0;
    for (double x : v) acc += (x - m) * (x - m);
    double sd = std::sqrt(acc / static_cast<double>(v.size() - 1));
    return m != 0.0 ? sd / m : 0.0;
  };
  std::map<int, std::pair<double, double>> cvs;  // S -> (cv_enpv, cv_cvar)
  for (int S : {50, 500}) {
    std::vector<double> enpv_b, cvar_b;
    for (int r = 0; r < 10; ++r) {
      std::uint64_t seed =
          mix64(fx->ci_spec.out_of_sample.seed ^
                mix64(static_cast<std::uint64_t>(S) * 1000003ULL +
                      static_cast<std::uint64_t>(r) + 1));
      ScenarioBank bank = build_bank(cat, seed, S, 5);
      double e = 0.0, c = 0.0;
      for (const auto& g : genomes) {
        EvaluationReport rep = evaluate(cat, bank, g);
        e += rep.enpv;
        c += rep.cvar;
      }
      enpv_b.push_back(e / static_cast<double>(genomes.size()));
      cvar_b.push_back(c / static_cast<double>(genomes.size()));
    }
    cvs[S] = {cv_of(enpv_b), cv_of(cvar_b)};
  }
  double secs = elapsed(start);
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "CV(ENPV) %.4f -> %.4f, CV(CVaR) %.3f / %.3f in %.0f s",
                cvs[50].first, cvs[500].first, cvs[50].second,
                cvs[500].second, secs);
  note = buf;
  return cvs[50].first > cvs[500].first && cvs[50].second > cvs[50].first &&
         cvs[500].second > cvs[500].first && secs < 1800.0;
}

// ---- criterion 9 ----------------------------------------------------------

int run_cli(const std::string& args) {
  std::string cmd =
      std::string(EXSEL_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  return std::system(cmd.c_str());
}

std::map<std::string, std::string> dir_contents(const fs::path& dir) {
  std::map<std::string, std::string> out;
  if (!fs::exists(dir)) return out;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::ifstream in(entry.path(), std::ios::binary);
    std::ostringstream oss;
    oss << in.rdbuf();
    out[fs::relative(entry.path(), dir).string()] = oss.str();
  }
  return out;
}

bool criterion_cli_determinism(std::string& note) {
  fs::path root = fs::temp_directory_path() / "exsel_acceptance_cli";
  fs::remove_all(root);
  fs::create_directories(root);
  fs::path catalog = root / "catalog.json";
  {
    SyntheticCatalogSpec spec;
    spec.first_stage = 6;
    spec.second_stage = 8;
    spec.seed = 2027;
    make_synthetic(spec).save_file(catalog.string());
  }
  std::string common =
      " --catalog " + catalog.string() +
      " --profile ci --scenarios 10 --subscenarios 3 --oos-scenarios 20"
      " --oos-subscenarios 3 --population 8 --generations 10"
      " --search-seed 4 --runs 2 --stability-scenarios 8 16";
  struct ModeRun {
    std::string name;
    std::string extra;
  };
  std::vector<ModeRun> modes = {
      {"optimize", ""},
      {"evaluate", " --genome 111000 --recourse exact --posterior posterior"},
      {"benchmark-det", ""},
      {"ablate-recourse", ""},
      {"sensitivity-beta", ""},
      {"sensitivity-theta", ""},
      {"saa-stability", ""},
      {"repeat-runs", ""},
  };
  for (const auto& mode : modes) {
    fs::path dir = root / mode.name;
    std::string cmd =
        mode.name + common + mode.extra + " --out-dir " + dir.string();
    if (run_cli(cmd) != 0) {
      note = mode.name + " exited nonzero";
      return false;
    }
    auto first = dir_contents(dir);
    if (run_cli(cmd) != 0) {
      note = mode.name + " rerun exited nonzero";
      return false;
    }
    auto second = dir_contents(dir);
    if (first.empty() || first != second) {
      note = mode.name + " rerun is not byte-identical";
      return false;
    }
  }
  // generator and bank export reruns must also be byte-identical
  {
    fs::path dir = root / "synth";
    std::string cmd =
        "make-synthetic --first-stage 5 --second-stage 6 --gen-seed 12"
        " --out-dir " +
        dir.string();
    if (run_cli(cmd) != 0) {
      note = "make-synthetic exited nonzero";
      return false;
    }
    auto first = dir_contents(dir);
    if (run_cli(cmd) != 0 || first.empty() || dir_contents(dir) != first) {
      note = "make-synthetic rerun is not byte-identical";
      return false;
    }
  }
  for (const char* variant : {"bank_a.bin", "bank_b.bin"}) {
    if (run_cli("make-bank --catalog " + catalog.string() +
                " --seed 3 --scenarios 6 --subscenarios 2 --out " +
                (root / variant).string()) != 0) {
      note = "make-bank exited nonzero";
      return false;
    }
  }
  {
    auto all = dir_contents(root);
    if (all["bank_a.bin"] != all["bank_b.bin"]) {
      note = "bank export reruns differ";
      return false;
    }
  }
  fs::remove_all(root);
  note = "eight experiment modes plus generator and bank export";
  return true;
}

// ---- criterion 10 ---------------------------------------------------------

bool criterion_benchmark(std::string& note) {
  const auto& outcome = fx->ci_outcome();
  if (outcome.search.archive.empty()) {
    note = "empty archive";
    return false;
  }
  for (const auto& rep : outcome.oos_reports) {
    if (rep.viol != 0.0) {
      note = "an archive portfolio is infeasible out of sample";
      return false;
    }
  }
  BenchmarkOutcome bench =
      run_benchmark_core(fx->bundled, fx->ci_spec, outcome.oos_bank);
  if (!bench.feasible) {
    note = "deterministic benchmark infeasible in its own model";
    return false;
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "benchmark Viol %.4f > 0, all %zu archive portfolios at 0",
                bench.stochastic.viol, outcome.oos_reports.size());
  note = buf;
  return bench.stochastic.viol > 0.0;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int a = 1; a < argc; ++a) {
    only.insert(std::atoi(argv[a]));
  }
  Fixture fixture;
  fx = &fixture;

  struct Entry {
    int id;
    const char* title;
    std::function<bool(std::string&)> run;
  };
  std::vector<Entry> entries = {
      {1, "recourse oracle equivalence", criterion_recourse_oracle},
      {2, "CVaR closed form vs grid search", criterion_cvar_oracle},
      {3, "posterior correctness", criterion_posterior},
      {4, "sampling frequency consistency", criterion_frequency},
      {5, "small-instance global optimality", criterion_toy_optimality},
      {6, "recourse ablation ordering", criterion_ablation},
      {7, "sensitivity signatures", criterion_sensitivity},
      {8, "SAA stability signature", criterion_stability},
      {9, "CLI determinism", criterion_cli_determinism},
      {10, "deterministic benchmark contrast", criterion_benchmark},
  };

  int failures = 0;
  for (auto& entry : entries) {
    if (!only.empty() && !only.count(entry.id)) continue;
    std::string notes;
    bool ok = false;
    try {
      ok = entry.run(notes);
    } catch (const std::exception& e) {
      notes = std::string("exception: ") + e.what();
    }
    std::printf("[%s] %2d. %s%s%s\n", ok ? "PASS" : "FAIL", entry.id,
                entry.title, notes.empty() ? "" : " -- ", notes.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  return failures;
}
