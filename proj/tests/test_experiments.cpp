#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "exsel/distributions.hpp"
#include "exsel/experiments.hpp"
#include "test_helpers.hpp"

using namespace exsel;
using namespace testutil;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream oss;
  oss << in.rdbuf();
  return oss.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) {
    path = fs::temp_directory_path() / name;
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string str() const { return path.string(); }
};

// Small catalog written to disk for spec-driven runs.
fs::path write_toy_catalog(const TempDir& dir, std::uint64_t seed = 2027,
                           int first = 6, int second = 8) {
  SyntheticCatalogSpec spec;
  spec.first_stage = first;
  spec.second_stage = second;
  spec.seed = seed;
  Catalog cat = make_synthetic(spec);
  fs::path p = dir.path / "catalog.json";
  cat.save_file(p.string());
  return p;
}

ExperimentSpec toy_spec(const char* mode, const fs::path& catalog,
                        const std::string& out_dir) {
  json j;
  j["mode"] = mode;
  j["catalog"] = catalog.string();
  j["out_dir"] = out_dir;
  j["profile"] = "ci";
  j["in_sample"] = {{"seed", 101}, {"scenarios", 10}, {"subscenarios", 3}};
  j["out_of_sample"] = {{"seed", 202}, {"scenarios", 20},
                        {"subscenarios", 3}};
  j["search"] = {{"population", 8}, {"generations", 10}, {"seed", 4}};
  j["runs"] = 2;
  j["stability_scenarios"] = {8, 16};
  return ExperimentSpec::from_json_string(j.dump());
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(slurp(p));
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("synthetic generator honors its contract") {
  SyntheticCatalogSpec spec;  // default 30/50
  Catalog cat = make_synthetic(spec);
  CHECK(cat.projects.size() == 80);
  CHECK(cat.first_count() == 30);
  CHECK(cat.second_count() == 50);
  CHECK(cat.validate().empty());

  // deterministic per seed
  Catalog again = make_synthetic(spec);
  CHECK(cat.to_json_string() == again.to_json_string());
  spec.seed += 1;
  Catalog other = make_synthetic(spec);
  CHECK(cat.to_json_string() != other.to_json_string());

  // first-stage projects dominate in capex, reserve scale, and dispersion
  double c1 = 0, c2 = 0, a1 = 0, a2 = 0;
  std::vector<double> v1, v2;
  for (std::size_t i = 0; i < cat.first_count(); ++i) {
    const auto& p = cat.first_project(i);
    c1 += p.economics.capex;
    a1 += p.oil.area.q50;
    MeanReserves mr = project_mean_reserves(p);
    v1.push_back(success_npv(p.economics, mr.oil, mr.gas));
  }
  for (std::size_t j = 0; j < cat.second_count(); ++j) {
    const auto& p = cat.second_project(j);
    c2 += p.economics.capex;
    a2 += p.oil.area.q50;
    MeanReserves mr = project_mean_reserves(p);
    v2.push_back(success_npv(p.economics, mr.oil, mr.gas));
  }
  c1 /= static_cast<double>(cat.first_count());
  c2 /= static_cast<double>(cat.second_count());
  a1 /= static_cast<double>(cat.first_count());
  a2 /= static_cast<double>(cat.second_count());
  auto sd = [](const std::vector<double>& v) {
    double m = 0;
    for (double x : v) m += x;
    m /= static_cast<double>(v.size());
    double acc = 0;
    for (double x : v) acc += (x - m) * (x - m);
    return std::sqrt(acc / static_cast<double>(v.size()));
  };
  CHECK(c1 > c2);
  CHECK(a1 > a2);
  CHECK(sd(v1) > sd(v2));

  // two mandatory commitments
  int mandatory = 0;
  for (const auto& p : cat.projects) mandatory += p.mandatory ? 1 : 0;
  CHECK(mandatory == 2);

  // unusable ranges are spec errors
  SyntheticCatalogSpec bad;
  bad.porosity_mode = {0.95, 0.99};
  CHECK_THROWS_AS(make_synthetic(bad), std::invalid_argument);
  SyntheticCatalogSpec bad2;
  bad2.first_capex_trap = {-5.0, 10.0};
  CHECK_THROWS_AS(make_synthetic(bad2), std::invalid_argument);
}

TEST_CASE("experiment specs parse with profile defaults and validation") {
  json j;
  j["mode"] = "optimize";
  j["catalog"] = "cat.json";
  j["out_dir"] = "out";
  ExperimentSpec spec = ExperimentSpec::from_json_string(j.dump());
  CHECK(spec.in_sample.scenarios == 200);  // paper profile defaults
  CHECK(spec.out_of_sample.scenarios == 1000);
  CHECK(spec.search.population == 100);

  j["profile"] = "ci";
  spec = ExperimentSpec::from_json_string(j.dump());
  CHECK(spec.in_sample.scenarios == 40);
  CHECK(spec.search.population == 20);
  CHECK(spec.stability_scenarios == std::vector<int>{50, 500});

  j["in_sample"] = {{"seed", 5}};
  j["out_of_sample"] = {{"seed", 5}};
  CHECK_THROWS_AS(ExperimentSpec::from_json_string(j.dump()), SpecError);

  json bad;
  bad["mode"] = "unknown-mode";
  bad["catalog"] = "c";
  bad["out_dir"] = "o";
  CHECK_THROWS_AS(ExperimentSpec::from_json_string(bad.dump()), SpecError);

  json eval;
  eval["mode"] = "evaluate";
  eval["catalog"] = "c";
  eval["out_dir"] = "o";
  CHECK_THROWS_AS(ExperimentSpec::from_json_string(eval.dump()), SpecError);

  CHECK_THROWS_AS(ExperimentSpec::from_json_string("nope"), SpecError);
}

TEST_CASE("optimize writes its full output set deterministically") {
  TempDir dir("exsel_opt_test");
  fs::path catalog = write_toy_catalog(dir);
  TempDir out_a("exsel_opt_a");
  TempDir out_b("exsel_opt_b");
  ExperimentSpec spec = toy_spec("optimize", catalog, out_a.str());
  int code = run_experiment(spec);
  CHECK(code == kExitOk);
  for (const char* f :
       {"archive_in_sample.csv", "archive_out_of_sample.csv", "summary.csv",
        "frontier_in_sample.csv", "frontier_out_of_sample.csv",
        "archive.json", "spec.json"}) {
    CHECK(fs::exists(out_a.path / f));
  }
  ExperimentSpec spec_b = toy_spec("optimize", catalog, out_b.str());
  CHECK(run_experiment(spec_b) == kExitOk);
  for (const char* f :
       {"archive_in_sample.csv", "archive_out_of_sample.csv", "summary.csv",
        "archive.json"}) {
    CHECK(slurp(out_a.path / f) == slurp(out_b.path / f));
  }

  // the exported archive can seed downstream experiments
  TempDir out_c("exsel_opt_c");
  ExperimentSpec ablate = toy_spec("ablate-recourse", catalog, out_c.str());
  ablate.archive_path = (out_a.path / "archive.json").string();
  CHECK(run_experiment(ablate) == kExitOk);
  CHECK(fs::exists(out_c.path / "ablation.csv"));

  TempDir out_d("exsel_opt_d");
  ExperimentSpec ablate2 = toy_spec("ablate-recourse", catalog, out_d.str());
  CHECK(run_experiment(ablate2) == kExitOk);
  CHECK(slurp(out_c.path / "ablation.csv") ==
        slurp(out_d.path / "ablation.csv"));
}

TEST_CASE("beta sweep re-prices stored losses only") {
  TempDir dir("exsel_beta_test");
  fs::path catalog = write_toy_catalog(dir);
  TempDir out("exsel_beta_out");
  ExperimentSpec spec = toy_spec("sensitivity-beta", catalog, out.str());
  CHECK(run_experiment(spec) == kExitOk);
  auto rows = read_csv(out.path / "beta_sweep.csv");
  REQUIRE(rows.size() == 4);  // header + three betas
  // every non-CVaR column is constant across rows
  for (std::size_t col : {1u, 3u, 4u}) {
    CHECK(rows[1][col] == rows[2][col]);
    CHECK(rows[2][col] == rows[3][col]);
  }
  // CVaR is monotone nondecreasing in beta
  CHECK(std::stod(rows[1][2]) <= std::stod(rows[2][2]) + 1e-12);
  CHECK(std::stod(rows[2][2]) <= std::stod(rows[3][2]) + 1e-12);

  auto per_portfolio = read_csv(out.path / "beta_sweep_portfolios.csv");
  CHECK(per_portfolio.size() > 3);
}

TEST_CASE("theta scale zero reproduces the fixed-probability ablation row") {
  TempDir dir("exsel_theta_test");
  fs::path catalog = write_toy_catalog(dir);
  TempDir out_t("exsel_theta_out");
  ExperimentSpec theta = toy_spec("sensitivity-theta", catalog, out_t.str());
  CHECK(run_experiment(theta) == kExitOk);
  TempDir out_a("exsel_theta_abl");
  ExperimentSpec ablate = toy_spec("ablate-recourse", catalog, out_a.str());
  CHECK(run_experiment(ablate) == kExitOk);

  auto sweep = read_csv(out_t.path / "theta_sweep.csv");
  auto ablation = read_csv(out_a.path / "ablation.csv");
  REQUIRE(sweep.size() >= 2);
  // locate the fixed_exact ablation row
  std::vector<std::string> fixed_row;
  for (const auto& row : ablation) {
    if (!row.empty() && row[0] == "fixed_exact") fixed_row = row;
  }
  REQUIRE(!fixed_row.empty());
  // scale-0 row: identical enpv, cvar, reliabilities
  CHECK(sweep[1][0] == "0");
  CHECK(sweep[1][1] == fixed_row[1]);
  CHECK(sweep[1][2] == fixed_row[2]);
  CHECK(sweep[1][3] == fixed_row[3]);
  CHECK(sweep[1][4] == fixed_row[4]);
}

TEST_CASE("stability with one bank collapses to zero dispersion") {
  TempDir dir("exsel_stab_test");
  fs::path catalog = write_toy_catalog(dir);
  TempDir out("exsel_stab_out");
  ExperimentSpec spec = toy_spec("saa-stability", catalog, out.str());
  spec.runs = 1;
  spec.stability_scenarios = {8};
  CHECK(run_experiment(spec) == kExitOk);
  auto rows = read_csv(out.path / "stability_summary.csv");
  REQUIRE(rows.size() == 2);
  CHECK(std::stod(rows[1][1]) == 0.0);  // cv_enpv
  CHECK(std::stod(rows[1][2]) == 0.0);  // cv_cvar
  CHECK(std::stod(rows[1][3]) == 0.0);  // sd joint
}

TEST_CASE("repeat-runs with one run collapses all ranges") {
  TempDir dir("exsel_rep_test");
  fs::path catalog = write_toy_catalog(dir);
  TempDir out("exsel_rep_out");
  ExperimentSpec spec = toy_spec("repeat-runs", catalog, out.str());
  spec.runs = 1;
  CHECK(run_experiment(spec) == kExitOk);
  auto rows = read_csv(out.path / "repeat_summary.csv");
  REQUIRE(rows.size() == 6);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    CHECK(rows[r][1] == rows[r][2]);  // min == mean
    CHECK(rows[r][2] == rows[r][3]);  // mean == max
  }
  CHECK(fs::exists(out.path / "front_bands.csv"));
  CHECK(fs::exists(out.path / "runs.csv"));
}

TEST_CASE("out-of-sample evaluation cannot disturb the archive") {
  TempDir dir("exsel_oos_test");
  fs::path catalog_path = write_toy_catalog(dir);
  Catalog cat = Catalog::load_file(catalog_path.string());
  ExperimentSpec spec = toy_spec("optimize", catalog_path, dir.str());
  OptimizeOutcome outcome = run_optimize_core(cat, spec);
  REQUIRE(!outcome.search.archive.empty());
  std::ostringstream before;
  for (const auto& ind : outcome.search.archive) {
    for (auto b : ind.genome) before << int(b);
    before << ':' << ind.obj[0] << ':' << ind.obj[1] << ';';
  }
  EvaluationOptions opts;
  for (const auto& ind : outcome.search.archive) {
    evaluate(cat, outcome.oos_bank, ind.genome, opts);
  }
  std::ostringstream after;
  for (const auto& ind : outcome.search.archive) {
    for (auto b : ind.genome) after << int(b);
    after << ':' << ind.obj[0] << ':' << ind.obj[1] << ';';
  }
  CHECK(before.str() == after.str());
}

TEST_CASE("deterministic benchmark matches stochastic optimum without "
          "uncertainty") {
  // all priors ~ 1 and constant volumetrics: the stochastic world is
  // deterministic, so the mean-value plan and the SAA optimum coincide
  Catalog cat;
  double first_reserve[4] = {120, 80, 60, 40};
  for (int i = 0; i < 4; ++i) {
    cat.projects.push_back(simple_project(
        "F0" + std::to_string(i + 1), Stage::First, 1.0 - 1e-12,
        first_reserve[i], 10.0, 5.0, 1, Category::Trap, i == 0));
  }
  double second_reserve[3] = {100, 50, 30};
  for (int j = 0; j < 3; ++j) {
    cat.projects.push_back(simple_project("A0" + std::to_string(j + 1),
                                          Stage::Second, 1.0 - 1e-12,
                                          second_reserve[j], 10.0, 5.0, 1));
    cat.triggers.push_back(
        {"A0" + std::to_string(j + 1), {}, {}, {"F01"}});
  }
  cat.constraints = loose_constraints(5, 4);
  cat.constraints.success_rate_probability = 0.05;
  cat.constraints.posterior_lo = 1e-13;
  cat.constraints.posterior_hi = 1.0 - 1e-13;
  cat.finalize();
  REQUIRE(cat.validate().empty());

  TempDir dir("exsel_bench_test");
  fs::path catalog_path = dir.path / "catalog.json";
  cat.save_file(catalog_path.string());
  ExperimentSpec spec = toy_spec("benchmark-det", catalog_path, dir.str());
  spec.search.population = 16;
  spec.search.generations = 40;

  ScenarioBank oos = build_bank(cat, spec.out_of_sample.seed,
                                spec.out_of_sample.scenarios,
                                spec.out_of_sample.subscenarios);
  BenchmarkOutcome bench = run_benchmark_core(cat, spec, oos);
  REQUIRE(bench.feasible);

  OptimizeOutcome stoch = run_optimize_core(cat, spec);
  REQUIRE(!stoch.search.archive.empty());
  double best_enpv = -stoch.search.archive.front().obj[0];
  for (const auto& ind : stoch.search.archive) {
    best_enpv = std::max(best_enpv, -ind.obj[0]);
  }
  CHECK(bench.deterministic_value ==
        doctest::Approx(best_enpv).epsilon(1e-6));
  CHECK(bench.stochastic.enpv ==
        doctest::Approx(bench.deterministic_value).epsilon(1e-6));
  CHECK(bench.stochastic.viol == 0.0);
}

TEST_CASE("the bundled catalog is the generator's pinned output") {
  Catalog committed = Catalog::load_file(std::string(EXSEL_REPO_DIR) +
                                         "/data/catalog_30_50.json");
  SyntheticCatalogSpec spec;  // defaults: 30/50, seed 2025
  Catalog regenerated = make_synthetic(spec);
  CHECK(committed.to_json_string() == regenerated.to_json_string());
  CHECK(committed.hash() == regenerated.hash());
}

TEST_CASE("an infeasible search reports the empty-archive exit") {
  TempDir dir("exsel_empty_test");
  fs::path catalog = write_toy_catalog(dir, 2034);  // no feasible genome
  TempDir out("exsel_empty_out");
  ExperimentSpec spec = toy_spec("optimize", catalog, out.str());
  CHECK(run_experiment(spec) == kExitEmptyArchive);
  CHECK(fs::exists(out.path / "empty_archive.json"));
  json flag = json::parse(slurp(out.path / "empty_archive.json"));
  CHECK(flag.at("empty_archive").get<bool>());
  CHECK(flag.at("least_violating").at("viol").get<double>() > 0.0);
}

TEST_CASE("cross-generation archive stays pure and feasible") {
  TempDir dir("exsel_crossgen");
  fs::path catalog_path = write_toy_catalog(dir, 2030);
  Catalog cat = Catalog::load_file(catalog_path.string());
  ScenarioBank bank = build_bank(cat, 57, 20, 5);
  SearchConfig config;
  config.population = 12;
  config.generations = 15;
  config.seed = 3;
  config.cross_generation_archive = true;
  SearchResult res = run_portfolio_search(cat, bank, config);
  REQUIRE(!res.archive.empty());
  for (const auto& a : res.archive) {
    CHECK(a.viol == 0.0);
    for (const auto& b : res.archive) {
      if (&a == &b) continue;
      CHECK_FALSE(constrained_dominates(a, b));
    }
  }
}

TEST_CASE("evaluate mode accepts an exported bank") {
  TempDir dir("exsel_bankfile");
  fs::path catalog_path = write_toy_catalog(dir);
  Catalog cat = Catalog::load_file(catalog_path.string());
  ScenarioBank bank = build_bank(cat, 101, 10, 3);
  fs::path bank_path = dir.path / "bank.bin";
  bank.save_file(bank_path.string());

  TempDir out_mem("exsel_bankfile_mem");
  ExperimentSpec direct = toy_spec("optimize", catalog_path, out_mem.str());
  direct.mode = ExperimentMode::Evaluate;
  direct.genome_bits = "101010";
  CHECK(run_experiment(direct) == kExitOk);

  TempDir out_file("exsel_bankfile_file");
  ExperimentSpec via_file = toy_spec("optimize", catalog_path,
                                     out_file.str());
  via_file.mode = ExperimentMode::Evaluate;
  via_file.genome_bits = "101010";
  via_file.bank_file = bank_path.string();
  CHECK(run_experiment(via_file) == kExitOk);
  CHECK(slurp(out_mem.path / "report.json") ==
        slurp(out_file.path / "report.json"));

  // a bank built for another catalog is rejected
  fs::path other_path = dir.path / "other.json";
  SyntheticCatalogSpec other_spec;
  other_spec.first_stage = 6;
  other_spec.second_stage = 8;
  other_spec.seed = 2040;
  make_synthetic(other_spec).save_file(other_path.string());
  TempDir out_bad("exsel_bankfile_bad");
  ExperimentSpec bad = toy_spec("optimize", other_path, out_bad.str());
  bad.mode = ExperimentMode::Evaluate;
  bad.genome_bits = "101010";
  bad.bank_file = bank_path.string();
  CHECK_THROWS_AS(run_experiment(bad), SpecError);
}

TEST_CASE("make-synthetic experiment writes a validating catalog") {
  TempDir out("exsel_synth_out");
  json j;
  j["mode"] = "make-synthetic";
  j["out_dir"] = out.str();
  j["synthetic"] = {{"first_stage", 5}, {"second_stage", 6}, {"seed", 12}};
  ExperimentSpec spec = ExperimentSpec::from_json_string(j.dump());
  CHECK(run_experiment(spec) == kExitOk);
  Catalog cat = Catalog::load_file((out.path / "catalog.json").string());
  CHECK(cat.validate().empty());
  CHECK(cat.first_count() == 5);
  CHECK(cat.second_count() == 6);
}
