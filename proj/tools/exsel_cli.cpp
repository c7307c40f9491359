// Command-line front end. All functionality goes through the exsel C API;
// this file only parses flags, assembles spec documents, and maps statuses
// to exit codes (0 success, 2 spec error, 3 empty archive).

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "exsel.h"

using nlohmann::json;

namespace {

int status_to_exit(exsel_status st) {
  switch (st) {
    case EXSEL_OK:
      return 0;
    case EXSEL_ERR_PARSE:
    case EXSEL_ERR_VALIDATION:
    case EXSEL_ERR_SPEC:
    case EXSEL_ERR_INVALID_ARGUMENT:
      return 2;
    case EXSEL_ERR_EMPTY_ARCHIVE:
      return 3;
    default:
      return 1;
  }
}

int finish(exsel_status st) {
  if (st != EXSEL_OK) {
    std::fprintf(stderr, "error: %s\n", exsel_last_error());
  }
  return status_to_exit(st);
}

struct CommonFlags {
  std::string catalog;
  std::string out_dir;
  std::string profile;
  std::uint64_t seed = 0;
  int scenarios = 0;
  int subscenarios = 0;
  std::uint64_t oos_seed = 0;
  int oos_scenarios = 0;
  int oos_subscenarios = 0;
  int population = 0;
  int generations = 0;
  double crossover = -1.0;
  double mutation = -2.0;
  std::uint64_t search_seed = 0;
  std::vector<double> betas;
  std::vector<double> theta_scales;
  std::vector<int> stability_scenarios;
  int runs = 0;
  int threads = 0;
  std::string archive;
  bool cross_generation_archive = false;
};

struct FlagOpts {
  CLI::Option* seed = nullptr;
  CLI::Option* scenarios = nullptr;
  CLI::Option* subscenarios = nullptr;
  CLI::Option* oos_seed = nullptr;
  CLI::Option* oos_scenarios = nullptr;
  CLI::Option* oos_subscenarios = nullptr;
  CLI::Option* population = nullptr;
  CLI::Option* generations = nullptr;
  CLI::Option* crossover = nullptr;
  CLI::Option* mutation = nullptr;
  CLI::Option* search_seed = nullptr;
  CLI::Option* betas = nullptr;
  CLI::Option* theta_scales = nullptr;
  CLI::Option* stability = nullptr;
  CLI::Option* runs = nullptr;
  CLI::Option* threads = nullptr;
  CLI::Option* archive = nullptr;
  CLI::Option* cross_gen = nullptr;
};

FlagOpts add_common(CLI::App* sub, CommonFlags& f, bool needs_catalog = true) {
  FlagOpts o;
  auto* cat = sub->add_option("--catalog", f.catalog, "Catalog file (JSON)");
  if (needs_catalog) cat->required();
  sub->add_option("--out-dir", f.out_dir, "Output directory")->required();
  sub->add_option("--profile", f.profile,
                  "Experiment size profile: paper or ci");
  o.seed = sub->add_option("--seed", f.seed, "In-sample bank seed");
  o.scenarios =
      sub->add_option("--scenarios", f.scenarios, "In-sample scenarios S");
  o.subscenarios = sub->add_option("--subscenarios", f.subscenarios,
                                   "Sub-scenarios K per scenario");
  o.oos_seed =
      sub->add_option("--oos-seed", f.oos_seed, "Out-of-sample bank seed");
  o.oos_scenarios = sub->add_option("--oos-scenarios", f.oos_scenarios,
                                    "Out-of-sample scenarios");
  o.oos_subscenarios = sub->add_option(
      "--oos-subscenarios", f.oos_subscenarios, "Out-of-sample sub-scenarios");
  o.population =
      sub->add_option("--population", f.population, "NSGA-II population");
  o.generations =
      sub->add_option("--generations", f.generations, "NSGA-II generations");
  o.crossover =
      sub->add_option("--crossover", f.crossover, "Crossover probability");
  o.mutation =
      sub->add_option("--mutation", f.mutation, "Per-bit mutation rate");
  o.search_seed =
      sub->add_option("--search-seed", f.search_seed, "NSGA-II seed");
  o.betas = sub->add_option("--betas", f.betas,
                            "CVaR confidence sweep values");
  o.theta_scales = sub->add_option("--theta-scales", f.theta_scales,
                                   "Learning-strength sweep values");
  o.stability = sub->add_option("--stability-scenarios",
                                f.stability_scenarios,
                                "Scenario sizes for the stability study");
  o.runs = sub->add_option("--runs", f.runs, "Replications");
  o.threads = sub->add_option("--threads", f.threads, "Worker threads");
  o.archive = sub->add_option("--archive", f.archive,
                              "Reuse a previously exported archive.json");
  o.cross_gen = sub->add_flag("--cross-generation-archive",
                              f.cross_generation_archive,
                              "Keep the feasible non-dominated set across "
                              "all generations instead of the final front");
  return o;
}

json spec_from(const std::string& mode, const CommonFlags& f,
               const FlagOpts& o) {
  json spec;
  spec["mode"] = mode;
  if (!f.catalog.empty()) spec["catalog"] = f.catalog;
  spec["out_dir"] = f.out_dir;
  if (!f.profile.empty()) spec["profile"] = f.profile;
  json in, oos, search;
  if (o.seed->count()) in["seed"] = f.seed;
  if (o.scenarios->count()) in["scenarios"] = f.scenarios;
  if (o.subscenarios->count()) in["subscenarios"] = f.subscenarios;
  if (!in.empty()) spec["in_sample"] = in;
  if (o.oos_seed->count()) oos["seed"] = f.oos_seed;
  if (o.oos_scenarios->count()) oos["scenarios"] = f.oos_scenarios;
  if (o.oos_subscenarios->count()) oos["subscenarios"] = f.oos_subscenarios;
  if (!oos.empty()) spec["out_of_sample"] = oos;
  if (o.population->count()) search["population"] = f.population;
  if (o.generations->count()) search["generations"] = f.generations;
  if (o.crossover->count()) search["crossover"] = f.crossover;
  if (o.mutation->count()) search["mutation"] = f.mutation;
  if (o.search_seed->count()) search["seed"] = f.search_seed;
  if (o.cross_gen->count()) {
    search["cross_generation_archive"] = f.cross_generation_archive;
  }
  if (!search.empty()) spec["search"] = search;
  if (o.betas->count()) spec["betas"] = f.betas;
  if (o.theta_scales->count()) spec["theta_scales"] = f.theta_scales;
  if (o.stability->count()) spec["stability_scenarios"] = f.stability_scenarios;
  if (o.runs->count()) spec["runs"] = f.runs;
  if (o.threads->count()) spec["threads"] = f.threads;
  if (o.archive->count()) spec["archive"] = f.archive;
  return spec;
}

int cmd_validate(const std::string& path) {
  exsel_catalog* cat = nullptr;
  exsel_status st = exsel_catalog_load_file(path.c_str(), &cat);
  if (st != EXSEL_OK) return finish(st);
  char* violations = nullptr;
  st = exsel_catalog_validate(cat, &violations);
  int code = 0;
  if (st == EXSEL_OK) {
    json arr = json::parse(violations);
    if (arr.empty()) {
      std::printf("catalog valid\n");
    } else {
      for (const auto& v : arr) {
        std::printf("[%s.%s] %s\n",
                    v.at("project").get<std::string>().c_str(),
                    v.at("field").get<std::string>().c_str(),
                    v.at("message").get<std::string>().c_str());
      }
      std::printf("%zu violation(s)\n", arr.size());
      code = 2;
    }
    exsel_string_free(violations);
  } else {
    code = finish(st);
  }
  exsel_catalog_free(cat);
  return code;
}

int cmd_make_bank(const std::string& catalog, std::uint64_t seed,
                  int scenarios, int subscenarios, int threads,
                  const std::string& out) {
  exsel_catalog* cat = nullptr;
  exsel_status st = exsel_catalog_load_file(catalog.c_str(), &cat);
  if (st != EXSEL_OK) return finish(st);
  exsel_bank* bank = nullptr;
  st = exsel_bank_build(cat, seed, scenarios, subscenarios, threads, &bank);
  if (st == EXSEL_OK) {
    st = exsel_bank_save(bank, out.c_str());
    if (st == EXSEL_OK) {
      std::printf("bank written to %s\n", out.c_str());
    }
  }
  exsel_bank_free(bank);
  exsel_catalog_free(cat);
  return finish(st);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "exsel: posterior-informed two-stage stochastic portfolio optimizer "
      "for exploration well selection"};
  app.set_version_flag("--version", exsel_version());
  app.require_subcommand(1);

  // validate
  std::string validate_path;
  auto* validate = app.add_subcommand(
      "validate", "Check a catalog against every model invariant");
  validate->add_option("--catalog", validate_path, "Catalog file (JSON)")
      ->required();

  // make-synthetic
  struct {
    int first = 30;
    int second = 50;
    std::uint64_t seed = 2025;
    std::string out_dir;
    std::string out;
  } synth;
  auto* make_synth = app.add_subcommand(
      "make-synthetic", "Generate a synthetic exploration catalog");
  make_synth->add_option("--first-stage", synth.first,
                         "First-stage project count");
  make_synth->add_option("--second-stage", synth.second,
                         "Second-stage project count");
  make_synth->add_option("--gen-seed", synth.seed, "Generator seed");
  make_synth->add_option("--out-dir", synth.out_dir, "Output directory")
      ->required();
  make_synth->add_option("--out", synth.out,
                         "Catalog path (default <out-dir>/catalog.json)");

  // make-bank
  struct {
    std::string catalog;
    std::uint64_t seed = 1234567;
    int scenarios = 200;
    int subscenarios = 20;
    int threads = 1;
    std::string out;
  } bankf;
  auto* make_bank = app.add_subcommand(
      "make-bank", "Build and export a scenario bank for reuse");
  make_bank->add_option("--catalog", bankf.catalog, "Catalog file")->required();
  make_bank->add_option("--seed", bankf.seed, "Bank seed");
  make_bank->add_option("--scenarios", bankf.scenarios, "Scenarios S");
  make_bank->add_option("--subscenarios", bankf.subscenarios,
                        "Sub-scenarios K");
  make_bank->add_option("--threads", bankf.threads, "Worker threads");
  make_bank->add_option("--out", bankf.out, "Bank output path")->required();

  // evaluate
  CommonFlags eval_flags;
  std::string eval_genome, eval_recourse, eval_posterior, eval_bank_file;
  auto* evaluate =
      app.add_subcommand("evaluate", "Price one portfolio against a bank");
  FlagOpts eval_opts = add_common(evaluate, eval_flags);
  evaluate->add_option("--genome", eval_genome,
                       "First-stage selection bits, e.g. 010110")
      ->required();
  evaluate->add_option("--recourse", eval_recourse,
                       "Recourse rule: exact, greedy, or none");
  evaluate->add_option("--posterior", eval_posterior,
                       "Probability mode: posterior or fixed");
  evaluate->add_option("--bank-file", eval_bank_file,
                       "Evaluate against a previously exported bank");

  // experiment subcommands sharing the common flag set
  CommonFlags opt_f, bench_f, abl_f, beta_f, theta_f, stab_f, rep_f;
  auto* optimize = app.add_subcommand(
      "optimize", "Search the Pareto frontier and validate out-of-sample");
  FlagOpts opt_o = add_common(optimize, opt_f);
  auto* bench = app.add_subcommand(
      "benchmark-det",
      "Deterministic mean-value benchmark against the stochastic frontier");
  FlagOpts bench_o = add_common(bench, bench_f);
  auto* ablate = app.add_subcommand(
      "ablate-recourse",
      "Compare no/fixed/posterior/greedy recourse out-of-sample");
  FlagOpts abl_o = add_common(ablate, abl_f);
  auto* sens_beta = app.add_subcommand(
      "sensitivity-beta", "Re-price stored losses across CVaR confidences");
  FlagOpts beta_o = add_common(sens_beta, beta_f);
  auto* sens_theta = app.add_subcommand(
      "sensitivity-theta", "Re-evaluate across learning-strength scales");
  FlagOpts theta_o = add_common(sens_theta, theta_f);
  auto* stability = app.add_subcommand(
      "saa-stability", "Dispersion of estimates across independent banks");
  FlagOpts stab_o = add_common(stability, stab_f);
  auto* repeat = app.add_subcommand(
      "repeat-runs", "Repeat the search under different seeds");
  FlagOpts rep_o = add_common(repeat, rep_f);

  CLI11_PARSE(app, argc, argv);

  if (*validate) {
    return cmd_validate(validate_path);
  }
  if (*make_synth) {
    json spec;
    spec["mode"] = "make-synthetic";
    spec["out_dir"] = synth.out_dir;
    spec["synthetic"] = json{{"first_stage", synth.first},
                             {"second_stage", synth.second},
                             {"seed", synth.seed}};
    if (!synth.out.empty()) spec["catalog_out"] = synth.out;
    return finish(exsel_experiment_run(spec.dump().c_str()));
  }
  if (*make_bank) {
    return cmd_make_bank(bankf.catalog, bankf.seed, bankf.scenarios,
                         bankf.subscenarios, bankf.threads, bankf.out);
  }
  if (*evaluate) {
    json spec = spec_from("evaluate", eval_flags, eval_opts);
    spec["genome"] = eval_genome;
    if (!eval_recourse.empty()) spec["recourse"] = eval_recourse;
    if (!eval_posterior.empty()) spec["posterior"] = eval_posterior;
    if (!eval_bank_file.empty()) spec["bank_file"] = eval_bank_file;
    return finish(exsel_experiment_run(spec.dump().c_str()));
  }

  struct ModeBinding {
    CLI::App* sub;
    const char* mode;
    CommonFlags* flags;
    FlagOpts* opts;
  };
  ModeBinding bindings[] = {
      {optimize, "optimize", &opt_f, &opt_o},
      {bench, "benchmark-det", &bench_f, &bench_o},
      {ablate, "ablate-recourse", &abl_f, &abl_o},
      {sens_beta, "sensitivity-beta", &beta_f, &beta_o},
      {sens_theta, "sensitivity-theta", &theta_f, &theta_o},
      {stability, "saa-stability", &stab_f, &stab_o},
      {repeat, "repeat-runs", &rep_f, &rep_o},
  };
  for (const auto& b : bindings) {
    if (*b.sub) {
      json spec = spec_from(b.mode, *b.flags, *b.opts);
      return finish(exsel_experiment_run(spec.dump().c_str()));
    }
  }
  return 0;
}
