#include "exsel.h"

#include <cstring>
#include <exception>
#include <string>

#include <json.hpp>

#include "exsel/catalog.hpp"
#include "exsel/evaluator.hpp"
#include "exsel/experiments.hpp"
#include "exsel/nsga2.hpp"
#include "exsel/scenario_bank.hpp"

using nlohmann::json;

struct exsel_catalog {
  exsel::Catalog impl;
};

struct exsel_bank {
  exsel::ScenarioBank impl;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

// Translates C++ failures into status codes; fn returns a status itself so
// soft outcomes (empty archive) can pass through.
template <typename Fn>
exsel_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const exsel::ParseError& e) {
    set_error(e.what());
    return EXSEL_ERR_PARSE;
  } catch (const exsel::SpecError& e) {
    set_error(e.what());
    return EXSEL_ERR_SPEC;
  } catch (const std::invalid_argument& e) {
    set_error(e.what());
    return EXSEL_ERR_INVALID_ARGUMENT;
  } catch (const std::domain_error& e) {
    set_error(e.what());
    return EXSEL_ERR_INVALID_ARGUMENT;
  } catch (const std::runtime_error& e) {
    set_error(e.what());
    return EXSEL_ERR_IO;
  } catch (const std::exception& e) {
    set_error(e.what());
    return EXSEL_ERR_INTERNAL;
  }
}

exsel_status require(bool ok, const char* msg) {
  if (!ok) {
    set_error(msg);
    return EXSEL_ERR_INVALID_ARGUMENT;
  }
  return EXSEL_OK;
}

}  // namespace

extern "C" {

const char* exsel_version(void) { return "1.0.0"; }

const char* exsel_last_error(void) { return g_last_error.c_str(); }

void exsel_string_free(char* s) { delete[] s; }

exsel_status exsel_catalog_load_file(const char* path, exsel_catalog** out) {
  if (auto st = require(path && out, "null argument")) return st;
  return guarded([&]() {
    auto* handle = new exsel_catalog{exsel::Catalog::load_file(path)};
    *out = handle;
    return EXSEL_OK;
  });
}

exsel_status exsel_catalog_parse(const char* json_text, exsel_catalog** out) {
  if (auto st = require(json_text && out, "null argument")) return st;
  return guarded([&]() {
    auto* handle =
        new exsel_catalog{exsel::Catalog::from_json_string(json_text)};
    *out = handle;
    return EXSEL_OK;
  });
}

exsel_status exsel_catalog_validate(const exsel_catalog* catalog,
                                    char** violations_json) {
  if (auto st = require(catalog && violations_json, "null argument")) {
    return st;
  }
  return guarded([&]() {
    json arr = json::array();
    for (const auto& v : catalog->impl.validate()) {
      arr.push_back(json{{"project", v.project},
                         {"field", v.field},
                         {"message", v.message}});
    }
    *violations_json = dup_string(arr.dump(2));
    return EXSEL_OK;
  });
}

exsel_status exsel_catalog_to_json(const exsel_catalog* catalog,
                                   char** json_text) {
  if (auto st = require(catalog && json_text, "null argument")) return st;
  return guarded([&]() {
    *json_text = dup_string(catalog->impl.to_json_string());
    return EXSEL_OK;
  });
}

void exsel_catalog_free(exsel_catalog* catalog) { delete catalog; }

exsel_status exsel_bank_build(const exsel_catalog* catalog, uint64_t seed,
                              int scenarios, int subscenarios, int threads,
                              exsel_bank** out) {
  if (auto st = require(catalog && out, "null argument")) return st;
  return guarded([&]() {
    if (!catalog->impl.validate().empty()) {
      set_error("catalog failed validation");
      return EXSEL_ERR_VALIDATION;
    }
    auto* handle = new exsel_bank{exsel::build_bank(
        catalog->impl, seed, scenarios, subscenarios, threads)};
    *out = handle;
    return EXSEL_OK;
  });
}

exsel_status exsel_bank_save(const exsel_bank* bank, const char* path) {
  if (auto st = require(bank && path, "null argument")) return st;
  return guarded([&]() {
    bank->impl.save_file(path);
    return EXSEL_OK;
  });
}

exsel_status exsel_bank_load(const char* path, exsel_bank** out) {
  if (auto st = require(path && out, "null argument")) return st;
  return guarded([&]() {
    auto* handle = new exsel_bank{exsel::ScenarioBank::load_file(path)};
    *out = handle;
    return EXSEL_OK;
  });
}

void exsel_bank_free(exsel_bank* bank) { delete bank; }

namespace {

exsel::PortfolioGenome parse_bits(const char* bits) {
  exsel::PortfolioGenome g;
  for (const char* c = bits; *c; ++c) {
    if (*c == '0') {
      g.push_back(0);
    } else if (*c == '1') {
      g.push_back(1);
    } else {
      throw std::invalid_argument("genome bits must be 0 or 1");
    }
  }
  return g;
}

}  // namespace

exsel_status exsel_evaluate(const exsel_catalog* catalog,
                            const exsel_bank* bank, const char* genome_bits,
                            const char* options_json, char** report_json) {
  if (auto st = require(catalog && bank && genome_bits && report_json,
                        "null argument")) {
    return st;
  }
  return guarded([&]() {
    exsel::EvaluationOptions opts;
    if (options_json && *options_json) {
      json j = json::parse(options_json, nullptr, false);
      if (j.is_discarded()) {
        set_error("options must be valid JSON");
        return EXSEL_ERR_PARSE;
      }
      std::string rec = j.value("recourse", std::string("exact"));
      if (rec == "exact") {
        opts.recourse_mode = exsel::RecourseMode::Exact;
      } else if (rec == "greedy") {
        opts.recourse_mode = exsel::RecourseMode::Greedy;
      } else if (rec == "none") {
        opts.recourse_mode = exsel::RecourseMode::None;
      } else {
        set_error("unknown recourse mode: " + rec);
        return EXSEL_ERR_INVALID_ARGUMENT;
      }
      std::string post = j.value("posterior", std::string("posterior"));
      if (post == "posterior") {
        opts.posterior_mode = exsel::PosteriorMode::Posterior;
      } else if (post == "fixed") {
        opts.posterior_mode = exsel::PosteriorMode::Fixed;
      } else {
        set_error("unknown posterior mode: " + post);
        return EXSEL_ERR_INVALID_ARGUMENT;
      }
      opts.theta_scale = j.value("theta_scale", 1.0);
      opts.keep_scenario_details = j.value("details", false);
    }
    exsel::PortfolioGenome genome =
        exsel::repair(parse_bits(genome_bits), catalog->impl);
    exsel::EvaluationReport rep =
        exsel::evaluate(catalog->impl, bank->impl, genome, opts);
    *report_json = dup_string(rep.to_json_string());
    return EXSEL_OK;
  });
}

exsel_status exsel_optimize(const exsel_catalog* catalog,
                            const exsel_bank* bank, const char* config_json,
                            char** archive_json) {
  if (auto st = require(catalog && bank && archive_json, "null argument")) {
    return st;
  }
  return guarded([&]() {
    exsel::SearchConfig config;
    if (config_json && *config_json) {
      json j = json::parse(config_json, nullptr, false);
      if (j.is_discarded()) {
        set_error("search config must be valid JSON");
        return EXSEL_ERR_PARSE;
      }
      config.population = j.value("population", config.population);
      config.generations = j.value("generations", config.generations);
      config.crossover_prob = j.value("crossover", config.crossover_prob);
      config.mutation_prob = j.value("mutation", config.mutation_prob);
      config.seed = j.value("seed", config.seed);
    }
    exsel::SearchResult result =
        exsel::run_portfolio_search(catalog->impl, bank->impl, config);
    json out;
    json portfolios = json::array();
    for (const auto& ind : result.archive) {
      std::string bits(ind.genome.size(), '0');
      for (std::size_t i = 0; i < ind.genome.size(); ++i) {
        if (ind.genome[i]) bits[i] = '1';
      }
      portfolios.push_back(json{{"genome", bits},
                                {"enpv", -ind.obj[0]},
                                {"cvar_loss", ind.obj[1]},
                                {"viol", ind.viol}});
    }
    out["portfolios"] = portfolios;
    if (result.empty_archive) {
      std::string bits(result.least_violating.genome.size(), '0');
      for (std::size_t i = 0; i < result.least_violating.genome.size(); ++i) {
        if (result.least_violating.genome[i]) bits[i] = '1';
      }
      out["least_violating"] =
          json{{"genome", bits}, {"viol", result.least_violating.viol}};
      *archive_json = dup_string(out.dump(2));
      set_error("search returned no feasible portfolio");
      return EXSEL_ERR_EMPTY_ARCHIVE;
    }
    *archive_json = dup_string(out.dump(2));
    return EXSEL_OK;
  });
}

exsel_status exsel_experiment_run(const char* spec_json) {
  if (auto st = require(spec_json != nullptr, "null argument")) return st;
  return guarded([&]() {
    exsel::ExperimentSpec spec =
        exsel::ExperimentSpec::from_json_string(spec_json);
    int code = exsel::run_experiment(spec);
    if (code == exsel::kExitEmptyArchive) {
      set_error("search returned no feasible portfolio");
      return EXSEL_ERR_EMPTY_ARCHIVE;
    }
    return EXSEL_OK;
  });
}

}  // extern "C"
