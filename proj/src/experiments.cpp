#include "exsel/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "exsel/distributions.hpp"
#include "exsel/parallel.hpp"
#include "exsel/stats.hpp"

namespace exsel {

namespace fs = std::filesystem;
using nlohmann::json;

const char* experiment_mode_name(ExperimentMode m) noexcept {
  switch (m) {
    case ExperimentMode::Optimize: return "optimize";
    case ExperimentMode::Evaluate: return "evaluate";
    case ExperimentMode::BenchmarkDet: return "benchmark-det";
    case ExperimentMode::AblateRecourse: return "ablate-recourse";
    case ExperimentMode::SensitivityBeta: return "sensitivity-beta";
    case ExperimentMode::SensitivityTheta: return "sensitivity-theta";
    case ExperimentMode::SaaStability: return "saa-stability";
    case ExperimentMode::RepeatRuns: return "repeat-runs";
    case ExperimentMode::MakeSynthetic: return "make-synthetic";
  }
  return "?";
}

std::string format_number(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

namespace {

ExperimentMode mode_from_string(const std::string& s) {
  for (int m = 0; m <= static_cast<int>(ExperimentMode::MakeSynthetic); ++m) {
    auto mode = static_cast<ExperimentMode>(m);
    if (s == experiment_mode_name(mode)) return mode;
  }
  throw SpecError("unknown experiment mode: " + s);
}

RecourseMode recourse_from_string(const std::string& s) {
  if (s == "exact") return RecourseMode::Exact;
  if (s == "greedy") return RecourseMode::Greedy;
  if (s == "none") return RecourseMode::None;
  throw SpecError("unknown recourse mode: " + s);
}

const char* recourse_name(RecourseMode m) {
  switch (m) {
    case RecourseMode::Exact: return "exact";
    case RecourseMode::Greedy: return "greedy";
    case RecourseMode::None: return "none";
    case RecourseMode::FixedPlan: return "fixed-plan";
  }
  return "?";
}

PosteriorMode posterior_from_string(const std::string& s) {
  if (s == "posterior") return PosteriorMode::Posterior;
  if (s == "fixed") return PosteriorMode::Fixed;
  throw SpecError("unknown posterior mode: " + s);
}

std::string genome_to_string(const PortfolioGenome& g) {
  std::string s(g.size(), '0');
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g[i]) s[i] = '1';
  }
  return s;
}

PortfolioGenome genome_from_string(const std::string& s) {
  PortfolioGenome g(s.size(), 0);
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '1') {
      g[i] = 1;
    } else if (s[i] != '0') {
      throw SpecError("genome string must contain only 0s and 1s");
    }
  }
  return g;
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write output file: " + path.string());
  }
  out << text;
}

std::string join_row(const std::vector<std::string>& cells) {
  std::string row;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) row += ',';
    row += cells[i];
  }
  row += '\n';
  return row;
}

struct CsvTable {
  std::string data;
  explicit CsvTable(const std::vector<std::string>& header) {
    data = join_row(header);
  }
  void row(const std::vector<std::string>& cells) { data += join_row(cells); }
};

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) /
         static_cast<double>(v.size());
}

double sample_sd(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  double m = mean_of(v);
  double acc = 0.0;
  for (double x : v) acc += (x - m) * (x - m);
  return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

double coefficient_of_variation(const std::vector<double>& v) {
  double m = mean_of(v);
  return m != 0.0 ? sample_sd(v) / m : 0.0;
}

// Type-7 quantile on an unsorted copy.
double quantile(std::vector<double> v, double p) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  double h = (static_cast<double>(v.size()) - 1.0) * p;
  auto lo = static_cast<std::size_t>(h);
  if (lo + 1 >= v.size()) return v.back();
  double frac = h - static_cast<double>(lo);
  return v[lo] + frac * (v[lo + 1] - v[lo]);
}

struct SpecDefaults {
  SampleSpec in, oos;
  int population, generations;
  std::vector<int> stability;
};

SpecDefaults profile_defaults(const std::string& profile) {
  if (profile == "paper") {
    return {{1234567, 200, 20}, {7654321, 1000, 20}, 100, 500,
            {50, 100, 200, 500}};
  }
  if (profile == "ci") {
    return {{1234567, 40, 5}, {7654321, 200, 5}, 20, 50, {50, 500}};
  }
  throw SpecError("unknown profile: " + profile);
}

}  // namespace

ExperimentSpec ExperimentSpec::from_json_string(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw SpecError(std::string("experiment spec is not valid JSON: ") +
                    e.what());
  }
  ExperimentSpec spec;
  try {
    spec.mode = mode_from_string(root.at("mode").get<std::string>());
    spec.profile = root.value("profile", std::string("paper"));
    SpecDefaults d = profile_defaults(spec.profile);
    spec.catalog_path = root.value("catalog", std::string());
    spec.out_dir = root.value("out_dir", std::string());
    auto sample = [&](const char* key, const SampleSpec& def) {
      SampleSpec s = def;
      if (root.contains(key)) {
        const auto& j = root.at(key);
        s.seed = j.value("seed", def.seed);
        s.scenarios = j.value("scenarios", def.scenarios);
        s.subscenarios = j.value("subscenarios", def.subscenarios);
      }
      return s;
    };
    spec.in_sample = sample("in_sample", d.in);
    spec.out_of_sample = sample("out_of_sample", d.oos);
    spec.search.population = d.population;
    spec.search.generations = d.generations;
    if (root.contains("search")) {
      const auto& j = root.at("search");
      spec.search.population = j.value("population", spec.search.population);
      spec.search.generations =
          j.value("generations", spec.search.generations);
      spec.search.crossover_prob =
          j.value("crossover", spec.search.crossover_prob);
      spec.search.mutation_prob =
          j.value("mutation", spec.search.mutation_prob);
      spec.search.seed = j.value("seed", spec.search.seed);
      spec.search.cross_generation_archive =
          j.value("cross_generation_archive",
                  spec.search.cross_generation_archive);
    }
    spec.betas = root.value("betas", std::vector<double>{0.80, 0.90, 0.95});
    spec.theta_scales =
        root.value("theta_scales", std::vector<double>{0.0, 1.0, 2.0});
    spec.stability_scenarios =
        root.value("stability_scenarios", d.stability);
    spec.runs = root.value("runs", 10);
    spec.threads = root.value("threads", 1);
    spec.genome_bits = root.value("genome", std::string());
    if (root.contains("recourse")) {
      spec.recourse_mode =
          recourse_from_string(root.at("recourse").get<std::string>());
    }
    if (root.contains("posterior")) {
      spec.posterior_mode =
          posterior_from_string(root.at("posterior").get<std::string>());
    }
    spec.bank_file = root.value("bank_file", std::string());
    spec.archive_path = root.value("archive", std::string());
    if (root.contains("synthetic")) {
      const auto& j = root.at("synthetic");
      spec.synthetic.first_stage =
          j.value("first_stage", spec.synthetic.first_stage);
      spec.synthetic.second_stage =
          j.value("second_stage", spec.synthetic.second_stage);
      spec.synthetic.seed = j.value("seed", spec.synthetic.seed);
    }
    spec.catalog_out = root.value("catalog_out", std::string());
  } catch (const json::exception& e) {
    throw SpecError(std::string("experiment spec malformed: ") + e.what());
  }

  if (spec.out_dir.empty()) {
    throw SpecError("experiment spec requires out_dir");
  }
  if (spec.mode != ExperimentMode::MakeSynthetic &&
      spec.catalog_path.empty()) {
    throw SpecError("experiment spec requires a catalog path");
  }
  if (spec.in_sample.seed == spec.out_of_sample.seed) {
    throw SpecError("in-sample and out-of-sample seeds must differ");
  }
  if (spec.mode == ExperimentMode::Evaluate && spec.genome_bits.empty()) {
    throw SpecError("evaluate mode requires a genome bit string");
  }
  if (spec.runs < 1) {
    throw SpecError("runs must be at least 1");
  }
  if (spec.betas.empty() || spec.theta_scales.empty() ||
      spec.stability_scenarios.empty()) {
    throw SpecError("sweep lists must be nonempty");
  }
  return spec;
}

std::string ExperimentSpec::to_json_string() const {
  json j;
  j["mode"] = experiment_mode_name(mode);
  j["profile"] = profile;
  j["catalog"] = catalog_path;
  j["out_dir"] = out_dir;
  j["in_sample"] = json{{"seed", in_sample.seed},
                        {"scenarios", in_sample.scenarios},
                        {"subscenarios", in_sample.subscenarios}};
  j["out_of_sample"] = json{{"seed", out_of_sample.seed},
                            {"scenarios", out_of_sample.scenarios},
                            {"subscenarios", out_of_sample.subscenarios}};
  j["search"] = json{
      {"population", search.population},
      {"generations", search.generations},
      {"crossover", search.crossover_prob},
      {"mutation", search.mutation_prob},
      {"seed", search.seed},
      {"cross_generation_archive", search.cross_generation_archive}};
  j["betas"] = betas;
  j["theta_scales"] = theta_scales;
  j["stability_scenarios"] = stability_scenarios;
  j["runs"] = runs;
  j["threads"] = threads;
  if (!genome_bits.empty()) j["genome"] = genome_bits;
  j["recourse"] = recourse_name(recourse_mode);
  j["posterior"] =
      posterior_mode == PosteriorMode::Posterior ? "posterior" : "fixed";
  if (!bank_file.empty()) j["bank_file"] = bank_file;
  if (!archive_path.empty()) j["archive"] = archive_path;
  if (mode == ExperimentMode::MakeSynthetic) {
    j["synthetic"] = json{{"first_stage", synthetic.first_stage},
                          {"second_stage", synthetic.second_stage},
                          {"seed", synthetic.seed}};
    j["catalog_out"] = catalog_out;
  }
  return j.dump(2);
}

namespace {

Catalog load_spec_catalog(const ExperimentSpec& spec) {
  Catalog cat;
  try {
    cat = Catalog::load_file(spec.catalog_path);
  } catch (const ParseError& e) {
    throw SpecError(e.what());
  } catch (const std::runtime_error& e) {
    throw SpecError(e.what());
  }
  auto violations = cat.validate();
  if (!violations.empty()) {
    std::ostringstream oss;
    oss << "catalog failed validation with " << violations.size()
        << " violation(s); first: [" << violations.front().project << "."
        << violations.front().field << "] " << violations.front().message;
    throw SpecError(oss.str());
  }
  return cat;
}

std::vector<std::string> archive_csv_header(const Catalog& cat) {
  std::vector<std::string> h = {"id",
                                "genome",
                                "enpv",
                                "cvar_loss",
                                "success_reliability"};
  for (const auto& t : cat.constraints.reserve_targets) {
    h.push_back(std::string("reserve_reliability_") +
                indicator_name(t.indicator));
  }
  h.insert(h.end(),
           {"joint_reserve_reliability", "viol", "first_stage_spend",
            "first_stage_wells", "mean_second_stage_wells",
            "mean_recourse_spend", "mean_selected_pos",
            "mean_selected_pos_weighted"});
  return h;
}

std::vector<std::string> archive_csv_row(const Catalog& cat, int id,
                                         const PortfolioGenome& genome,
                                         const EvaluationReport& r) {
  std::vector<std::string> row = {std::to_string(id),
                                  genome_to_string(genome),
                                  format_number(r.enpv),
                                  format_number(r.cvar),
                                  format_number(r.success_reliability)};
  for (std::size_t mi = 0; mi < cat.constraints.reserve_targets.size();
       ++mi) {
    row.push_back(format_number(r.indicator_reliability[mi].second));
  }
  row.push_back(format_number(r.joint_reserve_reliability));
  row.push_back(format_number(r.viol));
  row.push_back(format_number(r.first_stage_spend));
  row.push_back(std::to_string(r.first_stage_wells));
  row.push_back(format_number(r.mean_second_stage_wells));
  row.push_back(format_number(r.mean_recourse_spend));
  row.push_back(r.mean_selected_pos ? format_number(*r.mean_selected_pos)
                                    : "");
  row.push_back(r.mean_selected_pos_weighted
                    ? format_number(*r.mean_selected_pos_weighted)
                    : "");
  return row;
}

struct MetricStats {
  double min = 0.0, mean = 0.0, max = 0.0;
};

MetricStats stats_of(const std::vector<double>& v) {
  if (v.empty()) return {};
  return {*std::min_element(v.begin(), v.end()), mean_of(v),
          *std::max_element(v.begin(), v.end())};
}

void write_frontier(const fs::path& path,
                    std::vector<std::array<double, 2>> points) {
  // points are (enpv, cvar)
  std::sort(points.begin(), points.end());
  CsvTable t({"x", "y", "band_low", "band_high"});
  for (const auto& p : points) {
    t.row({format_number(p[0]), format_number(p[1]), format_number(p[1]),
           format_number(p[1])});
  }
  write_text_file(path, t.data);
}

void write_spec_echo(const ExperimentSpec& spec) {
  write_text_file(fs::path(spec.out_dir) / "spec.json",
                  spec.to_json_string() + "\n");
}

json report_json(const EvaluationReport& r) {
  return json::parse(r.to_json_string());
}

// Archive re-evaluation on one bank; parallel over portfolios.
std::vector<EvaluationReport> evaluate_archive(
    const Catalog& cat, const ScenarioBank& bank,
    const std::vector<PortfolioGenome>& genomes,
    const EvaluationOptions& opts, int threads) {
  std::vector<EvaluationReport> reports(genomes.size());
  parallel_for(genomes.size(), threads, [&](std::size_t i) {
    reports[i] = evaluate(cat, bank, genomes[i], opts);
  });
  return reports;
}

std::vector<PortfolioGenome> load_archive_genomes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw SpecError("cannot open archive file: " + path);
  }
  std::ostringstream oss;
  oss << in.rdbuf();
  json root;
  try {
    root = json::parse(oss.str());
  } catch (const json::exception& e) {
    throw SpecError(std::string("archive file is not valid JSON: ") +
                    e.what());
  }
  std::vector<PortfolioGenome> genomes;
  try {
    for (const auto& entry : root.at("portfolios")) {
      genomes.push_back(
          genome_from_string(entry.at("genome").get<std::string>()));
    }
  } catch (const json::exception& e) {
    throw SpecError(std::string("archive file malformed: ") + e.what());
  }
  if (genomes.empty()) {
    throw SpecError("archive file contains no portfolios");
  }
  return genomes;
}

struct ArchiveBundle {
  std::vector<PortfolioGenome> genomes;
  ScenarioBank oos_bank;
  std::vector<EvaluationReport> oos_reports;  // posterior exact, full detail
};

ArchiveBundle obtain_archive(const Catalog& cat, const ExperimentSpec& spec) {
  ArchiveBundle bundle;
  if (!spec.archive_path.empty()) {
    bundle.genomes = load_archive_genomes(spec.archive_path);
    for (auto& g : bundle.genomes) {
      if (g.size() != cat.first_count()) {
        throw SpecError("archive genome length does not match catalog");
      }
      g = repair(std::move(g), cat);
    }
    bundle.oos_bank =
        build_bank(cat, spec.out_of_sample.seed, spec.out_of_sample.scenarios,
                   spec.out_of_sample.subscenarios, spec.threads);
  } else {
    OptimizeOutcome outcome = run_optimize_core(cat, spec);
    if (outcome.search.archive.empty()) {
      throw SpecError(
          "optimization produced an empty archive; cannot continue");
    }
    for (const auto& ind : outcome.search.archive) {
      bundle.genomes.push_back(ind.genome);
    }
    bundle.oos_bank = std::move(outcome.oos_bank);
    bundle.oos_reports = std::move(outcome.oos_reports);
    return bundle;
  }
  EvaluationOptions full;
  full.keep_scenario_details = true;
  full.keep_losses = true;
  bundle.oos_reports = evaluate_archive(cat, bundle.oos_bank, bundle.genomes,
                                        full, spec.threads);
  return bundle;
}

}  // namespace

OptimizeOutcome run_optimize_core(const Catalog& catalog,
                                  const ExperimentSpec& spec) {
  OptimizeOutcome outcome;
  outcome.in_bank =
      build_bank(catalog, spec.in_sample.seed, spec.in_sample.scenarios,
                 spec.in_sample.subscenarios, spec.threads);
  outcome.search =
      run_portfolio_search(catalog, outcome.in_bank, spec.search);
  outcome.oos_bank =
      build_bank(catalog, spec.out_of_sample.seed,
                 spec.out_of_sample.scenarios, spec.out_of_sample.subscenarios,
                 spec.threads);
  EvaluationOptions full;
  full.keep_scenario_details = true;
  full.keep_losses = true;
  std::vector<PortfolioGenome> genomes;
  for (const auto& ind : outcome.search.archive) {
    genomes.push_back(ind.genome);
  }
  outcome.oos_reports = evaluate_archive(catalog, outcome.oos_bank, genomes,
                                         full, spec.threads);
  return outcome;
}

namespace {

int run_optimize(const Catalog& cat, const ExperimentSpec& spec) {
  OptimizeOutcome outcome = run_optimize_core(cat, spec);
  const auto& archive = outcome.search.archive;
  fs::path dir(spec.out_dir);

  if (archive.empty()) {
    json flag;
    flag["empty_archive"] = true;
    flag["least_violating"] = json{
        {"genome", genome_to_string(outcome.search.least_violating.genome)},
        {"viol", outcome.search.least_violating.viol},
        {"enpv", -outcome.search.least_violating.obj[0]},
        {"cvar_loss", outcome.search.least_violating.obj[1]}};
    write_text_file(dir / "empty_archive.json", flag.dump(2) + "\n");
    return kExitEmptyArchive;
  }

  CsvTable in_table(archive_csv_header(cat));
  CsvTable out_table(archive_csv_header(cat));
  std::vector<std::array<double, 2>> in_points, out_points;
  json jarchive;
  json portfolios = json::array();
  std::vector<double> in_enpv, in_cvar, in_sr, in_joint;
  std::vector<double> out_enpv, out_cvar, out_sr, out_joint;
  for (std::size_t a = 0; a < archive.size(); ++a) {
    const auto& in_rep = *archive[a].report;
    const auto& out_rep = outcome.oos_reports[a];
    int id = static_cast<int>(a);
    in_table.row(archive_csv_row(cat, id, archive[a].genome, in_rep));
    out_table.row(archive_csv_row(cat, id, archive[a].genome, out_rep));
    in_points.push_back({in_rep.enpv, in_rep.cvar});
    out_points.push_back({out_rep.enpv, out_rep.cvar});
    in_enpv.push_back(in_rep.enpv);
    in_cvar.push_back(in_rep.cvar);
    in_sr.push_back(in_rep.success_reliability);
    in_joint.push_back(in_rep.joint_reserve_reliability);
    out_enpv.push_back(out_rep.enpv);
    out_cvar.push_back(out_rep.cvar);
    out_sr.push_back(out_rep.success_reliability);
    out_joint.push_back(out_rep.joint_reserve_reliability);
    json entry;
    entry["id"] = id;
    entry["genome"] = genome_to_string(archive[a].genome);
    json in_json = report_json(in_rep);
    in_json.erase("scenarios");
    entry["in_sample"] = in_json;
    json out_json = report_json(out_rep);
    entry["out_of_sample"] = out_json;
    portfolios.push_back(entry);
  }
  jarchive["portfolios"] = portfolios;
  jarchive["evaluations"] = outcome.search.evaluations;

  CsvTable summary({"sample", "statistic", "enpv", "cvar_loss",
                    "success_reliability", "joint_reserve_reliability"});
  auto add_summary = [&](const char* sample, const std::vector<double>& e,
                         const std::vector<double>& c,
                         const std::vector<double>& s,
                         const std::vector<double>& j) {
    MetricStats se = stats_of(e), sc = stats_of(c), ss = stats_of(s),
                sj = stats_of(j);
    summary.row({sample, "min", format_number(se.min), format_number(sc.min),
                 format_number(ss.min), format_number(sj.min)});
    summary.row({sample, "mean", format_number(se.mean),
                 format_number(sc.mean), format_number(ss.mean),
                 format_number(sj.mean)});
    summary.row({sample, "max", format_number(se.max), format_number(sc.max),
                 format_number(ss.max), format_number(sj.max)});
  };
  add_summary("in_sample", in_enpv, in_cvar, in_sr, in_joint);
  add_summary("out_of_sample", out_enpv, out_cvar, out_sr, out_joint);

  write_text_file(dir / "archive_in_sample.csv", in_table.data);
  write_text_file(dir / "archive_out_of_sample.csv", out_table.data);
  write_text_file(dir / "summary.csv", summary.data);
  write_frontier(dir / "frontier_in_sample.csv", in_points);
  write_frontier(dir / "frontier_out_of_sample.csv", out_points);
  write_text_file(dir / "archive.json", jarchive.dump(2) + "\n");
  return kExitOk;
}

int run_evaluate(const Catalog& cat, const ExperimentSpec& spec) {
  ScenarioBank bank;
  if (!spec.bank_file.empty()) {
    bank = ScenarioBank::load_file(spec.bank_file);
    if (bank.catalog_hash != cat.hash()) {
      throw SpecError("bank file was built for a different catalog");
    }
  } else {
    bank = build_bank(cat, spec.in_sample.seed, spec.in_sample.scenarios,
                      spec.in_sample.subscenarios, spec.threads);
  }
  PortfolioGenome genome = genome_from_string(spec.genome_bits);
  if (genome.size() != cat.first_count()) {
    throw SpecError("genome length does not match the catalog");
  }
  genome = repair(std::move(genome), cat);
  EvaluationOptions opts;
  opts.recourse_mode = spec.recourse_mode;
  opts.posterior_mode = spec.posterior_mode;
  opts.keep_scenario_details = true;
  EvaluationReport rep = evaluate(cat, bank, genome, opts);
  fs::path dir(spec.out_dir);
  write_text_file(dir / "report.json", rep.to_json_string() + "\n");
  CsvTable t(archive_csv_header(cat));
  t.row(archive_csv_row(cat, 0, genome, rep));
  write_text_file(dir / "report.csv", t.data);
  return kExitOk;
}

int run_ablate(const Catalog& cat, const ExperimentSpec& spec) {
  ArchiveBundle bundle = obtain_archive(cat, spec);
  struct Setting {
    const char* label;
    RecourseMode recourse;
    PosteriorMode posterior;
  };
  const Setting settings[] = {
      {"no_recourse", RecourseMode::None, PosteriorMode::Posterior},
      {"fixed_exact", RecourseMode::Exact, PosteriorMode::Fixed},
      {"posterior_exact", RecourseMode::Exact, PosteriorMode::Posterior},
      {"greedy", RecourseMode::Greedy, PosteriorMode::Posterior},
  };
  CsvTable t({"setting", "enpv", "cvar_loss", "success_reliability",
              "joint_reserve_reliability", "selected_pos",
              "selected_pos_weighted", "second_stage_wells", "viol"});
  json detail;
  for (const auto& s : settings) {
    EvaluationOptions opts;
    opts.recourse_mode = s.recourse;
    opts.posterior_mode = s.posterior;
    auto reports = evaluate_archive(cat, bundle.oos_bank, bundle.genomes,
                                    opts, spec.threads);
    std::vector<double> enpv, cvar_v, sr, joint, wells, viol;
    double pos_sum = 0.0, posw_sum = 0.0;
    std::size_t pos_n = 0;
    json rows = json::array();
    for (std::size_t a = 0; a < reports.size(); ++a) {
      const auto& r = reports[a];
      enpv.push_back(r.enpv);
      cvar_v.push_back(r.cvar);
      sr.push_back(r.success_reliability);
      joint.push_back(r.joint_reserve_reliability);
      wells.push_back(r.mean_second_stage_wells);
      viol.push_back(r.viol);
      if (r.mean_selected_pos) {
        pos_sum += *r.mean_selected_pos;
        posw_sum += *r.mean_selected_pos_weighted;
        ++pos_n;
      }
      json row = report_json(r);
      row["id"] = static_cast<int>(a);
      rows.push_back(row);
    }
    bool has_pos = pos_n > 0;
    t.row({s.label, format_number(mean_of(enpv)),
           format_number(mean_of(cvar_v)), format_number(mean_of(sr)),
           format_number(mean_of(joint)),
           has_pos ? format_number(pos_sum / static_cast<double>(pos_n)) : "",
           has_pos ? format_number(posw_sum / static_cast<double>(pos_n))
                   : "",
           format_number(mean_of(wells)), format_number(mean_of(viol))});
    detail[s.label] = rows;
  }
  fs::path dir(spec.out_dir);
  write_text_file(dir / "ablation.csv", t.data);
  write_text_file(dir / "ablation.json", detail.dump(2) + "\n");
  return kExitOk;
}

int run_sensitivity_beta(const Catalog& cat, const ExperimentSpec& spec) {
  ArchiveBundle bundle = obtain_archive(cat, spec);
  // Re-price the same stored loss vectors; nothing is re-simulated.
  CsvTable t({"beta", "enpv", "cvar_loss", "success_reliability",
              "joint_reserve_reliability"});
  CsvTable pt({"beta", "portfolio", "cvar_loss"});
  std::vector<double> enpv, sr, joint;
  for (const auto& r : bundle.oos_reports) {
    enpv.push_back(r.enpv);
    sr.push_back(r.success_reliability);
    joint.push_back(r.joint_reserve_reliability);
  }
  for (double beta : spec.betas) {
    if (!(beta > 0.0 && beta < 1.0)) {
      throw SpecError("beta sweep values must lie in (0, 1)");
    }
    std::vector<double> cv;
    for (std::size_t a = 0; a < bundle.oos_reports.size(); ++a) {
      double c = cvar(bundle.oos_reports[a].losses, beta);
      cv.push_back(c);
      pt.row({format_number(beta), std::to_string(a), format_number(c)});
    }
    t.row({format_number(beta), format_number(mean_of(enpv)),
           format_number(mean_of(cv)), format_number(mean_of(sr)),
           format_number(mean_of(joint))});
  }
  fs::path dir(spec.out_dir);
  write_text_file(dir / "beta_sweep.csv", t.data);
  write_text_file(dir / "beta_sweep_portfolios.csv", pt.data);
  return kExitOk;
}

int run_sensitivity_theta(const Catalog& cat, const ExperimentSpec& spec) {
  ArchiveBundle bundle = obtain_archive(cat, spec);
  CsvTable t({"theta_scale", "enpv", "cvar_loss", "success_reliability",
              "joint_reserve_reliability", "selected_pos",
              "selected_pos_weighted", "second_stage_wells"});
  for (double scale : spec.theta_scales) {
    if (scale < 0.0) {
      throw SpecError("theta scales must be nonnegative");
    }
    EvaluationOptions opts;
    opts.theta_scale = scale;
    auto reports = evaluate_archive(cat, bundle.oos_bank, bundle.genomes,
                                    opts, spec.threads);
    std::vector<double> enpv, cvar_v, sr, joint, wells;
    double pos_sum = 0.0, posw_sum = 0.0;
    std::size_t pos_n = 0;
    for (const auto& r : reports) {
      enpv.push_back(r.enpv);
      cvar_v.push_back(r.cvar);
      sr.push_back(r.success_reliability);
      joint.push_back(r.joint_reserve_reliability);
      wells.push_back(r.mean_second_stage_wells);
      if (r.mean_selected_pos) {
        pos_sum += *r.mean_selected_pos;
        posw_sum += *r.mean_selected_pos_weighted;
        ++pos_n;
      }
    }
    bool has_pos = pos_n > 0;
    t.row({format_number(scale), format_number(mean_of(enpv)),
           format_number(mean_of(cvar_v)), format_number(mean_of(sr)),
           format_number(mean_of(joint)),
           has_pos ? format_number(pos_sum / static_cast<double>(pos_n)) : "",
           has_pos ? format_number(posw_sum / static_cast<double>(pos_n))
                   : "",
           format_number(mean_of(wells))});
  }
  write_text_file(fs::path(spec.out_dir) / "theta_sweep.csv", t.data);
  return kExitOk;
}

int run_saa_stability(const Catalog& cat, const ExperimentSpec& spec) {
  ArchiveBundle bundle = obtain_archive(cat, spec);
  CsvTable banks({"scenarios", "bank", "enpv", "cvar_loss",
                  "success_reliability", "joint_reserve_reliability"});
  CsvTable summary({"scenarios", "cv_enpv", "cv_cvar",
                    "sd_joint_reliability", "mean_enpv", "mean_cvar"});
  CsvTable bands({"metric", "x", "y", "band_low", "band_high", "iqr_low",
                  "iqr_high"});
  EvaluationOptions opts;  // posterior-informed exact recourse
  for (int S : spec.stability_scenarios) {
    if (S <= 0) throw SpecError("stability scenario sizes must be positive");
    std::vector<double> enpv_b, cvar_b, sr_b, joint_b;
    for (int r = 0; r < spec.runs; ++r) {
      std::uint64_t bank_seed =
          mix64(spec.out_of_sample.seed ^
                mix64(static_cast<std::uint64_t>(S) * 1000003ULL +
                      static_cast<std::uint64_t>(r) + 1));
      ScenarioBank bank = build_bank(cat, bank_seed, S,
                                     spec.in_sample.subscenarios,
                                     spec.threads);
      auto reports =
          evaluate_archive(cat, bank, bundle.genomes, opts, spec.threads);
      std::vector<double> enpv, cvar_v, sr, joint;
      for (const auto& rep : reports) {
        enpv.push_back(rep.enpv);
        cvar_v.push_back(rep.cvar);
        sr.push_back(rep.success_reliability);
        joint.push_back(rep.joint_reserve_reliability);
      }
      enpv_b.push_back(mean_of(enpv));
      cvar_b.push_back(mean_of(cvar_v));
      sr_b.push_back(mean_of(sr));
      joint_b.push_back(mean_of(joint));
      banks.row({std::to_string(S), std::to_string(r),
                 format_number(enpv_b.back()), format_number(cvar_b.back()),
                 format_number(sr_b.back()), format_number(joint_b.back())});
    }
    summary.row({std::to_string(S),
                 format_number(coefficient_of_variation(enpv_b)),
                 format_number(coefficient_of_variation(cvar_b)),
                 format_number(sample_sd(joint_b)),
                 format_number(mean_of(enpv_b)),
                 format_number(mean_of(cvar_b))});
    auto band_row = [&](const char* metric, const std::vector<double>& v) {
      bands.row({metric, std::to_string(S), format_number(mean_of(v)),
                 format_number(stats_of(v).min),
                 format_number(stats_of(v).max),
                 format_number(quantile(v, 0.25)),
                 format_number(quantile(v, 0.75))});
    };
    band_row("enpv", enpv_b);
    band_row("cvar_loss", cvar_b);
    band_row("success_reliability", sr_b);
    band_row("joint_reserve_reliability", joint_b);
  }
  fs::path dir(spec.out_dir);
  write_text_file(dir / "stability_banks.csv", banks.data);
  write_text_file(dir / "stability_summary.csv", summary.data);
  write_text_file(dir / "stability_bands.csv", bands.data);
  return kExitOk;
}

int run_repeat(const Catalog& cat, const ExperimentSpec& spec) {
  ScenarioBank bank =
      build_bank(cat, spec.in_sample.seed, spec.in_sample.scenarios,
                 spec.in_sample.subscenarios, spec.threads);
  struct RunOutcome {
    std::uint64_t seed = 0;
    bool feasible = false;
    std::vector<std::array<double, 2>> points;  // (enpv, cvar)
  };
  std::vector<RunOutcome> outcomes;
  for (int r = 0; r < spec.runs; ++r) {
    SearchConfig config = spec.search;
    config.seed = spec.search.seed + static_cast<std::uint64_t>(r);
    SearchResult result = run_portfolio_search(cat, bank, config);
    RunOutcome out;
    out.seed = config.seed;
    out.feasible = !result.archive.empty();
    for (const auto& ind : result.archive) {
      out.points.push_back({-ind.obj[0], ind.obj[1]});
    }
    outcomes.push_back(std::move(out));
  }

  // Shared hypervolume reference: component-wise worst over the union of
  // fronts, pushed out by 5% of the observed range.
  std::array<double, 2> worst = {-std::numeric_limits<double>::infinity(),
                                 -std::numeric_limits<double>::infinity()};
  std::array<double, 2> best = {std::numeric_limits<double>::infinity(),
                                std::numeric_limits<double>::infinity()};
  bool any_points = false;
  for (const auto& out : outcomes) {
    for (const auto& p : out.points) {
      any_points = true;
      std::array<double, 2> obj = {-p[0], p[1]};  // minimization space
      for (int d = 0; d < 2; ++d) {
        worst[static_cast<std::size_t>(d)] =
            std::max(worst[static_cast<std::size_t>(d)],
                     obj[static_cast<std::size_t>(d)]);
        best[static_cast<std::size_t>(d)] =
            std::min(best[static_cast<std::size_t>(d)],
                     obj[static_cast<std::size_t>(d)]);
      }
    }
  }
  std::array<double, 2> ref = {0.0, 0.0};
  if (any_points) {
    for (int d = 0; d < 2; ++d) {
      auto di = static_cast<std::size_t>(d);
      double range = worst[di] - best[di];
      double pad = range > 0.0 ? 0.05 * range
                               : 0.05 * std::max(1.0, std::fabs(worst[di]));
      ref[di] = worst[di] + pad;
    }
  }

  CsvTable runs({"run", "seed", "feasible", "front_size", "best_enpv",
                 "min_cvar_loss", "hypervolume"});
  std::vector<double> front_sizes, best_enpvs, min_cvars, hvs, feas;
  for (std::size_t r = 0; r < outcomes.size(); ++r) {
    const auto& out = outcomes[r];
    feas.push_back(out.feasible ? 1.0 : 0.0);
    double best_enpv = 0.0, min_cvar = 0.0, hv = 0.0;
    if (out.feasible) {
      std::vector<std::array<double, 2>> objs;
      best_enpv = -std::numeric_limits<double>::infinity();
      min_cvar = std::numeric_limits<double>::infinity();
      for (const auto& p : out.points) {
        best_enpv = std::max(best_enpv, p[0]);
        min_cvar = std::min(min_cvar, p[1]);
        objs.push_back({-p[0], p[1]});
      }
      hv = hypervolume(objs, ref);
      front_sizes.push_back(static_cast<double>(out.points.size()));
      best_enpvs.push_back(best_enpv);
      min_cvars.push_back(min_cvar);
      hvs.push_back(hv);
    }
    runs.row({std::to_string(r), std::to_string(out.seed),
              out.feasible ? "1" : "0",
              std::to_string(out.points.size()),
              out.feasible ? format_number(best_enpv) : "",
              out.feasible ? format_number(min_cvar) : "",
              out.feasible ? format_number(hv) : ""});
  }

  CsvTable summary({"indicator", "min", "mean", "max"});
  auto add_indicator = [&](const char* name, const std::vector<double>& v) {
    MetricStats s = stats_of(v);
    summary.row({name, format_number(s.min), format_number(s.mean),
                 format_number(s.max)});
  };
  add_indicator("feasible_rate", feas);
  add_indicator("front_size", front_sizes);
  add_indicator("best_enpv", best_enpvs);
  add_indicator("min_cvar_loss", min_cvars);
  add_indicator("hypervolume", hvs);

  // Interpolated frontier bands over a common ENPV grid.
  CsvTable bands({"x", "y", "band_low", "band_high", "iqr_low", "iqr_high"});
  std::vector<const RunOutcome*> feasible_runs;
  for (const auto& out : outcomes) {
    if (out.feasible) feasible_runs.push_back(&out);
  }
  if (!feasible_runs.empty()) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto* out : feasible_runs) {
      for (const auto& p : out->points) {
        lo = std::min(lo, p[0]);
        hi = std::max(hi, p[0]);
      }
    }
    const int grid = 50;
    for (int gidx = 0; gidx < grid; ++gidx) {
      double x = grid == 1 ? lo
                           : lo + (hi - lo) * static_cast<double>(gidx) /
                                      static_cast<double>(grid - 1);
      std::vector<double> ys;
      for (const auto* out : feasible_runs) {
        std::vector<std::array<double, 2>> pts = out->points;
        std::sort(pts.begin(), pts.end());
        double y;
        if (x <= pts.front()[0]) {
          y = pts.front()[1];
        } else if (x >= pts.back()[0]) {
          y = pts.back()[1];
        } else {
          y = pts.back()[1];
          for (std::size_t t = 1; t < pts.size(); ++t) {
            if (x <= pts[t][0]) {
              double span = pts[t][0] - pts[t - 1][0];
              double frac = span > 0.0 ? (x - pts[t - 1][0]) / span : 0.0;
              y = pts[t - 1][1] + frac * (pts[t][1] - pts[t - 1][1]);
              break;
            }
          }
        }
        ys.push_back(y);
      }
      bands.row({format_number(x), format_number(mean_of(ys)),
                 format_number(stats_of(ys).min),
                 format_number(stats_of(ys).max),
                 format_number(quantile(ys, 0.25)),
                 format_number(quantile(ys, 0.75))});
    }
  }

  fs::path dir(spec.out_dir);
  write_text_file(dir / "runs.csv", runs.data);
  write_text_file(dir / "repeat_summary.csv", summary.data);
  write_text_file(dir / "front_bands.csv", bands.data);
  return kExitOk;
}

int run_make_synthetic(const ExperimentSpec& spec) {
  Catalog cat;
  try {
    cat = make_synthetic(spec.synthetic);
  } catch (const std::invalid_argument& e) {
    throw SpecError(e.what());
  }
  fs::path out = spec.catalog_out.empty()
                     ? fs::path(spec.out_dir) / "catalog.json"
                     : fs::path(spec.catalog_out);
  if (out.has_parent_path()) {
    fs::create_directories(out.parent_path());
  }
  cat.save_file(out.string());
  return kExitOk;
}

}  // namespace

BenchmarkOutcome run_benchmark_core(const Catalog& cat,
                                    const ExperimentSpec& spec,
                                    const ScenarioBank& oos_bank) {
  const int nI = static_cast<int>(cat.first_count());
  const int nJ = static_cast<int>(cat.second_count());
  const auto& cons = cat.constraints;

  // Deterministic per-project expected values and mean contributions.
  std::vector<double> det_value(static_cast<std::size_t>(nI + nJ));
  std::vector<std::array<double, kIndicatorCount>> mean_contrib(
      static_cast<std::size_t>(nI + nJ));
  auto fill = [&](const Project& p, std::size_t slot) {
    MeanReserves mr = project_mean_reserves(p);
    double v_bar = success_npv(p.economics, mr.oil, mr.gas);
    double prior = p.resolved_prior();
    det_value[slot] =
        prior * v_bar - (1.0 - prior) * p.economics.failure_loss;
    for (int m = 0; m < kIndicatorCount; ++m) {
      auto mi = static_cast<std::size_t>(m);
      mean_contrib[slot][mi] =
          prior * indicator_contribution(p.classification.oil[mi],
                                         p.classification.gas[mi], mr.oil,
                                         mr.gas);
    }
  };
  for (int i = 0; i < nI; ++i) {
    fill(cat.first_project(static_cast<std::size_t>(i)),
         static_cast<std::size_t>(i));
  }
  for (int j = 0; j < nJ; ++j) {
    fill(cat.second_project(static_cast<std::size_t>(j)),
         static_cast<std::size_t>(nI + j));
  }

  std::vector<std::uint8_t> mandatory(static_cast<std::size_t>(nI + nJ), 0);
  for (int i = 0; i < nI; ++i) {
    if (cat.first_project(static_cast<std::size_t>(i)).mandatory) {
      mandatory[static_cast<std::size_t>(i)] = 1;
    }
  }

  auto scale_or_one = [](double v) { return v > 0.0 ? v : 1.0; };
  EvalFn eval = [&](const std::vector<std::uint8_t>& bits, Individual& out) {
    double value = 0.0, c1 = 0.0, ctot = 0.0, ctrap = 0.0, capp = 0.0;
    int w1 = 0, wtot = 0;
    std::array<double, kIndicatorCount> reserve{};
    for (int q = 0; q < nI + nJ; ++q) {
      auto qi = static_cast<std::size_t>(q);
      if (!bits[qi]) continue;
      const Project& p =
          q < nI ? cat.first_project(static_cast<std::size_t>(q))
                 : cat.second_project(static_cast<std::size_t>(q - nI));
      value += det_value[qi];
      ctot += p.economics.capex;
      wtot += p.economics.well_count;
      if (q < nI) {
        c1 += p.economics.capex;
        w1 += p.economics.well_count;
      }
      if (p.category == Category::Trap) ctrap += p.economics.capex;
      if (p.category == Category::Appraisal) capp += p.economics.capex;
      for (int m = 0; m < kIndicatorCount; ++m) {
        reserve[static_cast<std::size_t>(m)] +=
            mean_contrib[qi][static_cast<std::size_t>(m)];
      }
    }
    double viol = 0.0;
    viol += std::max(c1 - cons.first_stage_budget, 0.0) /
            scale_or_one(cons.first_stage_budget);
    viol += std::max<double>(w1 - cons.first_stage_wells, 0.0) /
            scale_or_one(static_cast<double>(cons.first_stage_wells));
    viol += std::max(ctot - cons.annual_budget, 0.0) /
            scale_or_one(cons.annual_budget);
    viol += std::abs(wtot - cons.annual_wells) /
            scale_or_one(static_cast<double>(cons.annual_wells));
    viol += std::max(ctrap - cons.trap_budget, 0.0) /
            scale_or_one(cons.trap_budget);
    viol += std::max(capp - cons.appraisal_budget, 0.0) /
            scale_or_one(cons.appraisal_budget);
    for (const auto& t : cons.reserve_targets) {
      auto mi = static_cast<std::size_t>(t.indicator);
      viol += std::max(t.target - reserve[mi], 0.0) / t.target;
    }
    out.obj = {-value, 0.0};
    out.viol = viol;
  };

  // Single-objective run over both stages; deterministic evaluations are
  // cheap, so the benchmark gets a larger budget than the stochastic search.
  SearchConfig config = spec.search;
  config.population = std::max(config.population, 40);
  config.generations = std::max(config.generations, 160);
  SearchResult result = nsga2_run(nI + nJ, mandatory, eval, config);

  BenchmarkOutcome outcome;
  if (result.archive.empty()) {
    outcome.feasible = false;
    return outcome;
  }
  const auto& best = result.archive.front();
  outcome.feasible = true;
  outcome.deterministic_value = -best.obj[0];
  outcome.first_stage.assign(best.genome.begin(),
                             best.genome.begin() + nI);
  outcome.second_stage.assign(best.genome.begin() + nI, best.genome.end());
  EvaluationOptions opts;
  opts.recourse_mode = RecourseMode::FixedPlan;
  opts.fixed_plan = outcome.second_stage;
  opts.keep_scenario_details = true;
  opts.keep_losses = true;
  outcome.stochastic = evaluate(cat, oos_bank, outcome.first_stage, opts);
  return outcome;
}

namespace {

int run_benchmark(const Catalog& cat, const ExperimentSpec& spec) {
  ArchiveBundle bundle = obtain_archive(cat, spec);
  BenchmarkOutcome bench = run_benchmark_core(cat, spec, bundle.oos_bank);

  CsvTable t({"portfolio_type", "enpv", "cvar_loss", "success_reliability",
              "joint_reserve_reliability", "viol", "feasibility"});
  std::vector<double> enpv, cvar_v, sr, joint, viol;
  for (const auto& r : bundle.oos_reports) {
    enpv.push_back(r.enpv);
    cvar_v.push_back(r.cvar);
    sr.push_back(r.success_reliability);
    joint.push_back(r.joint_reserve_reliability);
    viol.push_back(r.viol);
  }
  auto add_row = [&](const char* label, double e, double c, double s,
                     double j, double v) {
    t.row({label, format_number(e), format_number(c), format_number(s),
           format_number(j), format_number(v),
           v > 0.0 ? "infeasible" : "feasible"});
  };
  MetricStats se = stats_of(enpv), sc = stats_of(cvar_v), ss = stats_of(sr),
              sj = stats_of(joint);
  add_row("stochastic_min", se.min, sc.min, ss.min, sj.min,
          stats_of(viol).max);
  add_row("stochastic_mean", se.mean, sc.mean, ss.mean, sj.mean,
          mean_of(viol));
  add_row("stochastic_max", se.max, sc.max, ss.max, sj.max,
          stats_of(viol).max);

  json detail;
  if (bench.feasible) {
    const auto& r = bench.stochastic;
    add_row("deterministic_benchmark", r.enpv, r.cvar,
            r.success_reliability, r.joint_reserve_reliability, r.viol);
    detail["feasible"] = true;
    detail["deterministic_value"] = bench.deterministic_value;
    detail["first_stage_genome"] = genome_to_string(bench.first_stage);
    detail["second_stage_genome"] = genome_to_string(bench.second_stage);
    detail["stochastic"] = report_json(r);
  } else {
    t.row({"deterministic_benchmark", "", "", "", "", "",
           "infeasible_deterministic"});
    detail["feasible"] = false;
  }
  fs::path dir(spec.out_dir);
  write_text_file(dir / "benchmark.csv", t.data);
  write_text_file(dir / "benchmark.json", detail.dump(2) + "\n");
  return kExitOk;
}

}  // namespace

int run_experiment(const ExperimentSpec& spec) {
  fs::create_directories(spec.out_dir);
  write_spec_echo(spec);
  if (spec.mode == ExperimentMode::MakeSynthetic) {
    return run_make_synthetic(spec);
  }
  Catalog cat = load_spec_catalog(spec);
  switch (spec.mode) {
    case ExperimentMode::Optimize:
      return run_optimize(cat, spec);
    case ExperimentMode::Evaluate:
      return run_evaluate(cat, spec);
    case ExperimentMode::BenchmarkDet:
      return run_benchmark(cat, spec);
    case ExperimentMode::AblateRecourse:
      return run_ablate(cat, spec);
    case ExperimentMode::SensitivityBeta:
      return run_sensitivity_beta(cat, spec);
    case ExperimentMode::SensitivityTheta:
      return run_sensitivity_theta(cat, spec);
    case ExperimentMode::SaaStability:
      return run_saa_stability(cat, spec);
    case ExperimentMode::RepeatRuns:
      return run_repeat(cat, spec);
    case ExperimentMode::MakeSynthetic:
      break;
  }
  throw SpecError("unhandled experiment mode");
}

}  // namespace exsel
