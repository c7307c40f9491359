#include "exsel/catalog.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace exsel {

using nlohmann::json;

const char* indicator_name(ReserveIndicator m) noexcept {
  switch (m) {
    case ReserveIndicator::PredictedOil: return "po";
    case ReserveIndicator::PredictedGas: return "pg";
    case ReserveIndicator::ControlledOil: return "co";
    case ReserveIndicator::ControlledGas: return "cg";
    case ReserveIndicator::ProvedOil: return "ro";
    case ReserveIndicator::ProvedGas: return "rg";
  }
  return "?";
}

std::optional<ReserveIndicator> indicator_from_name(const std::string& s) {
  for (int m = 0; m < kIndicatorCount; ++m) {
    auto ind = static_cast<ReserveIndicator>(m);
    if (s == indicator_name(ind)) return ind;
  }
  return std::nullopt;
}

const char* stage_name(Stage s) noexcept {
  return s == Stage::First ? "first" : "second";
}

const char* category_name(Category c) noexcept {
  switch (c) {
    case Category::Trap: return "trap";
    case Category::Appraisal: return "appraisal";
    case Category::Mature: return "mature";
  }
  return "?";
}

double prior_pos(const RiskingFactors& f) {
  for (double v : {f.source, f.reservoir, f.trap, f.preservation,
                   f.migration}) {
    if (!(v > 0.0 && v <= 1.0)) {
      throw std::domain_error(
          "prior_pos: every risking factor must lie in (0, 1]");
    }
  }
  return f.product();
}

void require_valid(const Catalog& catalog) {
  auto violations = catalog.validate();
  if (!violations.empty()) {
    std::ostringstream oss;
    oss << "catalog has " << violations.size() << " validation violation(s); first: ["
        << violations.front().project << "." << violations.front().field
        << "] " << violations.front().message;
    throw std::invalid_argument(oss.str());
  }
}

void Catalog::finalize() {
  index_by_id_.clear();
  first_stage.clear();
  second_stage.clear();
  wiring.clear();
  for (std::size_t p = 0; p < projects.size(); ++p) {
    index_by_id_.emplace(projects[p].id, static_cast<int>(p));
    if (projects[p].stage == Stage::First) {
      first_stage.push_back(static_cast<int>(p));
    } else {
      second_stage.push_back(static_cast<int>(p));
    }
  }
  // Dense positions within each stage.
  std::unordered_map<int, int> first_pos, second_pos;
  for (std::size_t i = 0; i < first_stage.size(); ++i) {
    first_pos[first_stage[i]] = static_cast<int>(i);
  }
  for (std::size_t j = 0; j < second_stage.size(); ++j) {
    second_pos[second_stage[j]] = static_cast<int>(j);
  }

  wiring.resize(second_stage.size());
  auto first_index = [&](const std::string& id) -> int {
    auto it = index_by_id_.find(id);
    if (it == index_by_id_.end()) return -1;
    auto fp = first_pos.find(it->second);
    return fp == first_pos.end() ? -1 : fp->second;
  };
  auto second_index = [&](const std::string& id) -> int {
    auto it = index_by_id_.find(id);
    if (it == index_by_id_.end()) return -1;
    auto sp = second_pos.find(it->second);
    return sp == second_pos.end() ? -1 : sp->second;
  };
  for (const auto& t : triggers) {
    int j = second_index(t.project);
    if (j < 0) continue;  // reported by validate()
    auto& w = wiring[static_cast<std::size_t>(j)];
    for (const auto& id : t.success_triggers) {
      int i = first_index(id);
      if (i >= 0) w.success_triggers.push_back(i);
    }
    for (const auto& id : t.failure_triggers) {
      int i = first_index(id);
      if (i >= 0) w.failure_triggers.push_back(i);
    }
    for (const auto& id : t.unconditional_triggers) {
      int i = first_index(id);
      if (i >= 0) w.unconditional_triggers.push_back(i);
    }
  }
  for (const auto& l : links) {
    int j = second_index(l.to);
    int i = first_index(l.from);
    if (j < 0 || i < 0) continue;
    wiring[static_cast<std::size_t>(j)].links.emplace_back(i, l.strength);
  }
}

int Catalog::project_index(const std::string& id) const {
  auto it = index_by_id_.find(id);
  if (it == index_by_id_.end()) {
    throw std::out_of_range("unknown project id: " + id);
  }
  return it->second;
}

namespace {

void check_triple(std::vector<Violation>& out, const std::string& id,
                  const std::string& field, const QuantileTriple& t,
                  bool bounded) {
  if (!(t.q10 > 0.0)) {
    out.push_back({id, field, "q10 must be positive"});
  }
  if (!(t.q10 <= t.q50 && t.q50 <= t.q90)) {
    out.push_back({id, field, "quantiles must satisfy q10 <= q50 <= q90"});
  }
  if (bounded && t.q90 > 1.0) {
    out.push_back({id, field, "bounded parameter requires q90 <= 1"});
  }
}

void check_volumetrics(std::vector<Violation>& out, const std::string& id,
                       const std::string& prefix,
                       const VolumetricParams& v) {
  check_triple(out, id, prefix + ".area", v.area, false);
  check_triple(out, id, prefix + ".thickness", v.thickness, false);
  check_triple(out, id, prefix + ".porosity", v.porosity, true);
  check_triple(out, id, prefix + ".water_saturation", v.water_saturation,
               true);
  check_triple(out, id, prefix + ".volume_factor", v.volume_factor, false);
  if (!(v.conversion > 0.0)) {
    out.push_back({id, prefix + ".conversion", "must be positive"});
  }
}

bool in_open_unit(double p) { return p > 0.0 && p < 1.0; }

}  // namespace

std::vector<Violation> Catalog::validate() const {
  std::vector<Violation> out;

  for (const auto& p : projects) {
    if (!p.prior_pos && !p.risking) {
      out.push_back({p.id, "prior_pos",
                     "either prior_pos or risking_factors must be given"});
    }
    if (p.prior_pos && !in_open_unit(*p.prior_pos)) {
      out.push_back({p.id, "prior_pos", "must lie in (0, 1)"});
    }
    if (p.risking) {
      const auto& f = *p.risking;
      int idx = 0;
      for (double v : {f.source, f.reservoir, f.trap, f.preservation,
                       f.migration}) {
        static const char* names[] = {"P_src", "P_res", "P_trap", "P_pre",
                                      "P_mig"};
        if (!(v > 0.0 && v <= 1.0)) {
          out.push_back({p.id, std::string("risking_factors.") + names[idx],
                         "must lie in (0, 1]"});
        }
        ++idx;
      }
      if (p.prior_pos &&
          std::fabs(f.product() - *p.prior_pos) > 1e-9) {
        out.push_back({p.id, "prior_pos",
                       "stated prior does not equal the product of the five "
                       "risking factors"});
      }
    }
    if (p.mandatory && p.stage != Stage::First) {
      out.push_back({p.id, "mandatory",
                     "only first-stage projects can be mandatory"});
    }
    check_volumetrics(out, p.id, "oil", p.oil);
    check_volumetrics(out, p.id, "gas", p.gas);

    const auto& e = p.economics;
    if (!(e.price_oil >= e.unit_cost_oil && e.unit_cost_oil >= 0.0)) {
      out.push_back({p.id, "economics.price_oil",
                     "requires price_oil >= unit_cost_oil >= 0"});
    }
    if (!(e.price_gas >= e.unit_cost_gas && e.unit_cost_gas >= 0.0)) {
      out.push_back({p.id, "economics.price_gas",
                     "requires price_gas >= unit_cost_gas >= 0"});
    }
    if (!(e.tax_rate >= 0.0 && e.tax_rate < 1.0)) {
      out.push_back({p.id, "economics.tax_rate", "must lie in [0, 1)"});
    }
    if (!(e.discount > 0.0 && e.discount <= 1.0)) {
      out.push_back({p.id, "economics.discount", "must lie in (0, 1]"});
    }
    if (!(e.capex >= 0.0)) {
      out.push_back({p.id, "economics.capex", "must be nonnegative"});
    }
    if (!(e.failure_loss >= 0.0)) {
      out.push_back({p.id, "economics.failure_loss", "must be nonnegative"});
    }
    if (!(e.econ_coeff_oil >= 0.0 && e.econ_coeff_oil <= 1.0)) {
      out.push_back({p.id, "economics.econ_coeff_oil", "must lie in [0, 1]"});
    }
    if (!(e.econ_coeff_gas >= 0.0 && e.econ_coeff_gas <= 1.0)) {
      out.push_back({p.id, "economics.econ_coeff_gas", "must lie in [0, 1]"});
    }
    if (e.well_count < 1) {
      out.push_back({p.id, "economics.well_count", "must be at least 1"});
    }
    for (int m = 0; m < kIndicatorCount; ++m) {
      if (p.classification.oil[static_cast<std::size_t>(m)] < 0.0 ||
          p.classification.gas[static_cast<std::size_t>(m)] < 0.0) {
        out.push_back({p.id,
                       std::string("classification.") +
                           indicator_name(static_cast<ReserveIndicator>(m)),
                       "coefficients must be nonnegative"});
      }
    }
  }

  {
    std::unordered_map<std::string, int> seen;
    for (const auto& p : projects) {
      if (++seen[p.id] == 2) {
        out.push_back({p.id, "id", "duplicate project id"});
      }
    }
  }

  auto is_stage = [&](const std::string& id, Stage s) {
    auto it = index_by_id_.find(id);
    return it != index_by_id_.end() &&
           projects[static_cast<std::size_t>(it->second)].stage == s;
  };
  for (const auto& l : links) {
    if (!is_stage(l.from, Stage::First)) {
      out.push_back({l.from, "links.from",
                     "must reference a first-stage project"});
    }
    if (!is_stage(l.to, Stage::Second)) {
      out.push_back({l.to, "links.to",
                     "must reference a second-stage project"});
    }
  }
  for (const auto& t : triggers) {
    if (!is_stage(t.project, Stage::Second)) {
      out.push_back({t.project, "triggers.project",
                     "must reference a second-stage project"});
    }
    auto check_refs = [&](const std::vector<std::string>& ids,
                          const char* field) {
      for (const auto& id : ids) {
        if (!is_stage(id, Stage::First)) {
          out.push_back({t.project, std::string("triggers.") + field,
                         "trigger id '" + id +
                             "' must reference a first-stage project"});
        }
      }
    };
    check_refs(t.success_triggers, "success");
    check_refs(t.failure_triggers, "failure");
    check_refs(t.unconditional_triggers, "unconditional");
  }

  const auto& c = constraints;
  if (!(c.first_stage_budget > 0.0 &&
        c.first_stage_budget <= c.annual_budget)) {
    out.push_back({"", "constraints.B1", "requires 0 < B1 <= B"});
  }
  if (!(c.first_stage_wells > 0 && c.first_stage_wells <= c.annual_wells)) {
    out.push_back({"", "constraints.N1", "requires 0 < N1 <= N"});
  }
  if (c.trap_budget < 0.0) {
    out.push_back({"", "constraints.B_trap", "must be nonnegative"});
  }
  if (c.appraisal_budget < 0.0) {
    out.push_back({"", "constraints.B_app", "must be nonnegative"});
  }
  for (const auto& t : c.reserve_targets) {
    if (!(t.target > 0.0)) {
      out.push_back({"", std::string("constraints.H_") +
                             indicator_name(t.indicator),
                     "reserve target must be positive"});
    }
    if (!in_open_unit(t.probability)) {
      out.push_back({"", std::string("constraints.alpha_") +
                             indicator_name(t.indicator),
                     "must lie in (0, 1)"});
    }
  }
  {
    std::array<int, kIndicatorCount> seen{};
    for (const auto& t : c.reserve_targets) {
      if (++seen[static_cast<std::size_t>(t.indicator)] == 2) {
        out.push_back({"", std::string("constraints.H_") +
                               indicator_name(t.indicator),
                       "duplicate reserve target"});
      }
    }
  }
  if (!in_open_unit(c.joint_probability)) {
    out.push_back({"", "constraints.alpha_joint", "must lie in (0, 1)"});
  }
  if (!in_open_unit(c.min_success_rate)) {
    out.push_back({"", "constraints.rho_min", "must lie in (0, 1)"});
  }
  if (!in_open_unit(c.success_rate_probability)) {
    out.push_back({"", "constraints.alpha_sr", "must lie in (0, 1)"});
  }
  if (!in_open_unit(c.cvar_confidence)) {
    out.push_back({"", "constraints.beta", "must lie in (0, 1)"});
  }
  if (!(c.posterior_lo > 0.0 && c.posterior_lo < c.posterior_hi &&
        c.posterior_hi < 1.0)) {
    out.push_back({"", "constraints.posterior_bounds",
                   "requires 0 < lower < upper < 1"});
  }
  if (!(c.shortfall_weight >= 0.0)) {
    out.push_back({"", "constraints.gamma", "must be nonnegative"});
  }
  return out;
}

namespace {

json triple_to_json(const QuantileTriple& t) {
  return json{{"q10", t.q10}, {"q50", t.q50}, {"q90", t.q90}};
}

QuantileTriple triple_from_json(const json& j) {
  QuantileTriple t;
  t.q10 = j.at("q10").get<double>();
  t.q50 = j.at("q50").get<double>();
  t.q90 = j.at("q90").get<double>();
  return t;
}

json volumetrics_to_json(const VolumetricParams& v) {
  return json{{"area", triple_to_json(v.area)},
              {"thickness", triple_to_json(v.thickness)},
              {"porosity", triple_to_json(v.porosity)},
              {"water_saturation", triple_to_json(v.water_saturation)},
              {"volume_factor", triple_to_json(v.volume_factor)},
              {"conversion", v.conversion}};
}

VolumetricParams volumetrics_from_json(const json& j) {
  VolumetricParams v;
  v.area = triple_from_json(j.at("area"));
  v.thickness = triple_from_json(j.at("thickness"));
  v.porosity = triple_from_json(j.at("porosity"));
  v.water_saturation = triple_from_json(j.at("water_saturation"));
  v.volume_factor = triple_from_json(j.at("volume_factor"));
  v.conversion = j.at("conversion").get<double>();
  return v;
}

json economics_to_json(const EconomicParams& e) {
  return json{{"price_oil", e.price_oil},
              {"price_gas", e.price_gas},
              {"unit_cost_oil", e.unit_cost_oil},
              {"unit_cost_gas", e.unit_cost_gas},
              {"econ_coeff_oil", e.econ_coeff_oil},
              {"econ_coeff_gas", e.econ_coeff_gas},
              {"fixed_cost", e.fixed_cost},
              {"tax_rate", e.tax_rate},
              {"discount", e.discount},
              {"capex", e.capex},
              {"failure_loss", e.failure_loss},
              {"well_count", e.well_count}};
}

EconomicParams economics_from_json(const json& j) {
  EconomicParams e;
  e.price_oil = j.at("price_oil").get<double>();
  e.price_gas = j.at("price_gas").get<double>();
  e.unit_cost_oil = j.at("unit_cost_oil").get<double>();
  e.unit_cost_gas = j.at("unit_cost_gas").get<double>();
  e.econ_coeff_oil = j.at("econ_coeff_oil").get<double>();
  e.econ_coeff_gas = j.at("econ_coeff_gas").get<double>();
  e.fixed_cost = j.at("fixed_cost").get<double>();
  e.tax_rate = j.at("tax_rate").get<double>();
  e.discount = j.at("discount").get<double>();
  e.capex = j.at("capex").get<double>();
  e.failure_loss = j.at("failure_loss").get<double>();
  e.well_count = j.at("well_count").get<int>();
  return e;
}

Stage stage_from_string(const std::string& s) {
  if (s == "first") return Stage::First;
  if (s == "second") return Stage::Second;
  throw ParseError("unknown stage: " + s);
}

Category category_from_string(const std::string& s) {
  if (s == "trap") return Category::Trap;
  if (s == "appraisal") return Category::Appraisal;
  if (s == "mature") return Category::Mature;
  throw ParseError("unknown category: " + s);
}

}  // namespace

std::string Catalog::to_json_string(int indent) const {
  json root;
  json jprojects = json::array();
  for (const auto& p : projects) {
    json jp;
    jp["id"] = p.id;
    jp["stage"] = stage_name(p.stage);
    jp["category"] = category_name(p.category);
    if (p.stage == Stage::First) jp["mandatory"] = p.mandatory;
    if (p.prior_pos) jp["prior_pos"] = *p.prior_pos;
    if (p.risking) {
      jp["risking_factors"] = json{{"P_src", p.risking->source},
                                   {"P_res", p.risking->reservoir},
                                   {"P_trap", p.risking->trap},
                                   {"P_pre", p.risking->preservation},
                                   {"P_mig", p.risking->migration}};
    }
    jp["oil"] = volumetrics_to_json(p.oil);
    jp["gas"] = volumetrics_to_json(p.gas);
    jp["economics"] = economics_to_json(p.economics);
    json jc;
    for (int m = 0; m < kIndicatorCount; ++m) {
      auto mi = static_cast<std::size_t>(m);
      if (p.classification.oil[mi] != 0.0 ||
          p.classification.gas[mi] != 0.0) {
        jc[indicator_name(static_cast<ReserveIndicator>(m))] =
            json{{"oil", p.classification.oil[mi]},
                 {"gas", p.classification.gas[mi]}};
      }
    }
    jp["classification"] = jc;
    jprojects.push_back(jp);
  }
  root["projects"] = jprojects;

  json jlinks = json::array();
  for (const auto& l : links) {
    jlinks.push_back(json{
        {"from", l.from}, {"to", l.to}, {"strength", l.strength}});
  }
  root["links"] = jlinks;

  json jtriggers = json::array();
  for (const auto& t : triggers) {
    jtriggers.push_back(json{{"project", t.project},
                             {"success", t.success_triggers},
                             {"failure", t.failure_triggers},
                             {"unconditional", t.unconditional_triggers}});
  }
  root["triggers"] = jtriggers;

  const auto& c = constraints;
  json jtargets = json::array();
  for (const auto& t : c.reserve_targets) {
    jtargets.push_back(json{{"indicator", indicator_name(t.indicator)},
                            {"target", t.target},
                            {"probability", t.probability}});
  }
  root["constraints"] =
      json{{"B1", c.first_stage_budget},
           {"B", c.annual_budget},
           {"N1", c.first_stage_wells},
           {"N", c.annual_wells},
           {"B_trap", c.trap_budget},
           {"B_app", c.appraisal_budget},
           {"reserve_targets", jtargets},
           {"alpha_joint", c.joint_probability},
           {"rho_min", c.min_success_rate},
           {"alpha_sr", c.success_rate_probability},
           {"beta", c.cvar_confidence},
           {"posterior_bounds", json::array({c.posterior_lo, c.posterior_hi})},
           {"gamma", c.shortfall_weight}};
  return root.dump(indent);
}

Catalog Catalog::from_json_string(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("catalog is not valid JSON: ") + e.what());
  }
  Catalog cat;
  try {
    for (const auto& jp : root.at("projects")) {
      Project p;
      p.id = jp.at("id").get<std::string>();
      p.stage = stage_from_string(jp.at("stage").get<std::string>());
      p.category = category_from_string(jp.at("category").get<std::string>());
      p.mandatory = jp.value("mandatory", false);
      if (jp.contains("prior_pos")) {
        p.prior_pos = jp.at("prior_pos").get<double>();
      }
      if (jp.contains("risking_factors")) {
        const auto& jr = jp.at("risking_factors");
        RiskingFactors f;
        f.source = jr.at("P_src").get<double>();
        f.reservoir = jr.at("P_res").get<double>();
        f.trap = jr.at("P_trap").get<double>();
        f.preservation = jr.at("P_pre").get<double>();
        f.migration = jr.at("P_mig").get<double>();
        p.risking = f;
      }
      p.oil = volumetrics_from_json(jp.at("oil"));
      p.gas = volumetrics_from_json(jp.at("gas"));
      p.economics = economics_from_json(jp.at("economics"));
      if (jp.contains("classification")) {
        for (const auto& [key, val] : jp.at("classification").items()) {
          auto ind = indicator_from_name(key);
          if (!ind) throw ParseError("unknown reserve indicator: " + key);
          auto mi = static_cast<std::size_t>(*ind);
          p.classification.oil[mi] = val.at("oil").get<double>();
          p.classification.gas[mi] = val.at("gas").get<double>();
        }
      }
      cat.projects.push_back(std::move(p));
    }
    if (root.contains("links")) {
      for (const auto& jl : root.at("links")) {
        InfoLink l;
        l.from = jl.at("from").get<std::string>();
        l.to = jl.at("to").get<std::string>();
        l.strength = jl.at("strength").get<double>();
        cat.links.push_back(std::move(l));
      }
    }
    if (root.contains("triggers")) {
      for (const auto& jt : root.at("triggers")) {
        TriggerSets t;
        t.project = jt.at("project").get<std::string>();
        t.success_triggers =
            jt.value("success", std::vector<std::string>{});
        t.failure_triggers =
            jt.value("failure", std::vector<std::string>{});
        t.unconditional_triggers =
            jt.value("unconditional", std::vector<std::string>{});
        cat.triggers.push_back(std::move(t));
      }
    }
    const auto& jc = root.at("constraints");
    auto& c = cat.constraints;
    c.first_stage_budget = jc.at("B1").get<double>();
    c.annual_budget = jc.at("B").get<double>();
    c.first_stage_wells = jc.at("N1").get<int>();
    c.annual_wells = jc.at("N").get<int>();
    c.trap_budget = jc.at("B_trap").get<double>();
    c.appraisal_budget = jc.at("B_app").get<double>();
    if (jc.contains("reserve_targets")) {
      for (const auto& jt : jc.at("reserve_targets")) {
        ReserveTarget t;
        auto name = jt.at("indicator").get<std::string>();
        auto ind = indicator_from_name(name);
        if (!ind) throw ParseError("unknown reserve indicator: " + name);
        t.indicator = *ind;
        t.target = jt.at("target").get<double>();
        t.probability = jt.at("probability").get<double>();
        c.reserve_targets.push_back(t);
      }
    }
    c.joint_probability = jc.at("alpha_joint").get<double>();
    c.min_success_rate = jc.at("rho_min").get<double>();
    c.success_rate_probability = jc.at("alpha_sr").get<double>();
    c.cvar_confidence = jc.at("beta").get<double>();
    if (jc.contains("posterior_bounds")) {
      const auto& jb = jc.at("posterior_bounds");
      c.posterior_lo = jb.at(0).get<double>();
      c.posterior_hi = jb.at(1).get<double>();
    }
    c.shortfall_weight = jc.value("gamma", 0.0);
  } catch (const json::exception& e) {
    throw ParseError(std::string("catalog document malformed: ") + e.what());
  }
  cat.finalize();
  return cat;
}

Catalog Catalog::load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open catalog file: " + path);
  }
  std::ostringstream oss;
  oss << in.rdbuf();
  return from_json_string(oss.str());
}

void Catalog::save_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write catalog file: " + path);
  }
  out << to_json_string() << '\n';
}

std::uint64_t Catalog::hash() const {
  std::string s = to_json_string(-1);
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a 64
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace exsel
