#include "exsel/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "exsel/posterior.hpp"

namespace exsel {

using nlohmann::json;

double cvar(const std::vector<double>& losses, double beta) {
  if (losses.empty()) {
    throw std::invalid_argument("cvar: loss list must be nonempty");
  }
  if (!(beta > 0.0 && beta < 1.0)) {
    throw std::invalid_argument("cvar: beta must lie in (0, 1)");
  }
  std::vector<double> sorted = losses;
  std::sort(sorted.begin(), sorted.end());
  const auto n = sorted.size();
  auto k = static_cast<std::size_t>(
      std::ceil(beta * static_cast<double>(n)));
  k = std::min(std::max<std::size_t>(k, 1), n);
  double alpha = sorted[k - 1];
  double tail = 0.0;
  for (std::size_t i = k; i < n; ++i) {
    tail += sorted[i] - alpha;
  }
  return alpha + tail / ((1.0 - beta) * static_cast<double>(n));
}

double empirical_probability(std::size_t true_count, std::size_t total) {
  if (total == 0) {
    throw std::invalid_argument("empirical_probability: empty sample");
  }
  return static_cast<double>(true_count) / static_cast<double>(total);
}

double drilling_success_rate(double successful_wells,
                             double committed_wells) {
  if (!(committed_wells > 0.0)) {
    throw std::domain_error(
        "drilling_success_rate: no wells committed in this scenario");
  }
  return successful_wells / committed_wells;
}

namespace {

double positive_part(double x) { return x > 0.0 ? x : 0.0; }

double scale_or_one(double limit) { return limit > 0.0 ? limit : 1.0; }

struct SelectedRecourse {
  int j = 0;        // dense second-stage index
  double pos = 0.0;  // probability used for realization
  int wells = 1;
};

}  // namespace

EvaluationReport evaluate(const Catalog& catalog, const ScenarioBank& bank,
                          const PortfolioGenome& genome,
                          const EvaluationOptions& options) {
  const int nI = static_cast<int>(catalog.first_count());
  const int nJ = static_cast<int>(catalog.second_count());
  if (static_cast<int>(genome.size()) != nI) {
    throw std::invalid_argument("evaluate: genome length mismatch");
  }
  if (bank.first_count != nI || bank.second_count != nJ ||
      bank.catalog_hash != catalog.hash()) {
    throw std::invalid_argument("evaluate: bank does not match catalog");
  }
  for (int i = 0; i < nI; ++i) {
    if (catalog.first_project(static_cast<std::size_t>(i)).mandatory &&
        !genome[static_cast<std::size_t>(i)]) {
      throw std::invalid_argument(
          "evaluate: genome must be repaired (mandatory project unselected)");
    }
  }
  if (options.recourse_mode == RecourseMode::FixedPlan &&
      static_cast<int>(options.fixed_plan.size()) != nJ) {
    throw std::invalid_argument("evaluate: fixed plan length mismatch");
  }

  const auto& cons = catalog.constraints;
  const int S = bank.scenario_count;
  const int K = bank.subscenario_count;
  const std::size_t n_omega = static_cast<std::size_t>(S) * K;

  // First-stage commitments are scenario-independent.
  std::vector<int> sel_first;
  double c1 = 0.0, c1_trap = 0.0, c1_app = 0.0;
  int w1 = 0;
  for (int i = 0; i < nI; ++i) {
    if (!genome[static_cast<std::size_t>(i)]) continue;
    sel_first.push_back(i);
    const auto& p = catalog.first_project(static_cast<std::size_t>(i));
    c1 += p.economics.capex;
    w1 += p.economics.well_count;
    if (p.category == Category::Trap) c1_trap += p.economics.capex;
    if (p.category == Category::Appraisal) c1_app += p.economics.capex;
  }

  EvaluationReport rep;
  rep.first_stage_spend = c1;
  rep.first_stage_trap_spend = c1_trap;
  rep.first_stage_appraisal_spend = c1_app;
  rep.first_stage_wells = w1;
  rep.first_stage_budget_slack = cons.first_stage_budget - c1;

  const double b_bar = std::max(cons.annual_budget - c1, 0.0);
  const double b_bar_trap = std::max(cons.trap_budget - c1_trap, 0.0);
  const double b_bar_app = std::max(cons.appraisal_budget - c1_app, 0.0);
  const int n_bar = std::max(cons.annual_wells - w1, 0);

  std::vector<double> losses(n_omega, 0.0);
  double z_sum = 0.0;
  double z_min = std::numeric_limits<double>::infinity();
  std::size_t loss_count = 0;
  std::size_t sr_ok = 0, joint_ok = 0;
  std::vector<std::size_t> m_ok(cons.reserve_targets.size(), 0);

  double annual_budget_gap_sum = 0.0;
  double trap_budget_gap_sum = 0.0;
  double app_budget_gap_sum = 0.0;
  double wells_gap_sum = 0.0;
  double annual_slack_min = cons.annual_budget - c1;
  double trap_slack_min = cons.trap_budget - c1_trap;
  double app_slack_min = cons.appraisal_budget - c1_app;

  double pos_sum = 0.0, pos_weighted_sum = 0.0, pos_weight = 0.0;
  std::size_t pos_count = 0;
  double second_wells_sum = 0.0, recourse_spend_sum = 0.0;

  if (options.keep_scenario_details) {
    rep.scenarios.reserve(static_cast<std::size_t>(S));
  }

  std::vector<double> r1(kIndicatorCount);
  RecourseInstance inst;
  std::vector<SelectedRecourse> committed;

  for (int s = 0; s < S; ++s) {
    const std::uint8_t* xi_row = &bank.success_first[static_cast<std::size_t>(s)];
    const std::size_t xi_stride = static_cast<std::size_t>(S);

    double fs_value = 0.0;
    int sw1 = 0;
    std::fill(r1.begin(), r1.end(), 0.0);
    for (int i : sel_first) {
      std::size_t at = bank.first_at(i, s);
      const auto& p = catalog.first_project(static_cast<std::size_t>(i));
      bool success = bank.success_first[at] != 0;
      fs_value += realized_payoff(bank.npv_first[at],
                                  p.economics.failure_loss, success);
      if (success) {
        sw1 += p.economics.well_count;
        for (int m = 0; m < kIndicatorCount; ++m) {
          r1[static_cast<std::size_t>(m)] += realized_reserve(
              bank.contrib_first[at * kIndicatorCount + m], true);
        }
      }
    }

    // Eligible recourse candidates with their scenario values.
    inst.items.clear();
    inst.budget_total = b_bar;
    inst.budget_trap = b_bar_trap;
    inst.budget_appraisal = b_bar_app;
    inst.wells_required = n_bar;
    for (int j = 0; j < nJ; ++j) {
      const auto& w = catalog.wiring[static_cast<std::size_t>(j)];
      if (!eligibility(genome, xi_row, xi_stride, w)) continue;
      const auto& p = catalog.second_project(static_cast<std::size_t>(j));
      double delta = options.posterior_mode == PosteriorMode::Posterior
                         ? evidence(genome, xi_row, xi_stride, w,
                                    options.theta_scale)
                         : 0.0;
      double pos = posterior(p.resolved_prior(), delta, cons.posterior_lo,
                             cons.posterior_hi);
      std::size_t js = bank.second_js(j, s);
      double nu = expected_value(pos, bank.npv_second_mean[js],
                                 p.economics.failure_loss);
      double v = shortfall_value(
          nu, cons.shortfall_weight, p.economics.capex, pos,
          &bank.contrib_second_mean[js * kIndicatorCount], r1.data(),
          cons.reserve_targets);
      inst.items.push_back({j, p.economics.capex, p.economics.well_count,
                            p.category, v, pos});
    }

    RecourseSolution sol;
    RecourseSolverOptions sopt;
    sopt.greedy_rank = options.greedy_rank;
    switch (options.recourse_mode) {
      case RecourseMode::Exact:
        sol = solve_exact(inst, sopt);
        break;
      case RecourseMode::Greedy:
        sol = solve_greedy(inst, sopt);
        break;
      case RecourseMode::None:
        sol.selected.assign(inst.items.size(), 0);
        sol.status = n_bar == 0 ? RecourseStatus::ExactFeasible
                                : RecourseStatus::Shortfall;
        sol.deficit = n_bar;
        break;
      case RecourseMode::FixedPlan: {
        sol.selected.assign(inst.items.size(), 0);
        for (std::size_t t = 0; t < inst.items.size(); ++t) {
          int j = inst.items[t].project;
          if (!options.fixed_plan[static_cast<std::size_t>(j)]) continue;
          sol.selected[t] = 1;
          sol.objective += inst.items[t].value;
          sol.wells += inst.items[t].wells;
          sol.spend_total += inst.items[t].cost;
          if (inst.items[t].category == Category::Trap) {
            sol.spend_trap += inst.items[t].cost;
          }
          if (inst.items[t].category == Category::Appraisal) {
            sol.spend_appraisal += inst.items[t].cost;
          }
        }
        sol.status = sol.wells == n_bar ? RecourseStatus::ExactFeasible
                                        : RecourseStatus::Shortfall;
        sol.deficit = n_bar - sol.wells;
        break;
      }
    }

    committed.clear();
    int selected_count = 0;
    for (std::size_t t = 0; t < inst.items.size(); ++t) {
      if (!sol.selected[t]) continue;
      ++selected_count;
      const auto& item = inst.items[t];
      committed.push_back({item.project, item.pos, item.wells});
      pos_sum += item.pos;
      ++pos_count;
      double wgt = positive_part(item.value);
      pos_weighted_sum += wgt * item.pos;
      pos_weight += wgt;
    }
    second_wells_sum += sol.wells;
    recourse_spend_sum += sol.spend_total;

    const double total_spend = c1 + sol.spend_total;
    const double trap_spend = c1_trap + sol.spend_trap;
    const double app_spend = c1_app + sol.spend_appraisal;
    const int total_wells = w1 + sol.wells;
    annual_budget_gap_sum += positive_part(total_spend - cons.annual_budget);
    trap_budget_gap_sum += positive_part(trap_spend - cons.trap_budget);
    app_budget_gap_sum += positive_part(app_spend - cons.appraisal_budget);
    wells_gap_sum += std::abs(total_wells - cons.annual_wells);
    annual_slack_min =
        std::min(annual_slack_min, cons.annual_budget - total_spend);
    trap_slack_min = std::min(trap_slack_min, cons.trap_budget - trap_spend);
    app_slack_min =
        std::min(app_slack_min, cons.appraisal_budget - app_spend);

    for (int k = 0; k < K; ++k) {
      double z = fs_value;
      int succ_wells = sw1;
      double r_extra[kIndicatorCount] = {};
      for (const auto& cr : committed) {
        std::size_t at = bank.second_at(cr.j, s, k);
        const auto& p =
            catalog.second_project(static_cast<std::size_t>(cr.j));
        bool success = realize_second_stage(cr.pos, bank.u_second[at]);
        z += realized_payoff(bank.npv_second[at], p.economics.failure_loss,
                             success);
        if (success) {
          succ_wells += cr.wells;
          for (int m = 0; m < kIndicatorCount; ++m) {
            r_extra[m] += realized_reserve(
                bank.contrib_second[at * kIndicatorCount + m], true);
          }
        }
      }
      std::size_t omega = static_cast<std::size_t>(s) * K + k;
      z_sum += z;
      z_min = std::min(z_min, z);
      if (z < 0.0) ++loss_count;
      losses[omega] = downside_loss(z);

      bool sr = total_wells > 0 &&
                drilling_success_rate(static_cast<double>(succ_wells),
                                      static_cast<double>(total_wells)) >=
                    cons.min_success_rate;
      if (sr) ++sr_ok;

      bool joint = true;
      for (std::size_t mi = 0; mi < cons.reserve_targets.size(); ++mi) {
        const auto& t = cons.reserve_targets[mi];
        auto m = static_cast<std::size_t>(t.indicator);
        bool ok = r1[m] + r_extra[m] >= t.target;
        if (ok) ++m_ok[mi];
        joint = joint && ok;
      }
      if (joint) ++joint_ok;
    }

    if (options.keep_scenario_details) {
      ScenarioRecourseSummary sum;
      sum.scenario = s;
      sum.eligible = static_cast<int>(inst.items.size());
      sum.selected = selected_count;
      sum.wells = sol.wells;
      sum.deficit = std::max(sol.deficit, 0);
      sum.spend = sol.spend_total;
      sum.spend_trap = sol.spend_trap;
      sum.spend_appraisal = sol.spend_appraisal;
      sum.objective = sol.objective;
      rep.scenarios.push_back(sum);
    }
  }

  rep.enpv = z_sum / static_cast<double>(n_omega);
  rep.cvar = cvar(losses, cons.cvar_confidence);
  rep.worst_z = z_min;
  rep.loss_probability = empirical_probability(loss_count, n_omega);
  rep.success_reliability = empirical_probability(sr_ok, n_omega);
  rep.joint_reserve_reliability = empirical_probability(joint_ok, n_omega);
  for (std::size_t mi = 0; mi < cons.reserve_targets.size(); ++mi) {
    rep.indicator_reliability.emplace_back(
        cons.reserve_targets[mi].indicator,
        empirical_probability(m_ok[mi], n_omega));
  }

  rep.annual_budget_slack_min = annual_slack_min;
  rep.trap_budget_slack_min = trap_slack_min;
  rep.appraisal_budget_slack_min = app_slack_min;
  rep.annual_wells_gap_mean = wells_gap_sum / static_cast<double>(S);

  auto& b = rep.breakdown;
  b.first_stage_budget = positive_part(c1 - cons.first_stage_budget) /
                         scale_or_one(cons.first_stage_budget);
  b.first_stage_wells =
      positive_part(static_cast<double>(w1 - cons.first_stage_wells)) /
      scale_or_one(static_cast<double>(cons.first_stage_wells));
  b.annual_budget = annual_budget_gap_sum / static_cast<double>(S) /
                    scale_or_one(cons.annual_budget);
  b.trap_budget = trap_budget_gap_sum / static_cast<double>(S) /
                  scale_or_one(cons.trap_budget);
  b.appraisal_budget = app_budget_gap_sum / static_cast<double>(S) /
                       scale_or_one(cons.appraisal_budget);
  b.annual_wells = wells_gap_sum / static_cast<double>(S) /
                   scale_or_one(static_cast<double>(cons.annual_wells));
  b.success_rate =
      positive_part(cons.success_rate_probability - rep.success_reliability);
  for (std::size_t mi = 0; mi < cons.reserve_targets.size(); ++mi) {
    b.reserve_individual +=
        positive_part(cons.reserve_targets[mi].probability -
                      rep.indicator_reliability[mi].second);
  }
  b.reserve_joint = positive_part(cons.joint_probability -
                                  rep.joint_reserve_reliability);
  rep.viol = b.total();

  if (pos_count > 0) {
    rep.mean_selected_pos = pos_sum / static_cast<double>(pos_count);
    rep.mean_selected_pos_weighted =
        pos_weight > 0.0 ? pos_weighted_sum / pos_weight
                         : *rep.mean_selected_pos;
  }
  rep.mean_second_stage_wells = second_wells_sum / static_cast<double>(S);
  rep.mean_recourse_spend = recourse_spend_sum / static_cast<double>(S);

  if (options.keep_losses) {
    rep.losses = std::move(losses);
  }
  return rep;
}

std::string EvaluationReport::to_json_string(int indent) const {
  json j;
  j["enpv"] = enpv;
  j["cvar_loss"] = cvar;
  j["worst_z"] = worst_z;
  j["loss_probability"] = loss_probability;
  j["success_reliability"] = success_reliability;
  for (const auto& [m, rel] : indicator_reliability) {
    j[std::string("reserve_reliability_") + indicator_name(m)] = rel;
  }
  j["joint_reserve_reliability"] = joint_reserve_reliability;
  j["first_stage_spend"] = first_stage_spend;
  j["first_stage_trap_spend"] = first_stage_trap_spend;
  j["first_stage_appraisal_spend"] = first_stage_appraisal_spend;
  j["first_stage_wells"] = first_stage_wells;
  j["first_stage_budget_slack"] = first_stage_budget_slack;
  j["annual_budget_slack_min"] = annual_budget_slack_min;
  j["trap_budget_slack_min"] = trap_budget_slack_min;
  j["appraisal_budget_slack_min"] = appraisal_budget_slack_min;
  j["annual_wells_gap_mean"] = annual_wells_gap_mean;
  j["viol"] = viol;
  j["viol_first_stage_budget"] = breakdown.first_stage_budget;
  j["viol_first_stage_wells"] = breakdown.first_stage_wells;
  j["viol_annual_budget"] = breakdown.annual_budget;
  j["viol_annual_wells"] = breakdown.annual_wells;
  j["viol_trap_budget"] = breakdown.trap_budget;
  j["viol_appraisal_budget"] = breakdown.appraisal_budget;
  j["viol_success_rate"] = breakdown.success_rate;
  j["viol_reserve_individual"] = breakdown.reserve_individual;
  j["viol_reserve_joint"] = breakdown.reserve_joint;
  if (mean_selected_pos) {
    j["mean_selected_pos"] = *mean_selected_pos;
    j["mean_selected_pos_weighted"] = *mean_selected_pos_weighted;
  } else {
    j["mean_selected_pos"] = nullptr;
    j["mean_selected_pos_weighted"] = nullptr;
  }
  j["mean_second_stage_wells"] = mean_second_stage_wells;
  j["mean_recourse_spend"] = mean_recourse_spend;
  if (!scenarios.empty()) {
    json arr = json::array();
    for (const auto& s : scenarios) {
      arr.push_back(json{{"scenario", s.scenario},
                         {"eligible", s.eligible},
                         {"selected", s.selected},
                         {"wells", s.wells},
                         {"deficit", s.deficit},
                         {"spend", s.spend},
                         {"spend_trap", s.spend_trap},
                         {"spend_appraisal", s.spend_appraisal},
                         {"objective", s.objective}});
    }
    j["scenarios"] = arr;
  }
  return j.dump(indent);
}

}  // namespace exsel
