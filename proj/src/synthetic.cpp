#include "exsel/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "exsel/distributions.hpp"
#include "exsel/stats.hpp"

namespace exsel {

namespace {

struct GenStream {
  std::uint64_t seed;
  std::uint64_t n = 0;
  double u() {
    return static_cast<double>(mix64(seed ^ mix64(++n)) >> 11) * 0x1.0p-53;
  }
  double in(const ParamRange& r) { return r.lo + u() * (r.hi - r.lo); }
  double in(double lo, double hi) { return lo + u() * (hi - lo); }
  int pick(int n_options) { return static_cast<int>(u() * n_options); }
};

double round_to(double x, int decimals) {
  double f = std::pow(10.0, decimals);
  return std::round(x * f) / f;
}

void check_range(const ParamRange& r, const char* name) {
  if (!(r.lo > 0.0 && r.lo <= r.hi)) {
    throw std::invalid_argument(std::string("synthetic spec: range ") + name +
                                " must satisfy 0 < lo <= hi");
  }
}

QuantileTriple spread_triple(GenStream& g, double median, double lo_spread,
                             double hi_spread, int decimals) {
  double spread = g.in(lo_spread, hi_spread);
  QuantileTriple t;
  t.q50 = round_to(median, decimals);
  t.q10 = round_to(median / spread, decimals);
  t.q90 = round_to(median * spread, decimals);
  t.q10 = std::min(t.q10, t.q50);
  t.q90 = std::max(t.q90, t.q50);
  return t;
}

// Draws are taken one at a time so the stream order is fully specified.
QuantileTriple bounded_triple(GenStream& g, const ParamRange& mode_range,
                              double down_lo, double down_hi, double up_lo,
                              double up_hi) {
  double mode = g.in(mode_range);
  double down = g.in(down_lo, down_hi);
  double up = g.in(up_lo, up_hi);
  QuantileTriple t;
  t.q50 = round_to(mode, 4);
  t.q10 = round_to(std::max(mode - down, 0.01), 4);
  t.q90 = round_to(std::min(mode + up, 0.99), 4);
  t.q10 = std::min(t.q10, t.q50);
  t.q90 = std::max(t.q90, t.q50);
  return t;
}

VolumetricParams oil_volumetrics(GenStream& g, double area_median,
                                 double thickness_median,
                                 const SyntheticCatalogSpec& spec,
                                 double area_spread_hi) {
  VolumetricParams v;
  v.area = spread_triple(g, area_median, 1.7, area_spread_hi, 3);
  v.thickness = spread_triple(g, thickness_median, 1.3, 1.9, 2);
  v.porosity = bounded_triple(g, spec.porosity_mode, 0.03, 0.06, 0.03, 0.08);
  v.water_saturation = bounded_triple(g, spec.water_saturation_mode, 0.05,
                                      0.10, 0.05, 0.10);
  double vf_median = g.in(1.10, 1.32);
  v.volume_factor = spread_triple(g, vf_median, 1.02, 1.06, 3);
  v.conversion = 85.0;  // km^2*m of pore oil to 10^4 t
  return v;
}

VolumetricParams gas_volumetrics(GenStream& g, double oil_area_median,
                                 double thickness_median,
                                 const SyntheticCatalogSpec& spec) {
  VolumetricParams v;
  double area = oil_area_median * g.in(0.20, 0.60);
  v.area = spread_triple(g, area, 1.4, 2.2, 3);
  double h_median = thickness_median * g.in(0.6, 1.0);
  v.thickness = spread_triple(g, h_median, 1.3, 1.8, 2);
  v.porosity = bounded_triple(g, spec.porosity_mode, 0.03, 0.06, 0.03, 0.08);
  v.water_saturation = bounded_triple(g, spec.water_saturation_mode, 0.05,
                                      0.10, 0.05, 0.10);
  double vf_median = g.in(0.0042, 0.0058);
  v.volume_factor = spread_triple(g, vf_median, 1.02, 1.06, 5);
  v.conversion = 0.01;  // km^2*m of pore gas to 10^8 m^3
  return v;
}

EconomicParams economics(GenStream& g, double capex, double wells,
                         double loss_lo, double loss_hi) {
  EconomicParams e;
  e.price_oil = round_to(g.in(2800.0, 3400.0), 2);
  e.unit_cost_oil = round_to(g.in(950.0, 1450.0), 2);
  e.price_gas = round_to(g.in(13000.0, 16000.0), 2);
  e.unit_cost_gas = round_to(g.in(4000.0, 6000.0), 2);
  e.econ_coeff_oil = round_to(g.in(0.18, 0.32), 4);
  e.econ_coeff_gas = round_to(g.in(0.20, 0.35), 4);
  e.fixed_cost = round_to(g.in(400.0, 1600.0), 2);
  e.tax_rate = 0.25;
  e.discount = round_to(g.in(0.82, 0.93), 4);
  e.capex = round_to(capex, 2);
  e.failure_loss = round_to(capex * g.in(loss_lo, loss_hi), 2);
  e.well_count = static_cast<int>(wells);
  return e;
}

// Deterministic mean reserve contributions, used to place targets.
void mean_contribs(const Project& p, double out[kIndicatorCount]) {
  MeanReserves mr = project_mean_reserves(p);
  for (int m = 0; m < kIndicatorCount; ++m) {
    auto mi = static_cast<std::size_t>(m);
    out[m] = indicator_contribution(p.classification.oil[mi],
                                    p.classification.gas[mi], mr.oil,
                                    mr.gas);
  }
}

}  // namespace

Catalog make_synthetic(const SyntheticCatalogSpec& spec) {
  if (spec.first_stage < 1 || spec.second_stage < 1) {
    throw std::invalid_argument("synthetic spec: counts must be positive");
  }
  check_range(spec.first_capex_trap, "first_capex_trap");
  check_range(spec.first_capex_other, "first_capex_other");
  check_range(spec.second_capex, "second_capex");
  check_range(spec.teaser_capex, "teaser_capex");
  check_range(spec.first_area_trap, "first_area_trap");
  check_range(spec.first_area_other, "first_area_other");
  check_range(spec.second_area, "second_area");
  check_range(spec.teaser_area, "teaser_area");
  check_range(spec.first_thickness, "first_thickness");
  check_range(spec.second_thickness, "second_thickness");
  if (!(spec.porosity_mode.lo > 0.05 && spec.porosity_mode.hi < 0.9)) {
    throw std::invalid_argument(
        "synthetic spec: porosity mode range must stay inside (0.05, 0.9)");
  }
  if (!(spec.water_saturation_mode.lo > 0.05 &&
        spec.water_saturation_mode.hi < 0.9)) {
    throw std::invalid_argument(
        "synthetic spec: water saturation mode range must stay inside "
        "(0.05, 0.9)");
  }
  if (!(spec.first_prior_direct.lo > 0.0 && spec.first_prior_direct.hi < 1.0 &&
        spec.second_prior.lo > 0.0 && spec.second_prior.hi < 1.0 &&
        spec.risking_factor.lo > 0.0 && spec.risking_factor.hi <= 1.0)) {
    throw std::invalid_argument(
        "synthetic spec: probability ranges must stay inside (0, 1)");
  }

  GenStream g{spec.seed};
  Catalog cat;

  auto id_of = [](const char* prefix, int n) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%s%02d", prefix, n + 1);
    return std::string(buf);
  };

  for (int i = 0; i < spec.first_stage; ++i) {
    Project p;
    p.id = id_of("F", i);
    p.stage = Stage::First;
    double uc = g.u();
    p.category = uc < 0.60 ? Category::Trap
                           : (uc < 0.90 ? Category::Appraisal
                                        : Category::Mature);
    double capex, area_median;
    if (p.category == Category::Trap) {
      RiskingFactors f;
      f.source = round_to(g.in(spec.risking_factor), 4);
      f.reservoir = round_to(g.in(spec.risking_factor), 4);
      f.trap = round_to(g.in(spec.risking_factor), 4);
      f.preservation = round_to(g.in(spec.risking_factor), 4);
      f.migration = round_to(g.in(spec.risking_factor), 4);
      p.risking = f;
      capex = g.in(spec.first_capex_trap);
      area_median = g.in(spec.first_area_trap);
    } else {
      p.prior_pos = round_to(g.in(spec.first_prior_direct), 4);
      capex = g.in(spec.first_capex_other);
      area_median = g.in(spec.first_area_other);
    }
    double wells = g.u() < 0.35 ? 2 : 1;
    double thickness = g.in(spec.first_thickness);
    p.oil = oil_volumetrics(g, area_median, thickness, spec, 3.0);
    p.gas = gas_volumetrics(g, area_median, thickness, spec);
    p.economics = economics(g, capex, wells, 2.6, 3.6);

    auto lam = [&](ReserveIndicator m, double lo, double hi, bool gas) {
      auto mi = static_cast<std::size_t>(m);
      if (gas) {
        p.classification.gas[mi] = round_to(g.in(lo, hi), 4);
      } else {
        p.classification.oil[mi] = round_to(g.in(lo, hi), 4);
      }
    };
    if (p.category == Category::Trap) {
      lam(ReserveIndicator::PredictedOil, 0.70, 1.00, false);
      lam(ReserveIndicator::PredictedGas, 0.70, 1.00, true);
    } else if (p.category == Category::Appraisal) {
      lam(ReserveIndicator::ControlledOil, 0.60, 0.90, false);
      lam(ReserveIndicator::ControlledGas, 0.60, 0.90, true);
      lam(ReserveIndicator::ProvedOil, 0.15, 0.35, false);
      lam(ReserveIndicator::ProvedGas, 0.15, 0.35, true);
    } else {
      lam(ReserveIndicator::ProvedOil, 0.50, 0.80, false);
      lam(ReserveIndicator::ProvedGas, 0.50, 0.80, true);
    }
    cat.projects.push_back(std::move(p));
  }

  for (int j = 0; j < spec.second_stage; ++j) {
    Project p;
    p.id = id_of("A", j);
    p.stage = Stage::Second;
    p.category = Category::Appraisal;
    p.prior_pos = round_to(g.in(spec.second_prior), 4);
    bool teaser = g.u() < spec.teaser_share;
    double capex = teaser ? g.in(spec.teaser_capex) : g.in(spec.second_capex);
    double area_median =
        teaser ? g.in(spec.teaser_area) : g.in(spec.second_area);
    double wells = !teaser && g.u() < 0.15 ? 2 : 1;
    double thickness = g.in(spec.second_thickness);
    p.oil = oil_volumetrics(g, area_median, thickness, spec, 2.2);
    p.gas = gas_volumetrics(g, area_median, thickness, spec);
    p.economics = economics(g, capex, wells, 2.0, 3.0);

    auto mi = [](ReserveIndicator m) { return static_cast<std::size_t>(m); };
    p.classification.oil[mi(ReserveIndicator::ControlledOil)] =
        round_to(g.in(0.50, 0.85), 4);
    p.classification.gas[mi(ReserveIndicator::ControlledGas)] =
        round_to(g.in(0.50, 0.85), 4);
    p.classification.oil[mi(ReserveIndicator::ProvedOil)] =
        round_to(g.in(0.20, 0.50), 4);
    p.classification.gas[mi(ReserveIndicator::ProvedGas)] =
        round_to(g.in(0.20, 0.50), 4);
    cat.projects.push_back(std::move(p));
  }

  // Two highest-prior first-stage projects are contractual commitments.
  {
    std::vector<int> order(static_cast<std::size_t>(spec.first_stage));
    for (int i = 0; i < spec.first_stage; ++i) {
      order[static_cast<std::size_t>(i)] = i;
    }
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      double pa = cat.projects[static_cast<std::size_t>(a)].resolved_prior();
      double pb = cat.projects[static_cast<std::size_t>(b)].resolved_prior();
      if (pa != pb) return pa > pb;
      return a < b;
    });
    for (int r = 0; r < std::min(2, spec.first_stage); ++r) {
      cat.projects[static_cast<std::size_t>(order[static_cast<std::size_t>(r)])]
          .mandatory = true;
    }
  }

  // Recourse sizing: the annual well requirement exceeds the first-stage
  // cap by a quota that the second stage must supply, and a pool of modest
  // always-runnable backstop projects (unconditional triggers on the
  // mandatory commitments) keeps that quota reachable in every scenario.
  const int recourse_quota = std::max(
      2, static_cast<int>(std::round(0.12 * spec.second_stage)));
  const int backstops = std::min(
      spec.second_stage,
      std::max(recourse_quota + 1, (3 * spec.second_stage) / 10));

  std::vector<int> mandatory_first;
  for (int i = 0; i < spec.first_stage; ++i) {
    if (cat.projects[static_cast<std::size_t>(i)].mandatory) {
      mandatory_first.push_back(i);
    }
  }

  // Backstops go to the lowest expected-value candidates, so value-driven
  // plans still lean on outcome-conditional projects.
  std::vector<int> by_value(static_cast<std::size_t>(spec.second_stage));
  for (int j = 0; j < spec.second_stage; ++j) {
    by_value[static_cast<std::size_t>(j)] = j;
  }
  std::vector<double> det_value(static_cast<std::size_t>(spec.second_stage));
  for (int j = 0; j < spec.second_stage; ++j) {
    const auto& p =
        cat.projects[static_cast<std::size_t>(spec.first_stage + j)];
    MeanReserves mr = project_mean_reserves(p);
    double v_bar = success_npv(p.economics, mr.oil, mr.gas);
    det_value[static_cast<std::size_t>(j)] =
        p.resolved_prior() * v_bar -
        (1.0 - p.resolved_prior()) * p.economics.failure_loss;
  }
  std::sort(by_value.begin(), by_value.end(), [&](int a, int b) {
    double va = det_value[static_cast<std::size_t>(a)];
    double vb = det_value[static_cast<std::size_t>(b)];
    if (va != vb) return va < vb;
    return a < b;
  });
  std::vector<bool> is_backstop(static_cast<std::size_t>(spec.second_stage),
                                false);
  for (int r = 0; r < backstops; ++r) {
    int j = by_value[static_cast<std::size_t>(r)];
    is_backstop[static_cast<std::size_t>(j)] = true;
    cat.projects[static_cast<std::size_t>(spec.first_stage + j)]
        .economics.well_count = 1;
  }

  // Triggers and information links. Backstops are always-eligible data
  // re-evaluation plays whose chance is unaffected by this year's drilling:
  // unconditional trigger, no evidence links.
  for (int j = 0; j < spec.second_stage; ++j) {
    const std::string& jid =
        cat.projects[static_cast<std::size_t>(spec.first_stage + j)].id;
    TriggerSets t;
    t.project = jid;
    if (is_backstop[static_cast<std::size_t>(j)] &&
        !mandatory_first.empty()) {
      int anchor = mandatory_first[static_cast<std::size_t>(
          j % static_cast<int>(mandatory_first.size()))];
      t.unconditional_triggers.push_back(
          cat.projects[static_cast<std::size_t>(anchor)].id);
      cat.triggers.push_back(std::move(t));
      continue;
    }
    int n_succ = 2 + (g.u() < 0.5 ? 1 : 0);
    std::vector<int> used;
    auto fresh_first = [&]() {
      for (int attempt = 0; attempt < 32; ++attempt) {
        int i = g.pick(spec.first_stage);
        if (std::find(used.begin(), used.end(), i) == used.end()) {
          used.push_back(i);
          return i;
        }
      }
      return g.pick(spec.first_stage);
    };
    for (int r = 0; r < n_succ; ++r) {
      int i = fresh_first();
      t.success_triggers.push_back(
          cat.projects[static_cast<std::size_t>(i)].id);
      cat.links.push_back({cat.projects[static_cast<std::size_t>(i)].id, jid,
                           round_to(g.in(spec.link_strength), 3)});
    }
    if (g.u() < 0.35) {
      int i = fresh_first();
      t.failure_triggers.push_back(
          cat.projects[static_cast<std::size_t>(i)].id);
      cat.links.push_back({cat.projects[static_cast<std::size_t>(i)].id, jid,
                           round_to(g.in(spec.failure_link_strength), 3)});
    }
    if (g.u() < 0.15) {
      int i = fresh_first();
      cat.links.push_back({cat.projects[static_cast<std::size_t>(i)].id, jid,
                           round_to(-g.in(0.15, 0.45), 3)});
    }
    cat.triggers.push_back(std::move(t));
  }

  // Planning constraints calibrated from the generated pool.
  double sum_c_first = 0.0, sum_c_second = 0.0;
  double sum_c_first_trap = 0.0, sum_c_first_app = 0.0;
  int sum_w_first = 0;
  double e_first[kIndicatorCount] = {};
  double e_second_mean[kIndicatorCount] = {};
  for (int i = 0; i < spec.first_stage; ++i) {
    const auto& p = cat.projects[static_cast<std::size_t>(i)];
    sum_c_first += p.economics.capex;
    sum_w_first += p.economics.well_count;
    if (p.category == Category::Trap) sum_c_first_trap += p.economics.capex;
    if (p.category == Category::Appraisal) {
      sum_c_first_app += p.economics.capex;
    }
    double contrib[kIndicatorCount];
    mean_contribs(p, contrib);
    for (int m = 0; m < kIndicatorCount; ++m) {
      e_first[m] += p.resolved_prior() * contrib[m];
    }
  }
  for (int j = 0; j < spec.second_stage; ++j) {
    const auto& p =
        cat.projects[static_cast<std::size_t>(spec.first_stage + j)];
    sum_c_second += p.economics.capex;
    double contrib[kIndicatorCount];
    mean_contribs(p, contrib);
    for (int m = 0; m < kIndicatorCount; ++m) {
      e_second_mean[m] +=
          p.resolved_prior() * contrib[m] / spec.second_stage;
    }
  }
  const double mean_c_second = sum_c_second / spec.second_stage;
  const double recourse_slice = (recourse_quota + 5) * mean_c_second;
  const double b1_frac =
      std::min(0.55, 0.38 + 0.9 / static_cast<double>(spec.first_stage));

  auto& c = cat.constraints;
  c.first_stage_budget = round_to(b1_frac * sum_c_first, 2);
  c.annual_budget = round_to(c.first_stage_budget + recourse_slice, 2);
  c.first_stage_wells = static_cast<int>(std::ceil(0.48 * sum_w_first));
  c.annual_wells = c.first_stage_wells + recourse_quota;
  c.trap_budget = round_to(0.55 * sum_c_first_trap, 2);
  c.appraisal_budget =
      round_to(0.55 * sum_c_first_app + recourse_slice, 2);

  // Reserve targets sit at a low quantile of a pilot portfolio's tally, so
  // reasonable plans clear them with margin at any catalog size. The pilot
  // picks by deterministic value per well under the first-stage limits and
  // always carries some trap exposure.
  {
    std::vector<double> det_first(static_cast<std::size_t>(spec.first_stage));
    for (int i = 0; i < spec.first_stage; ++i) {
      const auto& p = cat.projects[static_cast<std::size_t>(i)];
      MeanReserves mr = project_mean_reserves(p);
      double v_bar = success_npv(p.economics, mr.oil, mr.gas);
      det_first[static_cast<std::size_t>(i)] =
          p.resolved_prior() * v_bar -
          (1.0 - p.resolved_prior()) * p.economics.failure_loss;
    }
    std::vector<int> order(static_cast<std::size_t>(spec.first_stage));
    for (int i = 0; i < spec.first_stage; ++i) {
      order[static_cast<std::size_t>(i)] = i;
    }
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      const auto& pa = cat.projects[static_cast<std::size_t>(a)];
      const auto& pb = cat.projects[static_cast<std::size_t>(b)];
      double ka = det_first[static_cast<std::size_t>(a)] /
                  pa.economics.well_count;
      double kb = det_first[static_cast<std::size_t>(b)] /
                  pb.economics.well_count;
      bool ma = pa.mandatory, mb = pb.mandatory;
      if (ma != mb) return ma;
      if (ka != kb) return ka > kb;
      return a < b;
    });
    std::vector<int> pilot;
    double spend = 0.0;
    int wells = 0;
    for (int i : order) {
      const auto& p = cat.projects[static_cast<std::size_t>(i)];
      if (!p.mandatory &&
          (spend + p.economics.capex > c.first_stage_budget ||
           wells + p.economics.well_count > c.first_stage_wells)) {
        continue;
      }
      pilot.push_back(i);
      spend += p.economics.capex;
      wells += p.economics.well_count;
    }
    // the target for predicted reserves is meaningless without any trap
    // exposure, so force the best trap in if density alone skipped them all
    bool has_trap = std::any_of(pilot.begin(), pilot.end(), [&](int i) {
      return cat.projects[static_cast<std::size_t>(i)].category ==
             Category::Trap;
    });
    if (!has_trap) {
      for (int i : order) {
        const auto& p = cat.projects[static_cast<std::size_t>(i)];
        if (p.category != Category::Trap) continue;
        while (!pilot.empty() &&
               (spend + p.economics.capex > c.first_stage_budget ||
                wells + p.economics.well_count > c.first_stage_wells)) {
          const auto& drop =
              cat.projects[static_cast<std::size_t>(pilot.back())];
          if (drop.mandatory) break;
          spend -= drop.economics.capex;
          wells -= drop.economics.well_count;
          pilot.pop_back();
        }
        if (spend + p.economics.capex <= c.first_stage_budget &&
            wells + p.economics.well_count <= c.first_stage_wells) {
          pilot.push_back(i);
          spend += p.economics.capex;
          wells += p.economics.well_count;
        }
        break;
      }
    }

    // Expected recourse addition: the quota filled from the upper half of
    // the conditional candidates, discounted.
    double recourse_add[kIndicatorCount] = {};
    {
      std::vector<int> cond;
      for (int j = 0; j < spec.second_stage; ++j) {
        if (!is_backstop[static_cast<std::size_t>(j)]) cond.push_back(j);
      }
      std::sort(cond.begin(), cond.end(), [&](int a, int b) {
        double va = det_value[static_cast<std::size_t>(a)];
        double vb = det_value[static_cast<std::size_t>(b)];
        if (va != vb) return va > vb;
        return a < b;
      });
      std::size_t top = std::max<std::size_t>(1, cond.size() / 2);
      for (std::size_t r = 0; r < top; ++r) {
        const auto& p = cat.projects[static_cast<std::size_t>(
            spec.first_stage + cond[r])];
        double contrib[kIndicatorCount];
        mean_contribs(p, contrib);
        for (int m = 0; m < kIndicatorCount; ++m) {
          recourse_add[m] += p.resolved_prior() * contrib[m] /
                             static_cast<double>(top);
        }
      }
      for (int m = 0; m < kIndicatorCount; ++m) {
        recourse_add[m] *= 0.50 * recourse_quota;
      }
    }

    // Success-indicator pilot draws with mean contributions.
    const int pilot_draws = 400;
    std::vector<std::array<double, kIndicatorCount>> tally(
        static_cast<std::size_t>(pilot_draws));
    for (int i : pilot) {
      const auto& p = cat.projects[static_cast<std::size_t>(i)];
      double contrib[kIndicatorCount];
      mean_contribs(p, contrib);
      for (int d = 0; d < pilot_draws; ++d) {
        double u = static_cast<double>(
                       mix64(spec.seed ^ mix64(0xBEEFULL + i * 1009ULL + d)) >>
                       11) *
                   0x1.0p-53;
        if (u <= p.resolved_prior()) {
          for (int m = 0; m < kIndicatorCount; ++m) {
            tally[static_cast<std::size_t>(d)][static_cast<std::size_t>(m)] +=
                contrib[m];
          }
        }
      }
    }
    auto target_level = [&](ReserveIndicator m, double quantile_frac) {
      auto mi = static_cast<std::size_t>(m);
      std::vector<double> v;
      v.reserve(static_cast<std::size_t>(pilot_draws));
      for (const auto& row : tally) v.push_back(row[mi]);
      std::sort(v.begin(), v.end());
      double base =
          v[static_cast<std::size_t>(quantile_frac * (pilot_draws - 1))];
      return base + recourse_add[mi];
    };
    auto add_target = [&](ReserveIndicator m, double quantile_frac,
                          double alpha) {
      double level = target_level(m, quantile_frac);
      if (level > 0.0) {
        c.reserve_targets.push_back({m, round_to(level, 2), alpha});
      }
    };
    add_target(ReserveIndicator::PredictedOil, 0.35, 0.30);
    add_target(ReserveIndicator::ControlledOil, 0.30, 0.40);
    add_target(ReserveIndicator::ProvedOil, 0.25, 0.35);
  }
  c.joint_probability = 0.25;
  c.min_success_rate = 0.30;
  c.success_rate_probability = 0.70;
  c.cvar_confidence = 0.90;
  c.posterior_lo = 0.02;
  c.posterior_hi = 0.98;
  c.shortfall_weight = 0.20;

  cat.finalize();
  return cat;
}

}  // namespace exsel
