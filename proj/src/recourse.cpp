#include "exsel/recourse.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace exsel {

double expected_value(double pos, double mean_success_npv,
                      double failure_loss) {
  return pos * mean_success_npv - (1.0 - pos) * failure_loss;
}

double shortfall_value(double nu, double gamma, double cost, double pos,
                       const double* mean_contrib, const double* first_tally,
                       const std::vector<ReserveTarget>& targets) {
  double bonus = 0.0;
  for (const auto& t : targets) {
    auto m = static_cast<std::size_t>(t.indicator);
    if (first_tally[m] < t.target) {
      bonus += pos * mean_contrib[m] / t.target;
    }
  }
  return nu + gamma * cost * bonus;
}

namespace {

// Money is compared at 0.01 granularity (10^4 CNY cents) in both solvers so
// the DP and the brute-force oracle share one feasibility semantics.
std::int64_t cents(double x) { return std::llround(x * 100.0); }

constexpr int kMaskWords = 2;
constexpr int kMaxItems = 64 * kMaskWords;

using Mask = std::array<std::uint64_t, kMaskWords>;

bool mask_less(const Mask& a, const Mask& b) {
  // Lexicographic over selection bits, item 0 most significant.
  for (int w = 0; w < kMaskWords; ++w) {
    std::uint64_t diff = a[w] ^ b[w];
    if (diff) {
      int bit = std::countr_zero(diff);
      return (a[w] >> bit & 1ULL) == 0ULL;
    }
  }
  return false;
}

void mask_set(Mask& m, int bit) {
  m[bit >> 6] |= 1ULL << (bit & 63);
}

struct DpState {
  std::int64_t c = 0;   // total spend, cents
  std::int64_t ct = 0;  // trap spend, cents
  std::int64_t ca = 0;  // appraisal spend, cents
  double q = 0.0;       // accumulated value
  Mask mask{};
};

struct DimFlags {
  bool use_trap = false;
  bool use_app = false;
};

bool dominates(const DpState& a, const DpState& b, const DimFlags& f) {
  if (a.c > b.c || a.q < b.q) return false;
  if (f.use_trap && a.ct > b.ct) return false;
  if (f.use_app && a.ca > b.ca) return false;
  bool strict = a.c < b.c || a.q > b.q ||
                (f.use_trap && a.ct < b.ct) || (f.use_app && a.ca < b.ca);
  return strict || mask_less(a.mask, b.mask) || a.mask == b.mask;
}

// Merges two staircases sorted by (c asc, q asc); valid when only the total
// spend dimension is active. Result keeps q strictly increasing in c.
std::vector<DpState> merge_2d(const std::vector<DpState>& a,
                              const std::vector<DpState>& b) {
  auto before = [](const DpState& x, const DpState& y) {
    if (x.c != y.c) return x.c < y.c;
    if (x.q != y.q) return x.q > y.q;
    return mask_less(x.mask, y.mask);
  };
  std::vector<DpState> out;
  out.reserve(a.size() + b.size());
  std::size_t ia = 0, ib = 0;
  double best_q = -std::numeric_limits<double>::infinity();
  while (ia < a.size() || ib < b.size()) {
    const DpState* next;
    if (ib >= b.size() || (ia < a.size() && before(a[ia], b[ib]))) {
      next = &a[ia++];
    } else {
      next = &b[ib++];
    }
    if (next->q > best_q) {
      out.push_back(*next);
      best_q = next->q;
    }
  }
  return out;
}

// Generic antichain merge for instances where category budgets can bind.
std::vector<DpState> merge_nd(std::vector<DpState> existing,
                              const std::vector<DpState>& incoming,
                              const DimFlags& f) {
  std::vector<DpState> kept;
  kept.reserve(incoming.size());
  for (const auto& n : incoming) {
    bool dominated = false;
    for (const auto& e : existing) {
      if (dominates(e, n, f)) {
        dominated = true;
        break;
      }
    }
    if (dominated) continue;
    std::erase_if(existing,
                  [&](const DpState& e) { return dominates(n, e, f); });
    kept.push_back(n);
  }
  existing.insert(existing.end(), kept.begin(), kept.end());
  return existing;
}

struct Quantized {
  std::vector<std::int64_t> cost;
  std::int64_t budget = 0;
  std::int64_t budget_trap = 0;
  std::int64_t budget_app = 0;
  DimFlags dims;
};

Quantized quantize(const RecourseInstance& inst) {
  Quantized q;
  q.budget = cents(std::max(inst.budget_total, 0.0));
  q.budget_trap = cents(std::max(inst.budget_trap, 0.0));
  q.budget_app = cents(std::max(inst.budget_appraisal, 0.0));
  q.cost.reserve(inst.items.size());
  std::int64_t sum_trap = 0, sum_app = 0;
  bool all_trap = true, all_app = true;
  for (const auto& it : inst.items) {
    std::int64_t c = cents(it.cost);
    q.cost.push_back(c);
    if (it.category == Category::Trap) {
      sum_trap += c;
      all_app = false;
    } else if (it.category == Category::Appraisal) {
      sum_app += c;
      all_trap = false;
    } else {
      all_trap = all_app = false;
    }
  }
  if (!inst.items.empty() && all_trap) {
    // Every item charges both budgets identically; fold the cap in.
    q.budget = std::min(q.budget, q.budget_trap);
  } else if (!inst.items.empty() && all_app) {
    q.budget = std::min(q.budget, q.budget_app);
  } else {
    q.dims.use_trap = sum_trap > q.budget_trap;
    q.dims.use_app = sum_app > q.budget_app;
  }
  return q;
}

RecourseSolution extract(const RecourseInstance& inst,
                         const std::vector<std::vector<DpState>>& buckets) {
  int target = static_cast<int>(buckets.size()) - 1;
  int w_star = target;
  while (w_star > 0 && buckets[static_cast<std::size_t>(w_star)].empty()) {
    --w_star;
  }
  const DpState* best = nullptr;
  for (const auto& st : buckets[static_cast<std::size_t>(w_star)]) {
    if (!best || st.q > best->q ||
        (st.q == best->q &&
         (st.c < best->c ||
          (st.c == best->c &&
           (st.ct < best->ct ||
            (st.ct == best->ct &&
             (st.ca < best->ca ||
              (st.ca == best->ca && mask_less(st.mask, best->mask))))))))) {
      best = &st;
    }
  }
  RecourseSolution sol;
  sol.selected.assign(inst.items.size(), 0);
  sol.wells = w_star;
  sol.status = w_star == target ? RecourseStatus::ExactFeasible
                                : RecourseStatus::Shortfall;
  sol.deficit = target - w_star;
  if (!best) return sol;
  sol.objective = best->q;
  for (std::size_t t = 0; t < inst.items.size(); ++t) {
    if (best->mask[t >> 6] >> (t & 63) & 1ULL) {
      sol.selected[t] = 1;
      sol.spend_total += inst.items[t].cost;
      if (inst.items[t].category == Category::Trap) {
        sol.spend_trap += inst.items[t].cost;
      } else if (inst.items[t].category == Category::Appraisal) {
        sol.spend_appraisal += inst.items[t].cost;
      }
    }
  }
  return sol;
}

}  // namespace

RecourseSolution solve_exact(const RecourseInstance& inst,
                             const RecourseSolverOptions& options) {
  if (inst.items.size() > kMaxItems) {
    throw std::invalid_argument("solve_exact: too many eligible items");
  }
  const int n_bar = std::max(inst.wells_required, 0);
  Quantized qz = quantize(inst);
  const bool fast2d =
      options.prune && !qz.dims.use_trap && !qz.dims.use_app;

  std::vector<std::vector<DpState>> buckets(
      static_cast<std::size_t>(n_bar) + 1);
  buckets[0].push_back(DpState{});

  for (std::size_t t = 0; t < inst.items.size(); ++t) {
    const auto& item = inst.items[t];
    std::int64_t c = qz.cost[t];
    if (item.wells > n_bar || c > qz.budget) continue;
    std::int64_t dct = item.category == Category::Trap ? c : 0;
    std::int64_t dca = item.category == Category::Appraisal ? c : 0;
    for (int w = n_bar; w >= item.wells; --w) {
      const auto& source =
          buckets[static_cast<std::size_t>(w - item.wells)];
      if (source.empty()) continue;
      std::vector<DpState> incoming;
      incoming.reserve(source.size());
      for (const auto& st : source) {
        std::int64_t nc = st.c + c;
        if (nc > qz.budget) continue;
        std::int64_t nct = st.ct + dct;
        if (qz.dims.use_trap && nct > qz.budget_trap) continue;
        std::int64_t nca = st.ca + dca;
        if (qz.dims.use_app && nca > qz.budget_app) continue;
        DpState ns{nc, nct, nca, st.q + item.value, st.mask};
        mask_set(ns.mask, static_cast<int>(t));
        incoming.push_back(ns);
      }
      if (incoming.empty()) continue;
      auto& bucket = buckets[static_cast<std::size_t>(w)];
      if (!options.prune) {
        bucket.insert(bucket.end(), incoming.begin(), incoming.end());
      } else if (fast2d) {
        bucket = merge_2d(bucket, incoming);
      } else {
        bucket = merge_nd(std::move(bucket), incoming, qz.dims);
      }
    }
  }
  return extract(inst, buckets);
}

RecourseSolution solve_greedy(const RecourseInstance& inst,
                              const RecourseSolverOptions& options) {
  const int n_bar = std::max(inst.wells_required, 0);
  Quantized qz = quantize(inst);

  std::vector<std::size_t> order(inst.items.size());
  for (std::size_t t = 0; t < order.size(); ++t) order[t] = t;
  auto key = [&](std::size_t t) {
    const auto& it = inst.items[t];
    if (options.greedy_rank == GreedyRank::Value) return it.value;
    return qz.cost[t] > 0 ? it.value / it.cost
                          : std::numeric_limits<double>::infinity();
  };
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    double ka = key(a), kb = key(b);
    if (ka != kb) return ka > kb;
    return inst.items[a].project < inst.items[b].project;
  });

  RecourseSolution sol;
  sol.selected.assign(inst.items.size(), 0);
  std::int64_t c = 0, ct = 0, ca = 0;
  for (std::size_t t : order) {
    if (sol.wells >= n_bar) break;
    const auto& item = inst.items[t];
    std::int64_t ic = qz.cost[t];
    std::int64_t nct = ct + (item.category == Category::Trap ? ic : 0);
    std::int64_t nca = ca + (item.category == Category::Appraisal ? ic : 0);
    if (c + ic > qz.budget || nct > qz.budget_trap || nca > qz.budget_app ||
        sol.wells + item.wells > n_bar) {
      continue;
    }
    c += ic;
    ct = nct;
    ca = nca;
    sol.selected[t] = 1;
    sol.objective += item.value;
    sol.wells += item.wells;
    sol.spend_total += item.cost;
    if (item.category == Category::Trap) sol.spend_trap += item.cost;
    if (item.category == Category::Appraisal) {
      sol.spend_appraisal += item.cost;
    }
  }
  sol.status = sol.wells == n_bar ? RecourseStatus::ExactFeasible
                                  : RecourseStatus::Shortfall;
  sol.deficit = n_bar - sol.wells;
  return sol;
}

RecourseSolution solve_brute(const RecourseInstance& inst) {
  const std::size_t n = inst.items.size();
  if (n > 20) {
    throw std::invalid_argument(
        "solve_brute: refusing instances with more than 20 items");
  }
  const int n_bar = std::max(inst.wells_required, 0);
  Quantized qz = quantize(inst);

  std::uint32_t best_mask = 0;
  int best_w = 0;
  double best_q = 0.0;
  std::int64_t best_c = 0;
  bool have_best = true;  // the empty selection is always feasible
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    std::int64_t c = 0, ct = 0, ca = 0;
    int w = 0;
    double q = 0.0;
    bool ok = true;
    for (std::size_t t = 0; t < n && ok; ++t) {
      if (!(mask >> t & 1u)) continue;
      const auto& item = inst.items[t];
      c += qz.cost[t];
      if (item.category == Category::Trap) ct += qz.cost[t];
      if (item.category == Category::Appraisal) ca += qz.cost[t];
      w += item.wells;
      q += item.value;
      ok = c <= qz.budget && ct <= qz.budget_trap && ca <= qz.budget_app &&
           w <= n_bar;
    }
    if (!ok) continue;
    bool better = !have_best || w > best_w ||
                  (w == best_w && (q > best_q || (q == best_q && c < best_c)));
    if (better) {
      have_best = true;
      best_mask = mask;
      best_w = w;
      best_q = q;
      best_c = c;
    }
  }

  RecourseSolution sol;
  sol.selected.assign(n, 0);
  sol.wells = best_w;
  sol.objective = best_q;
  sol.status = best_w == n_bar ? RecourseStatus::ExactFeasible
                               : RecourseStatus::Shortfall;
  sol.deficit = n_bar - best_w;
  for (std::size_t t = 0; t < n; ++t) {
    if (best_mask >> t & 1u) {
      sol.selected[t] = 1;
      sol.spend_total += inst.items[t].cost;
      if (inst.items[t].category == Category::Trap) {
        sol.spend_trap += inst.items[t].cost;
      }
      if (inst.items[t].category == Category::Appraisal) {
        sol.spend_appraisal += inst.items[t].cost;
      }
    }
  }
  return sol;
}

}  // namespace exsel
