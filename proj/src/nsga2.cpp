#include "exsel/nsga2.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>

namespace exsel {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Bounded draws derived from raw engine output; std::*_distribution is
// avoided so trajectories are identical across standard libraries.
struct SearchRng {
  std::mt19937_64 engine;
  explicit SearchRng(std::uint64_t seed) : engine(seed) {}
  double real() { return static_cast<double>(engine() >> 11) * 0x1.0p-53; }
  std::size_t index(std::size_t n) { return engine() % n; }
  bool coin() { return (engine() & 1ULL) != 0ULL; }
};

bool pareto_dominates(const std::array<double, 2>& a,
                      const std::array<double, 2>& b) {
  return a[0] <= b[0] && a[1] <= b[1] && (a[0] < b[0] || a[1] < b[1]);
}

}  // namespace

PortfolioGenome repair(PortfolioGenome genome, const Catalog& catalog) {
  if (genome.size() != catalog.first_count()) {
    throw std::invalid_argument(
        "repair: genome length does not match the first-stage project count");
  }
  for (std::size_t i = 0; i < catalog.first_count(); ++i) {
    if (catalog.first_project(i).mandatory) genome[i] = 1;
  }
  return genome;
}

bool constrained_dominates(const Individual& a, const Individual& b) {
  if (a.feasible() && !b.feasible()) return true;
  if (!a.feasible() && !b.feasible()) return a.viol < b.viol;
  if (!a.feasible()) return false;
  return pareto_dominates(a.obj, b.obj);
}

std::vector<std::vector<int>> nondominated_sort(
    const std::vector<Individual>& pop) {
  const int n = static_cast<int>(pop.size());
  std::vector<int> dominated_count(static_cast<std::size_t>(n), 0);
  std::vector<std::vector<int>> dominates_list(static_cast<std::size_t>(n));
  std::vector<std::vector<int>> fronts;
  std::vector<int> current;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (a == b) continue;
      if (constrained_dominates(pop[static_cast<std::size_t>(a)],
                                pop[static_cast<std::size_t>(b)])) {
        dominates_list[static_cast<std::size_t>(a)].push_back(b);
      } else if (constrained_dominates(pop[static_cast<std::size_t>(b)],
                                       pop[static_cast<std::size_t>(a)])) {
        ++dominated_count[static_cast<std::size_t>(a)];
      }
    }
    if (dominated_count[static_cast<std::size_t>(a)] == 0) {
      current.push_back(a);
    }
  }
  while (!current.empty()) {
    fronts.push_back(current);
    std::vector<int> next;
    for (int a : current) {
      for (int b : dominates_list[static_cast<std::size_t>(a)]) {
        if (--dominated_count[static_cast<std::size_t>(b)] == 0) {
          next.push_back(b);
        }
      }
    }
    std::sort(next.begin(), next.end());
    current = std::move(next);
  }
  return fronts;
}

void crowding_distance(std::vector<Individual>& pop,
                       const std::vector<int>& front) {
  for (int idx : front) {
    pop[static_cast<std::size_t>(idx)].crowding = 0.0;
  }
  if (front.size() <= 2) {
    for (int idx : front) {
      pop[static_cast<std::size_t>(idx)].crowding = kInf;
    }
    return;
  }
  for (int d = 0; d < 2; ++d) {
    std::vector<int> order = front;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      double va = pop[static_cast<std::size_t>(a)].obj[static_cast<std::size_t>(d)];
      double vb = pop[static_cast<std::size_t>(b)].obj[static_cast<std::size_t>(d)];
      if (va != vb) return va < vb;
      return pop[static_cast<std::size_t>(a)].id <
             pop[static_cast<std::size_t>(b)].id;
    });
    double lo = pop[static_cast<std::size_t>(order.front())]
                    .obj[static_cast<std::size_t>(d)];
    double hi = pop[static_cast<std::size_t>(order.back())]
                    .obj[static_cast<std::size_t>(d)];
    pop[static_cast<std::size_t>(order.front())].crowding = kInf;
    pop[static_cast<std::size_t>(order.back())].crowding = kInf;
    if (hi <= lo) continue;  // duplicated column: interior adds nothing
    for (std::size_t r = 1; r + 1 < order.size(); ++r) {
      auto& ind = pop[static_cast<std::size_t>(order[r])];
      if (ind.crowding == kInf) continue;
      double prev = pop[static_cast<std::size_t>(order[r - 1])]
                        .obj[static_cast<std::size_t>(d)];
      double next = pop[static_cast<std::size_t>(order[r + 1])]
                        .obj[static_cast<std::size_t>(d)];
      ind.crowding += (next - prev) / (hi - lo);
    }
  }
}

namespace {

// (rank asc, crowding desc, id asc)
bool selection_better(const Individual& a, const Individual& b) {
  if (a.rank != b.rank) return a.rank < b.rank;
  if (a.crowding != b.crowding) return a.crowding > b.crowding;
  return a.id < b.id;
}

void rank_population(std::vector<Individual>& pop) {
  auto fronts = nondominated_sort(pop);
  for (std::size_t f = 0; f < fronts.size(); ++f) {
    for (int idx : fronts[f]) {
      pop[static_cast<std::size_t>(idx)].rank = static_cast<int>(f);
    }
    crowding_distance(pop, fronts[f]);
  }
}

void merge_archive(std::vector<Individual>& archive,
                   const Individual& candidate) {
  if (!candidate.feasible()) return;
  for (const auto& a : archive) {
    if (a.genome == candidate.genome) return;
    if (pareto_dominates(a.obj, candidate.obj)) return;
  }
  std::erase_if(archive, [&](const Individual& a) {
    return pareto_dominates(candidate.obj, a.obj);
  });
  archive.push_back(candidate);
}

}  // namespace

SearchResult nsga2_run(int n_bits,
                       const std::vector<std::uint8_t>& mandatory_mask,
                       const EvalFn& eval, const SearchConfig& config) {
  if (config.population < 4 || config.population % 2 != 0) {
    throw std::invalid_argument(
        "nsga2_run: population must be even and at least 4");
  }
  if (!(config.crossover_prob >= 0.0 && config.crossover_prob <= 1.0) ||
      config.mutation_prob > 1.0) {
    throw std::invalid_argument(
        "nsga2_run: operator probabilities must lie in [0, 1]");
  }
  if (n_bits <= 0 ||
      static_cast<int>(mandatory_mask.size()) != n_bits) {
    throw std::invalid_argument("nsga2_run: bad genome length");
  }
  const double pm = config.mutation_prob >= 0.0
                        ? config.mutation_prob
                        : 1.0 / static_cast<double>(n_bits);
  const std::size_t n = static_cast<std::size_t>(config.population);
  SearchRng rng(config.seed);

  std::map<std::vector<std::uint8_t>,
           std::tuple<std::array<double, 2>, double,
                      std::shared_ptr<const EvaluationReport>>>
      cache;
  SearchResult result;

  auto repair_bits = [&](std::vector<std::uint8_t>& g) {
    for (int i = 0; i < n_bits; ++i) {
      if (mandatory_mask[static_cast<std::size_t>(i)]) {
        g[static_cast<std::size_t>(i)] = 1;
      }
    }
  };
  auto evaluate_into = [&](Individual& ind) {
    auto it = cache.find(ind.genome);
    if (it == cache.end()) {
      eval(ind.genome, ind);
      ++result.evaluations;
      cache.emplace(ind.genome,
                    std::make_tuple(ind.obj, ind.viol, ind.report));
    } else {
      ind.obj = std::get<0>(it->second);
      ind.viol = std::get<1>(it->second);
      ind.report = std::get<2>(it->second);
    }
  };

  std::vector<Individual> pop(n);
  for (std::size_t p = 0; p < n; ++p) {
    pop[p].genome.resize(static_cast<std::size_t>(n_bits));
    for (int i = 0; i < n_bits; ++i) {
      pop[p].genome[static_cast<std::size_t>(i)] = rng.coin() ? 1 : 0;
    }
    repair_bits(pop[p].genome);
    evaluate_into(pop[p]);
    pop[p].id = static_cast<int>(p);
  }
  rank_population(pop);

  std::vector<Individual> cross_archive;
  auto note_generation = [&]() {
    double best = kInf;
    for (const auto& ind : pop) {
      if (ind.feasible()) {
        best = std::min(best, ind.obj[0]);
        if (config.cross_generation_archive) merge_archive(cross_archive, ind);
      }
    }
    result.best_feasible_obj0.push_back(best);
  };
  note_generation();

  auto tournament = [&]() -> const Individual& {
    const Individual& a = pop[rng.index(n)];
    const Individual& b = pop[rng.index(n)];
    return selection_better(a, b) ? a : b;
  };

  for (int gen = 0; gen < config.generations; ++gen) {
    std::vector<Individual> children;
    children.reserve(n);
    while (children.size() < n) {
      std::vector<std::uint8_t> g1 = tournament().genome;
      std::vector<std::uint8_t> g2 = tournament().genome;
      if (rng.real() < config.crossover_prob) {
        for (int i = 0; i < n_bits; ++i) {
          if (rng.coin()) {
            std::swap(g1[static_cast<std::size_t>(i)],
                      g2[static_cast<std::size_t>(i)]);
          }
        }
      }
      for (auto* g : {&g1, &g2}) {
        for (int i = 0; i < n_bits; ++i) {
          if (rng.real() < pm) {
            (*g)[static_cast<std::size_t>(i)] ^= 1;
          }
        }
        repair_bits(*g);
        Individual child;
        child.genome = *g;
        evaluate_into(child);
        children.push_back(std::move(child));
      }
    }
    children.resize(n);

    std::vector<Individual> combined;
    combined.reserve(2 * n);
    for (auto& ind : pop) combined.push_back(std::move(ind));
    for (auto& ind : children) combined.push_back(std::move(ind));
    for (std::size_t p = 0; p < combined.size(); ++p) {
      combined[p].id = static_cast<int>(p);
    }
    rank_population(combined);

    auto fronts = nondominated_sort(combined);
    std::vector<Individual> next;
    next.reserve(n);
    for (const auto& front : fronts) {
      if (next.size() + front.size() <= n) {
        for (int idx : front) {
          next.push_back(combined[static_cast<std::size_t>(idx)]);
        }
      } else {
        std::vector<int> order = front;
        std::sort(order.begin(), order.end(), [&](int a, int b) {
          const auto& ia = combined[static_cast<std::size_t>(a)];
          const auto& ib = combined[static_cast<std::size_t>(b)];
          if (ia.crowding != ib.crowding) return ia.crowding > ib.crowding;
          return ia.id < ib.id;
        });
        for (int idx : order) {
          if (next.size() >= n) break;
          next.push_back(combined[static_cast<std::size_t>(idx)]);
        }
      }
      if (next.size() >= n) break;
    }
    pop = std::move(next);
    for (std::size_t p = 0; p < n; ++p) pop[p].id = static_cast<int>(p);
    rank_population(pop);
    note_generation();
  }

  // Archive: feasible first front of the final population (or the running
  // cross-generation archive when enabled), unique genomes.
  std::vector<Individual> archive;
  if (config.cross_generation_archive) {
    archive = cross_archive;
  } else {
    for (const auto& ind : pop) {
      if (ind.rank == 0 && ind.feasible()) merge_archive(archive, ind);
    }
  }
  std::sort(archive.begin(), archive.end(),
            [](const Individual& a, const Individual& b) {
              if (a.obj[0] != b.obj[0]) return a.obj[0] < b.obj[0];
              if (a.obj[1] != b.obj[1]) return a.obj[1] < b.obj[1];
              return a.genome < b.genome;
            });
  result.archive = std::move(archive);
  result.empty_archive = result.archive.empty();
  if (result.empty_archive) {
    const Individual* least = nullptr;
    for (const auto& ind : pop) {
      if (!least || ind.viol < least->viol ||
          (ind.viol == least->viol && ind.obj[0] < least->obj[0])) {
        least = &ind;
      }
    }
    result.least_violating = *least;
  }
  return result;
}

SearchResult run_portfolio_search(const Catalog& catalog,
                                  const ScenarioBank& bank,
                                  const SearchConfig& config,
                                  const EvaluationOptions& eval_options) {
  require_valid(catalog);
  const int n_bits = static_cast<int>(catalog.first_count());
  std::vector<std::uint8_t> mandatory(static_cast<std::size_t>(n_bits), 0);
  for (int i = 0; i < n_bits; ++i) {
    if (catalog.first_project(static_cast<std::size_t>(i)).mandatory) {
      mandatory[static_cast<std::size_t>(i)] = 1;
    }
  }
  EvaluationOptions light = eval_options;
  light.keep_scenario_details = false;
  light.keep_losses = false;
  EvalFn eval = [&](const std::vector<std::uint8_t>& genome,
                    Individual& out) {
    auto rep = std::make_shared<EvaluationReport>(
        evaluate(catalog, bank, genome, light));
    out.obj = {-rep->enpv, rep->cvar};
    out.viol = rep->viol;
    out.report = std::move(rep);
  };
  SearchResult result = nsga2_run(n_bits, mandatory, eval, config);

  // Archive members get full reports for export and downstream analysis.
  EvaluationOptions full = eval_options;
  full.keep_scenario_details = true;
  full.keep_losses = true;
  for (auto& ind : result.archive) {
    ind.report = std::make_shared<EvaluationReport>(
        evaluate(catalog, bank, ind.genome, full));
  }
  return result;
}

double hypervolume(std::vector<std::array<double, 2>> front,
                   const std::array<double, 2>& ref, int* excluded) {
  int dropped = 0;
  std::erase_if(front, [&](const std::array<double, 2>& p) {
    bool dominates_ref = p[0] < ref[0] && p[1] < ref[1];
    if (!dominates_ref) ++dropped;
    return !dominates_ref;
  });
  if (excluded) *excluded = dropped;
  if (front.empty()) return 0.0;
  std::sort(front.begin(), front.end());
  double volume = 0.0;
  double best_f1 = ref[1];
  for (const auto& p : front) {
    if (p[1] < best_f1) {
      volume += (ref[0] - p[0]) * (best_f1 - p[1]);
      best_f1 = p[1];
    }
  }
  return volume;
}

}  // namespace exsel
