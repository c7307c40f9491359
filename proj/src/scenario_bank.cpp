#include "exsel/scenario_bank.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

#include "exsel/distributions.hpp"
#include "exsel/parallel.hpp"
#include "exsel/stats.hpp"

namespace exsel {

namespace {

// Stream tags keep the uniform draws of different purposes disjoint.
enum StreamTag : std::uint64_t {
  kSuccessFirst = 1,
  kSuccessSecond = 2,
  kParamFirst = 3,
  kParamSecond = 4,
};

// Ten calibrated volumetric distributions per project: oil then gas, each
// (area, thickness, porosity, water_saturation, volume_factor).
struct ProjectDists {
  CalibratedDistribution d[10];
  double kappa_oil = 1.0;
  double kappa_gas = 1.0;
};

ProjectDists calibrate_project(const Project& p) {
  ProjectDists pd;
  const VolumetricParams* phases[2] = {&p.oil, &p.gas};
  for (int ph = 0; ph < 2; ++ph) {
    const auto& v = *phases[ph];
    pd.d[ph * 5 + 0] = calibrate(v.area, false);
    pd.d[ph * 5 + 1] = calibrate(v.thickness, false);
    pd.d[ph * 5 + 2] = calibrate(v.porosity, true);
    pd.d[ph * 5 + 3] = calibrate(v.water_saturation, true);
    pd.d[ph * 5 + 4] = calibrate(v.volume_factor, false);
  }
  pd.kappa_oil = p.oil.conversion;
  pd.kappa_gas = p.gas.conversion;
  return pd;
}

struct Realization {
  double reserve_oil = 0.0;
  double reserve_gas = 0.0;
  double npv = 0.0;
  double contrib[kIndicatorCount] = {};
};

Realization realize(const Project& p, const ProjectDists& pd,
                    const CounterRng& rng, std::uint64_t tag,
                    std::uint64_t q, std::uint64_t s, std::uint64_t k) {
  double draw[10];
  for (int pi = 0; pi < 10; ++pi) {
    // The sub-scenario and parameter index share one key slot; 16 spots per
    // k leave room for the ten parameters.
    double u = rng.uniform(tag, q, s, k * 16 + static_cast<std::uint64_t>(pi));
    draw[pi] = sample_parameter(pd.d[pi], u);
  }
  Realization r;
  r.reserve_oil = volumetric_reserve(pd.kappa_oil, draw[0], draw[1], draw[2],
                                     draw[3], draw[4]);
  r.reserve_gas = volumetric_reserve(pd.kappa_gas, draw[5], draw[6], draw[7],
                                     draw[8], draw[9]);
  r.npv = success_npv(p.economics, r.reserve_oil, r.reserve_gas);
  for (int m = 0; m < kIndicatorCount; ++m) {
    auto mi = static_cast<std::size_t>(m);
    r.contrib[m] = indicator_contribution(p.classification.oil[mi],
                                          p.classification.gas[mi],
                                          r.reserve_oil, r.reserve_gas);
  }
  return r;
}

}  // namespace

ScenarioBank build_bank(const Catalog& catalog, std::uint64_t seed, int S,
                        int K, int threads) {
  if (S <= 0 || K <= 0) {
    throw std::invalid_argument("build_bank: S and K must be positive");
  }
  require_valid(catalog);

  ScenarioBank bank;
  bank.seed = seed;
  bank.catalog_hash = catalog.hash();
  bank.scenario_count = S;
  bank.subscenario_count = K;
  bank.first_count = static_cast<int>(catalog.first_count());
  bank.second_count = static_cast<int>(catalog.second_count());

  const int nI = bank.first_count;
  const int nJ = bank.second_count;
  const std::size_t firstN = static_cast<std::size_t>(nI) * S;
  const std::size_t secondN = static_cast<std::size_t>(nJ) * S * K;

  bank.u_first.resize(firstN);
  bank.success_first.resize(firstN);
  bank.reserve_oil_first.resize(firstN);
  bank.reserve_gas_first.resize(firstN);
  bank.npv_first.resize(firstN);
  bank.contrib_first.resize(firstN * kIndicatorCount);
  bank.u_second.resize(secondN);
  bank.reserve_oil_second.resize(secondN);
  bank.reserve_gas_second.resize(secondN);
  bank.npv_second.resize(secondN);
  bank.contrib_second.resize(secondN * kIndicatorCount);
  bank.npv_second_mean.resize(static_cast<std::size_t>(nJ) * S);
  bank.contrib_second_mean.resize(static_cast<std::size_t>(nJ) * S *
                                  kIndicatorCount);

  std::vector<ProjectDists> first_dists(static_cast<std::size_t>(nI));
  std::vector<ProjectDists> second_dists(static_cast<std::size_t>(nJ));
  for (int i = 0; i < nI; ++i) {
    first_dists[static_cast<std::size_t>(i)] =
        calibrate_project(catalog.first_project(static_cast<std::size_t>(i)));
  }
  for (int j = 0; j < nJ; ++j) {
    second_dists[static_cast<std::size_t>(j)] = calibrate_project(
        catalog.second_project(static_cast<std::size_t>(j)));
  }

  CounterRng rng(seed);
  parallel_for(static_cast<std::size_t>(S), threads, [&](std::size_t si) {
    int s = static_cast<int>(si);
    for (int i = 0; i < nI; ++i) {
      const auto& p = catalog.first_project(static_cast<std::size_t>(i));
      std::size_t at = bank.first_at(i, s);
      double u = rng.uniform(kSuccessFirst, static_cast<std::uint64_t>(i),
                             static_cast<std::uint64_t>(s), 0);
      bank.u_first[at] = u;
      bank.success_first[at] = u <= p.resolved_prior() ? 1 : 0;
      Realization r =
          realize(p, first_dists[static_cast<std::size_t>(i)], rng,
                  kParamFirst, static_cast<std::uint64_t>(i),
                  static_cast<std::uint64_t>(s), 0);
      bank.reserve_oil_first[at] = r.reserve_oil;
      bank.reserve_gas_first[at] = r.reserve_gas;
      bank.npv_first[at] = r.npv;
      for (int m = 0; m < kIndicatorCount; ++m) {
        bank.contrib_first[at * kIndicatorCount + m] = r.contrib[m];
      }
    }
    for (int j = 0; j < nJ; ++j) {
      const auto& p = catalog.second_project(static_cast<std::size_t>(j));
      double npv_sum = 0.0;
      double contrib_sum[kIndicatorCount] = {};
      for (int k = 0; k < K; ++k) {
        std::size_t at = bank.second_at(j, s, k);
        bank.u_second[at] =
            rng.uniform(kSuccessSecond, static_cast<std::uint64_t>(j),
                        static_cast<std::uint64_t>(s),
                        static_cast<std::uint64_t>(k));
        Realization r =
            realize(p, second_dists[static_cast<std::size_t>(j)], rng,
                    kParamSecond, static_cast<std::uint64_t>(j),
                    static_cast<std::uint64_t>(s),
                    static_cast<std::uint64_t>(k));
        bank.reserve_oil_second[at] = r.reserve_oil;
        bank.reserve_gas_second[at] = r.reserve_gas;
        bank.npv_second[at] = r.npv;
        for (int m = 0; m < kIndicatorCount; ++m) {
          bank.contrib_second[at * kIndicatorCount + m] = r.contrib[m];
          contrib_sum[m] += r.contrib[m];
        }
        npv_sum += r.npv;
      }
      std::size_t js = bank.second_js(j, s);
      bank.npv_second_mean[js] = npv_sum / K;
      for (int m = 0; m < kIndicatorCount; ++m) {
        bank.contrib_second_mean[js * kIndicatorCount + m] =
            contrib_sum[m] / K;
      }
    }
  });
  return bank;
}

namespace {

constexpr char kBankMagic[8] = {'E', 'X', 'S', 'B', 'A', 'N', 'K', '1'};

template <typename T>
void write_vec(std::ofstream& out, const std::vector<T>& v) {
  std::uint64_t n = v.size();
  out.write(reinterpret_cast<const char*>(&n), sizeof(n));
  out.write(reinterpret_cast<const char*>(v.data()),
            static_cast<std::streamsize>(n * sizeof(T)));
}

template <typename T>
void read_vec(std::ifstream& in, std::vector<T>& v) {
  std::uint64_t n = 0;
  in.read(reinterpret_cast<char*>(&n), sizeof(n));
  v.resize(n);
  in.read(reinterpret_cast<char*>(v.data()),
          static_cast<std::streamsize>(n * sizeof(T)));
}

}  // namespace

void ScenarioBank::save_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write bank file: " + path);
  }
  out.write(kBankMagic, sizeof(kBankMagic));
  std::int32_t header[4] = {scenario_count, subscenario_count, first_count,
                            second_count};
  out.write(reinterpret_cast<const char*>(&seed), sizeof(seed));
  out.write(reinterpret_cast<const char*>(&catalog_hash),
            sizeof(catalog_hash));
  out.write(reinterpret_cast<const char*>(header), sizeof(header));
  write_vec(out, u_first);
  write_vec(out, success_first);
  write_vec(out, reserve_oil_first);
  write_vec(out, reserve_gas_first);
  write_vec(out, npv_first);
  write_vec(out, contrib_first);
  write_vec(out, u_second);
  write_vec(out, reserve_oil_second);
  write_vec(out, reserve_gas_second);
  write_vec(out, npv_second);
  write_vec(out, contrib_second);
  write_vec(out, npv_second_mean);
  write_vec(out, contrib_second_mean);
  if (!out) {
    throw std::runtime_error("failed writing bank file: " + path);
  }
}

ScenarioBank ScenarioBank::load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open bank file: " + path);
  }
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kBankMagic, sizeof(magic)) != 0) {
    throw std::runtime_error("not a scenario-bank file: " + path);
  }
  ScenarioBank bank;
  std::int32_t header[4];
  in.read(reinterpret_cast<char*>(&bank.seed), sizeof(bank.seed));
  in.read(reinterpret_cast<char*>(&bank.catalog_hash),
          sizeof(bank.catalog_hash));
  in.read(reinterpret_cast<char*>(header), sizeof(header));
  bank.scenario_count = header[0];
  bank.subscenario_count = header[1];
  bank.first_count = header[2];
  bank.second_count = header[3];
  read_vec(in, bank.u_first);
  read_vec(in, bank.success_first);
  read_vec(in, bank.reserve_oil_first);
  read_vec(in, bank.reserve_gas_first);
  read_vec(in, bank.npv_first);
  read_vec(in, bank.contrib_first);
  read_vec(in, bank.u_second);
  read_vec(in, bank.reserve_oil_second);
  read_vec(in, bank.reserve_gas_second);
  read_vec(in, bank.npv_second);
  read_vec(in, bank.contrib_second);
  read_vec(in, bank.npv_second_mean);
  read_vec(in, bank.contrib_second_mean);
  if (!in) {
    throw std::runtime_error("truncated bank file: " + path);
  }
  return bank;
}

}  // namespace exsel
