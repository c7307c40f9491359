#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "exsel/catalog.hpp"

namespace exsel {

// Pre-sampled uncertainty for one catalog: success uniforms, realized
// reserves, indicator contributions, and success-state NPVs for every
// project and realization. First-stage quantities are realized once per
// scenario s; second-stage quantities once per (s, k). The bank is a pure
// function of (catalog, seed, S, K) and is immutable once built, so all
// candidate portfolios are priced against exactly the same draws.
class ScenarioBank {
 public:
  std::uint64_t seed = 0;
  std::uint64_t catalog_hash = 0;
  int scenario_count = 0;     // S
  int subscenario_count = 0;  // K
  int first_count = 0;        // |I|
  int second_count = 0;       // |J|

  // First stage, laid out [i * S + s].
  std::vector<double> u_first;         // U_i^s
  std::vector<std::uint8_t> success_first;  // xi_i^s = 1{U <= p0}
  std::vector<double> reserve_oil_first;
  std::vector<double> reserve_gas_first;
  std::vector<double> npv_first;       // V_i^s
  std::vector<double> contrib_first;   // [(i*S+s)*6 + m]

  // Second stage, laid out [(j * S + s) * K + k].
  std::vector<double> u_second;        // U_j^{s,k}
  std::vector<double> reserve_oil_second;
  std::vector<double> reserve_gas_second;
  std::vector<double> npv_second;      // V_j^{s,k}
  std::vector<double> contrib_second;  // [((j*S+s)*K+k)*6 + m]

  // Per (j, s) means over k, precomputed for the recourse value model.
  std::vector<double> npv_second_mean;      // [j*S+s]
  std::vector<double> contrib_second_mean;  // [(j*S+s)*6 + m]

  std::size_t first_at(int i, int s) const {
    return static_cast<std::size_t>(i) * scenario_count + s;
  }
  std::size_t second_at(int j, int s, int k) const {
    return (static_cast<std::size_t>(j) * scenario_count + s) *
               subscenario_count +
           k;
  }
  std::size_t second_js(int j, int s) const {
    return static_cast<std::size_t>(j) * scenario_count + s;
  }

  void save_file(const std::string& path) const;
  static ScenarioBank load_file(const std::string& path);
};

// Builds the complete bank. Throws std::invalid_argument when S <= 0,
// K <= 0, or the catalog fails validation. Deterministic: identical inputs
// give byte-identical banks regardless of thread count.
ScenarioBank build_bank(const Catalog& catalog, std::uint64_t seed, int S,
                        int K, int threads = 1);

}  // namespace exsel
