#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "exsel/types.hpp"

namespace exsel {

// Raised when a catalog document is structurally unreadable (bad JSON, wrong
// value type, unknown enum name). Semantic invariant breaches are reported by
// validate() instead, as data.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Violation {
  std::string project;  // empty for catalog-level breaches
  std::string field;
  std::string message;
};

// Resolved links and triggers of one second-stage project, in dense
// first-stage indices.
struct SecondStageWiring {
  std::vector<int> success_triggers;
  std::vector<int> failure_triggers;
  std::vector<int> unconditional_triggers;
  std::vector<std::pair<int, double>> links;  // (first-stage index, theta)
};

// A full problem instance: projects, information links, eligibility
// triggers, and planning constraints. Immutable after load/finalize; safe to
// share read-only across worker threads.
class Catalog {
 public:
  std::vector<Project> projects;
  std::vector<InfoLink> links;
  std::vector<TriggerSets> triggers;
  PlanningConstraints constraints;

  // Dense index structures built by finalize().
  std::vector<int> first_stage;   // indices into projects, file order
  std::vector<int> second_stage;  // indices into projects, file order
  std::vector<SecondStageWiring> wiring;  // one per second_stage entry

  void finalize();

  // Every invariant breach, with project id and field name. Empty == valid.
  std::vector<Violation> validate() const;

  bool has_project(const std::string& id) const {
    return index_by_id_.count(id) > 0;
  }
  int project_index(const std::string& id) const;

  std::size_t first_count() const noexcept { return first_stage.size(); }
  std::size_t second_count() const noexcept { return second_stage.size(); }

  const Project& first_project(std::size_t i) const {
    return projects[static_cast<std::size_t>(first_stage[i])];
  }
  const Project& second_project(std::size_t j) const {
    return projects[static_cast<std::size_t>(second_stage[j])];
  }

  // FNV-1a hash of the canonical serialized form; identifies the instance in
  // scenario-bank files.
  std::uint64_t hash() const;

  std::string to_json_string(int indent = 2) const;

  static Catalog from_json_string(const std::string& text);
  static Catalog load_file(const std::string& path);
  void save_file(const std::string& path) const;

 private:
  std::unordered_map<std::string, int> index_by_id_;
};

// Product of the five prospect-risking probabilities. Each factor must lie
// in (0, 1]; the result lies in (0, 1].
double prior_pos(const RiskingFactors& factors);

// Throws std::invalid_argument when the catalog has validation breaches;
// used by operations whose precondition is a valid catalog.
void require_valid(const Catalog& catalog);

}  // namespace exsel
