#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rig/oracle.hpp"
#include "rig/random.hpp"
#include "rig/scenario.hpp"

namespace rig {

/// Options for the bound-verification suites driven by `verify-bounds`.
struct BoundsOptions {
  int instances = 100;            ///< per suite family
  std::uint64_t seed = 7;
  std::vector<std::string> suites;  ///< empty = all of attack-bound, descent-bound, cd-optimum, lemmas
  /// Test hook: multiplies every guaranteed ratio, so an inflated run must
  /// produce violations if the harness can detect them at all.
  double inflate_guarantees = 1.0;
};

struct BoundCheckRecord {
  std::string suite;
  std::string instance;
  double achieved = 0.0;
  double guaranteed = 0.0;
  double margin = 0.0;  ///< achieved - guaranteed
  bool pass = true;
  std::vector<std::string> flags;
};

struct BoundsReport {
  std::vector<BoundCheckRecord> checks;

  int violations() const;
  int count(const std::string& suite) const;
  std::string to_json() const;
};

BoundsReport run_bound_suites(const BoundsOptions& options);

/// Desk-scale random instance: |V| in {2,3}, T in {1,2}, |U| <= 3,
/// alpha in {1,2}, exhaustive planner. `label` receives a short description.
Scenario random_desk_scenario(RandomStream& rng, std::string* label = nullptr);

/// Classification of a desk instance over every joint control assignment.
struct InstanceClass {
  bool monotone = true;     ///< every assignment view is non-decreasing
  bool submodular = true;   ///< every assignment view is submodular
  double kappa = 1.0;       ///< max curvature over assignment views (1 when undefined)
  bool kappa_defined = false;
  double total_c = 0.0;     ///< max total curvature over assignment views
  int assignments = 0;
};

InstanceClass classify_instance(const Scenario& scenario);

/// Random set-function generators for the lemma suite.
/// Weighted-coverage functions are monotone submodular with positive
/// singletons by construction; lattice functions are monotone with strictly
/// positive marginals and generally not submodular.
EnumeratedSetFunction random_coverage_function(int n, RandomStream& rng);
EnumeratedSetFunction random_monotone_lattice_function(int n, RandomStream& rng);
EnumeratedSetFunction random_modular_function(int n, RandomStream& rng);

}  // namespace rig
