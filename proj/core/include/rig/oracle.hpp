#pragma once

#include <string>
#include <vector>

#include "rig/plan_set.hpp"
#include "rig/scenario.hpp"
#include "rig/set_function.hpp"

namespace rig {

/// Fully tabulated set function on a ground set of size n <= 16.
/// Requires value(empty) == 0 and finite entries.
class EnumeratedSetFunction final : public SetFunction {
 public:
  EnumeratedSetFunction(int n, std::vector<double> table);

  /// Evaluates every subset of `f`. Guarded at n <= 16.
  static EnumeratedSetFunction tabulate(const SetFunction& f);

  int ground_size() const override { return n_; }
  double value(RobotMask subset) const override { return table_.at(subset); }

 private:
  int n_;
  std::vector<double> table_;
};

bool is_monotone(const SetFunction& f, double tol = 1e-9);
bool is_submodular(const SetFunction& f, double tol = 1e-9);

struct AttackReport {
  RobotMask attacked = 0;       ///< A*, ties broken by smallest bitmask
  double degraded_value = 0.0;  ///< f(V \ A*)
};

/// Exact minimum of f(V \ A) over all |A| <= alpha. Guarded at n <= 16.
AttackReport worst_case_attack(const SetFunction& f, int alpha);

/// Greedy removal heuristic for ground sets beyond the enumeration guard.
AttackReport greedy_attack(const SetFunction& f, int alpha);

struct MaxMinResult {
  double value = 0.0;  ///< J*, the exact value of the max-min problem
  PlanSet plans;       ///< a maximizing joint control assignment
};

/// Exact value of the max-min problem by enumerating every joint control
/// assignment and, per assignment, every removal of at most alpha robots.
/// Desk-scale only: guarded at |V| <= 3, T <= 2, |U| <= 3.
MaxMinResult exhaustive_maxmin(const Scenario& scenario, int alpha);

/// Curvature of a verified non-decreasing submodular function with nonzero
/// singletons; exact, in [0, 1].
double curvature(const EnumeratedSetFunction& f);

/// Total curvature of a verified non-decreasing function, enumerating all
/// (v, A, B) marginal ratios. 0/0 ratios impose no constraint; a nonzero/zero
/// ratio throws UndefinedCurvatureError.
double total_curvature(const EnumeratedSetFunction& f);

enum class LemmaStatus { Pass, Fail, NotInClass };

struct LemmaResult {
  std::string name;
  LemmaStatus status = LemmaStatus::Pass;
  std::string detail;  ///< first counterexample, or the failed hypothesis
};

struct LemmaReport {
  std::vector<LemmaResult> results;
  bool all_passed() const;
};

/// Verifies the curvature inequalities behind the planner guarantees on
/// every quantified subset pair, with 1e-9 slack. Hypothesis checks run
/// first; a function outside a lemma's class reports NotInClass for it.
LemmaReport check_lemmas(const EnumeratedSetFunction& f);

}  // namespace rig
