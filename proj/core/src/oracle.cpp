#include "rig/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "rig/errors.hpp"
#include "rig/objectives.hpp"

namespace rig {

namespace {

constexpr int kMaxEnumeratedGround = 16;
constexpr int kMaxLemmaGround = 12;
constexpr double kLemmaSlack = 1e-9;

std::string mask_str(RobotMask m) {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (int id : mask_ids(m)) {
    if (!first) os << ",";
    os << id;
    first = false;
  }
  os << "}";
  return os.str();
}

}  // namespace

EnumeratedSetFunction::EnumeratedSetFunction(int n, std::vector<double> table)
    : n_(n), table_(std::move(table)) {
  if (n < 0 || n > kMaxEnumeratedGround) {
    throw EnumerationGuardError("EnumeratedSetFunction: ground set size exceeds 16");
  }
  if (table_.size() != (std::size_t{1} << n)) {
    throw DimensionError("EnumeratedSetFunction: table size must be 2^n");
  }
  if (table_[0] != 0.0) {
    throw DimensionError("EnumeratedSetFunction: value at the empty set must be zero");
  }
  for (double v : table_) {
    if (!std::isfinite(v)) throw DimensionError("EnumeratedSetFunction: non-finite entry");
  }
}

EnumeratedSetFunction EnumeratedSetFunction::tabulate(const SetFunction& f) {
  const int n = f.ground_size();
  if (n > kMaxEnumeratedGround) {
    throw EnumerationGuardError("tabulate: ground set size exceeds 16");
  }
  std::vector<double> table(std::size_t{1} << n);
  for (RobotMask m = 0; m < table.size(); ++m) table[m] = f.value(m);
  return EnumeratedSetFunction(n, std::move(table));
}

bool is_monotone(const SetFunction& f, double tol) {
  const int n = f.ground_size();
  if (n > kMaxEnumeratedGround) {
    throw EnumerationGuardError("is_monotone: ground set size exceeds 16");
  }
  const RobotMask all = full_mask(n);
  for (RobotMask s = 0; s <= all; ++s) {
    const double base = f.value(s);
    for (int v = 0; v < n; ++v) {
      if (mask_contains(s, v)) continue;
      if (f.value(mask_with(s, v)) < base - tol) return false;
    }
    if (s == all) break;
  }
  return true;
}

bool is_submodular(const SetFunction& f, double tol) {
  // Pairwise local characterization: f(S+u) + f(S+v) >= f(S+u+v) + f(S).
  const int n = f.ground_size();
  if (n > kMaxEnumeratedGround) {
    throw EnumerationGuardError("is_submodular: ground set size exceeds 16");
  }
  const RobotMask all = full_mask(n);
  for (RobotMask s = 0; s <= all; ++s) {
    for (int u = 0; u < n; ++u) {
      if (mask_contains(s, u)) continue;
      for (int v = u + 1; v < n; ++v) {
        if (mask_contains(s, v)) continue;
        const double lhs = f.value(mask_with(s, u)) + f.value(mask_with(s, v));
        const double rhs = f.value(mask_with(mask_with(s, u), v)) + f.value(s);
        if (lhs < rhs - tol) return false;
      }
    }
    if (s == all) break;
  }
  return true;
}

AttackReport worst_case_attack(const SetFunction& f, int alpha) {
  const int n = f.ground_size();
  if (n > kMaxEnumeratedGround) {
    throw EnumerationGuardError("worst_case_attack: ground set size exceeds 16");
  }
  if (alpha < 0) throw DimensionError("worst_case_attack: alpha must be >= 0");

  // Among equally damaging removals the attacker spends its whole budget
  // (for a monotone view a size-alpha minimizer always exists), then ties
  // break toward the smallest bitmask.
  const RobotMask all = full_mask(n);
  AttackReport best;
  best.degraded_value = std::numeric_limits<double>::infinity();
  int best_size = -1;
  for (RobotMask a = 0; a <= all; ++a) {
    const int size = mask_size(a);
    if (size > alpha) {
      if (a == all) break;
      continue;
    }
    const double v = f.value(all & ~a);
    if (v < best.degraded_value || (v == best.degraded_value && size > best_size)) {
      best.degraded_value = v;
      best.attacked = a;
      best_size = size;
    }
    if (a == all) break;
  }
  return best;
}

AttackReport greedy_attack(const SetFunction& f, int alpha) {
  const int n = f.ground_size();
  RobotMask remaining = full_mask(n);
  AttackReport report;
  report.degraded_value = f.value(remaining);
  for (int k = 0; k < std::min(alpha, n); ++k) {
    int best_id = -1;
    double best_value = std::numeric_limits<double>::infinity();
    for (int v = 0; v < n; ++v) {
      if (!mask_contains(remaining, v)) continue;
      const double val = f.value(mask_without(remaining, v));
      if (val < best_value) {
        best_value = val;
        best_id = v;
      }
    }
    remaining = mask_without(remaining, best_id);
    report.attacked = mask_with(report.attacked, best_id);
    report.degraded_value = best_value;
  }
  return report;
}

MaxMinResult exhaustive_maxmin(const Scenario& scenario, int alpha) {
  const int n = scenario.num_robots();
  const int horizon = scenario.horizon;
  const std::size_t num_controls = scenario.control_set.size();
  if (n > 3 || horizon > 2 || num_controls > 3) {
    throw EnumerationGuardError("exhaustive_maxmin: desk-scale guard (|V|<=3, T<=2, |U|<=3)");
  }
  if (alpha < 0 || alpha > n) throw DimensionError("exhaustive_maxmin: alpha must be in [0, n]");

  std::vector<std::size_t> digits(static_cast<std::size_t>(n) * horizon, 0);
  MaxMinResult best;
  best.value = -std::numeric_limits<double>::infinity();
  bool more = true;
  while (more) {
    PlanSet plans;
    for (int r = 0; r < n; ++r) {
      ControlSequence seq;
      seq.reserve(horizon);
      for (int t = 0; t < horizon; ++t) {
        seq.push_back(scenario.control_set[digits[static_cast<std::size_t>(r) * horizon + t]]);
      }
      plans.sequences[r] = std::move(seq);
    }
    const SetFunctionView view(scenario, plans);
    const double inner = worst_case_attack(view, alpha).degraded_value;
    if (inner > best.value) {
      best.value = inner;
      best.plans = std::move(plans);
    }
    // Odometer, last position fastest.
    more = false;
    for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
      if (++*it < num_controls) {
        more = true;
        break;
      }
      *it = 0;
    }
  }
  return best;
}

double curvature(const EnumeratedSetFunction& f) {
  if (!is_monotone(f)) throw NotInClassError("curvature: function is not non-decreasing");
  if (!is_submodular(f)) throw NotInClassError("curvature: function is not submodular");
  const int n = f.ground_size();
  const RobotMask all = full_mask(n);
  double min_ratio = std::numeric_limits<double>::infinity();
  for (int v = 0; v < n; ++v) {
    const double singleton = f.value(mask_with(0, v));
    if (singleton == 0.0) {
      throw NotInClassError("curvature: zero singleton value (definition requires g(v) != 0)");
    }
    min_ratio = std::min(min_ratio, (f.value(all) - f.value(mask_without(all, v))) / singleton);
  }
  return std::clamp(1.0 - min_ratio, 0.0, 1.0);
}

double total_curvature(const EnumeratedSetFunction& f) {
  if (!is_monotone(f)) throw NotInClassError("total_curvature: function is not non-decreasing");
  const int n = f.ground_size();
  double min_ratio = std::numeric_limits<double>::infinity();
  for (int v = 0; v < n; ++v) {
    const RobotMask rest = mask_without(full_mask(n), v);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    // Marginals of v against every subset of V \ {v}; the binding ratio for
    // v is their minimum over their maximum.
    RobotMask a = 0;
    while (true) {
      const double marginal = f.value(mask_with(a, v)) - f.value(a);
      lo = std::min(lo, marginal);
      hi = std::max(hi, marginal);
      if (a == rest) break;
      a = (a - rest) & rest;
    }
    if (hi < 0.0) {
      throw UndefinedCurvatureError(
          "total_curvature: every marginal of an element is negative");
    }
    if (hi == 0.0) continue;  // all-zero marginals (0/0): no constraint from v
    min_ratio = std::min(min_ratio, std::max(lo, 0.0) / hi);
  }
  if (min_ratio == std::numeric_limits<double>::infinity()) return 0.0;  // identically zero
  return std::clamp(1.0 - min_ratio, 0.0, 1.0);
}

bool LemmaReport::all_passed() const {
  return std::all_of(results.begin(), results.end(),
                     [](const LemmaResult& r) { return r.status == LemmaStatus::Pass; });
}

namespace {

double singleton_sum(const EnumeratedSetFunction& f, RobotMask m) {
  double s = 0.0;
  for (int id : mask_ids(m)) s += f.value(mask_with(0, id));
  return s;
}

LemmaResult check_singleton_sum_lower(const EnumeratedSetFunction& f, bool submodular) {
  LemmaResult res{"singleton_sum_lower", LemmaStatus::Pass, ""};
  if (!submodular) {
    res.status = LemmaStatus::NotInClass;
    res.detail = "requires a non-decreasing submodular function";
    return res;
  }
  double kappa = 0.0;
  try {
    kappa = curvature(f);
  } catch (const NotInClassError& e) {
    res.status = LemmaStatus::NotInClass;
    res.detail = e.what();
    return res;
  }
  const RobotMask all = full_mask(f.ground_size());
  for (RobotMask a = 0;; ++a) {
    if (f.value(a) < (1.0 - kappa) * singleton_sum(f, a) - kLemmaSlack) {
      res.status = LemmaStatus::Fail;
      res.detail = "A=" + mask_str(a);
      return res;
    }
    if (a == all) break;
  }
  return res;
}

LemmaResult check_dominated_marginal(const EnumeratedSetFunction& f, bool submodular) {
  LemmaResult res{"dominated_marginal", LemmaStatus::Pass, ""};
  if (!submodular) {
    res.status = LemmaStatus::NotInClass;
    res.detail = "requires a non-decreasing submodular function";
    return res;
  }
  const int n = f.ground_size();
  const RobotMask all = full_mask(n);
  std::vector<double> singles(n);
  for (int v = 0; v < n; ++v) singles[v] = f.value(mask_with(0, v));

  for (RobotMask y = 1; y <= all; ++y) {
    double y_min = std::numeric_limits<double>::infinity();
    for (int v : mask_ids(y)) y_min = std::min(y_min, singles[v]);
    for (RobotMask p = 1; p <= all; ++p) {
      double p_max = -std::numeric_limits<double>::infinity();
      for (int v : mask_ids(p)) p_max = std::max(p_max, singles[v]);
      if (y_min < p_max) continue;  // side condition f(y) >= f(p) fails
      const double marginal = f.value(p | y) - f.value(y);
      if (marginal > static_cast<double>(mask_size(p)) * f.value(y) + kLemmaSlack) {
        res.status = LemmaStatus::Fail;
        res.detail = "P=" + mask_str(p) + " Y=" + mask_str(y);
        return res;
      }
      if (p == all) break;
    }
    if (y == all) break;
  }
  return res;
}

LemmaResult check_disjoint_union_lower(const EnumeratedSetFunction& f, double c) {
  LemmaResult res{"disjoint_union_lower", LemmaStatus::Pass, ""};
  const RobotMask all = full_mask(f.ground_size());
  for (RobotMask a = 0;; ++a) {
    const RobotMask rest = all & ~a;
    RobotMask b = 0;
    while (true) {
      if (f.value(a | b) < (1.0 - c) * (f.value(a) + singleton_sum(f, b)) - kLemmaSlack) {
        res.status = LemmaStatus::Fail;
        res.detail = "A=" + mask_str(a) + " B=" + mask_str(b);
        return res;
      }
      if (b == rest) break;
      b = (b - rest) & rest;
    }
    if (a == all) break;
  }
  return res;
}

LemmaResult check_scaled_submodularity(const EnumeratedSetFunction& f, double c) {
  LemmaResult res{"scaled_submodularity", LemmaStatus::Pass, ""};
  const RobotMask all = full_mask(f.ground_size());
  for (RobotMask a = 0;; ++a) {
    for (RobotMask b = 0;; ++b) {
      if ((a & ~b) != 0) {  // requires A \ B nonempty
        const double lhs = f.value(a) + (1.0 - c) * f.value(b);
        const double rhs = (1.0 - c) * f.value(a | b) + f.value(a & b);
        if (lhs < rhs - kLemmaSlack) {
          res.status = LemmaStatus::Fail;
          res.detail = "A=" + mask_str(a) + " B=" + mask_str(b);
          return res;
        }
      }
      if (b == all) break;
    }
    if (a == all) break;
  }
  return res;
}

LemmaResult check_singleton_union_lower(const EnumeratedSetFunction& f, double c) {
  LemmaResult res{"singleton_union_lower", LemmaStatus::Pass, ""};
  const RobotMask all = full_mask(f.ground_size());
  for (RobotMask a = 0;; ++a) {
    const RobotMask rest = all & ~a;
    RobotMask b = 0;
    while (true) {
      if (f.value(a) + singleton_sum(f, b) < (1.0 - c) * f.value(a | b) - kLemmaSlack) {
        res.status = LemmaStatus::Fail;
        res.detail = "A=" + mask_str(a) + " B=" + mask_str(b);
        return res;
      }
      if (b == rest) break;
      b = (b - rest) & rest;
    }
    if (a == all) break;
  }
  return res;
}

}  // namespace

LemmaReport check_lemmas(const EnumeratedSetFunction& f) {
  if (f.ground_size() > kMaxLemmaGround) {
    throw EnumerationGuardError("check_lemmas: ground set size exceeds 12");
  }
  LemmaReport report;
  const bool monotone = is_monotone(f);
  if (!monotone) {
    for (const char* name : {"singleton_sum_lower", "dominated_marginal", "disjoint_union_lower", "scaled_submodularity", "singleton_union_lower"}) {
      report.results.push_back(
          {name, LemmaStatus::NotInClass, "requires a non-decreasing function"});
    }
    return report;
  }
  const bool submodular = is_submodular(f);

  report.results.push_back(check_singleton_sum_lower(f, submodular));
  report.results.push_back(check_dominated_marginal(f, submodular));

  bool have_c = true;
  double c = 0.0;
  std::string c_error;
  try {
    c = total_curvature(f);
  } catch (const UndefinedCurvatureError& e) {
    have_c = false;
    c_error = e.what();
  }
  if (have_c) {
    report.results.push_back(check_disjoint_union_lower(f, c));
    report.results.push_back(check_scaled_submodularity(f, c));
    report.results.push_back(check_singleton_union_lower(f, c));
  } else {
    for (const char* name : {"disjoint_union_lower", "scaled_submodularity", "singleton_union_lower"}) {
      report.results.push_back({name, LemmaStatus::NotInClass, c_error});
    }
  }
  return report;
}

}  // namespace rig
