#include <cmath>

#include "doctest.h"

#include "rig/bounds.hpp"
#include "rig/errors.hpp"
#include "rig/objectives.hpp"
#include "rig/oracle.hpp"
#include "rig/random.hpp"

using namespace rig;

namespace {

EnumeratedSetFunction from_table(int n, std::vector<double> t) {
  return EnumeratedSetFunction(n, std::move(t));
}

// f(S) = min(|S|, 1) on n = 3.
EnumeratedSetFunction capped_cardinality3() {
  std::vector<double> t(8);
  for (RobotMask m = 0; m < 8; ++m) t[m] = std::min(mask_size(m), 1);
  return from_table(3, std::move(t));
}

}  // namespace

TEST_CASE("enumerated set function invariants") {
  CHECK_THROWS_AS(from_table(1, {0.5, 1.0}), DimensionError);         // f(empty) != 0
  CHECK_THROWS_AS(from_table(2, {0.0, 1.0}), DimensionError);         // wrong table size
  CHECK_THROWS_AS(from_table(1, {0.0, std::nan("")}), DimensionError);

  struct Big : SetFunction {
    int ground_size() const override { return 17; }
    double value(RobotMask) const override { return 0.0; }
  };
  CHECK_THROWS_AS(EnumeratedSetFunction::tabulate(Big{}), EnumerationGuardError);
}

TEST_CASE("monotonicity and submodularity checks") {
  RandomStream rng(59, "classes");
  for (int i = 0; i < 20; ++i) {
    const auto cover = random_coverage_function(5, rng);
    CHECK(is_monotone(cover));
    CHECK(is_submodular(cover));
    const auto lattice = random_monotone_lattice_function(5, rng);
    CHECK(is_monotone(lattice));
  }
  // |S|^2 is supermodular, not submodular.
  std::vector<double> sq(8);
  for (RobotMask m = 0; m < 8; ++m) sq[m] = mask_size(m) * mask_size(m);
  const auto f = from_table(3, std::move(sq));
  CHECK(is_monotone(f));
  CHECK_FALSE(is_submodular(f));
}

TEST_CASE("worst-case attack enumeration") {
  RandomStream rng(61, "attack");

  SUBCASE("alpha = 0 keeps everything") {
    const auto f = random_coverage_function(4, rng);
    const AttackReport rep = worst_case_attack(f, 0);
    CHECK(rep.attacked == 0);
    CHECK(rep.degraded_value == f.value(full_mask(4)));
  }

  SUBCASE("monotone functions lose exactly alpha robots; value non-increasing in alpha") {
    for (int i = 0; i < 20; ++i) {
      const auto f = random_coverage_function(4, rng);
      double prev = std::numeric_limits<double>::infinity();
      for (int alpha = 0; alpha <= 4; ++alpha) {
        const AttackReport rep = worst_case_attack(f, alpha);
        CHECK(mask_size(rep.attacked) == alpha);
        CHECK(rep.degraded_value <= prev + 1e-12);
        prev = rep.degraded_value;
      }
    }
  }

  SUBCASE("identical robots: smallest-bitmask tie break") {
    std::vector<double> t(8);
    for (RobotMask m = 0; m < 8; ++m) t[m] = mask_size(m);
    const auto f = from_table(3, std::move(t));
    const AttackReport rep = worst_case_attack(f, 1);
    CHECK(rep.attacked == RobotMask{1});
    CHECK(rep.degraded_value == 2.0);
  }

  SUBCASE("enumeration guard") {
    struct Big : SetFunction {
      int ground_size() const override { return 17; }
      double value(RobotMask) const override { return 0.0; }
    };
    CHECK_THROWS_AS(worst_case_attack(Big{}, 1), EnumerationGuardError);
  }
}

TEST_CASE("greedy attack agrees with the oracle on submodular instances of size 4") {
  RandomStream rng(67, "greedy-attack");
  for (int i = 0; i < 20; ++i) {
    const auto f = random_coverage_function(4, rng);
    const AttackReport greedy = greedy_attack(f, 1);
    const AttackReport exact = worst_case_attack(f, 1);
    CHECK(greedy.degraded_value == exact.degraded_value);  // single removal is exact
  }
}

TEST_CASE("exhaustive max-min oracle") {
  RandomStream rng(71, "maxmin");
  Scenario s = random_desk_scenario(rng);

  SUBCASE("alpha = |V| collapses to zero") {
    const MaxMinResult mm = exhaustive_maxmin(s, s.num_robots());
    CHECK(mm.value == 0.0);
  }

  SUBCASE("alpha = 0 equals the joint maximum, cross-checked in reversed order") {
    const MaxMinResult mm = exhaustive_maxmin(s, 0);

    // Second, independent enumeration in reversed control order.
    const int n = s.num_robots();
    const std::size_t num_controls = s.control_set.size();
    std::vector<std::size_t> digits(static_cast<std::size_t>(n) * s.horizon, 0);
    double best = -std::numeric_limits<double>::infinity();
    bool more = true;
    while (more) {
      PlanSet plans;
      for (int r = 0; r < n; ++r) {
        ControlSequence seq;
        for (int t = 0; t < s.horizon; ++t) {
          const std::size_t digit = digits[static_cast<std::size_t>(r) * s.horizon + t];
          seq.push_back(s.control_set[num_controls - 1 - digit]);  // reversed
        }
        plans.sequences[r] = std::move(seq);
      }
      const SetFunctionView view(s, plans);
      best = std::max(best, view.value(full_mask(n)));
      more = false;
      for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
        if (++*it < num_controls) {
          more = true;
          break;
        }
        *it = 0;
      }
    }
    CHECK(mm.value == best);
  }

  SUBCASE("guards fail loudly") {
    Scenario big = s;
    big.robot_starts.resize(4, s.robot_starts.front());
    CHECK_THROWS_AS(exhaustive_maxmin(big, 1), EnumerationGuardError);
    Scenario long_horizon = s;
    long_horizon.horizon = 3;
    CHECK_THROWS_AS(exhaustive_maxmin(long_horizon, 1), EnumerationGuardError);
  }
}

TEST_CASE("curvature on reference functions") {
  RandomStream rng(73, "curv");

  SUBCASE("modular functions have zero curvature") {
    const auto f = random_modular_function(4, rng);
    CHECK(curvature(f) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(total_curvature(f) == doctest::Approx(0.0).epsilon(1e-12));
  }

  SUBCASE("capped cardinality has curvature one") {
    CHECK(curvature(capped_cardinality3()) == 1.0);
  }

  SUBCASE("sqrt cardinality") {
    std::vector<double> t(8);
    for (RobotMask m = 0; m < 8; ++m) t[m] = std::sqrt(static_cast<double>(mask_size(m)));
    const auto f = from_table(3, std::move(t));
    const double expected = 1.0 - (std::sqrt(3.0) - std::sqrt(2.0));
    CHECK(std::abs(curvature(f) - expected) < 1e-12);
  }

  SUBCASE("rejects non-submodular and zero-singleton inputs") {
    std::vector<double> sq(8);
    for (RobotMask m = 0; m < 8; ++m) sq[m] = mask_size(m) * mask_size(m);
    CHECK_THROWS_AS(curvature(from_table(3, std::move(sq))), NotInClassError);

    std::vector<double> dead{0.0, 0.0, 1.0, 1.0};  // f({0}) = 0
    CHECK_THROWS_AS(curvature(from_table(2, std::move(dead))), NotInClassError);

    std::vector<double> dec{0.0, 1.0, 1.0, 0.5};  // decreasing
    CHECK_THROWS_AS(curvature(from_table(2, std::move(dec))), NotInClassError);
    std::vector<double> dec2{0.0, 1.0, 1.0, 0.5};
    CHECK_THROWS_AS(total_curvature(from_table(2, std::move(dec2))), NotInClassError);
  }
}

TEST_CASE("total curvature by brute-force triple enumeration") {
  SUBCASE("supermodular |S|^2 shifted to f(empty) = 0") {
    std::vector<double> sq(8);
    for (RobotMask m = 0; m < 8; ++m) sq[m] = mask_size(m) * mask_size(m);
    const auto f = from_table(3, std::move(sq));

    // Independent triple enumeration of Definition 4's ratio.
    double min_ratio = std::numeric_limits<double>::infinity();
    for (int v = 0; v < 3; ++v) {
      for (RobotMask a = 0; a < 8; ++a) {
        if (mask_contains(a, v)) continue;
        for (RobotMask b = 0; b < 8; ++b) {
          if (mask_contains(b, v)) continue;
          const double num = f.value(mask_with(a, v)) - f.value(a);
          const double den = f.value(mask_with(b, v)) - f.value(b);
          if (den == 0.0) continue;
          min_ratio = std::min(min_ratio, num / den);
        }
      }
    }
    CHECK(total_curvature(f) == doctest::Approx(1.0 - min_ratio).epsilon(1e-15));
    CHECK(total_curvature(f) == doctest::Approx(0.8).epsilon(1e-15));
  }

  SUBCASE("coincides with curvature on random monotone submodular instances") {
    RandomStream rng(79, "c-eq-k");
    for (int i = 0; i < 50; ++i) {
      const auto f = random_coverage_function(5, rng);
      CHECK(std::abs(curvature(f) - total_curvature(f)) <= 1e-12);
    }
  }

  SUBCASE("an element with all-zero marginals imposes no constraint") {
    // Element 1 never contributes; curvature is driven by elements 0 and 2.
    std::vector<double> t(8, 0.0);
    for (RobotMask m = 0; m < 8; ++m) {
      t[m] = (mask_contains(m, 0) ? 1.0 : 0.0) + (mask_contains(m, 2) ? 1.0 : 0.0);
    }
    const auto f = from_table(3, std::move(t));
    CHECK(total_curvature(f) == doctest::Approx(0.0).epsilon(1e-15));
  }
}

TEST_CASE("lemma checks") {
  RandomStream rng(83, "lemmas");

  SUBCASE("modular functions pass everything") {
    const auto f = random_modular_function(5, rng);
    const LemmaReport rep = check_lemmas(f);
    CHECK(rep.results.size() == 5);
    CHECK(rep.all_passed());
  }

  SUBCASE("random monotone submodular instances pass everything") {
    for (int i = 0; i < 50; ++i) {
      const auto f = random_coverage_function(5, rng);
      const LemmaReport rep = check_lemmas(f);
      for (const auto& r : rep.results) {
        INFO(r.name, " ", r.detail);
        CHECK(r.status == LemmaStatus::Pass);
      }
    }
  }

  SUBCASE("monotone non-submodular instances pass the total-curvature lemmas") {
    for (int i = 0; i < 20; ++i) {
      const auto f = random_monotone_lattice_function(5, rng);
      const LemmaReport rep = check_lemmas(f);
      for (const auto& r : rep.results) {
        if (r.name == "singleton_sum_lower" || r.name == "dominated_marginal") continue;  // may be out of class
        INFO(r.name, " ", r.detail);
        CHECK(r.status == LemmaStatus::Pass);
      }
    }
  }

  SUBCASE("a non-monotone function is rejected before any lemma runs") {
    std::vector<double> dec{0.0, 1.0, 1.0, 0.5};
    const LemmaReport rep = check_lemmas(from_table(2, std::move(dec)));
    for (const auto& r : rep.results) CHECK(r.status == LemmaStatus::NotInClass);
  }

  SUBCASE("ground-set guard") {
    struct Wide : SetFunction {
      int ground_size() const override { return 13; }
      double value(RobotMask m) const override { return static_cast<double>(mask_size(m)); }
    };
    CHECK_THROWS_AS(check_lemmas(EnumeratedSetFunction::tabulate(Wide{})),
                    EnumerationGuardError);
  }
}
