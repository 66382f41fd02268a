#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "relmaj/lp.hpp"
#include "relmaj/majorize.hpp"
#include "test_support.hpp"

using namespace relmaj;
using testsupport::rng;

namespace {

// re-checks an assignment against every constraint, exactly
bool satisfies(const LpProblem& lp, const std::vector<Rational>& x) {
  for (const auto& v : x)
    if (v.sign() < 0) return false;
  for (const auto& c : lp.constraints()) {
    Rational lhs(0);
    for (std::size_t j = 0; j < x.size(); ++j) lhs += c.coeffs[j] * x[j];
    switch (c.rel) {
      case Relation::Eq: if (!(lhs == c.rhs)) return false; break;
      case Relation::Le: if (!(lhs <= c.rhs)) return false; break;
      case Relation::Ge: if (!(lhs >= c.rhs)) return false; break;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("trivial feasibility and infeasibility") {
  {
    LpProblem lp(1);
    lp.add_eq({Rational(1)}, Rational(1));
    LpOutcome out = lp_feasible(lp);
    REQUIRE(out.feasible());
    CHECK(out.assignment[0] == Rational(1));
  }
  {
    LpProblem lp(1);
    lp.add_le({Rational(1)}, Rational(-1));  // x >= 0 and x <= -1
    CHECK_FALSE(lp_feasible(lp).feasible());
  }
  {
    LpProblem lp(2);
    lp.add_ge({Rational(1), Rational(1)}, Rational(1));
    lp.add_le({Rational(1), Rational(1)}, Rational(2));
    LpOutcome out = lp_feasible(lp);
    REQUIRE(out.feasible());
    CHECK(satisfies(lp, out.assignment));
  }
}

TEST_CASE("Birkhoff-polytope feasibility matches the majorization witness") {
  // D x = y for x = (3/5, 2/5), y = (1/2, 1/2), D doubly stochastic
  std::vector<Rational> x{Rational(3, 5), Rational(2, 5)}, y{Rational(1, 2), Rational(1, 2)};
  LpProblem lp(4);  // D[j][i] row-major
  for (std::size_t i = 0; i < 2; ++i) {
    std::vector<Rational> col(4, Rational(0)), row(4, Rational(0));
    col[0 * 2 + i] = Rational(1); col[1 * 2 + i] = Rational(1);
    lp.add_eq(col, Rational(1));
    row[i * 2 + 0] = Rational(1); row[i * 2 + 1] = Rational(1);
    lp.add_eq(row, Rational(1));
  }
  for (std::size_t j = 0; j < 2; ++j) {
    std::vector<Rational> c(4, Rational(0));
    c[j * 2 + 0] = x[0];
    c[j * 2 + 1] = x[1];
    lp.add_eq(c, y[j]);
  }
  LpOutcome out = lp_feasible(lp);
  REQUIRE(out.feasible());
  CHECK(satisfies(lp, out.assignment));

  auto witness = construct_doubly_stochastic(Distribution::from_rationals(x),
                                             Distribution::from_rationals(y));
  CHECK(witness.matrix.entry(0, 0).rational() == Rational(1, 2));
}

TEST_CASE("degenerate and redundant constraint systems") {
  LpProblem lp(2);
  lp.add_eq({Rational(1), Rational(1)}, Rational(1));
  lp.add_eq({Rational(2), Rational(2)}, Rational(2));  // redundant copy
  lp.add_eq({Rational(1), Rational(0)}, Rational(1));  // pins x0, x1 = 0
  LpOutcome out = lp_feasible(lp);
  REQUIRE(out.feasible());
  CHECK(out.assignment[0] == Rational(1));
  CHECK(out.assignment[1] == Rational(0));
}

TEST_CASE("phase-2 minimization finds vertices and detects unboundedness") {
  {
    LpProblem lp(2);
    lp.add_ge({Rational(1), Rational(1)}, Rational(1));
    lp.set_objective({Rational(3), Rational(1)});
    LpOutcome out = lp_minimize(lp);
    REQUIRE(out.status == LpOutcome::Status::Optimal);
    CHECK(out.objective_value == Rational(1));
    CHECK(out.assignment[0] == Rational(0));
    CHECK(out.assignment[1] == Rational(1));
  }
  {
    LpProblem lp(2);
    lp.add_ge({Rational(1), Rational(0)}, Rational(1));
    lp.set_objective({Rational(1), Rational(-1)});  // x1 free to grow
    CHECK(lp_minimize(lp).status == LpOutcome::Status::Unbounded);
  }
  {
    LpProblem lp(2);
    lp.add_le({Rational(1), Rational(1)}, Rational(-3));
    lp.set_objective({Rational(1), Rational(1)});
    CHECK(lp_minimize(lp).status == LpOutcome::Status::Infeasible);
  }
}

TEST_CASE("random transportation polytopes: feasible assignments verify exactly") {
  auto g = rng(41);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t rows = 2 + static_cast<std::size_t>(trial % 3);
    std::size_t cols = 2 + static_cast<std::size_t>((trial / 2) % 3);
    Distribution a = testsupport::random_rational_distribution(g, rows, true);
    Distribution b = testsupport::random_rational_distribution(g, cols, true);
    LpProblem lp(rows * cols);
    for (std::size_t r = 0; r < rows; ++r) {
      std::vector<Rational> c(rows * cols, Rational(0));
      for (std::size_t s = 0; s < cols; ++s) c[r * cols + s] = Rational(1);
      lp.add_eq(std::move(c), a[r].rational());
    }
    for (std::size_t s = 0; s < cols; ++s) {
      std::vector<Rational> c(rows * cols, Rational(0));
      for (std::size_t r = 0; r < rows; ++r) c[r * cols + s] = Rational(1);
      lp.add_eq(std::move(c), b[s].rational());
    }
    LpOutcome out = lp_feasible(lp);
    REQUIRE(out.feasible());  // marginal polytope is never empty
    CHECK(satisfies(lp, out.assignment));

    // minimize a random linear cost; optimum must also satisfy everything
    std::uniform_int_distribution<long> cost(-5, 5);
    std::vector<Rational> obj;
    for (std::size_t i = 0; i < rows * cols; ++i) obj.emplace_back(cost(g));
    lp.set_objective(obj);
    LpOutcome opt = lp_minimize(lp);
    REQUIRE(opt.status == LpOutcome::Status::Optimal);
    CHECK(satisfies(lp, opt.assignment));
    Rational val(0);
    for (std::size_t i = 0; i < obj.size(); ++i) val += obj[i] * opt.assignment[i];
    CHECK(val == opt.objective_value);
    // the optimum can never exceed any feasible point's value
    Rational feas_val(0);
    for (std::size_t i = 0; i < obj.size(); ++i) feas_val += obj[i] * out.assignment[i];
    CHECK(opt.objective_value <= feas_val);
  }
}

TEST_CASE("malformed problems are rejected at construction") {
  LpProblem lp(2);
  CHECK_THROWS_AS(lp.add_eq({Rational(1)}, Rational(1)), Error);
  CHECK_THROWS_AS(lp.set_objective({Rational(1)}), Error);
  CHECK_THROWS_AS(LpProblem(0), Error);
  CHECK_THROWS_AS(lp_minimize(lp), Error);  // no objective set
}
