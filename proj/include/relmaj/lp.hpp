#ifndef RELMAJ_LP_HPP
#define RELMAJ_LP_HPP

#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

#include "relmaj/rational.hpp"

namespace relmaj {

enum class Relation { Eq, Le, Ge };

struct LinearConstraint {
  std::vector<Rational> coeffs;
  Relation rel;
  Rational rhs;
};

/// Linear program over exact rationals. All variables are nonnegative.
/// Decisions need feasibility only; an optional linear objective (minimize)
/// exists as the oracle for Frank–Wolfe refinement.
class LpProblem {
 public:
  explicit LpProblem(std::size_t num_vars);

  std::size_t num_vars() const { return num_vars_; }
  void add_eq(std::vector<Rational> coeffs, Rational rhs);
  void add_le(std::vector<Rational> coeffs, Rational rhs);
  void add_ge(std::vector<Rational> coeffs, Rational rhs);
  void set_objective(std::vector<Rational> coeffs);

  const std::vector<LinearConstraint>& constraints() const { return constraints_; }
  const std::optional<std::vector<Rational>>& objective() const { return objective_; }

 private:
  void add(std::vector<Rational> coeffs, Relation rel, Rational rhs);
  std::size_t num_vars_;
  std::vector<LinearConstraint> constraints_;
  std::optional<std::vector<Rational>> objective_;
};

struct LpOutcome {
  enum class Status { Feasible, Infeasible, Optimal, Unbounded };
  Status status = Status::Infeasible;
  std::vector<Rational> assignment;  // satisfies every constraint exactly when feasible
  Rational objective_value;          // meaningful when Optimal

  bool feasible() const { return status == Status::Feasible || status == Status::Optimal; }
};

/// Phase-1 exact simplex with Bland's anti-cycling rule.
LpOutcome lp_feasible(const LpProblem& problem);

/// Two-phase exact simplex; requires an objective.
LpOutcome lp_minimize(const LpProblem& problem);

namespace detail {
class Simplex;
}

/// Repeated minimization over one fixed feasible region (the linear oracle
/// of Frank–Wolfe): phase 1 runs once, each new objective re-optimizes from
/// the previous optimal basis.
class LpOracle {
 public:
  explicit LpOracle(const LpProblem& problem);
  ~LpOracle();
  LpOracle(LpOracle&&) noexcept;
  LpOracle& operator=(LpOracle&&) noexcept;

  bool feasible() const { return feasible_; }
  /// Basic feasible point found by phase 1 (empty when infeasible).
  const std::vector<Rational>& initial_point() const { return initial_; }
  /// Minimizes c·x over the region; `objective` has one entry per variable.
  LpOutcome minimize(const std::vector<Rational>& objective);

 private:
  std::unique_ptr<detail::Simplex> simplex_;
  std::vector<Rational> initial_;
  bool feasible_ = false;
  std::size_t num_vars_ = 0;
};

}  // namespace relmaj

#endif
