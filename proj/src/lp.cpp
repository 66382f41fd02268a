#include "relmaj/lp.hpp"

#include <string>

#include "relmaj/errors.hpp"

namespace relmaj {

LpProblem::LpProblem(std::size_t num_vars) : num_vars_(num_vars) {
  if (num_vars == 0) throw_error(ErrorKind::InvalidArgument, "LP with no variables");
}

void LpProblem::add(std::vector<Rational> coeffs, Relation rel, Rational rhs) {
  if (coeffs.size() != num_vars_)
    throw_error(ErrorKind::InvalidArgument, "constraint arity " + std::to_string(coeffs.size()) +
                                                " does not match variable count");
  constraints_.push_back({std::move(coeffs), rel, std::move(rhs)});
}

void LpProblem::add_eq(std::vector<Rational> c, Rational b) { add(std::move(c), Relation::Eq, std::move(b)); }
void LpProblem::add_le(std::vector<Rational> c, Rational b) { add(std::move(c), Relation::Le, std::move(b)); }
void LpProblem::add_ge(std::vector<Rational> c, Rational b) { add(std::move(c), Relation::Ge, std::move(b)); }

void LpProblem::set_objective(std::vector<Rational> coeffs) {
  if (coeffs.size() != num_vars_)
    throw_error(ErrorKind::InvalidArgument, "objective arity does not match variable count");
  objective_ = std::move(coeffs);
}

namespace detail {

// Dense exact tableau. Columns: [0, n) real vars, [n, S) slacks,
// [S, S+m) artificials, then the RHS. Cost row kept as an extra row with
// the negated objective value in its RHS cell.
class Simplex {
 public:
  explicit Simplex(const LpProblem& problem) : n_(problem.num_vars()) {
    const auto& cons = problem.constraints();
    m_ = cons.size();
    std::size_t slacks = 0;
    for (const auto& c : cons)
      if (c.rel != Relation::Eq) ++slacks;
    structural_ = n_ + slacks;
    cols_ = structural_ + m_ + 1;

    rows_.assign(m_, std::vector<Rational>(cols_, Rational(0)));
    basis_.resize(m_);
    std::size_t slack_at = n_;
    for (std::size_t i = 0; i < m_; ++i) {
      const auto& c = cons[i];
      for (std::size_t j = 0; j < n_; ++j) rows_[i][j] = c.coeffs[j];
      if (c.rel == Relation::Le)
        rows_[i][slack_at++] = Rational(1);
      else if (c.rel == Relation::Ge)
        rows_[i][slack_at++] = Rational(-1);
      rows_[i][cols_ - 1] = c.rhs;
      if (rows_[i][cols_ - 1].sign() < 0)
        for (auto& x : rows_[i]) x = -x;
      rows_[i][structural_ + i] = Rational(1);
      basis_[i] = structural_ + i;
    }
  }

  // Returns false when infeasible.
  bool phase1() {
    cost_.assign(cols_, Rational(0));
    for (std::size_t i = 0; i < m_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        if (j < structural_ || j == cols_ - 1) cost_[j] -= rows_[i][j];
    // artificial columns have reduced cost 0 under the artificial basis
    for (std::size_t j = structural_; j < cols_ - 1; ++j) cost_[j] = Rational(0);

    iterate(structural_ + m_);
    if (objective_value().sign() != 0) return false;
    drive_out_artificials();
    for (auto& row : rows_) row.erase(row.begin() + static_cast<std::ptrdiff_t>(structural_),
                                      row.end() - 1);
    cols_ = structural_ + 1;
    return true;
  }

  void phase2(const std::vector<Rational>& c) {
    // rebuild reduced costs for the real objective under the current basis
    cost_.assign(cols_, Rational(0));
    for (std::size_t j = 0; j < n_; ++j) cost_[j] = c[j];
    for (std::size_t i = 0; i < m_; ++i) {
      std::size_t b = basis_[i];
      Rational cb = b < n_ ? c[b] : Rational(0);
      if (cb.is_zero()) continue;
      for (std::size_t j = 0; j < cols_; ++j) cost_[j] -= cb * rows_[i][j];
    }
    unbounded_ = false;
    iterate(structural_);  // artificial columns never re-enter
  }

  bool unbounded() const { return unbounded_; }

  Rational objective_value() const { return -cost_[cols_ - 1]; }

  std::vector<Rational> assignment() const {
    std::vector<Rational> x(n_, Rational(0));
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] < n_) x[basis_[i]] = rows_[i][cols_ - 1];
    return x;
  }

 private:
  void pivot(std::size_t r, std::size_t s) {
    Rational inv = Rational(1) / rows_[r][s];
    for (auto& x : rows_[r]) x *= inv;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r || rows_[i][s].is_zero()) continue;
      Rational f = rows_[i][s];
      for (std::size_t j = 0; j < cols_; ++j) rows_[i][j] -= f * rows_[r][j];
    }
    if (!cost_[s].is_zero()) {
      Rational f = cost_[s];
      for (std::size_t j = 0; j < cols_; ++j) cost_[j] -= f * rows_[r][j];
    }
    basis_[r] = s;
  }

  // Bland's rule: smallest eligible entering column, ties in the ratio test
  // broken by smallest basis index. Guarantees termination.
  void iterate(std::size_t allowed_cols) {
    while (true) {
      std::size_t s = cols_;
      for (std::size_t j = 0; j < allowed_cols; ++j)
        if (cost_[j].sign() < 0) { s = j; break; }
      if (s == cols_) return;  // optimal

      std::size_t r = m_;
      Rational best;
      for (std::size_t i = 0; i < m_; ++i) {
        if (rows_[i][s].sign() <= 0) continue;
        Rational ratio = rows_[i][cols_ - 1] / rows_[i][s];
        if (r == m_ || ratio < best || (ratio == best && basis_[i] < basis_[r])) {
          r = i;
          best = ratio;
        }
      }
      if (r == m_) { unbounded_ = true; return; }
      pivot(r, s);
    }
  }

  void drive_out_artificials() {
    for (std::size_t i = 0; i < m_;) {
      if (basis_[i] < structural_) { ++i; continue; }
      std::size_t s = structural_;
      for (std::size_t j = 0; j < structural_; ++j)
        if (!rows_[i][j].is_zero()) { s = j; break; }
      if (s < structural_) {
        pivot(i, s);  // degenerate pivot, RHS of this row is 0
        ++i;
      } else {
        // redundant constraint
        rows_.erase(rows_.begin() + static_cast<std::ptrdiff_t>(i));
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(i));
        --m_;
      }
    }
  }

  std::size_t n_, m_, structural_, cols_;
  std::vector<std::vector<Rational>> rows_;
  std::vector<Rational> cost_;
  std::vector<std::size_t> basis_;
  bool unbounded_ = false;
};

}  // namespace detail

LpOutcome lp_feasible(const LpProblem& problem) {
  detail::Simplex s(problem);
  LpOutcome out;
  if (!s.phase1()) {
    out.status = LpOutcome::Status::Infeasible;
    return out;
  }
  out.status = LpOutcome::Status::Feasible;
  out.assignment = s.assignment();
  return out;
}

LpOutcome lp_minimize(const LpProblem& problem) {
  if (!problem.objective())
    throw_error(ErrorKind::InvalidArgument, "lp_minimize requires an objective");
  detail::Simplex s(problem);
  LpOutcome out;
  if (!s.phase1()) {
    out.status = LpOutcome::Status::Infeasible;
    return out;
  }
  s.phase2(*problem.objective());
  if (s.unbounded()) {
    out.status = LpOutcome::Status::Unbounded;
    return out;
  }
  out.status = LpOutcome::Status::Optimal;
  out.assignment = s.assignment();
  out.objective_value = s.objective_value();
  return out;
}

LpOracle::LpOracle(const LpProblem& problem)
    : simplex_(std::make_unique<detail::Simplex>(problem)), num_vars_(problem.num_vars()) {
  feasible_ = simplex_->phase1();
  if (feasible_) initial_ = simplex_->assignment();
}

LpOracle::~LpOracle() = default;
LpOracle::LpOracle(LpOracle&&) noexcept = default;
LpOracle& LpOracle::operator=(LpOracle&&) noexcept = default;

LpOutcome LpOracle::minimize(const std::vector<Rational>& objective) {
  if (objective.size() != num_vars_)
    throw_error(ErrorKind::InvalidArgument, "objective arity does not match variable count");
  LpOutcome out;
  if (!feasible_) {
    out.status = LpOutcome::Status::Infeasible;
    return out;
  }
  simplex_->phase2(objective);
  if (simplex_->unbounded()) {
    out.status = LpOutcome::Status::Unbounded;
    return out;
  }
  out.status = LpOutcome::Status::Optimal;
  out.assignment = simplex_->assignment();
  out.objective_value = simplex_->objective_value();
  return out;
}

}  // namespace relmaj
