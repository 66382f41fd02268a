#include "relmaj/divergence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace relmaj {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kOrderSnap = 1e-9;

bool positive(const Distribution& d, std::size_t i) {
  return d.is_exact() ? d[i].rational().sign() > 0 : d[i].as_double() > Tolerances::support;
}

void check_same_alphabet(const Distribution& p, const Distribution& q) {
  if (p.size() != q.size())
    throw_error(ErrorKind::DimensionMismatch, "divergence: alphabet sizes differ");
}

double shannon_relative(const Distribution& p, const Distribution& q) {
  double acc = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!positive(p, i)) continue;  // 0·ln(0/x) = 0
    if (!positive(q, i)) return kInf;
    acc += p[i].as_double() * (std::log(p[i].as_double()) - std::log(q[i].as_double()));
  }
  return acc;
}

double min_relative(const Distribution& p, const Distribution& q) {
  double mass = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (positive(p, i)) mass += q[i].as_double();
  if (mass <= 0) return kInf;
  return std::min(-std::log(mass), kInf);
}

double max_relative(const Distribution& p, const Distribution& q) {
  double best = -kInf;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!positive(p, i)) continue;
    if (!positive(q, i)) return kInf;
    best = std::max(best, std::log(p[i].as_double()) - std::log(q[i].as_double()));
  }
  return best;
}

double finite_order(double alpha, const Distribution& p, const Distribution& q) {
  // sgn(α)/(α−1) ln Σ p_i^α q_i^{1−α}, conventions per support:
  //   α>1:   p>0,q=0 → +∞;  p=0 contributes 0
  //   0<α<1: terms with p=0 or q=0 contribute 0
  //   α<0:   q=0 contributes 0; p=0,q>0 → +∞
  double sum = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    bool pp = positive(p, i), qp = positive(q, i);
    if (alpha > 1) {
      if (!pp) continue;
      if (!qp) return kInf;
    } else if (alpha > 0) {
      if (!pp || !qp) continue;
    } else {  // alpha < 0
      if (!qp) continue;
      if (!pp) return kInf;
    }
    sum += std::exp(alpha * std::log(p[i].as_double()) +
                    (1.0 - alpha) * std::log(q[i].as_double()));
  }
  double sgn = alpha >= 0 ? 1.0 : -1.0;
  return sgn / (alpha - 1.0) * std::log(sum);
}

}  // namespace

Order::Order(double alpha) : a_(alpha) {
  if (std::isnan(alpha)) throw_error(ErrorKind::InvalidArgument, "order must not be NaN");
}

Order Order::infinity() { return Order(kInf); }
Order Order::minus_infinity() { return Order(-kInf); }
bool Order::is_finite() const { return std::isfinite(a_); }
bool Order::is_pos_inf() const { return a_ == kInf; }
bool Order::is_neg_inf() const { return a_ == -kInf; }

double renyi_divergence(Order alpha, const Distribution& p, const Distribution& q) {
  check_same_alphabet(p, q);
  if (alpha.is_pos_inf()) return max_relative(p, q);
  if (alpha.is_neg_inf()) return max_relative(q, p);
  double a = alpha.value();
  if (std::fabs(a - 1.0) <= kOrderSnap) return shannon_relative(p, q);
  if (std::fabs(a) <= kOrderSnap) return min_relative(p, q);
  return finite_order(a, p, q);
}

double relative_entropy(const Distribution& p, const Distribution& q) {
  return renyi_divergence(Order(1.0), p, q);
}

double min_relative_entropy(const Distribution& p, const Distribution& q) {
  return renyi_divergence(Order(0.0), p, q);
}

double renyi_entropy(Order alpha, const Distribution& p) {
  std::size_t k = p.size();
  if (alpha.is_pos_inf()) {
    double pmax = 0;
    for (std::size_t i = 0; i < k; ++i) pmax = std::max(pmax, p[i].as_double());
    return -std::log(pmax);
  }
  if (alpha.is_neg_inf() || alpha.value() < -kOrderSnap)
    return std::log(static_cast<double>(k)) - renyi_divergence(alpha, p, Distribution::uniform(k));
  double a = alpha.value();
  if (std::fabs(a) <= kOrderSnap) return std::log(static_cast<double>(p.rank()));
  if (std::fabs(a - 1.0) <= kOrderSnap) {
    double acc = 0;
    for (std::size_t i = 0; i < k; ++i)
      if (positive(p, i)) acc -= p[i].as_double() * std::log(p[i].as_double());
    return acc;
  }
  double sum = 0;
  for (std::size_t i = 0; i < k; ++i)
    if (positive(p, i)) sum += std::exp(a * std::log(p[i].as_double()));
  return std::log(sum) / (1.0 - a);
}

double negative_alpha_identity_residual(double alpha, const Distribution& p,
                                        const Distribution& q) {
  if (!(alpha < 0) || !std::isfinite(alpha))
    throw_error(ErrorKind::InvalidArgument, "identity requires finite alpha < 0");
  double lhs = renyi_divergence(Order(alpha), p, q);
  double beta = -alpha + 1.0;
  double rhs = (-alpha) / (-alpha + 1.0) * renyi_divergence(Order(beta), q, p);
  if (std::isinf(lhs) && std::isinf(rhs)) return 0.0;
  return std::fabs(lhs - rhs);
}

double entropy_uniform_relation_residual(Order alpha, const Distribution& p) {
  std::size_t k = p.size();
  double lhs = renyi_divergence(alpha, p, Distribution::uniform(k));
  double rhs = std::log(static_cast<double>(k)) - renyi_entropy(alpha, p);
  if (std::isinf(lhs) && std::isinf(rhs) && (lhs > 0) == (rhs > 0)) return 0.0;
  return std::fabs(lhs - rhs);
}

double superadditivity_gap(Order alpha, const JointDistribution& t,
                           const Distribution& sigma_a, const Distribution& sigma_b) {
  if (t.a_size() != sigma_a.size() || t.b_size() != sigma_b.size())
    throw_error(ErrorKind::DimensionMismatch, "superadditivity: marginal sizes differ");
  if (!(alpha.is_finite() && (alpha.value() == 0.0 || alpha.value() == 1.0)))
    throw_error(ErrorKind::InvalidArgument, "superadditivity gap defined for alpha in {0,1}");
  auto [ta, tb] = t.marginals();
  double joint = renyi_divergence(alpha, t.flatten(), tensor(sigma_a, sigma_b));
  if (std::isinf(joint)) return kInf;  // a marginal term can only be ∞ if the joint term is
  double a = renyi_divergence(alpha, ta, sigma_a);
  double b = renyi_divergence(alpha, tb, sigma_b);
  return joint - a - b;
}

const std::vector<Order>& standard_alpha_grid() {
  static const std::vector<Order> grid = {Order(-2.0), Order(-0.5), Order(0.0), Order(0.5),
                                          Order(1.0),  Order(2.0),  Order::infinity()};
  return grid;
}

const std::vector<Order>& catalytic_alpha_grid() {
  static const std::vector<Order> grid = {
      Order::minus_infinity(), Order(-2.0), Order(-1.0), Order(-0.5), Order(0.0),
      Order(0.5),              Order(1.0),  Order(2.0),  Order(5.0),  Order::infinity()};
  return grid;
}

}  // namespace relmaj
