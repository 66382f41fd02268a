#ifndef RELMAJ_DIVERGENCE_HPP
#define RELMAJ_DIVERGENCE_HPP

#include <vector>

#include "relmaj/core.hpp"

namespace relmaj {

/// Order parameter of the Rényi family: a finite real or ±∞ (never NaN).
class Order {
 public:
  Order(double alpha);  // NOLINT(runtime/explicit)
  static Order infinity();
  static Order minus_infinity();

  bool is_finite() const;
  bool is_pos_inf() const;
  bool is_neg_inf() const;
  double value() const { return a_; }

 private:
  double a_;
};

/// D_α(p‖q). Returns +∞ as a first-class value. All outputs are float64
/// regardless of input backend. Orders within 1e-9 of 0 or 1 snap to the
/// closed-form limit expression.
double renyi_divergence(Order alpha, const Distribution& p, const Distribution& q);

/// D(p‖q) = D_1(p‖q).
double relative_entropy(const Distribution& p, const Distribution& q);

/// D_0(p‖q) = −ln Σ_{x: p(x)≠0} q(x).
double min_relative_entropy(const Distribution& p, const Distribution& q);

/// H_α(p). For α ≥ 0 this is the usual family (H_0 = ln rank, H_1 Shannon,
/// H_∞ = −ln p_max). For α < 0 it is defined through the uniform relation
/// H_α(p) = ln k − D_α(p‖η_k), which keeps H_α(η_k) = ln k at every order.
double renyi_entropy(Order alpha, const Distribution& p);

/// |D_α(p‖q) − (|α|/(|α|+1)) D_{|α|+1}(q‖p)| for finite α < 0,
/// both sides evaluated independently.
double negative_alpha_identity_residual(double alpha, const Distribution& p,
                                        const Distribution& q);

/// |D_α(p‖η_k) − (ln k − H_α(p))|.
double entropy_uniform_relation_residual(Order alpha, const Distribution& p);

/// D_α(t‖σ_a⊗σ_b) − D_α(t_A‖σ_a) − D_α(t_B‖σ_b) for α ∈ {0, 1}.
/// Nonnegative; for α = 1 it equals D(t‖t_A⊗t_B) + 0 split against the
/// marginals (superadditivity of relative entropy).
double superadditivity_gap(Order alpha, const JointDistribution& t,
                           const Distribution& sigma_a, const Distribution& sigma_b);

/// {−2, −0.5, 0, 0.5, 1, 2, +∞}
const std::vector<Order>& standard_alpha_grid();
/// {−∞, −2, −1, −0.5, 0, 0.5, 1, 2, 5, +∞}
const std::vector<Order>& catalytic_alpha_grid();

}  // namespace relmaj

#endif
