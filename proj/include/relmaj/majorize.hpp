#ifndef RELMAJ_MAJORIZE_HPP
#define RELMAJ_MAJORIZE_HPP

#include <vector>

#include "relmaj/core.hpp"
#include "relmaj/divergence.hpp"

namespace relmaj {

/// Constructive witness for x ≻ y: a doubly stochastic matrix with D·x = y,
/// assembled from at most k−1 T-transforms.
struct MajorizationWitness {
  StochasticChannel matrix;
  int t_transform_count = 0;
};

/// Partial-sum test: all prefix sums of x↓ dominate those of y↓, equal totals.
bool majorizes(const Distribution& x, const Distribution& y);

/// Σ|x_i − t| ≥ Σ|y_i − t| for all real t, checked at the breakpoint set
/// {x_i} ∪ {y_i} (both sides are piecewise linear with kinks only there).
bool majorizes_t_criterion(const Distribution& x, const Distribution& y);

/// Hardy–Littlewood–Pólya construction. Requires majorizes(x, y).
MajorizationWitness construct_doubly_stochastic(const Distribution& x, const Distribution& y);

/// Necessary-condition sampler for catalytic majorization of p into p′:
/// H_α(p) ≤ H_α(p′) at every sampled order. NOT the complete Klimesh/Turgut
/// criterion — a false here disproves convertibility, a true is inconclusive.
bool catalytic_majorization_necessary(const Distribution& p, const Distribution& p_prime,
                                      const std::vector<Order>& alphas = catalytic_alpha_grid());

}  // namespace relmaj

#endif
