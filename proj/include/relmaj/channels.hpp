#ifndef RELMAJ_CHANNELS_HPP
#define RELMAJ_CHANNELS_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "relmaj/core.hpp"

namespace relmaj {

/// Natural-number block sizes d = (d_1, …, d_k); the embedding splits letter i
/// into d_i equal sub-letters of a size-N alphabet, N = Σ d_i.
struct EmbeddingSpec {
  std::vector<std::int64_t> d;
  std::int64_t total = 0;  // N

  explicit EmbeddingSpec(std::vector<std::int64_t> d_in);
  /// d_i = q_i · lcm(denominators); requires exact, full-rank q.
  static EmbeddingSpec for_rational_distribution(const Distribution& q);
  /// Same, at a caller-chosen total N (N must be a multiple of the lcm).
  static EmbeddingSpec for_rational_distribution(const Distribution& q, std::int64_t n);

  std::size_t letters() const { return d.size(); }
  /// γ_d = (d_1/N, …, d_k/N), full-rank rational.
  Distribution gamma() const;
  /// Γ_d as an N×k matrix (materialized; guarded against huge N).
  StochasticChannel embed_channel() const;
  /// Γ*_d as a k×N matrix (left inverse of Γ_d).
  StochasticChannel unembed_channel() const;
};

/// Γ_d(p) = ⊕_i p_i·η_{d_i}, computed without materializing the matrix.
Distribution embed(const EmbeddingSpec& spec, const Distribution& p);
/// Γ*_d(x): block sums.
Distribution unembed(const EmbeddingSpec& spec, const Distribution& x);

/// Output of the rational-entry conversion: q̃ = d/N with E(q) = q̃ and
/// R(q̃) = q exact, plus the trace-distance guarantees of the construction.
struct RationalApproximation {
  Distribution q_tilde;
  EmbeddingSpec spec;
  StochasticChannel E;  // k×k, E(q) = q̃ exactly
  StochasticChannel R;  // k×k reversal of E on q, R(q̃) = q exactly
  Scalar epsilon;
  std::int64_t total;   // N
  bool trivial = false;  // exact-rational input: E = R = id, q̃ = q
};

/// Ceiling construction at the smallest admissible
/// N ≥ max{((k+1)/q_min)², k/ε, 4}. Requires full-rank q and ε ∈ (0,1).
/// Handles unsorted q by internal sort/unsort bookkeeping.
RationalApproximation rational_approximation(const Distribution& q, const Scalar& epsilon);
/// Same construction at a caller-chosen admissible total.
RationalApproximation rational_approximation_with_total(const Distribution& q,
                                                        const Scalar& epsilon, std::int64_t n);
/// The smallest admissible total for the construction on q.
std::int64_t rational_approximation_min_total(const Distribution& q, const Scalar& epsilon);

/// Bayes reversal E′(x|y) = E(y|x)p(x)/p′(y) with respect to `prior`;
/// zero-mass output letters get the uniform column.
StochasticChannel reversal(const StochasticChannel& channel, const Distribution& prior);

/// Splits a channel fixing a full-rank w and mapping prefix-supported u to
/// prefix-supported u′ into its diagonal blocks Λ₁ (ℓ×ℓ) and Λ₂ ((n−ℓ)×(n−ℓ)).
std::pair<StochasticChannel, StochasticChannel> split_channel(const StochasticChannel& channel,
                                                              const Distribution& u,
                                                              const Distribution& u_prime,
                                                              const Distribution& w);

}  // namespace relmaj

#endif
