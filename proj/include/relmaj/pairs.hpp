#ifndef RELMAJ_PAIRS_HPP
#define RELMAJ_PAIRS_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "relmaj/core.hpp"
#include "relmaj/lp.hpp"

namespace relmaj {

/// A dichotomy (p, q) over one alphabet.
struct DistPair {
  Distribution p, q;

  DistPair(Distribution p_in, Distribution q_in);
  std::size_t size() const { return p.size(); }
  bool is_exact() const { return p.is_exact() && q.is_exact(); }
  bool operator==(const DistPair& o) const { return p == o.p && q == o.q; }
};

/// Distinct sorted ratios p(x)/q(x); letters with q(x)=0, p(x)>0 contribute +∞.
struct RelativeSpectrum {
  std::vector<Rational> finite_values;  // ascending, distinct
  bool has_infinity = false;

  bool operator==(const RelativeSpectrum& o) const {
    return has_infinity == o.has_infinity && finite_values == o.finite_values;
  }
};

RelativeSpectrum relative_spectrum(const DistPair& pair);

/// Best rational approximation per entry (denominator cap) followed by exact
/// renormalization, so the result is a valid exact distribution.
Distribution rationalize(const Distribution& d, std::int64_t max_den = 1000000000);

struct RelmajDecision {
  bool feasible = false;
  std::optional<StochasticChannel> witness;  // N with Np = p', Nq = q'
  DistPair source_used, target_used;         // the exact pairs actually decided
  bool rationalized = false;                 // true when float inputs were rationalized
};

/// LP feasibility over channel entries: ∃N ≥ 0, columns summing to 1, with
/// Np = p' and Nq = q'. Exact on rational inputs; float inputs are
/// rationalized (continued fractions, denominator cap 1e9) and the decision
/// records the pair actually used.
RelmajDecision relatively_majorizes(const DistPair& source, const DistPair& target);

/// Testing-region criterion: Σ_i |p_i − t·q_i| ≥ Σ_j |p'_j − t·q'_j| for all
/// t ≥ 0, evaluated exactly at the breakpoints of both relative spectra plus
/// t = 0 and the t→∞ limit. Classically equivalent to relatively_majorizes.
bool blackwell_criterion(const DistPair& source, const DistPair& target);

/// Same LP as relatively_majorizes, on binary-exact lifts of the inputs
/// (no continued-fraction step). Used where downstream equalities must hold
/// exactly for the given float values.
RelmajDecision relatively_majorizes_lifted(const DistPair& source, const DistPair& target);

}  // namespace relmaj

#endif
