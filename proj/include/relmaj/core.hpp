#ifndef RELMAJ_CORE_HPP
#define RELMAJ_CORE_HPP

#include <cstddef>
#include <utility>
#include <vector>

#include "relmaj/errors.hpp"
#include "relmaj/scalar.hpp"

namespace relmaj {

/// Finite probability vector over an indexed alphabet.
///
/// Backend is uniform per distribution: if any weight is float, all are
/// coerced to float at construction. Zero-mass letters are kept; support is
/// a derived predicate. Immutable after construction.
class Distribution {
 public:
  explicit Distribution(std::vector<Scalar> weights);
  static Distribution uniform(std::size_t k);
  static Distribution from_doubles(const std::vector<double>& w);
  static Distribution from_rationals(const std::vector<Rational>& w);
  /// Point mass on `letter` in a k-letter alphabet (exact backend).
  static Distribution point_mass(std::size_t k, std::size_t letter);

  std::size_t size() const { return w_.size(); }
  const Scalar& operator[](std::size_t i) const { return w_[i]; }
  bool is_exact() const { return exact_; }

  std::vector<double> to_doubles() const;
  /// Exact view: rational weights as-is; float weights become their binary
  /// values normalized by the exact total, so the result sums to exactly 1.
  std::vector<Rational> to_rationals() const;
  Distribution to_float() const;
  Distribution to_exact() const;

  std::vector<std::size_t> support() const;  // float threshold Tolerances::support
  std::size_t rank() const { return support().size(); }
  bool is_full_rank() const { return rank() == size(); }

  bool operator==(const Distribution& o) const;

 private:
  std::vector<Scalar> w_;
  bool exact_;
};

/// Conditional probability matrix P(j|i), entries indexed [output j][input i].
/// Every input column sums to 1.
class StochasticChannel {
 public:
  StochasticChannel(std::size_t out_size, std::size_t in_size, std::vector<Scalar> entries);
  static StochasticChannel identity(std::size_t k);
  /// Channel sending input letter i to output letter perm[i].
  static StochasticChannel permutation(const std::vector<std::size_t>& perm);

  std::size_t in_size() const { return in_; }
  std::size_t out_size() const { return out_; }
  const Scalar& entry(std::size_t j, std::size_t i) const { return e_[j * in_ + i]; }
  bool is_exact() const { return exact_; }

  /// Square and every output row also sums to 1 (exact, or within tolerance).
  bool is_doubly_stochastic() const;

  StochasticChannel to_float() const;
  StochasticChannel to_exact() const;

  bool operator==(const StochasticChannel& o) const;

 private:
  std::size_t out_, in_;
  std::vector<Scalar> e_;  // row-major [out][in]
  bool exact_;
};

/// Joint distribution over a product alphabet A x B, row-major [a][b].
class JointDistribution {
 public:
  JointDistribution(std::size_t a_size, std::size_t b_size, std::vector<Scalar> weights);
  static JointDistribution product(const Distribution& a, const Distribution& b);
  static JointDistribution from_flat(const Distribution& flat, std::size_t a_size, std::size_t b_size);

  std::size_t a_size() const { return a_; }
  std::size_t b_size() const { return b_; }
  const Scalar& at(std::size_t x, std::size_t y) const { return w_[x * b_ + y]; }

  /// Row-major flattening to a Distribution on A*B letters.
  Distribution flatten() const;
  /// (sum over B, sum over A) — exact sums on the exact backend.
  std::pair<Distribution, Distribution> marginals() const;

 private:
  std::size_t a_, b_;
  std::vector<Scalar> w_;
};

Distribution apply(const StochasticChannel& channel, const Distribution& p);
/// result = a after b  (result(x) = a(b(x)))
StochasticChannel compose(const StochasticChannel& a, const StochasticChannel& b);
/// Kronecker-structured channel on the product alphabet: (a ⊗ b)(p ⊗ q) = a(p) ⊗ b(q).
StochasticChannel tensor(const StochasticChannel& a, const StochasticChannel& b);
Distribution tensor(const Distribution& a, const Distribution& b);
std::pair<Distribution, Distribution> marginals(const JointDistribution& t);
/// Normalized trace distance (1/2)Σ|p_i − q_i|.
Scalar trace_distance(const Distribution& p, const Distribution& q);

}  // namespace relmaj

#endif
