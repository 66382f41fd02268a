#ifndef RELMAJ_CATALYSIS_HPP
#define RELMAJ_CATALYSIS_HPP

#include <optional>
#include <string>
#include <vector>

#include "relmaj/channels.hpp"
#include "relmaj/core.hpp"
#include "relmaj/divergence.hpp"
#include "relmaj/pairs.hpp"

namespace relmaj {

enum class ConversionMode { Exact, Approximate, Unital };

const char* conversion_mode_name(ConversionMode m);
ConversionMode conversion_mode_from_name(const std::string& s);

/// One conversion question: can (p, q) reach (p', q') with a correlated
/// catalyst, at quality gamma (and error epsilon outside exact mode)?
struct ConversionInstance {
  DistPair source;
  DistPair target;
  double gamma = 0.1;
  std::optional<double> epsilon;  // required for approximate/unital
  ConversionMode mode = ConversionMode::Exact;

  /// Unital-mode instance: q = q' = uniform.
  static ConversionInstance unital(const Distribution& p, const Distribution& p_prime,
                                   double epsilon, double gamma);
};

struct ConditionReport {
  bool verdict = false;
  double d_source = 0, d_target = 0;    // D(p‖q), D(p'‖q')
  double d0_source = 0, d0_target = 0;  // D_0 values
  double h_source = 0, h_target = 0;    // Shannon entropies (unital mode)
  bool spectra_differ = false;
  std::string note;
};

/// Exact-conversion conditions: D(p‖q) > D(p'‖q') and D_0(p‖q) ≥ D_0(p'‖q').
/// Hypothesis violations (irrational q, equal relative spectra, rank
/// deficiency) throw errors of the corresponding kind.
ConditionReport check_exact_conditions(const ConversionInstance& instance);

/// Approximate-conversion condition: D(p‖q) ≥ D(p'‖q').
ConditionReport check_approximate_conditions(const ConversionInstance& instance);

/// Unital-conversion condition: H(p) ≤ H(p'), with the permutation hypothesis checked.
ConditionReport check_unital_conditions(const Distribution& p, const Distribution& p_prime);
ConditionReport check_unital_conditions(const ConversionInstance& instance);

/// Matrix or joint data carried by a certificate verbatim; validity is a
/// verifier check, not a construction invariant, so tampered certificates
/// can still be loaded and fail verification.
struct RawMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<Scalar> entries;  // row-major

  const Scalar& at(std::size_t r, std::size_t c) const { return entries[r * cols + c]; }
  static RawMatrix from_channel(const StochasticChannel& ch);
  static RawMatrix from_joint(const JointDistribution& j);
};

struct SearchLog {
  long long candidates_tried = 0;
  long long lp_solves = 0;
  long long fw_iterations = 0;
  int highest_m = 0;
  bool budget_exhausted = false;
  std::string notes;
};

/// Self-contained, re-verifiable record of one conversion: catalyst r, joint
/// t', channel Λ, and the achieved parameters.
struct ConversionCertificate {
  ConversionInstance instance;
  std::vector<Scalar> catalyst_r;
  std::vector<Scalar> eta;        // uniform on supp(r)
  RawMatrix joint_t_prime;        // k_target × m
  RawMatrix channel;              // (k_target·m) × (k_source·m), output-major
  double achieved_gamma = 0;
  double achieved_epsilon = 0;
  std::vector<Scalar> p_prime_eps;
  SearchLog search_log;
};

struct SearchOptions {
  int max_catalyst_dim = 8;
  long long budget = 2000;   // candidate evaluations (the direct probe counts)
  int fw_max_iterations = 200;
  int threads = 1;
};

struct SearchOutcome {
  enum class Status { Found, Inconclusive };
  Status status = Status::Inconclusive;
  std::optional<ConversionCertificate> certificate;
  SearchLog log;

  bool found() const { return status == Status::Found; }
};

/// Bounded search: direct no-catalyst probe, then for m = 1..max_catalyst_dim
/// a simplex grid over full-rank catalysts r (resolution 1/(4m), descending
/// entries, ascending lexicographic order), LP feasibility per candidate and
/// Frank–Wolfe refinement of D(Φ(p̃⊗r)‖p̃'⊗r) with the LP as linear oracle.
/// "Inconclusive" is not a disproof — the grid does not exhaust the simplex.
/// Throws ConditionNotMet when the mode's condition checker says no.
SearchOutcome search_catalyst(const ConversionInstance& instance, const SearchOptions& options = {});

/// Λ = (E'_rev ⊗ id_m) ∘ (Γ*_{d'} ⊗ id_m) ∘ Φ₁ ∘ (Γ_d ⊗ id_m) ∘ (E ⊗ id_m).
/// Dimension mismatches report the junction index (1..4, input to output).
StochasticChannel assemble_pipeline(const EmbeddingSpec& d, const EmbeddingSpec& d_prime,
                                    const StochasticChannel& approx_E,
                                    const StochasticChannel& reversal_E_prime,
                                    const StochasticChannel& phi1, std::size_t catalyst_dim);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyReport {
  bool pass = false;
  std::vector<CheckResult> checks;
};

/// Replays every certificate condition: channel validity, Λ(p⊗r)=t' with the
/// required marginals, exact Λ(q⊗η)=q'⊗η, the γ bound, and in approximate
/// mode the ε bound. Failures are report entries, never exceptions.
VerifyReport verify_certificate(const ConversionInstance& instance,
                                const ConversionCertificate& cert);

struct ConverseLink {
  std::string name;
  double alpha = 1;
  double value = 0;  // slack or residual, see name
  bool ok = false;
};

struct ConverseAuditReport {
  bool pass = false;
  std::vector<ConverseLink> links;
};

/// Recomputes the converse inequality chain on the certificate: additivity,
/// data processing through Λ, and the superadditivity split, for α ∈ {0,1}
/// in exact mode and α = 1 otherwise.
ConverseAuditReport converse_audit(const ConversionInstance& instance,
                                   const ConversionCertificate& cert);

}  // namespace relmaj

#endif
