#include "relmaj/catalysis.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>
#include <sstream>

#include "relmaj/lp.hpp"
#include "relmaj/majorize.hpp"

namespace relmaj {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::int64_t kPipelineTotalCap = 256;  // largest embedding the search will materialize
}  // namespace

const char* conversion_mode_name(ConversionMode m) {
  switch (m) {
    case ConversionMode::Exact: return "exact";
    case ConversionMode::Approximate: return "approximate";
    case ConversionMode::Unital: return "unital";
  }
  return "unknown";
}

ConversionMode conversion_mode_from_name(const std::string& s) {
  if (s == "exact") return ConversionMode::Exact;
  if (s == "approximate") return ConversionMode::Approximate;
  if (s == "unital") return ConversionMode::Unital;
  throw_error(ErrorKind::ParseError, "unknown mode '" + s + "'");
}

ConversionInstance ConversionInstance::unital(const Distribution& p, const Distribution& p_prime,
                                              double epsilon, double gamma) {
  ConversionInstance inst{DistPair(p, Distribution::uniform(p.size())),
                          DistPair(p_prime, Distribution::uniform(p_prime.size())), gamma, epsilon,
                          ConversionMode::Unital};
  return inst;
}

namespace {

void check_gamma(double gamma) {
  if (!(gamma > 0)) throw_error(ErrorKind::InvalidArgument, "gamma must be positive");
}

void check_full_rank_references(const ConversionInstance& inst) {
  if (!inst.source.q.is_full_rank())
    throw_error(ErrorKind::RankDeficient, "q must have full support");
  if (!inst.target.q.is_full_rank())
    throw_error(ErrorKind::RankDeficient, "q' must have full support");
}

// D_0 comparison is decidable exactly: D_0(p‖q) ≥ D_0(p'‖q') iff the q-mass
// of supp(p) is at most the q'-mass of supp(p').
bool d0_dominates_exact(const DistPair& src, const DistPair& tgt) {
  auto mass = [](const DistPair& pr) {
    Rational acc(0);
    auto q = pr.q.to_rationals();
    for (std::size_t i : pr.p.support()) acc += q[i];
    return acc;
  };
  return mass(src) <= mass(tgt);
}

}  // namespace

ConditionReport check_exact_conditions(const ConversionInstance& instance) {
  check_gamma(instance.gamma);
  check_full_rank_references(instance);
  if (!instance.source.q.is_exact() || !instance.target.q.is_exact())
    throw_error(ErrorKind::IrrationalInput,
                "exact mode requires rational q and q' (float backend given)");

  ConditionReport rep;
  RelativeSpectrum ss = relative_spectrum(instance.source), st = relative_spectrum(instance.target);
  rep.spectra_differ = !(ss == st);
  if (!rep.spectra_differ)
    throw_error(ErrorKind::EqualRelativeSpectra,
                "the pairs share one relative spectrum; exact-mode hypotheses fail");

  rep.d_source = relative_entropy(instance.source.p, instance.source.q);
  rep.d_target = relative_entropy(instance.target.p, instance.target.q);
  rep.d0_source = min_relative_entropy(instance.source.p, instance.source.q);
  rep.d0_target = min_relative_entropy(instance.target.p, instance.target.q);
  bool d0_ok = d0_dominates_exact(instance.source, instance.target);
  rep.verdict = (rep.d_source > rep.d_target) && d0_ok;
  rep.note = rep.verdict ? "strict relative-entropy decrease and min-relative-entropy dominance"
                         : "the exact-conversion conditions fail";
  return rep;
}

ConditionReport check_approximate_conditions(const ConversionInstance& instance) {
  check_gamma(instance.gamma);
  check_full_rank_references(instance);
  if (!instance.epsilon || !(*instance.epsilon > 0) || !(*instance.epsilon < 1))
    throw_error(ErrorKind::InvalidArgument, "approximate mode requires epsilon in (0,1)");

  ConditionReport rep;
  rep.d_source = relative_entropy(instance.source.p, instance.source.q);
  rep.d_target = relative_entropy(instance.target.p, instance.target.q);
  rep.d0_source = min_relative_entropy(instance.source.p, instance.source.q);
  rep.d0_target = min_relative_entropy(instance.target.p, instance.target.q);
  if (instance.source == instance.target) {
    rep.verdict = true;
    rep.note = "identical pairs";
    return rep;
  }
  rep.verdict = rep.d_source >= rep.d_target - Tolerances::slack;
  rep.note = rep.verdict ? "relative entropy does not increase" : "relative entropy increases";
  return rep;
}

ConditionReport check_unital_conditions(const Distribution& p, const Distribution& p_prime) {
  if (p.size() != p_prime.size())
    throw_error(ErrorKind::DimensionMismatch, "unital check: alphabet sizes differ");
  auto sorted_exact = [](const Distribution& d) {
    auto v = d.to_rationals();
    std::sort(v.begin(), v.end());
    return v;
  };
  if (sorted_exact(p) == sorted_exact(p_prime))
    throw_error(ErrorKind::PermutationEqual, "p is a permutation of p'; the unital conversion assumes otherwise");

  ConditionReport rep;
  rep.h_source = renyi_entropy(Order(1.0), p);
  rep.h_target = renyi_entropy(Order(1.0), p_prime);
  rep.verdict = rep.h_source <= rep.h_target + Tolerances::slack;
  rep.note = rep.verdict ? "Shannon entropy does not decrease" : "Shannon entropy decreases";
  return rep;
}

ConditionReport check_unital_conditions(const ConversionInstance& instance) {
  check_gamma(instance.gamma);
  if (!instance.epsilon || !(*instance.epsilon > 0) || !(*instance.epsilon < 1))
    throw_error(ErrorKind::InvalidArgument, "unital mode requires epsilon in (0,1)");
  auto expect_uniform = [](const Distribution& d, const char* name) {
    if (!(d.to_exact() == Distribution::uniform(d.size())))
      throw_error(ErrorKind::InvalidArgument,
                  std::string(name) + " must be uniform in unital mode");
  };
  expect_uniform(instance.source.q, "q");
  expect_uniform(instance.target.q, "q'");
  return check_unital_conditions(instance.source.p, instance.target.p);
}

RawMatrix RawMatrix::from_channel(const StochasticChannel& ch) {
  RawMatrix m;
  m.rows = ch.out_size();
  m.cols = ch.in_size();
  m.entries.reserve(m.rows * m.cols);
  for (std::size_t j = 0; j < m.rows; ++j)
    for (std::size_t i = 0; i < m.cols; ++i) m.entries.push_back(ch.entry(j, i));
  return m;
}

RawMatrix RawMatrix::from_joint(const JointDistribution& j) {
  RawMatrix m;
  m.rows = j.a_size();
  m.cols = j.b_size();
  m.entries.reserve(m.rows * m.cols);
  for (std::size_t x = 0; x < m.rows; ++x)
    for (std::size_t y = 0; y < m.cols; ++y) m.entries.push_back(j.at(x, y));
  return m;
}

StochasticChannel assemble_pipeline(const EmbeddingSpec& d, const EmbeddingSpec& d_prime,
                                    const StochasticChannel& approx_E,
                                    const StochasticChannel& reversal_E_prime,
                                    const StochasticChannel& phi1, std::size_t catalyst_dim) {
  if (catalyst_dim < 1) throw_error(ErrorKind::InvalidArgument, "catalyst dimension must be >= 1");
  auto junction = [](int idx, const std::string& what) {
    throw_error(ErrorKind::DimensionMismatch, "pipeline junction " + std::to_string(idx) + ": " + what);
  };
  if (approx_E.out_size() != d.letters())
    junction(1, "E outputs " + std::to_string(approx_E.out_size()) + " letters, embedding expects " +
                    std::to_string(d.letters()));
  const std::size_t nm = static_cast<std::size_t>(d.total) * catalyst_dim;
  if (phi1.in_size() != nm)
    junction(2, "phi takes " + std::to_string(phi1.in_size()) + " letters, embedded input has " +
                    std::to_string(nm));
  if (!phi1.is_doubly_stochastic())
    throw_error(ErrorKind::InvalidChannel, "phi must be doubly stochastic");
  if (phi1.out_size() != static_cast<std::size_t>(d_prime.total) * catalyst_dim)
    junction(3, "phi outputs " + std::to_string(phi1.out_size()) +
                    " letters, unembedding expects " +
                    std::to_string(static_cast<std::size_t>(d_prime.total) * catalyst_dim));
  if (reversal_E_prime.in_size() != d_prime.letters())
    junction(4, "reversal takes " + std::to_string(reversal_E_prime.in_size()) +
                    " letters, unembedding yields " + std::to_string(d_prime.letters()));

  StochasticChannel id_m = StochasticChannel::identity(catalyst_dim);
  StochasticChannel stage_in = tensor(approx_E, id_m);
  StochasticChannel stage_embed = tensor(d.embed_channel(), id_m);
  StochasticChannel stage_unembed = tensor(d_prime.unembed_channel(), id_m);
  StochasticChannel stage_out = tensor(reversal_E_prime, id_m);
  return compose(stage_out, compose(stage_unembed, compose(phi1, compose(stage_embed, stage_in))));
}

namespace {

std::vector<Rational> lift(const std::vector<Scalar>& v) {
  std::vector<Rational> out;
  out.reserve(v.size());
  for (const auto& s : v) out.push_back(s.to_exact());
  return out;
}

std::vector<Scalar> wrap(const std::vector<Rational>& v) {
  std::vector<Scalar> out;
  out.reserve(v.size());
  for (const auto& r : v) out.emplace_back(r);
  return out;
}

std::vector<Rational> tensor_vec(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  std::vector<Rational> out;
  out.reserve(a.size() * b.size());
  for (const auto& x : a)
    for (const auto& y : b) out.push_back(x * y);
  return out;
}

// Everything the grid search needs, fixed once per instance.
struct PipelineContext {
  std::optional<EmbeddingSpec> d_src, d_tgt;
  std::optional<StochasticChannel> e_src;   // E (identity in exact mode)
  std::optional<StochasticChannel> r_tgt;   // E'* reversal (identity in exact mode)
  std::vector<Rational> p_lift;             // exact source p
  std::vector<Rational> embedded_source;    // Γ_d(E(p))
  std::vector<Rational> embedded_target;    // Γ_d'(E'(p'')) or Γ_d'(p')
  std::vector<Rational> p_prime_eps;        // marg_1 of any certificate joint
  Rational achieved_eps;                    // exact (1/2)||p' − p'_ε||₁
  double delta_used = 0;
  bool usable = false;
  std::string note;
  std::size_t source_letters = 0, target_letters = 0;
};

std::int64_t lcm_int64(const mpz_class& a, const mpz_class& b, bool* ok) {
  mpz_class l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  if (!l.fits_slong_p()) {
    *ok = false;
    return 0;
  }
  return l.get_si();
}

PipelineContext prepare_exact(const ConversionInstance& inst) {
  PipelineContext ctx;
  ctx.source_letters = inst.source.size();
  ctx.target_letters = inst.target.size();
  bool ok = true;
  std::int64_t n = lcm_int64(common_denominator(inst.source.q.to_rationals()),
                             common_denominator(inst.target.q.to_rationals()), &ok);
  if (!ok || n > kPipelineTotalCap) {
    ctx.note = "common embedding total exceeds the search cap";
    return ctx;
  }
  ctx.d_src = EmbeddingSpec::for_rational_distribution(inst.source.q.to_exact(), n);
  ctx.d_tgt = EmbeddingSpec::for_rational_distribution(inst.target.q.to_exact(), n);
  ctx.e_src = StochasticChannel::identity(inst.source.size());
  ctx.r_tgt = StochasticChannel::identity(inst.target.size());
  ctx.p_lift = inst.source.p.to_rationals();
  Distribution es = embed(*ctx.d_src, inst.source.p.to_exact());
  for (std::size_t i = 0; i < es.size(); ++i) ctx.embedded_source.push_back(es[i].to_exact());
  Distribution et = embed(*ctx.d_tgt, inst.target.p.to_exact());
  for (std::size_t i = 0; i < et.size(); ++i) ctx.embedded_target.push_back(et[i].to_exact());
  ctx.p_prime_eps = inst.target.p.to_rationals();
  ctx.achieved_eps = Rational(0);
  ctx.usable = true;
  return ctx;
}

PipelineContext prepare_approximate(const ConversionInstance& inst) {
  PipelineContext ctx;
  ctx.source_letters = inst.source.size();
  ctx.target_letters = inst.target.size();
  const double eps = *inst.epsilon;
  const Rational eps_exact = Rational::from_double(eps);
  const Scalar side_eps(eps / 3.0);

  // common total: a multiple of every exact side's denominator lcm, at least
  // every float side's admissible minimum
  bool ok = true;
  mpz_class divisor = 1;
  std::int64_t floor_total = 4;
  auto account = [&](const Distribution& q) {
    if (q.is_exact()) {
      bool fit = true;
      std::int64_t l = lcm_int64(divisor, common_denominator(q.to_rationals()), &fit);
      if (!fit) ok = false;
      else divisor = l;
    } else {
      floor_total = std::max(floor_total, rational_approximation_min_total(q, side_eps));
    }
  };
  account(inst.source.q);
  account(inst.target.q);
  if (!ok || !divisor.fits_slong_p()) {
    ctx.note = "common embedding total exceeds the search cap";
    return ctx;
  }
  std::int64_t base = divisor.get_si();
  std::int64_t n = ((floor_total + base - 1) / base) * base;

  const auto p_prime_lift = inst.target.p.to_rationals();
  const auto q_prime_lift = inst.target.q.to_rationals();

  for (; n <= kPipelineTotalCap; n *= 2) {
    RationalApproximation ap_src = rational_approximation_with_total(inst.source.q, side_eps, n);
    RationalApproximation ap_tgt = rational_approximation_with_total(inst.target.q, side_eps, n);

    double delta0 = std::min(eps / 2.0, 0.01);
    for (int halving = 0; halving <= 10; ++halving) {
      Rational delta = Rational::from_double(delta0 / std::pow(2.0, halving));
      std::vector<Rational> p_dd(p_prime_lift.size());
      for (std::size_t i = 0; i < p_dd.size(); ++i)
        p_dd[i] = (Rational(1) - delta) * p_prime_lift[i] + delta * q_prime_lift[i];
      Distribution p_dd_dist = Distribution::from_rationals(p_dd);
      Distribution image = apply(ap_tgt.E, p_dd_dist);
      Distribution p_eps = apply(ap_tgt.R, image);
      Rational achieved(0);
      for (std::size_t i = 0; i < p_dd.size(); ++i) {
        Rational diff = p_prime_lift[i] - p_eps[i].to_exact();
        achieved += diff.sign() < 0 ? -diff : diff;
      }
      achieved *= Rational(1, 2);
      if (!(achieved <= eps_exact)) continue;

      ctx.d_src = ap_src.spec;
      ctx.d_tgt = ap_tgt.spec;
      ctx.e_src = ap_src.E;
      ctx.r_tgt = ap_tgt.R;
      ctx.p_lift = inst.source.p.to_rationals();
      Distribution es = embed(*ctx.d_src, apply(ap_src.E, inst.source.p.to_exact()));
      for (std::size_t i = 0; i < es.size(); ++i) ctx.embedded_source.push_back(es[i].to_exact());
      Distribution et = embed(*ctx.d_tgt, image);
      for (std::size_t i = 0; i < et.size(); ++i) ctx.embedded_target.push_back(et[i].to_exact());
      ctx.p_prime_eps.clear();
      for (std::size_t i = 0; i < p_eps.size(); ++i) ctx.p_prime_eps.push_back(p_eps[i].to_exact());
      ctx.achieved_eps = achieved;
      ctx.delta_used = delta.to_double();
      ctx.usable = true;
      return ctx;
    }
  }
  ctx.note = "no admissible embedding total under the search cap met the epsilon budget";
  return ctx;
}

// Descending compositions of total into exactly parts entries >= 1,
// ascending lexicographic order (most balanced first).
void partitions_rec(std::int64_t total, int parts, std::int64_t max_part,
                    std::vector<std::int64_t>& acc, std::vector<std::vector<std::int64_t>>& out) {
  if (parts == 1) {
    if (total >= 1 && total <= max_part) {
      acc.push_back(total);
      out.push_back(acc);
      acc.pop_back();
    }
    return;
  }
  std::int64_t lo = (total + parts - 1) / parts;
  for (std::int64_t first = lo; first <= std::min<std::int64_t>(max_part, total - (parts - 1)); ++first) {
    acc.push_back(first);
    partitions_rec(total - first, parts - 1, first, acc, out);
    acc.pop_back();
  }
}

std::vector<std::vector<Rational>> catalyst_grid(int m) {
  std::vector<std::vector<std::int64_t>> raw;
  std::vector<std::int64_t> acc;
  partitions_rec(4 * m, m, 4 * m, acc, raw);
  std::vector<std::vector<Rational>> out;
  out.reserve(raw.size());
  for (const auto& c : raw) {
    std::vector<Rational> r;
    r.reserve(c.size());
    for (auto x : c) r.emplace_back(static_cast<long>(x), static_cast<long>(4 * m));
    out.push_back(std::move(r));
  }
  return out;
}

struct CandidateResult {
  bool passed = false;
  std::vector<Rational> phi;  // (NM)² row-major, row = output letter
  double objective = kInf;
  long long lp_solves = 0;
  long long fw_iterations = 0;
};

CandidateResult evaluate_candidate(const PipelineContext& ctx, const std::vector<Rational>& r,
                                   double gamma, int fw_max) {
  CandidateResult res;
  const std::size_t n = ctx.embedded_source.size();
  const std::size_t m = r.size();
  const std::size_t nm = n * m;
  const std::vector<Rational> u = tensor_vec(ctx.embedded_source, r);
  const std::vector<Rational> w = tensor_vec(ctx.embedded_target, r);

  auto var = [&](std::size_t a, std::size_t b) { return a * nm + b; };
  LpProblem lp(nm * nm);
  for (std::size_t b = 0; b < nm; ++b) {  // column stochastic
    std::vector<Rational> row(nm * nm, Rational(0));
    for (std::size_t a = 0; a < nm; ++a) row[var(a, b)] = Rational(1);
    lp.add_eq(std::move(row), Rational(1));
  }
  for (std::size_t a = 0; a < nm; ++a) {  // doubly stochastic
    std::vector<Rational> row(nm * nm, Rational(0));
    for (std::size_t b = 0; b < nm; ++b) row[var(a, b)] = Rational(1);
    lp.add_eq(std::move(row), Rational(1));
  }
  for (std::size_t x = 0; x < n; ++x) {  // first marginal of Φ(u)
    std::vector<Rational> row(nm * nm, Rational(0));
    for (std::size_t y = 0; y < m; ++y)
      for (std::size_t b = 0; b < nm; ++b) row[var(x * m + y, b)] = u[b];
    lp.add_eq(std::move(row), ctx.embedded_target[x]);
  }
  for (std::size_t y = 0; y < m; ++y) {  // second marginal of Φ(u)
    std::vector<Rational> row(nm * nm, Rational(0));
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t b = 0; b < nm; ++b) row[var(x * m + y, b)] = u[b];
    lp.add_eq(std::move(row), r[y]);
  }

  LpOracle oracle(lp);
  ++res.lp_solves;
  if (!oracle.feasible()) return res;

  std::vector<Rational> phi = oracle.initial_point();
  auto image = [&](const std::vector<Rational>& matrix) {
    std::vector<Rational> v(nm, Rational(0));
    for (std::size_t a = 0; a < nm; ++a) {
      for (std::size_t b = 0; b < nm; ++b) {
        if (u[b].is_zero() || matrix[var(a, b)].is_zero()) continue;
        v[a] += matrix[var(a, b)] * u[b];
      }
    }
    return v;
  };
  std::vector<Rational> v = image(phi);

  Distribution w_dist = Distribution::from_rationals(w);
  auto objective = [&](const std::vector<Rational>& vv) {
    return relative_entropy(Distribution::from_rationals(vv), w_dist);
  };
  double f = objective(v);
  if (f < gamma) {
    res.passed = true;
    res.phi = std::move(phi);
    res.objective = f;
    return res;
  }

  // Frank–Wolfe with exact rational iterates: every vertex satisfies the
  // constraints, so convex combinations do as well.
  for (int it = 0; it < fw_max; ++it) {
    std::vector<double> g(nm, 0.0);
    for (std::size_t a = 0; a < nm; ++a) {
      double wa = w[a].to_double();
      if (wa <= 0) { g[a] = 0; continue; }
      double va = v[a].to_double();
      if (va < 1e-300) va = 1e-300;
      g[a] = std::log(va / wa) + 1.0;
    }
    std::vector<Rational> c(nm * nm, Rational(0));
    for (std::size_t a = 0; a < nm; ++a) {
      if (g[a] == 0) continue;
      // small-denominator gradient keeps the oracle's tableau arithmetic
      // cheap; the exact objective still gates acceptance
      Rational ga = Rational::approximate(g[a], 1000000);
      for (std::size_t b = 0; b < nm; ++b)
        if (!u[b].is_zero()) c[var(a, b)] = ga * u[b];
    }
    LpOutcome lin = oracle.minimize(c);
    ++res.lp_solves;
    ++res.fw_iterations;
    if (!lin.feasible()) break;  // cannot happen; defensive
    std::vector<Rational> v_vertex = image(lin.assignment);

    double gap = 0;
    for (std::size_t a = 0; a < nm; ++a)
      gap += g[a] * (v[a].to_double() - v_vertex[a].to_double());

    // convexity gives min f >= f - gap; once that exceeds gamma this
    // candidate can never pass
    if (f - gap > gamma + 1e-6) break;

    Rational lambda(2, static_cast<long>(it) + 2);
    Rational keep = Rational(1) - lambda;
    for (std::size_t idx = 0; idx < phi.size(); ++idx)
      phi[idx] = keep * phi[idx] + lambda * lin.assignment[idx];
    for (std::size_t a = 0; a < nm; ++a) v[a] = keep * v[a] + lambda * v_vertex[a];

    f = objective(v);
    if (f < gamma) {
      res.passed = true;
      res.phi = std::move(phi);
      res.objective = f;
      return res;
    }
    if (gap < gamma / 10.0) break;  // near-optimal and still above gamma
  }
  res.objective = f;
  return res;
}

Distribution scalars_to_distribution(const std::vector<Scalar>& v) { return Distribution(v); }

ConversionCertificate finish_certificate(const ConversionInstance& inst,
                                         const PipelineContext& ctx,
                                         const std::vector<Rational>& r,
                                         const std::vector<Rational>& phi, SearchLog log) {
  const std::size_t m = r.size();
  const std::size_t nm = ctx.embedded_source.size() * m;
  std::vector<Scalar> phi_entries = wrap(phi);
  StochasticChannel phi_ch(nm, nm, std::move(phi_entries));
  StochasticChannel lambda =
      assemble_pipeline(*ctx.d_src, *ctx.d_tgt, *ctx.e_src, *ctx.r_tgt, phi_ch, m);

  Distribution r_dist = Distribution::from_rationals(r);
  Distribution in = tensor(Distribution::from_rationals(ctx.p_lift), r_dist);
  Distribution t_flat = apply(lambda, in);
  JointDistribution t_prime = JointDistribution::from_flat(t_flat, ctx.target_letters, m);

  Distribution reference = Distribution::from_rationals(ctx.p_prime_eps);
  double achieved_gamma = relative_entropy(t_flat, tensor(reference, r_dist));

  ConversionCertificate cert{inst,
                             wrap(r),
                             wrap(std::vector<Rational>(m, Rational(1, static_cast<long>(m)))),
                             RawMatrix::from_joint(t_prime),
                             RawMatrix::from_channel(lambda),
                             achieved_gamma,
                             ctx.achieved_eps.to_double(),
                             wrap(ctx.p_prime_eps),
                             std::move(log)};
  return cert;
}

ConditionReport run_condition_checker(const ConversionInstance& inst) {
  switch (inst.mode) {
    case ConversionMode::Exact: return check_exact_conditions(inst);
    case ConversionMode::Approximate: return check_approximate_conditions(inst);
    case ConversionMode::Unital: return check_unital_conditions(inst);
  }
  throw_error(ErrorKind::InvalidArgument, "unknown conversion mode");
}

std::optional<ConversionCertificate> direct_probe(const ConversionInstance& inst, SearchLog& log) {
  ++log.candidates_tried;
  ++log.lp_solves;
  RelmajDecision dec = relatively_majorizes_lifted(inst.source, inst.target);
  if (!dec.feasible) return std::nullopt;

  const std::size_t kt = inst.target.size();
  Distribution p_lift = inst.source.p.to_exact();
  Distribution target_lift = inst.target.p.to_exact();
  Distribution t_flat = apply(dec.witness->to_exact(), p_lift);
  JointDistribution t_prime = JointDistribution::from_flat(t_flat, kt, 1);
  std::vector<Scalar> p_eps;
  for (std::size_t i = 0; i < kt; ++i) p_eps.push_back(target_lift[i]);
  ConversionCertificate cert{inst,
                             {Scalar(Rational(1))},
                             {Scalar(Rational(1))},
                             RawMatrix::from_joint(t_prime),
                             RawMatrix::from_channel(dec.witness->to_exact()),
                             0.0,
                             0.0,
                             std::move(p_eps),
                             log};
  cert.achieved_gamma = relative_entropy(t_flat, target_lift);
  return cert;
}

}  // namespace

SearchOutcome search_catalyst(const ConversionInstance& instance, const SearchOptions& options) {
  ConditionReport cond = run_condition_checker(instance);
  if (!cond.verdict)
    throw_error(ErrorKind::ConditionNotMet,
                "the applicable transformation condition fails; no search attempted");
  if (instance.source.size() == 0) throw_error(ErrorKind::InvalidArgument, "empty instance");

  SearchOutcome outcome;
  SearchLog& log = outcome.log;

  // identity conversion: trivial certificate, no LP
  if (instance.source == instance.target) {
    ++log.candidates_tried;
    const std::size_t k = instance.target.size();
    Distribution p_lift = instance.source.p.to_exact();
    JointDistribution t_prime = JointDistribution::from_flat(p_lift, k, 1);
    std::vector<Scalar> p_eps;
    for (std::size_t i = 0; i < k; ++i) p_eps.push_back(p_lift[i]);
    outcome.status = SearchOutcome::Status::Found;
    outcome.certificate = ConversionCertificate{
        instance,
        {Scalar(Rational(1))},
        {Scalar(Rational(1))},
        RawMatrix::from_joint(t_prime),
        RawMatrix::from_channel(StochasticChannel::identity(k)),
        0.0,
        0.0,
        std::move(p_eps),
        log};
    outcome.certificate->search_log = log;
    return outcome;
  }

  long long budget = options.budget;
  if (budget >= 1) {
    auto direct = direct_probe(instance, log);
    --budget;
    if (direct) {
      direct->search_log = log;
      outcome.status = SearchOutcome::Status::Found;
      outcome.certificate = std::move(direct);
      return outcome;
    }
  } else {
    log.budget_exhausted = true;
    return outcome;
  }

  PipelineContext ctx = instance.mode == ConversionMode::Exact ? prepare_exact(instance)
                                                               : prepare_approximate(instance);
  if (!ctx.usable) {
    log.notes = ctx.note;
    return outcome;
  }

  const int threads = std::max(1, options.threads);
  for (int m = 1; m <= options.max_catalyst_dim; ++m) {
    if (budget <= 0) {
      log.budget_exhausted = true;
      return outcome;
    }
    log.highest_m = m;
    auto grid = catalyst_grid(m);
    std::size_t idx = 0;
    while (idx < grid.size()) {
      if (budget <= 0) {
        log.budget_exhausted = true;
        return outcome;
      }
      std::size_t chunk = std::min<std::size_t>(
          {static_cast<std::size_t>(threads), grid.size() - idx, static_cast<std::size_t>(budget)});
      std::vector<CandidateResult> results(chunk);
      if (chunk == 1) {
        results[0] = evaluate_candidate(ctx, grid[idx], instance.gamma, options.fw_max_iterations);
      } else {
        std::vector<std::future<CandidateResult>> futs;
        futs.reserve(chunk);
        for (std::size_t c = 0; c < chunk; ++c)
          futs.push_back(std::async(std::launch::async, [&, c] {
            return evaluate_candidate(ctx, grid[idx + c], instance.gamma,
                                      options.fw_max_iterations);
          }));
        for (std::size_t c = 0; c < chunk; ++c) results[c] = futs[c].get();
      }
      budget -= static_cast<long long>(chunk);
      log.candidates_tried += static_cast<long long>(chunk);
      for (const auto& res : results) {
        log.lp_solves += res.lp_solves;
        log.fw_iterations += res.fw_iterations;
      }
      for (std::size_t c = 0; c < chunk; ++c) {
        if (!results[c].passed) continue;
        ConversionCertificate cert =
            finish_certificate(instance, ctx, grid[idx + c], results[c].phi, log);
        cert.search_log = log;
        VerifyReport rep = verify_certificate(instance, cert);
        if (rep.pass) {
          outcome.status = SearchOutcome::Status::Found;
          outcome.certificate = std::move(cert);
          return outcome;
        }
        log.notes += "candidate passed the objective but failed verification; ";
      }
      idx += chunk;
    }
  }
  return outcome;
}

// ---------------------------------------------------------------------------
// verification

namespace {

bool entries_all_exact(const std::vector<Scalar>& v) {
  for (const auto& s : v)
    if (!s.is_exact()) return false;
  return true;
}

std::vector<Rational> raw_apply(const RawMatrix& m, const std::vector<Rational>& x) {
  std::vector<Rational> out(m.rows, Rational(0));
  for (std::size_t r = 0; r < m.rows; ++r)
    for (std::size_t c = 0; c < m.cols; ++c) out[r] += m.at(r, c).to_exact() * x[c];
  return out;
}

bool vectors_equal_exact(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!(a[i] == b[i])) return false;
  return true;
}

std::string fraction_preview(const std::vector<Rational>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size() && i < 6; ++i) os << (i ? ", " : "") << v[i].to_double();
  if (v.size() > 6) os << ", ...";
  return os.str();
}

}  // namespace

VerifyReport verify_certificate(const ConversionInstance& instance,
                                const ConversionCertificate& cert) {
  VerifyReport report;
  auto add = [&](const std::string& name, bool ok, const std::string& detail = "") {
    report.checks.push_back({name, ok, detail});
  };
  auto guarded = [&](const std::string& name, auto&& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      add(name, false, e.what());
    }
  };

  const std::size_t ks = instance.source.size(), kt = instance.target.size();
  const std::size_t m = cert.catalyst_r.size();
  const bool approximate_like = instance.mode != ConversionMode::Exact;

  // catalyst
  guarded("catalyst_valid", [&] {
    if (m == 0) { add("catalyst_valid", false, "empty catalyst"); return; }
    Rational sum(0);
    bool nonneg = true;
    for (const auto& s : cert.catalyst_r) {
      Rational v = s.to_exact();
      if (v.sign() < 0) nonneg = false;
      sum += v;
    }
    add("catalyst_valid", nonneg && sum == Rational(1),
        nonneg ? "" : "negative catalyst entry");
  });

  guarded("eta_uniform_on_support", [&] {
    auto r = lift(cert.catalyst_r);
    std::size_t support = 0;
    for (const auto& x : r)
      if (x.sign() > 0) ++support;
    if (support == 0 || cert.eta.size() != m) {
      add("eta_uniform_on_support", false, "eta size or catalyst support invalid");
      return;
    }
    Rational cell(1, static_cast<long>(support));
    bool ok = true;
    for (std::size_t i = 0; i < m; ++i) {
      Rational expected = r[i].sign() > 0 ? cell : Rational(0);
      if (!(cert.eta[i].to_exact() == expected)) ok = false;
    }
    add("eta_uniform_on_support", ok);
  });

  guarded("channel_valid", [&] {
    const RawMatrix& ch = cert.channel;
    if (ch.rows != kt * m || ch.cols != ks * m || ch.entries.size() != ch.rows * ch.cols) {
      add("channel_valid", false,
          "dimensions " + std::to_string(ch.rows) + "x" + std::to_string(ch.cols) +
              " do not match the instance");
      return;
    }
    bool exact = entries_all_exact(ch.entries);
    bool ok = true;
    std::string detail;
    for (std::size_t c = 0; c < ch.cols && ok; ++c) {
      if (exact) {
        Rational col(0);
        for (std::size_t r = 0; r < ch.rows; ++r) {
          if (ch.at(r, c).to_exact().sign() < 0) { ok = false; detail = "negative entry"; }
          col += ch.at(r, c).to_exact();
        }
        if (ok && !(col == Rational(1))) {
          ok = false;
          detail = "column " + std::to_string(c) + " sums to " + col.to_fraction_string();
        }
      } else {
        double col = 0;
        for (std::size_t r = 0; r < ch.rows; ++r) {
          if (ch.at(r, c).as_double() < 0) { ok = false; detail = "negative entry"; }
          col += ch.at(r, c).as_double();
        }
        if (ok && std::fabs(col - 1.0) > Tolerances::equality) {
          ok = false;
          detail = "column " + std::to_string(c) + " sums to " + std::to_string(col);
        }
      }
    }
    add("channel_valid", ok, detail);
  });

  // Λ(p⊗r) = t′
  std::vector<Rational> t_from_channel;
  guarded("maps_p_r_to_t_prime", [&] {
    if (cert.channel.rows != kt * m || cert.channel.cols != ks * m ||
        cert.joint_t_prime.rows != kt || cert.joint_t_prime.cols != m ||
        cert.joint_t_prime.entries.size() != kt * m) {
      add("maps_p_r_to_t_prime", false, "dimension mismatch");
      return;
    }
    auto in = tensor_vec(instance.source.p.to_rationals(), lift(cert.catalyst_r));
    t_from_channel = raw_apply(cert.channel, in);
    bool ok = vectors_equal_exact(t_from_channel, lift(cert.joint_t_prime.entries));
    add("maps_p_r_to_t_prime", ok, ok ? "" : "channel image differs from the stated joint");
  });

  guarded("t_prime_marginals", [&] {
    if (cert.joint_t_prime.rows != kt || cert.joint_t_prime.cols != m) {
      add("t_prime_marginals", false, "dimension mismatch");
      return;
    }
    auto tp = lift(cert.joint_t_prime.entries);
    std::vector<Rational> ma(kt, Rational(0)), mb(m, Rational(0));
    for (std::size_t x = 0; x < kt; ++x)
      for (std::size_t y = 0; y < m; ++y) {
        ma[x] += tp[x * m + y];
        mb[y] += tp[x * m + y];
      }
    std::vector<Rational> expect_first =
        approximate_like ? lift(cert.p_prime_eps) : instance.target.p.to_rationals();
    bool ok_first = vectors_equal_exact(ma, expect_first);
    if (!approximate_like && cert.p_prime_eps.size() == kt)
      ok_first = ok_first && vectors_equal_exact(lift(cert.p_prime_eps), instance.target.p.to_rationals());
    bool ok_second = vectors_equal_exact(mb, lift(cert.catalyst_r));
    add("t_prime_marginals", ok_first && ok_second,
        std::string(ok_first ? "" : "first marginal mismatch; got ") +
            (ok_first ? "" : fraction_preview(ma)) +
            (ok_second ? "" : " second marginal differs from r"));
  });

  guarded("q_side_exact", [&] {
    if (cert.channel.rows != kt * m || cert.channel.cols != ks * m || cert.eta.size() != m) {
      add("q_side_exact", false, "dimension mismatch");
      return;
    }
    auto q_in = tensor_vec(instance.source.q.to_rationals(), lift(cert.eta));
    auto q_out = raw_apply(cert.channel, q_in);
    auto expect = tensor_vec(instance.target.q.to_rationals(), lift(cert.eta));
    bool ok = vectors_equal_exact(q_out, expect);
    add("q_side_exact", ok, ok ? "" : "Λ(q⊗η) differs from q'⊗η (zero residual required)");
  });

  guarded("gamma_bound", [&] {
    Distribution t_flat = scalars_to_distribution(cert.joint_t_prime.entries);
    Distribution reference = approximate_like ? scalars_to_distribution(cert.p_prime_eps)
                                              : instance.target.p.to_exact();
    Distribution r_dist = scalars_to_distribution(cert.catalyst_r);
    double d = relative_entropy(t_flat, tensor(reference, r_dist));
    std::ostringstream os;
    os << "D(t'||ref⊗r) = " << d << ", gamma = " << instance.gamma;
    add("gamma_bound", d <= instance.gamma, os.str());
  });

  if (approximate_like) {
    guarded("epsilon_bound", [&] {
      if (!instance.epsilon) {
        add("epsilon_bound", false, "instance carries no epsilon");
        return;
      }
      auto pe = lift(cert.p_prime_eps);
      auto pp = instance.target.p.to_rationals();
      if (pe.size() != pp.size()) {
        add("epsilon_bound", false, "p'_eps dimension mismatch");
        return;
      }
      Rational acc(0);
      for (std::size_t i = 0; i < pe.size(); ++i) {
        Rational d = pp[i] - pe[i];
        acc += d.sign() < 0 ? -d : d;
      }
      acc *= Rational(1, 2);
      bool ok = acc <= Rational::from_double(*instance.epsilon);
      std::ostringstream os;
      os << "(1/2)||p' - p'_eps||_1 = " << acc.to_double() << ", epsilon = " << *instance.epsilon;
      add("epsilon_bound", ok, os.str());
    });
  }

  if (instance.mode == ConversionMode::Unital) {
    guarded("unital_preserves_uniform", [&] {
      std::size_t dim = ks * m;
      if (cert.channel.rows != dim || cert.channel.cols != dim) {
        add("unital_preserves_uniform", false, "channel is not square on k·m letters");
        return;
      }
      std::vector<Rational> unif(dim, Rational(1, static_cast<long>(dim)));
      bool ok = vectors_equal_exact(raw_apply(cert.channel, unif), unif);
      add("unital_preserves_uniform", ok, ok ? "" : "uniform distribution is not fixed exactly");
    });
  }

  report.pass = !report.checks.empty();
  for (const auto& c : report.checks) report.pass = report.pass && c.passed;
  return report;
}

ConverseAuditReport converse_audit(const ConversionInstance& instance,
                                   const ConversionCertificate& cert) {
  ConverseAuditReport report;
  report.pass = true;
  auto push = [&](const std::string& name, double alpha, double value, bool ok) {
    report.links.push_back({name, alpha, value, ok});
    report.pass = report.pass && ok;
  };

  std::optional<Distribution> r_opt, eta_opt, t_opt;
  std::optional<JointDistribution> joint_opt;
  try {
    r_opt = scalars_to_distribution(cert.catalyst_r);
    eta_opt = scalars_to_distribution(cert.eta);
    t_opt = scalars_to_distribution(cert.joint_t_prime.entries);
    joint_opt = JointDistribution(cert.joint_t_prime.rows, cert.joint_t_prime.cols,
                                  cert.joint_t_prime.entries);
  } catch (const std::exception& e) {
    push(std::string("certificate_data: ") + e.what(), 1.0, 0.0, false);
    return report;
  }
  const Distribution& r_dist = *r_opt;
  const Distribution& eta = *eta_opt;
  const Distribution& t_flat = *t_opt;
  auto [t_a, t_b] = joint_opt->marginals();

  std::vector<Order> alphas = instance.mode == ConversionMode::Exact
                                  ? std::vector<Order>{Order(0.0), Order(1.0)}
                                  : std::vector<Order>{Order(1.0)};

  Distribution in_p = tensor(instance.source.p, r_dist);
  Distribution in_q = tensor(instance.source.q, eta);
  Distribution out_q = tensor(instance.target.q, eta);

  for (const Order& a : alphas) {
    double alpha = a.value();
    double d_pq = renyi_divergence(a, instance.source.p, instance.source.q);
    double d_r = renyi_divergence(a, r_dist, eta);
    double d_joint_in = renyi_divergence(a, in_p, in_q);
    double additivity = std::fabs(d_joint_in - (d_pq + d_r));
    push("additivity", alpha, additivity, additivity <= Tolerances::slack);

    double d_out = renyi_divergence(a, t_flat, out_q);
    double dp_slack = d_joint_in - d_out;
    push("data_processing", alpha, dp_slack, dp_slack >= -Tolerances::slack);

    double d_ta = renyi_divergence(a, t_a, instance.target.q);
    double d_tb = renyi_divergence(a, t_b, eta);
    double super_slack = d_out - (d_ta + d_tb);
    push("superadditivity", alpha, super_slack, super_slack >= -Tolerances::slack);

    if (alpha == 1.0) {
      double corr = relative_entropy(t_flat, tensor(t_a, t_b));
      double ident = std::fabs(d_out - (corr + d_ta + d_tb));
      push("superadditivity_identity", alpha, ident, ident <= Tolerances::slack);

      double total = d_pq - d_ta;
      push("total_nonincrease", alpha, total, total >= -Tolerances::slack);
      double decomposition = std::fabs(total - (dp_slack + corr));
      push("slack_decomposition", alpha, decomposition, decomposition <= Tolerances::slack);
    }
  }
  return report;
}

}  // namespace relmaj
