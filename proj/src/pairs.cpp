#include "relmaj/pairs.hpp"

#include <algorithm>

namespace relmaj {

DistPair::DistPair(Distribution p_in, Distribution q_in) : p(std::move(p_in)), q(std::move(q_in)) {
  if (p.size() != q.size())
    throw_error(ErrorKind::DimensionMismatch, "pair: p and q live on different alphabets");
}

RelativeSpectrum relative_spectrum(const DistPair& pair) {
  RelativeSpectrum s;
  auto pr = pair.p.to_rationals(), qr = pair.q.to_rationals();
  for (std::size_t i = 0; i < pr.size(); ++i) {
    if (qr[i].is_zero()) {
      if (pr[i].sign() > 0) s.has_infinity = true;
      continue;  // 0/0 letters carry no spectrum point
    }
    s.finite_values.push_back(pr[i] / qr[i]);
  }
  std::sort(s.finite_values.begin(), s.finite_values.end());
  s.finite_values.erase(std::unique(s.finite_values.begin(), s.finite_values.end()),
                        s.finite_values.end());
  return s;
}

Distribution rationalize(const Distribution& d, std::int64_t max_den) {
  if (d.is_exact()) return d;
  std::vector<Rational> approx;
  approx.reserve(d.size());
  Rational sum(0);
  for (std::size_t i = 0; i < d.size(); ++i) {
    Rational r = Rational::approximate(d[i].as_double(), max_den);
    if (r.sign() < 0) r = Rational(0);
    approx.push_back(r);
    sum += r;
  }
  if (sum.sign() <= 0)
    throw_error(ErrorKind::InvalidDistribution, "rationalize: zero total mass");
  for (auto& r : approx) r /= sum;
  return Distribution::from_rationals(approx);
}

namespace {

DistPair decision_pair(const DistPair& pair, bool* did_rationalize) {
  if (pair.is_exact()) return pair;
  if (did_rationalize) *did_rationalize = true;
  return DistPair(rationalize(pair.p), rationalize(pair.q));
}

// LP over channel entries N[j][i], column-stochastic, Np = p', Nq = q'.
RelmajDecision decide(const DistPair& src, const DistPair& tgt, bool rationalized) {
  const std::size_t k_in = src.size(), k_out = tgt.size();
  auto p = src.p.to_rationals(), q = src.q.to_rationals();
  auto pp = tgt.p.to_rationals(), qp = tgt.q.to_rationals();

  const std::size_t nvars = k_out * k_in;
  auto var = [&](std::size_t j, std::size_t i) { return j * k_in + i; };
  LpProblem lp(nvars);
  for (std::size_t i = 0; i < k_in; ++i) {
    std::vector<Rational> row(nvars, Rational(0));
    for (std::size_t j = 0; j < k_out; ++j) row[var(j, i)] = Rational(1);
    lp.add_eq(std::move(row), Rational(1));
  }
  for (std::size_t j = 0; j < k_out; ++j) {
    std::vector<Rational> rp(nvars, Rational(0)), rq(nvars, Rational(0));
    for (std::size_t i = 0; i < k_in; ++i) {
      rp[var(j, i)] = p[i];
      rq[var(j, i)] = q[i];
    }
    lp.add_eq(std::move(rp), pp[j]);
    lp.add_eq(std::move(rq), qp[j]);
  }

  RelmajDecision out{false, std::nullopt, src, tgt, rationalized};
  LpOutcome sol = lp_feasible(lp);
  if (!sol.feasible()) return out;
  out.feasible = true;
  std::vector<Scalar> entries;
  entries.reserve(nvars);
  for (const auto& x : sol.assignment) entries.emplace_back(x);
  out.witness = StochasticChannel(k_out, k_in, std::move(entries));
  return out;
}

Rational mass_on_support(const std::vector<Rational>& weights, const std::vector<Rational>& of) {
  Rational acc(0);
  for (std::size_t i = 0; i < weights.size(); ++i)
    if (of[i].sign() > 0) acc += weights[i];
  return acc;
}

}  // namespace

RelmajDecision relatively_majorizes(const DistPair& source, const DistPair& target) {
  bool rat = false;
  DistPair s = decision_pair(source, &rat), t = decision_pair(target, &rat);
  return decide(s, t, rat);
}

RelmajDecision relatively_majorizes_lifted(const DistPair& source, const DistPair& target) {
  DistPair s(source.p.to_exact(), source.q.to_exact());
  DistPair t(target.p.to_exact(), target.q.to_exact());
  return decide(s, t, false);
}

bool blackwell_criterion(const DistPair& source, const DistPair& target) {
  DistPair s = decision_pair(source, nullptr), t = decision_pair(target, nullptr);
  auto p = s.p.to_rationals(), q = s.q.to_rationals();
  auto pp = t.p.to_rationals(), qp = t.q.to_rationals();

  auto deviation = [](const std::vector<Rational>& a, const std::vector<Rational>& b,
                      const Rational& tt) {
    Rational acc(0);
    for (std::size_t i = 0; i < a.size(); ++i) {
      Rational d = a[i] - tt * b[i];
      acc += d.sign() < 0 ? -d : d;
    }
    return acc;
  };

  std::vector<Rational> breakpoints{Rational(0)};
  auto add_ratios = [&](const std::vector<Rational>& a, const std::vector<Rational>& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
      if (b[i].sign() > 0) breakpoints.push_back(a[i] / b[i]);
  };
  add_ratios(p, q);
  add_ratios(pp, qp);

  for (const auto& tt : breakpoints)
    if (deviation(p, q, tt) < deviation(pp, qp, tt)) return false;

  // t→∞: slopes are Σq = Σq' = 1, and the residual constant must dominate:
  // 2(mass of p' on supp q' − mass of p on supp q) ≥ 0
  Rational limit = (mass_on_support(pp, qp) - mass_on_support(p, q));
  return limit.sign() >= 0;
}

}  // namespace relmaj
