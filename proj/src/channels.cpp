#include "relmaj/channels.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace relmaj {

namespace {

constexpr std::int64_t kMaxMaterializedTotal = 1 << 20;

std::int64_t to_int64(const mpz_class& z, const char* what) {
  if (!z.fits_slong_p())
    throw_error(ErrorKind::InvalidArgument, std::string(what) + " exceeds the int64 range");
  return z.get_si();
}

}  // namespace

EmbeddingSpec::EmbeddingSpec(std::vector<std::int64_t> d_in) : d(std::move(d_in)) {
  if (d.empty()) throw_error(ErrorKind::InvalidArgument, "embedding: empty block list");
  for (auto di : d) {
    if (di < 1) throw_error(ErrorKind::InvalidArgument, "embedding: block sizes must be >= 1");
    total += di;
  }
}

EmbeddingSpec EmbeddingSpec::for_rational_distribution(const Distribution& q) {
  if (!q.is_exact())
    throw_error(ErrorKind::IrrationalInput, "embedding spec requires an exact-rational distribution");
  mpz_class l = common_denominator(q.to_rationals());
  return for_rational_distribution(q, to_int64(l, "embedding total"));
}

EmbeddingSpec EmbeddingSpec::for_rational_distribution(const Distribution& q, std::int64_t n) {
  if (!q.is_exact())
    throw_error(ErrorKind::IrrationalInput, "embedding spec requires an exact-rational distribution");
  if (!q.is_full_rank())
    throw_error(ErrorKind::RankDeficient, "embedding spec requires a full-rank distribution");
  std::vector<std::int64_t> d;
  d.reserve(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    Rational di = q[i].rational() * Rational(n);
    if (!di.is_integer())
      throw_error(ErrorKind::InvalidArgument,
                  "total " + std::to_string(n) + " is not a common denominator of q");
    d.push_back(to_int64(di.numerator(), "block size"));
  }
  return EmbeddingSpec(std::move(d));
}

Distribution EmbeddingSpec::gamma() const {
  std::vector<Rational> w;
  w.reserve(d.size());
  for (auto di : d) w.emplace_back(static_cast<long>(di), static_cast<long>(total));
  return Distribution::from_rationals(w);
}

StochasticChannel EmbeddingSpec::embed_channel() const {
  if (total > kMaxMaterializedTotal)
    throw_error(ErrorKind::InvalidArgument, "embedding too large to materialize as a matrix");
  std::size_t n = static_cast<std::size_t>(total), k = d.size();
  std::vector<Scalar> e(n * k, Scalar(Rational(0)));
  std::size_t row = 0;
  for (std::size_t i = 0; i < k; ++i) {
    Rational cell(1, static_cast<long>(d[i]));
    for (std::int64_t b = 0; b < d[i]; ++b) e[row++ * k + i] = Scalar(cell);
  }
  return StochasticChannel(n, k, std::move(e));
}

StochasticChannel EmbeddingSpec::unembed_channel() const {
  if (total > kMaxMaterializedTotal)
    throw_error(ErrorKind::InvalidArgument, "embedding too large to materialize as a matrix");
  std::size_t n = static_cast<std::size_t>(total), k = d.size();
  std::vector<Scalar> e(k * n, Scalar(Rational(0)));
  std::size_t col = 0;
  for (std::size_t i = 0; i < k; ++i)
    for (std::int64_t b = 0; b < d[i]; ++b) e[i * n + col++] = Scalar(Rational(1));
  return StochasticChannel(k, n, std::move(e));
}

Distribution embed(const EmbeddingSpec& spec, const Distribution& p) {
  if (p.size() != spec.letters())
    throw_error(ErrorKind::DimensionMismatch, "embed: distribution does not match block count");
  if (spec.total > kMaxMaterializedTotal)
    throw_error(ErrorKind::InvalidArgument, "embedding too large to materialize");
  std::vector<Scalar> w;
  w.reserve(static_cast<std::size_t>(spec.total));
  for (std::size_t i = 0; i < spec.letters(); ++i) {
    Scalar cell = p[i] * Scalar(Rational(1, static_cast<long>(spec.d[i])));
    for (std::int64_t b = 0; b < spec.d[i]; ++b) w.push_back(cell);
  }
  return Distribution(std::move(w));
}

Distribution unembed(const EmbeddingSpec& spec, const Distribution& x) {
  if (x.size() != static_cast<std::size_t>(spec.total))
    throw_error(ErrorKind::DimensionMismatch, "unembed: distribution does not match total");
  std::vector<Scalar> w(spec.letters(), Scalar(Rational(0)));
  std::size_t pos = 0;
  for (std::size_t i = 0; i < spec.letters(); ++i)
    for (std::int64_t b = 0; b < spec.d[i]; ++b) w[i] = w[i] + x[pos++];
  return Distribution(std::move(w));
}

namespace {

void check_epsilon(const Scalar& epsilon) {
  Rational e = epsilon.to_exact();
  if (!(Rational(0) < e) || !(e < Rational(1)))
    throw_error(ErrorKind::InvalidArgument, "epsilon must lie in (0,1)");
}

// Descending order, ties broken by original index.
std::vector<std::size_t> descending_order(const std::vector<Rational>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[b] < v[a]; });
  return idx;
}

RationalApproximation trivial_approximation(const Distribution& q, const Scalar& epsilon,
                                            std::int64_t n) {
  EmbeddingSpec spec = n > 0 ? EmbeddingSpec::for_rational_distribution(q, n)
                             : EmbeddingSpec::for_rational_distribution(q);
  std::size_t k = q.size();
  return RationalApproximation{q,
                               spec,
                               StochasticChannel::identity(k),
                               StochasticChannel::identity(k),
                               epsilon,
                               spec.total,
                               true};
}

RationalApproximation construct(const Distribution& q, const Scalar& epsilon, std::int64_t n) {
  const std::size_t k = q.size();
  auto lifted = q.to_rationals();
  auto order = descending_order(lifted);  // order[pos] = original index
  std::vector<Rational> s(k);
  for (std::size_t pos = 0; pos < k; ++pos) s[pos] = lifted[order[pos]];

  // d_i = ceil(q_i N) for all but the smallest letter, which absorbs the rest
  Rational nr(static_cast<long>(n));
  std::vector<std::int64_t> ds(k, 0);
  std::int64_t acc = 0;
  for (std::size_t pos = 0; pos + 1 < k; ++pos) {
    ds[pos] = to_int64((s[pos] * nr).ceil(), "block size");
    acc += ds[pos];
  }
  ds[k - 1] = n - acc;
  if (ds[k - 1] < 1)
    throw_error(ErrorKind::InvalidArgument, "total too small for the ceiling construction");

  std::vector<Rational> qt(k);  // sorted frame
  for (std::size_t pos = 0; pos < k; ++pos) qt[pos] = Rational(static_cast<long>(ds[pos]), static_cast<long>(n));

  // channels in the sorted frame; the last letter donates mass
  std::vector<Rational> delta(k, Rational(0));
  Rational delta_sum(0);
  for (std::size_t pos = 0; pos + 1 < k; ++pos) {
    delta[pos] = qt[pos] - s[pos];
    delta_sum += delta[pos];
  }
  const Rational& qmin = s[k - 1];
  std::vector<Scalar> e(k * k, Scalar(Rational(0))), r(k * k, Scalar(Rational(0)));
  for (std::size_t pos = 0; pos + 1 < k; ++pos) {
    e[pos * k + pos] = Scalar(Rational(1));
    e[pos * k + (k - 1)] = Scalar(delta[pos] / qmin);
    r[pos * k + pos] = Scalar(s[pos] / qt[pos]);
    r[(k - 1) * k + pos] = Scalar(delta[pos] / qt[pos]);
  }
  e[(k - 1) * k + (k - 1)] = Scalar(Rational(1) - delta_sum / qmin);
  r[(k - 1) * k + (k - 1)] = Scalar(Rational(1));

  StochasticChannel es(k, k, std::move(e)), rs(k, k, std::move(r));

  // conjugate back to the original letter order
  std::vector<std::size_t> to_sorted(k), from_sorted(k);
  for (std::size_t pos = 0; pos < k; ++pos) {
    to_sorted[order[pos]] = pos;
    from_sorted[pos] = order[pos];
  }
  StochasticChannel ps = StochasticChannel::permutation(to_sorted);
  StochasticChannel pi = StochasticChannel::permutation(from_sorted);
  StochasticChannel e_orig = compose(pi, compose(es, ps));
  StochasticChannel r_orig = compose(pi, compose(rs, ps));

  std::vector<std::int64_t> d_orig(k);
  std::vector<Rational> qt_orig(k);
  for (std::size_t pos = 0; pos < k; ++pos) {
    d_orig[order[pos]] = ds[pos];
    qt_orig[order[pos]] = qt[pos];
  }
  EmbeddingSpec spec(std::move(d_orig));
  return RationalApproximation{Distribution::from_rationals(qt_orig),
                               spec,
                               std::move(e_orig),
                               std::move(r_orig),
                               epsilon,
                               n,
                               false};
}

}  // namespace

std::int64_t rational_approximation_min_total(const Distribution& q, const Scalar& epsilon) {
  check_epsilon(epsilon);
  if (!q.is_full_rank())
    throw_error(ErrorKind::RankDeficient, "rational approximation requires full-rank q");
  const long k = static_cast<long>(q.size());
  auto lifted = q.to_rationals();
  Rational qmin = lifted[0];
  for (const auto& x : lifted) qmin = x < qmin ? x : qmin;
  Rational b1 = Rational(k + 1) * Rational(k + 1) / (qmin * qmin);
  Rational b2 = Rational(k) / epsilon.to_exact();
  Rational best = b1 < b2 ? b2 : b1;
  if (best < Rational(4)) best = Rational(4);
  return to_int64(best.ceil(), "embedding total");
}

RationalApproximation rational_approximation(const Distribution& q, const Scalar& epsilon) {
  check_epsilon(epsilon);
  if (!q.is_full_rank())
    throw_error(ErrorKind::RankDeficient, "rational approximation requires full-rank q");
  if (q.is_exact()) return trivial_approximation(q, epsilon, 0);
  return construct(q, epsilon, rational_approximation_min_total(q, epsilon));
}

RationalApproximation rational_approximation_with_total(const Distribution& q,
                                                        const Scalar& epsilon, std::int64_t n) {
  check_epsilon(epsilon);
  if (!q.is_full_rank())
    throw_error(ErrorKind::RankDeficient, "rational approximation requires full-rank q");
  if (q.is_exact()) return trivial_approximation(q, epsilon, n);
  if (n < rational_approximation_min_total(q, epsilon))
    throw_error(ErrorKind::InvalidArgument, "total below the admissible minimum");
  return construct(q, epsilon, n);
}

StochasticChannel reversal(const StochasticChannel& channel, const Distribution& prior) {
  if (channel.in_size() != prior.size())
    throw_error(ErrorKind::DimensionMismatch, "reversal: prior does not match channel input");
  Distribution out = apply(channel, prior);
  const std::size_t n_in = channel.in_size(), n_out = channel.out_size();
  std::vector<Scalar> e(n_in * n_out, Scalar(Rational(0)));
  bool exact = channel.is_exact() && prior.is_exact();
  for (std::size_t y = 0; y < n_out; ++y) {
    bool zero_mass = exact ? out[y].is_zero() : out[y].as_double() <= Tolerances::support;
    if (zero_mass) {
      for (std::size_t x = 0; x < n_in; ++x)
        e[x * n_out + y] = Scalar(Rational(1, static_cast<long>(n_in)));
      continue;
    }
    for (std::size_t x = 0; x < n_in; ++x)
      e[x * n_out + y] = channel.entry(y, x) * prior[x] / out[y];
  }
  return StochasticChannel(n_in, n_out, std::move(e));
}

std::pair<StochasticChannel, StochasticChannel> split_channel(const StochasticChannel& channel,
                                                              const Distribution& u,
                                                              const Distribution& u_prime,
                                                              const Distribution& w) {
  const std::size_t n = channel.in_size();
  if (channel.out_size() != n)
    throw_error(ErrorKind::DimensionMismatch, "split: channel must be square");
  if (u.size() != n || u_prime.size() != n || w.size() != n)
    throw_error(ErrorKind::DimensionMismatch, "split: distributions must match the channel");
  if (!w.is_full_rank())
    throw_error(ErrorKind::RankDeficient, "split: w must be full rank");

  auto is_zero = [](const Distribution& d, std::size_t i) {
    return d.is_exact() ? d[i].is_zero() : d[i].as_double() <= Tolerances::support;
  };
  std::size_t ell = 0;
  while (ell < n && !is_zero(u, ell)) ++ell;
  for (std::size_t i = ell; i < n; ++i)
    if (!is_zero(u, i))
      throw_error(ErrorKind::StructureError, "split: support of u is not a prefix");
  if (ell == 0) throw_error(ErrorKind::StructureError, "split: u has empty support");
  if (ell == n)
    throw_error(ErrorKind::StructureError, "split: u must vanish on at least one letter");

  auto close = [](const Distribution& a, const Distribution& b) {
    if (a.is_exact() && b.is_exact()) return a == b;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (std::abs(a[i].as_double() - b[i].as_double()) > Tolerances::equality) return false;
    return true;
  };
  if (!close(apply(channel, w), w))
    throw_error(ErrorKind::StructureError, "split: channel does not fix w");
  Distribution image = apply(channel, u);
  if (!close(image, u_prime))
    throw_error(ErrorKind::StructureError, "split: channel(u) differs from u'");
  for (std::size_t j = ell; j < n; ++j)
    if (!is_zero(u_prime, j))
      throw_error(ErrorKind::StructureError, "split: u' has mass outside the first block");

  auto entry_zero = [&](std::size_t j, std::size_t i) {
    const Scalar& s = channel.entry(j, i);
    return channel.is_exact() ? s.is_zero() : s.as_double() <= Tolerances::support;
  };
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) {
      bool off = (j < ell) != (i < ell);
      if (off && !entry_zero(j, i))
        throw_error(ErrorKind::StructureError, "split: off-block mass at entry (" +
                                                   std::to_string(j) + "," + std::to_string(i) + ")");
    }

  auto block = [&](std::size_t lo, std::size_t hi) {
    std::size_t sz = hi - lo;
    std::vector<Scalar> e;
    e.reserve(sz * sz);
    for (std::size_t j = lo; j < hi; ++j)
      for (std::size_t i = lo; i < hi; ++i) e.push_back(channel.entry(j, i));
    // off-block dirt below the support threshold is folded out by
    // renormalizing float columns
    if (!channel.is_exact()) {
      for (std::size_t i = 0; i < sz; ++i) {
        double col = 0;
        for (std::size_t j = 0; j < sz; ++j) col += e[j * sz + i].as_double();
        if (col > 0)
          for (std::size_t j = 0; j < sz; ++j) e[j * sz + i] = e[j * sz + i].as_double() / col;
      }
    }
    return StochasticChannel(sz, sz, std::move(e));
  };
  return {block(0, ell), block(ell, n)};
}

}  // namespace relmaj
