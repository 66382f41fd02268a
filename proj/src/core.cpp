#include "relmaj/core.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace relmaj {

namespace {

bool all_exact(const std::vector<Scalar>& v) {
  for (const auto& s : v)
    if (!s.is_exact()) return false;
  return true;
}

std::vector<Scalar> coerce_to_float(std::vector<Scalar> v) {
  for (auto& s : v) s = Scalar(s.as_double());
  return v;
}

void check_normalized(const std::vector<Scalar>& w, bool exact, ErrorKind kind, const char* what) {
  if (exact) {
    Rational sum(0);
    for (const auto& s : w) {
      if (s.rational().sign() < 0)
        throw_error(kind, std::string(what) + ": negative weight");
      sum += s.rational();
    }
    if (!(sum == Rational(1)))
      throw_error(kind, std::string(what) + ": weights sum to " + sum.to_fraction_string() + ", expected 1");
  } else {
    double sum = 0;
    for (const auto& s : w) {
      double x = s.as_double();
      if (!(x >= 0)) throw_error(kind, std::string(what) + ": negative weight");
      sum += x;
    }
    if (std::fabs(sum - 1.0) > Tolerances::equality)
      throw_error(kind, std::string(what) + ": weights sum to " + std::to_string(sum));
  }
}

}  // namespace

Distribution::Distribution(std::vector<Scalar> weights) : w_(std::move(weights)) {
  if (w_.empty()) throw_error(ErrorKind::InvalidDistribution, "empty alphabet");
  exact_ = all_exact(w_);
  if (!exact_) w_ = coerce_to_float(std::move(w_));
  check_normalized(w_, exact_, ErrorKind::InvalidDistribution, "distribution");
}

Distribution Distribution::uniform(std::size_t k) {
  std::vector<Scalar> w(k, Scalar(Rational(1, static_cast<long>(k))));
  return Distribution(std::move(w));
}

Distribution Distribution::from_doubles(const std::vector<double>& w) {
  std::vector<Scalar> v;
  v.reserve(w.size());
  for (double x : w) v.emplace_back(x);
  return Distribution(std::move(v));
}

Distribution Distribution::from_rationals(const std::vector<Rational>& w) {
  std::vector<Scalar> v;
  v.reserve(w.size());
  for (const auto& x : w) v.emplace_back(x);
  return Distribution(std::move(v));
}

Distribution Distribution::point_mass(std::size_t k, std::size_t letter) {
  if (letter >= k) throw_error(ErrorKind::InvalidArgument, "point mass letter out of range");
  std::vector<Scalar> w(k, Scalar(Rational(0)));
  w[letter] = Scalar(Rational(1));
  return Distribution(std::move(w));
}

std::vector<double> Distribution::to_doubles() const {
  std::vector<double> out;
  out.reserve(w_.size());
  for (const auto& s : w_) out.push_back(s.as_double());
  return out;
}

std::vector<Rational> Distribution::to_rationals() const {
  std::vector<Rational> out;
  out.reserve(w_.size());
  Rational sum(0);
  for (const auto& s : w_) {
    out.push_back(s.to_exact());
    sum += out.back();
  }
  // float-backend weights sum to 1 only within tolerance; their exact view
  // is the normalized lift so downstream equalities can hold with zero residual
  if (!exact_ && !(sum == Rational(1)))
    for (auto& r : out) r /= sum;
  return out;
}

Distribution Distribution::to_float() const {
  return Distribution::from_doubles(to_doubles());
}

Distribution Distribution::to_exact() const {
  return Distribution::from_rationals(to_rationals());
}

std::vector<std::size_t> Distribution::support() const {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < w_.size(); ++i) {
    if (exact_ ? !w_[i].is_zero() : w_[i].as_double() > Tolerances::support) idx.push_back(i);
  }
  return idx;
}

bool Distribution::operator==(const Distribution& o) const {
  if (size() != o.size()) return false;
  for (std::size_t i = 0; i < size(); ++i)
    if (!(w_[i] == o.w_[i])) return false;
  return true;
}

StochasticChannel::StochasticChannel(std::size_t out_size, std::size_t in_size,
                                     std::vector<Scalar> entries)
    : out_(out_size), in_(in_size), e_(std::move(entries)) {
  if (out_ == 0 || in_ == 0) throw_error(ErrorKind::InvalidChannel, "empty channel");
  if (e_.size() != out_ * in_)
    throw_error(ErrorKind::InvalidChannel, "entry count does not match dimensions");
  exact_ = all_exact(e_);
  if (!exact_) e_ = coerce_to_float(std::move(e_));
  for (std::size_t i = 0; i < in_; ++i) {
    if (exact_) {
      Rational col(0);
      for (std::size_t j = 0; j < out_; ++j) {
        if (entry(j, i).rational().sign() < 0)
          throw_error(ErrorKind::InvalidChannel, "negative entry");
        col += entry(j, i).rational();
      }
      if (!(col == Rational(1)))
        throw_error(ErrorKind::InvalidChannel,
                    "column " + std::to_string(i) + " sums to " + col.to_fraction_string());
    } else {
      double col = 0;
      for (std::size_t j = 0; j < out_; ++j) {
        double x = entry(j, i).as_double();
        if (!(x >= 0)) throw_error(ErrorKind::InvalidChannel, "negative entry");
        col += x;
      }
      if (std::fabs(col - 1.0) > Tolerances::equality)
        throw_error(ErrorKind::InvalidChannel,
                    "column " + std::to_string(i) + " sums to " + std::to_string(col));
    }
  }
}

StochasticChannel StochasticChannel::identity(std::size_t k) {
  std::vector<Scalar> e(k * k, Scalar(Rational(0)));
  for (std::size_t i = 0; i < k; ++i) e[i * k + i] = Scalar(Rational(1));
  return StochasticChannel(k, k, std::move(e));
}

StochasticChannel StochasticChannel::permutation(const std::vector<std::size_t>& perm) {
  std::size_t k = perm.size();
  std::vector<Scalar> e(k * k, Scalar(Rational(0)));
  std::vector<bool> seen(k, false);
  for (std::size_t i = 0; i < k; ++i) {
    if (perm[i] >= k || seen[perm[i]])
      throw_error(ErrorKind::InvalidArgument, "not a permutation");
    seen[perm[i]] = true;
    e[perm[i] * k + i] = Scalar(Rational(1));
  }
  return StochasticChannel(k, k, std::move(e));
}

bool StochasticChannel::is_doubly_stochastic() const {
  if (out_ != in_) return false;
  for (std::size_t j = 0; j < out_; ++j) {
    if (exact_) {
      Rational row(0);
      for (std::size_t i = 0; i < in_; ++i) row += entry(j, i).rational();
      if (!(row == Rational(1))) return false;
    } else {
      double row = 0;
      for (std::size_t i = 0; i < in_; ++i) row += entry(j, i).as_double();
      if (std::fabs(row - 1.0) > Tolerances::equality) return false;
    }
  }
  return true;
}

StochasticChannel StochasticChannel::to_float() const {
  std::vector<Scalar> e;
  e.reserve(e_.size());
  for (const auto& s : e_) e.emplace_back(s.as_double());
  return StochasticChannel(out_, in_, std::move(e));
}

StochasticChannel StochasticChannel::to_exact() const {
  std::vector<Scalar> e;
  e.reserve(e_.size());
  for (const auto& s : e_) e.emplace_back(s.to_exact());
  return StochasticChannel(out_, in_, std::move(e));
}

bool StochasticChannel::operator==(const StochasticChannel& o) const {
  if (in_ != o.in_ || out_ != o.out_) return false;
  for (std::size_t n = 0; n < e_.size(); ++n)
    if (!(e_[n] == o.e_[n])) return false;
  return true;
}

JointDistribution::JointDistribution(std::size_t a_size, std::size_t b_size,
                                     std::vector<Scalar> weights)
    : a_(a_size), b_(b_size), w_(std::move(weights)) {
  if (a_ == 0 || b_ == 0) throw_error(ErrorKind::InvalidDistribution, "empty joint alphabet");
  if (w_.size() != a_ * b_)
    throw_error(ErrorKind::InvalidDistribution, "joint weight count does not match dimensions");
  bool exact = all_exact(w_);
  if (!exact) w_ = coerce_to_float(std::move(w_));
  check_normalized(w_, exact, ErrorKind::InvalidDistribution, "joint distribution");
}

JointDistribution JointDistribution::product(const Distribution& a, const Distribution& b) {
  std::vector<Scalar> w;
  w.reserve(a.size() * b.size());
  for (std::size_t x = 0; x < a.size(); ++x)
    for (std::size_t y = 0; y < b.size(); ++y) w.push_back(a[x] * b[y]);
  return JointDistribution(a.size(), b.size(), std::move(w));
}

JointDistribution JointDistribution::from_flat(const Distribution& flat, std::size_t a_size,
                                               std::size_t b_size) {
  if (flat.size() != a_size * b_size)
    throw_error(ErrorKind::DimensionMismatch, "flat size does not factor as a*b");
  std::vector<Scalar> w;
  w.reserve(flat.size());
  for (std::size_t n = 0; n < flat.size(); ++n) w.push_back(flat[n]);
  return JointDistribution(a_size, b_size, std::move(w));
}

Distribution JointDistribution::flatten() const {
  return Distribution(w_);
}

std::pair<Distribution, Distribution> JointDistribution::marginals() const {
  std::vector<Scalar> ma(a_, Scalar(Rational(0))), mb(b_, Scalar(Rational(0)));
  for (std::size_t x = 0; x < a_; ++x)
    for (std::size_t y = 0; y < b_; ++y) {
      ma[x] = ma[x] + at(x, y);
      mb[y] = mb[y] + at(x, y);
    }
  return {Distribution(std::move(ma)), Distribution(std::move(mb))};
}

Distribution apply(const StochasticChannel& channel, const Distribution& p) {
  if (channel.in_size() != p.size())
    throw_error(ErrorKind::DimensionMismatch,
                "apply: channel expects " + std::to_string(channel.in_size()) +
                    " letters, distribution has " + std::to_string(p.size()));
  if (channel.is_exact() && p.is_exact()) {
    std::vector<Rational> out(channel.out_size(), Rational(0));
    for (std::size_t j = 0; j < channel.out_size(); ++j)
      for (std::size_t i = 0; i < channel.in_size(); ++i)
        out[j] += channel.entry(j, i).rational() * p[i].rational();
    return Distribution::from_rationals(out);
  }
  std::vector<double> out(channel.out_size(), 0.0);
  for (std::size_t j = 0; j < channel.out_size(); ++j)
    for (std::size_t i = 0; i < channel.in_size(); ++i)
      out[j] += channel.entry(j, i).as_double() * p[i].as_double();
  // guard against accumulated rounding pushing the sum outside tolerance
  double sum = std::accumulate(out.begin(), out.end(), 0.0);
  if (sum > 0 && std::fabs(sum - 1.0) <= 16 * Tolerances::equality)
    for (auto& x : out) x /= sum;
  return Distribution::from_doubles(out);
}

StochasticChannel compose(const StochasticChannel& a, const StochasticChannel& b) {
  if (a.in_size() != b.out_size())
    throw_error(ErrorKind::DimensionMismatch,
                "compose: inner dimensions " + std::to_string(a.in_size()) + " vs " +
                    std::to_string(b.out_size()));
  std::size_t out = a.out_size(), in = b.in_size(), mid = a.in_size();
  std::vector<Scalar> e(out * in, Scalar(Rational(0)));
  for (std::size_t j = 0; j < out; ++j)
    for (std::size_t i = 0; i < in; ++i) {
      Scalar acc(Rational(0));
      for (std::size_t m = 0; m < mid; ++m) acc = acc + a.entry(j, m) * b.entry(m, i);
      e[j * in + i] = acc;
    }
  return StochasticChannel(out, in, std::move(e));
}

StochasticChannel tensor(const StochasticChannel& a, const StochasticChannel& b) {
  std::size_t out = a.out_size() * b.out_size(), in = a.in_size() * b.in_size();
  std::vector<Scalar> e(out * in, Scalar(Rational(0)));
  for (std::size_t ja = 0; ja < a.out_size(); ++ja)
    for (std::size_t jb = 0; jb < b.out_size(); ++jb)
      for (std::size_t ia = 0; ia < a.in_size(); ++ia)
        for (std::size_t ib = 0; ib < b.in_size(); ++ib) {
          std::size_t j = ja * b.out_size() + jb, i = ia * b.in_size() + ib;
          e[j * in + i] = a.entry(ja, ia) * b.entry(jb, ib);
        }
  return StochasticChannel(out, in, std::move(e));
}

Distribution tensor(const Distribution& a, const Distribution& b) {
  return JointDistribution::product(a, b).flatten();
}

std::pair<Distribution, Distribution> marginals(const JointDistribution& t) {
  return t.marginals();
}

Scalar trace_distance(const Distribution& p, const Distribution& q) {
  if (p.size() != q.size())
    throw_error(ErrorKind::DimensionMismatch, "trace_distance: alphabet sizes differ");
  Scalar acc = (p.is_exact() && q.is_exact()) ? Scalar(Rational(0)) : Scalar(0.0);
  for (std::size_t i = 0; i < p.size(); ++i) acc = acc + (p[i] - q[i]).abs();
  return acc * Scalar(Rational(1, 2));
}

}  // namespace relmaj
