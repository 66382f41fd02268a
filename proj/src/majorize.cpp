#include "relmaj/majorize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <type_traits>

namespace relmaj {

namespace {

// Stable descending sort, ties broken by original index.
template <typename T>
std::vector<std::size_t> descending_order(const std::vector<T>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[b] < v[a]; });
  return idx;
}

template <typename T>
std::vector<T> sorted_desc(const std::vector<T>& v) {
  auto idx = descending_order(v);
  std::vector<T> out;
  out.reserve(v.size());
  for (auto i : idx) out.push_back(v[i]);
  return out;
}

bool prefix_dominates(const std::vector<Rational>& xs, const std::vector<Rational>& ys) {
  Rational px(0), py(0);
  for (std::size_t n = 0; n + 1 < xs.size(); ++n) {
    px += xs[n];
    py += ys[n];
    if (px < py) return false;
  }
  return true;  // totals are both 1 by the distribution invariant
}

bool prefix_dominates(const std::vector<double>& xs, const std::vector<double>& ys) {
  double px = 0, py = 0;
  for (std::size_t n = 0; n + 1 < xs.size(); ++n) {
    px += xs[n];
    py += ys[n];
    if (px < py - Tolerances::slack) return false;
  }
  return true;
}

void check_sizes(const Distribution& x, const Distribution& y) {
  if (x.size() != y.size())
    throw_error(ErrorKind::DimensionMismatch, "majorization: alphabet sizes differ");
}

template <typename T>
T abs_deviation_sum(const std::vector<T>& v, const T& t) {
  T acc(0);
  for (const auto& x : v) acc += x < t ? t - x : x - t;
  return acc;
}

// T-transform schedule on descending-sorted vectors; returns the doubly
// stochastic product with D·xs = ys and counts the transforms used.
template <typename T>
StochasticChannel t_transform_product(std::vector<T> xs, const std::vector<T>& ys, int& count) {
  const std::size_t k = xs.size();
  auto equal = [](const T& a, const T& b) {
    if constexpr (std::is_same_v<T, Rational>)
      return a == b;
    else
      return std::fabs(a - b) <= Tolerances::equality;
  };
  StochasticChannel d = StochasticChannel::identity(k);
  count = 0;
  for (std::size_t step = 0;; ++step) {
    if (step > k)
      throw_error(ErrorKind::NotMajorized, "internal: T-transform schedule did not converge");
    std::size_t j = k;
    for (std::size_t i = k; i-- > 0;) {
      if (!equal(xs[i], ys[i]) && ys[i] < xs[i]) { j = i; break; }
    }
    if (j == k) break;  // xs == ys
    std::size_t l = k;
    for (std::size_t i = j + 1; i < k; ++i) {
      if (!equal(xs[i], ys[i]) && xs[i] < ys[i]) { l = i; break; }
    }
    if (l == k)
      throw_error(ErrorKind::NotMajorized, "internal: no receiving index, x does not majorize y");

    T gap_j = xs[j] - ys[j], gap_l = ys[l] - xs[l];
    T delta = gap_j < gap_l ? gap_j : gap_l;
    T lam = (xs[j] - delta - xs[l]) / (xs[j] - xs[l]);  // xs[j] > xs[l] strictly here

    std::vector<Scalar> e(k * k, Scalar(Rational(0)));
    for (std::size_t i = 0; i < k; ++i) e[i * k + i] = Scalar(Rational(1));
    Scalar lam_s(lam);
    Scalar one_minus = Scalar(Rational(1)) - lam_s;
    e[j * k + j] = lam_s;
    e[l * k + l] = lam_s;
    e[j * k + l] = one_minus;
    e[l * k + j] = one_minus;
    d = compose(StochasticChannel(k, k, std::move(e)), d);
    xs[j] -= delta;
    xs[l] += delta;
    ++count;
  }
  return d;
}

}  // namespace

bool majorizes(const Distribution& x, const Distribution& y) {
  check_sizes(x, y);
  if (x.is_exact() && y.is_exact())
    return prefix_dominates(sorted_desc(x.to_rationals()), sorted_desc(y.to_rationals()));
  return prefix_dominates(sorted_desc(x.to_doubles()), sorted_desc(y.to_doubles()));
}

bool majorizes_t_criterion(const Distribution& x, const Distribution& y) {
  check_sizes(x, y);
  if (x.is_exact() && y.is_exact()) {
    auto xs = x.to_rationals(), ys = y.to_rationals();
    std::vector<Rational> breakpoints = xs;
    breakpoints.insert(breakpoints.end(), ys.begin(), ys.end());
    for (const auto& t : breakpoints)
      if (abs_deviation_sum(xs, t) < abs_deviation_sum(ys, t)) return false;
    return true;
  }
  auto xs = x.to_doubles(), ys = y.to_doubles();
  std::vector<double> breakpoints = xs;
  breakpoints.insert(breakpoints.end(), ys.begin(), ys.end());
  for (double t : breakpoints)
    if (abs_deviation_sum(xs, t) < abs_deviation_sum(ys, t) - Tolerances::slack) return false;
  return true;
}

MajorizationWitness construct_doubly_stochastic(const Distribution& x, const Distribution& y) {
  check_sizes(x, y);
  if (!majorizes(x, y))
    throw_error(ErrorKind::NotMajorized, "construct_doubly_stochastic: x does not majorize y");

  int count = 0;
  StochasticChannel core = [&]() {
    if (x.is_exact() && y.is_exact()) {
      auto xr = x.to_rationals(), yr = y.to_rationals();
      return t_transform_product(sorted_desc(xr), sorted_desc(yr), count);
    }
    auto xd = x.to_doubles(), yd = y.to_doubles();
    return t_transform_product(sorted_desc(xd), sorted_desc(yd), count);
  }();

  // conjugate by the sorting permutations so the witness acts in the
  // original letter order: D = P_y⁻¹ ∘ D_sorted ∘ P_x
  const std::size_t k = x.size();
  auto order_of = [](const Distribution& d) {
    return d.is_exact() ? descending_order(d.to_rationals()) : descending_order(d.to_doubles());
  };
  auto ox = order_of(x), oy = order_of(y);
  std::vector<std::size_t> perm_x(k), perm_y_inv(k);
  for (std::size_t pos = 0; pos < k; ++pos) {
    perm_x[ox[pos]] = pos;       // original letter -> sorted position
    perm_y_inv[pos] = oy[pos];   // sorted position -> original letter
  }
  StochasticChannel d =
      compose(StochasticChannel::permutation(perm_y_inv), compose(core, StochasticChannel::permutation(perm_x)));
  return MajorizationWitness{std::move(d), count};
}

bool catalytic_majorization_necessary(const Distribution& p, const Distribution& p_prime,
                                      const std::vector<Order>& alphas) {
  if (p.size() != p_prime.size())
    throw_error(ErrorKind::DimensionMismatch, "catalytic check: alphabet sizes differ");
  for (const auto& a : alphas) {
    double hp = renyi_entropy(a, p), hq = renyi_entropy(a, p_prime);
    if (std::isinf(hp) && std::isinf(hq) && (hp > 0) == (hq > 0)) continue;
    if (!(hp <= hq + Tolerances::equality)) return false;
  }
  return true;
}

}  // namespace relmaj
