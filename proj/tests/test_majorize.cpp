#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "relmaj/majorize.hpp"
#include "relmaj/pairs.hpp"
#include "test_support.hpp"

using namespace relmaj;
using testsupport::rng;

namespace {
Distribution d(std::initializer_list<double> w) { return Distribution::from_doubles(w); }
Distribution r(std::initializer_list<Rational> w) { return Distribution::from_rationals(w); }

bool witness_reproduces(const Distribution& x, const Distribution& y) {
  auto wit = construct_doubly_stochastic(x, y);
  if (!wit.matrix.is_doubly_stochastic()) return false;
  Distribution image = apply(wit.matrix, x);
  if (x.is_exact() && y.is_exact()) return image == y;
  for (std::size_t i = 0; i < y.size(); ++i)
    if (std::abs(image[i].as_double() - y[i].as_double()) > 1e-9) return false;
  return true;
}

// LP route for "exists doubly stochastic D with Dx = y": specialization of
// relative majorization with uniform references.
bool lp_majorizes(const Distribution& x, const Distribution& y) {
  DistPair src(x, Distribution::uniform(x.size())), tgt(y, Distribution::uniform(y.size()));
  return relatively_majorizes(src, tgt).feasible;
}

}  // namespace

TEST_CASE("partial-sum criterion basics") {
  CHECK(majorizes(d({0.6, 0.4}), d({0.5, 0.5})));
  CHECK_FALSE(majorizes(d({0.5, 0.5}), d({0.6, 0.4})));
  auto g = rng(51);
  for (int i = 0; i < 30; ++i) {
    std::size_t k = 2 + static_cast<std::size_t>(i % 5);
    Distribution p = testsupport::random_rational_distribution(g, k);
    CHECK(majorizes(p, Distribution::uniform(k)));  // uniform is the bottom element
    // permutations majorize each other both ways
    std::vector<Rational> shuffled = p.to_rationals();
    std::reverse(shuffled.begin(), shuffled.end());
    Distribution ps = Distribution::from_rationals(shuffled);
    CHECK(majorizes(p, ps));
    CHECK(majorizes(ps, p));
  }
  CHECK_THROWS_AS(majorizes(d({1, 0}), d({1, 0, 0})), Error);
}

TEST_CASE("t-criterion agrees with partial sums and its hand examples") {
  CHECK(majorizes_t_criterion(r({Rational(1), Rational(0)}), Distribution::uniform(2)));
  CHECK_FALSE(majorizes_t_criterion(Distribution::uniform(2), r({Rational(1), Rational(0)})));
  CHECK(majorizes_t_criterion(d({0.6, 0.4}), d({0.5, 0.5})));
  CHECK_FALSE(majorizes_t_criterion(d({0.5, 0.5}), d({0.6, 0.4})));

  auto g = rng(53);
  for (int i = 0; i < 200; ++i) {
    std::size_t k = 2 + static_cast<std::size_t>(i % 5);
    Distribution x = testsupport::random_rational_distribution(g, k);
    Distribution y = testsupport::random_rational_distribution(g, k);
    CHECK(majorizes(x, y) == majorizes_t_criterion(x, y));
  }
}

TEST_CASE("T-transform witness construction") {
  // identity case
  Distribution x = r({Rational(1, 2), Rational(3, 10), Rational(1, 5)});
  auto wit = construct_doubly_stochastic(x, x);
  CHECK(wit.t_transform_count == 0);
  CHECK(apply(wit.matrix, x) == x);

  // frozen 2x2 example: one T-transform with lambda = 1/2
  auto w2 = construct_doubly_stochastic(r({Rational(3, 5), Rational(2, 5)}), Distribution::uniform(2));
  CHECK(w2.t_transform_count == 1);
  for (std::size_t j = 0; j < 2; ++j)
    for (std::size_t i = 0; i < 2; ++i) CHECK(w2.matrix.entry(j, i).rational() == Rational(1, 2));

  // a 3-letter instance, verified by applying the witness
  Distribution x3 = r({Rational(1, 2), Rational(3, 10), Rational(1, 5)});
  Distribution y3 = r({Rational(2, 5), Rational(7, 20), Rational(1, 4)});
  REQUIRE(majorizes(x3, y3));
  CHECK(witness_reproduces(x3, y3));

  CHECK_THROWS_AS(construct_doubly_stochastic(Distribution::uniform(2), r({Rational(1), Rational(0)})),
                  Error);
}

TEST_CASE("witnesses stay exact in unsorted letter order") {
  auto g = rng(59);
  for (int i = 0; i < 150; ++i) {
    std::size_t k = 2 + static_cast<std::size_t>(i % 5);
    Distribution x = testsupport::random_rational_distribution(g, k);
    Distribution y = testsupport::random_rational_distribution(g, k);
    if (!majorizes(x, y)) continue;
    CHECK(witness_reproduces(x, y));
    CHECK(construct_doubly_stochastic(x, y).t_transform_count <= static_cast<int>(k) - 1);
  }
}

TEST_CASE("four-way agreement: partial sums, t-criterion, LP, construction") {
  auto g = rng(61);
  int majorizing = 0;
  for (int i = 0; i < 120; ++i) {
    std::size_t k = 2 + static_cast<std::size_t>(i % 5);
    Distribution x = testsupport::random_rational_distribution(g, k);
    Distribution y = testsupport::random_rational_distribution(g, k);
    bool by_sums = majorizes(x, y);
    CHECK(by_sums == majorizes_t_criterion(x, y));
    CHECK(by_sums == lp_majorizes(x, y));
    if (by_sums) {
      ++majorizing;
      CHECK(witness_reproduces(x, y));
    }
  }
  CHECK(majorizing > 0);
}

TEST_CASE("majorization is reflexive and transitive on random triples") {
  auto g = rng(67);
  for (int i = 0; i < 100; ++i) {
    std::size_t k = 2 + static_cast<std::size_t>(i % 4);
    Distribution a = testsupport::random_rational_distribution(g, k);
    Distribution b = testsupport::random_rational_distribution(g, k);
    Distribution c = testsupport::random_rational_distribution(g, k);
    CHECK(majorizes(a, a));
    if (majorizes(a, b) && majorizes(b, c)) CHECK(majorizes(a, c));
  }
}

TEST_CASE("catalytic necessary-condition sampler") {
  CHECK(catalytic_majorization_necessary(d({0.4, 0.6}), d({0.4, 0.6})));
  CHECK(catalytic_majorization_necessary(r({Rational(1), Rational(0)}), Distribution::uniform(2)));
  // fails at alpha = 1: Shannon entropies ln 2 vs 0
  CHECK_FALSE(catalytic_majorization_necessary(Distribution::uniform(2), r({Rational(1), Rational(0)})));
  // majorization implies the sampled entropy conditions
  auto g = rng(71);
  for (int i = 0; i < 60; ++i) {
    std::size_t k = 2 + static_cast<std::size_t>(i % 4);
    Distribution x = testsupport::random_rational_distribution(g, k);
    Distribution y = testsupport::random_rational_distribution(g, k);
    if (majorizes(x, y)) CHECK(catalytic_majorization_necessary(x, y));
  }
  CHECK_THROWS_AS(catalytic_majorization_necessary(d({1, 0}), d({1, 0, 0})), Error);
}
