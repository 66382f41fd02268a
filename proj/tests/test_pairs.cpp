#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "relmaj/divergence.hpp"
#include "relmaj/majorize.hpp"
#include "relmaj/pairs.hpp"
#include "test_support.hpp"

using namespace relmaj;
using testsupport::rng;

namespace {
Distribution r(std::initializer_list<Rational> w) { return Distribution::from_rationals(w); }
Distribution d(std::initializer_list<double> w) { return Distribution::from_doubles(w); }

bool witness_is_sound(const RelmajDecision& dec) {
  if (!dec.feasible || !dec.witness) return false;
  return apply(*dec.witness, dec.source_used.p) == dec.target_used.p &&
         apply(*dec.witness, dec.source_used.q) == dec.target_used.q;
}
}  // namespace

TEST_CASE("relative spectrum") {
  CHECK(relative_spectrum(DistPair(Distribution::uniform(3), Distribution::uniform(3)))
            .finite_values == std::vector<Rational>{Rational(1)});
  RelativeSpectrum s =
      relative_spectrum(DistPair(r({Rational(1), Rational(0)}), Distribution::uniform(2)));
  CHECK(s.finite_values == std::vector<Rational>{Rational(0), Rational(2)});
  CHECK_FALSE(s.has_infinity);
  RelativeSpectrum s2 = relative_spectrum(
      DistPair(r({Rational(3, 4), Rational(1, 4)}), Distribution::uniform(2)));
  CHECK(s2.finite_values == std::vector<Rational>{Rational(1, 2), Rational(3, 2)});
  // q-zero letter with p-mass contributes the infinite point
  RelativeSpectrum s3 =
      relative_spectrum(DistPair(Distribution::uniform(2), r({Rational(0), Rational(1)})));
  CHECK(s3.has_infinity);
}

TEST_CASE("relatively_majorizes worked examples") {
  DistPair one(r({Rational(1), Rational(0)}), Distribution::uniform(2));
  DistPair half(Distribution::uniform(2), Distribution::uniform(2));

  auto self = relatively_majorizes(one, one);
  CHECK(self.feasible);
  CHECK(witness_is_sound(self));

  auto down = relatively_majorizes(one, half);
  REQUIRE(down.feasible);
  CHECK(witness_is_sound(down));
  // exhibited witness [[1/2,1/2],[1/2,1/2]] satisfies both equations
  StochasticChannel flat(2, 2, {Scalar(Rational(1, 2)), Scalar(Rational(1, 2)),
                                Scalar(Rational(1, 2)), Scalar(Rational(1, 2))});
  CHECK(apply(flat, one.p) == half.p);
  CHECK(apply(flat, one.q) == half.q);

  auto up = relatively_majorizes(half, one);
  CHECK_FALSE(up.feasible);  // D_inf data processing rules it out
  CHECK(renyi_divergence(Order::infinity(), half.p, half.q) <
        renyi_divergence(Order::infinity(), one.p, one.q));
}

TEST_CASE("blackwell criterion matches on the worked examples") {
  DistPair one(r({Rational(1), Rational(0)}), Distribution::uniform(2));
  DistPair half(Distribution::uniform(2), Distribution::uniform(2));
  CHECK(blackwell_criterion(one, one));
  CHECK(blackwell_criterion(one, half));
  CHECK_FALSE(blackwell_criterion(half, one));
}

TEST_CASE("cross-method agreement on random rational instances") {
  auto g = rng(73);
  int feasible_count = 0;
  for (int i = 0; i < 250; ++i) {
    std::size_t ks = 2 + static_cast<std::size_t>(i % 4);        // 2..5
    std::size_t kt = 2 + static_cast<std::size_t>((i / 3) % 4);  // 2..5
    DistPair src(testsupport::random_rational_distribution(g, ks),
                 testsupport::random_rational_distribution(g, ks, true));
    DistPair tgt(testsupport::random_rational_distribution(g, kt),
                 testsupport::random_rational_distribution(g, kt, true));
    auto lp = relatively_majorizes(src, tgt);
    CHECK(lp.feasible == blackwell_criterion(src, tgt));
    if (lp.feasible) {
      ++feasible_count;
      CHECK(witness_is_sound(lp));
      // necessity of divergences for sampled alpha >= 0
      for (double a : {0.0, 0.5, 1.0, 2.0})
        CHECK(renyi_divergence(Order(a), src.p, src.q) >=
              renyi_divergence(Order(a), tgt.p, tgt.q) - 1e-9);
      double dinf_src = renyi_divergence(Order::infinity(), src.p, src.q);
      if (std::isfinite(dinf_src))
        CHECK(dinf_src >= renyi_divergence(Order::infinity(), tgt.p, tgt.q) - 1e-9);
    }
  }
  CHECK(feasible_count > 0);
}

TEST_CASE("images under a channel are always reachable (sanity direction)") {
  auto g = rng(79);
  for (int i = 0; i < 60; ++i) {
    std::size_t ks = 2 + static_cast<std::size_t>(i % 3), kt = 2 + static_cast<std::size_t>((i / 2) % 3);
    DistPair src(testsupport::random_rational_distribution(g, ks),
                 testsupport::random_rational_distribution(g, ks, true));
    StochasticChannel n = testsupport::random_rational_channel(g, kt, ks);
    DistPair tgt(apply(n, src.p), apply(n, src.q));
    CHECK(relatively_majorizes(src, tgt).feasible);
    CHECK(blackwell_criterion(src, tgt));
  }
}

TEST_CASE("uniform references collapse to plain majorization") {
  auto g = rng(83);
  for (int i = 0; i < 120; ++i) {
    std::size_t k = 2 + static_cast<std::size_t>(i % 4);
    Distribution x = testsupport::random_rational_distribution(g, k);
    Distribution y = testsupport::random_rational_distribution(g, k);
    DistPair src(x, Distribution::uniform(k)), tgt(y, Distribution::uniform(k));
    bool rm = relatively_majorizes(src, tgt).feasible;
    CHECK(rm == majorizes(x, y));
    CHECK(rm == blackwell_criterion(src, tgt));
    CHECK(rm == majorizes_t_criterion(x, y));
  }
}

TEST_CASE("float inputs are rationalized and recorded") {
  DistPair src(d({1.0 / 3.0, 2.0 / 3.0}), d({0.5, 0.5}));
  DistPair tgt(d({0.5, 0.5}), d({0.5, 0.5}));
  auto dec = relatively_majorizes(src, tgt);
  CHECK(dec.rationalized);
  CHECK(dec.source_used.p.is_exact());
  CHECK(dec.source_used.p[0].rational() == Rational(1, 3));  // continued fraction recovers 1/3
  CHECK(dec.feasible);
  CHECK(witness_is_sound(dec));
  CHECK(blackwell_criterion(src, tgt) == dec.feasible);
}

TEST_CASE("rationalize keeps exact inputs and normalizes float ones") {
  Distribution f = d({0.1, 0.9});
  Distribution rf = rationalize(f);
  CHECK(rf.is_exact());
  Rational total(0);
  for (std::size_t i = 0; i < rf.size(); ++i) total += rf[i].rational();
  CHECK(total == Rational(1));
  CHECK(rf[0].rational() == Rational(1, 10));
  Distribution e = Distribution::uniform(3);
  CHECK(rationalize(e) == e);
}

TEST_CASE("pair construction rejects mismatched alphabets") {
  CHECK_THROWS_AS(DistPair(Distribution::uniform(2), Distribution::uniform(3)), Error);
}
