#include "doctest.h"

#include <cmath>

#include "test_support.hpp"

using namespace rnm;

namespace {

SpacePtr uniform3() { return make_space({1.0 / 3, 1.0 / 3, 1.0 / 3}); }

}  // namespace

TEST_CASE("space invariants") {
  CHECK_THROWS_AS(make_space({}), DomainError);
  CHECK_THROWS_AS(make_space({0.5, 0.5, 0.0}), DomainError);
  CHECK_THROWS_AS(make_space({0.5, 0.6}), DomainError);
  CHECK_THROWS_AS(make_space({0.7, -0.2, 0.5}), DomainError);
  const SpacePtr space = make_space({0.5, 0.3, 0.2});
  CHECK(space->atom_count() == 3);
  CHECK(space->weight(1) == 0.3);
}

TEST_CASE("order tolerance is overridable per space") {
  const SpacePtr loose = make_space({0.5, 0.5}, 1e-6);
  CHECK(almost_sure_leq(L0Real(loose, {1.0 + 1e-7, 0.0}),
                        L0Real(loose, {1.0, 0.0})));
  const SpacePtr strict = make_space({0.5, 0.5});
  CHECK_FALSE(almost_sure_leq(L0Real(strict, {1.0 + 1e-7, 0.0}),
                              L0Real(strict, {1.0, 0.0})));
}

TEST_CASE("almost_sure_leq") {
  const SpacePtr space = uniform3();
  CHECK(almost_sure_leq(L0Real(space, {0, 0, 0}), L0Real(space, {1, 2, 3})));
  CHECK(almost_sure_leq(L0Real(space, {1, 1, 1}), L0Real(space, {1, 1, 1})));
  CHECK_FALSE(
      almost_sure_leq(L0Real(space, {0.5, 2.0, 0.1}), L0Real(space, {1, 1, 1})));
  CHECK_THROWS_AS(
      almost_sure_leq(L0Real(space, {0, 0, 0}),
                      L0Real(make_space({0.5, 0.5}), {0, 0})),
      DimensionError);
}

TEST_CASE("almost_sure_leq is a partial order on random triples") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const SpacePtr space = rnmtest::random_space(rng);
    const L0Real a = rnmtest::random_l0(rng, space);
    const L0Real b = rnmtest::random_l0(rng, space);
    const L0Real c = rnmtest::random_l0(rng, space);
    CHECK(almost_sure_leq(a, a));
    if (almost_sure_leq(a, b) && almost_sure_leq(b, c)) {
      // Transitivity accumulates at most two tolerance slacks; widen by one.
      const L0Real slack = c + 2 * kOrderTolerance;
      CHECK(almost_sure_leq(a, slack));
    }
    if (almost_sure_leq(a, b) && almost_sure_leq(b, a)) {
      CHECK((a - b).max_abs() <= 2 * kOrderTolerance);
    }
  }
}

TEST_CASE("lattice_sup") {
  const SpacePtr space = uniform3();
  const L0Real x(space, {1, 2, 3});
  CHECK(lattice_sup({x}).values() == std::vector<double>{1, 2, 3});
  CHECK(lattice_sup({L0Real(space, {1, 0, 0}), L0Real(space, {0, 2, 0}),
                     L0Real(space, {0, 0, 3})})
            .values() == std::vector<double>{1, 2, 3});
  CHECK(lattice_sup({x, x}).values() == x.values());
  CHECK_THROWS_AS(lattice_sup({}), DomainError);
}

TEST_CASE("lattice_sup dominates the family and any upper bound dominates it") {
  Rng rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const SpacePtr space = rnmtest::random_space(rng);
    std::vector<L0Real> family;
    const std::size_t n = 1 + rng.index(5);
    for (std::size_t i = 0; i < n; ++i) {
      family.push_back(rnmtest::random_l0(rng, space));
    }
    const L0Real sup = lattice_sup(family);
    L0Real bound = sup + rng.uniform(0.0, 1.0);
    for (const auto& member : family) {
      CHECK(almost_sure_leq(member, sup));
    }
    CHECK(almost_sure_leq(sup, bound));
  }
}

TEST_CASE("indicator") {
  const SpacePtr space = uniform3();
  CHECK(indicator(MeasurableSet::all(space)).values() ==
        std::vector<double>{1, 1, 1});
  CHECK(indicator(MeasurableSet::none(space)).values() ==
        std::vector<double>{0, 0, 0});
  CHECK(indicator(MeasurableSet::of(space, {1})).values() ==
        std::vector<double>{0, 1, 0});
}

TEST_CASE("indicator of A plus indicator of complement is one") {
  Rng rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const SpacePtr space = rnmtest::random_space(rng);
    const MeasurableSet A = rnmtest::random_set(rng, space);
    const L0Real sum = indicator(A) + indicator(A.complement());
    CHECK(sum.values() == L0Real::constant(space, 1.0).values());
  }
}

TEST_CASE("prob_of_exceed") {
  const SpacePtr space = make_space({0.5, 0.3, 0.2});
  CHECK(prob_of_exceed(L0Real::zero(space), 0.1) == 0.0);
  CHECK(prob_of_exceed(L0Real(space, {0.05, 1, 1}), 0.1) == doctest::Approx(0.5));
  CHECK(prob_of_exceed(L0Real(space, {5, 5, 5}), 1.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(prob_of_exceed(L0Real::zero(space), 0.0), DomainError);
  CHECK_THROWS_AS(prob_of_exceed(L0Real::zero(space), -1.0), DomainError);
}

TEST_CASE("prob_of_exceed is monotone non-increasing in eps") {
  Rng rng(14);
  for (int trial = 0; trial < 100; ++trial) {
    const SpacePtr space = rnmtest::random_space(rng);
    const L0Real xi = rnmtest::random_l0(rng, space);
    const double small = rng.uniform(0.01, 1.0);
    const double big = small + rng.uniform(0.0, 2.0);
    CHECK(prob_of_exceed(xi, big) <= prob_of_exceed(xi, small));
  }
}

TEST_CASE("converges_in_probability") {
  const SpacePtr space = make_space({0.5, 0.3, 0.2});
  const L0Real limit(space, {0.3, -0.7, 2.0});

  std::vector<L0Real> constant(40, limit);
  CHECK(converges_in_probability(constant, limit, 0.01, 0.001, 0));
  CHECK(converges_in_probability(constant, limit, 1.0, 0.9, 10));

  std::vector<L0Real> shrinking;
  for (int n = 1; n <= 400; ++n) {
    shrinking.push_back(L0Real::constant(space, 1.0 / n));
  }
  CHECK(converges_in_probability(shrinking, L0Real::zero(space), 0.01, 0.5, 200));

  std::vector<L0Real> stuck(10, indicator(MeasurableSet::of(space, {2})));
  CHECK_FALSE(
      converges_in_probability(stuck, L0Real::zero(space), 0.5, 0.1, 1));

  CHECK_THROWS_AS(
      converges_in_probability(constant, limit, 0.01, 0.001, constant.size()),
      DomainError);
  CHECK_THROWS_AS(converges_in_probability(constant, limit, 0.01, 1.5, 0),
                  DomainError);
}

TEST_CASE("uniform convergence implies convergence in probability") {
  Rng rng(15);
  for (int trial = 0; trial < 50; ++trial) {
    const SpacePtr space = rnmtest::random_space(rng);
    const L0Real limit = rnmtest::random_l0(rng, space);
    std::vector<L0Real> seq;
    for (int n = 1; n <= 60; ++n) {
      seq.push_back(limit + rnmtest::random_l0(rng, space, -1.0, 1.0) *
                                (1.0 / (n * n)));
    }
    const double eps = rng.uniform(0.05, 0.5);
    const double lambda = rng.uniform(0.05, 0.9);
    CHECK(converges_in_probability(seq, limit, eps, lambda, 40));
  }
}

TEST_CASE("validate_partition") {
  const SpacePtr space = uniform3();
  const Partition atomic = validate_partition({MeasurableSet::of(space, {0}),
                                               MeasurableSet::of(space, {1}),
                                               MeasurableSet::of(space, {2})});
  CHECK(atomic.size() == 3);

  CHECK_THROWS_WITH_AS(
      validate_partition(
          {MeasurableSet::of(space, {0, 1}), MeasurableSet::of(space, {1, 2})}),
      "pieces overlap at atom 1", PartitionError);

  const Partition dropped = validate_partition({MeasurableSet::of(space, {0}),
                                                MeasurableSet::none(space),
                                                MeasurableSet::of(space, {1, 2})});
  CHECK(dropped.size() == 2);

  CHECK_THROWS_WITH_AS(validate_partition({MeasurableSet::of(space, {0})}),
                       "pieces leave a gap at atom 1", PartitionError);
}

TEST_CASE("glue of scalars is piecewise selection") {
  const SpacePtr space = uniform3();
  const Partition partition = validate_partition(
      {MeasurableSet::of(space, {0}), MeasurableSet::of(space, {1, 2})});
  const L0Real glued =
      glue(partition, {L0Real(space, {1, 1, 1}), L0Real(space, {5, 6, 7})});
  CHECK(glued.values() == std::vector<double>{1, 6, 7});
  CHECK_THROWS_AS(glue(partition, {L0Real(space, {1, 1, 1})}), DomainError);
}
