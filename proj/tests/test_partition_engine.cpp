#include "doctest.h"

#include <cmath>
#include <limits>

#include "rnm/duality.hpp"
#include "rnm/partition_engine.hpp"
#include "test_support.hpp"

using namespace rnm;

namespace {

SpacePtr space3() { return make_space({0.5, 0.3, 0.2}); }

std::vector<L0Real> constant_ones(const SpacePtr& space, int horizon) {
  return std::vector<L0Real>(static_cast<std::size_t>(horizon),
                             L0Real::constant(space, 1.0));
}

ConvexBody unit_ball(const SpacePtr& space) {
  return ConvexBody::ball(RNElement::zero(space, FiberSpec(2, 2.0)),
                          L0Real::constant(space, 1.0));
}

}  // namespace

TEST_CASE("egoroff pieces") {
  const SpacePtr space = space3();

  SUBCASE("constant certificate gives one piece") {
    const Partition p = egoroff_pieces(constant_ones(space, 32), 32);
    CHECK(p.size() == 1);
    CHECK(p.piece(0).count() == 3);
  }

  SUBCASE("identical geometric rates give one piece") {
    std::vector<L0Real> eta;
    for (int m = 1; m <= 32; ++m) {
      eta.push_back(L0Real::constant(space, 1.0 + std::pow(2.0, -m)));
    }
    const Partition p = egoroff_pieces(eta, 32);
    CHECK(p.size() == 1);
  }

  SUBCASE("distinct rates are grouped with per-piece uniformity") {
    std::vector<L0Real> eta;
    for (int m = 1; m <= 40; ++m) {
      // Atom 0 settles immediately; atoms 1, 2 carry a slow geometric tail.
      eta.push_back(L0Real(
          space, {1.0, 1.0 + 4.0 * std::pow(0.7, m), 1.0 + 4.0 * std::pow(0.7, m)}));
    }
    const Partition p = egoroff_pieces(eta, 40);
    CHECK(p.size() >= 1);
    CHECK(p.size() <= 2);
    const L0Real& last = eta.back();
    for (const auto& piece : p.pieces()) {
      double dev = 0.0;
      for (std::size_t a = 0; a < 3; ++a) {
        if (piece.contains(a)) {
          dev = std::max(dev, std::abs(last.value(a) - 1.0));
        }
      }
      CHECK(dev <= 1e-3);
    }
  }

  SUBCASE("a non-converging atom is named") {
    std::vector<L0Real> eta(16, L0Real(space, {1.0, 1.5, 1.0}));
    CHECK_THROWS_WITH_AS(egoroff_pieces(eta, 16),
                         doctest::Contains("atom 1"), NonConvergenceError);
  }
}

TEST_CASE("decompose: body bins split the constant-certificate case") {
  const SpacePtr space = space3();
  const FiberSpec fiber(2, 2.0);
  const ConvexBody ball = ConvexBody::ball(RNElement::zero(space, fiber),
                                           L0Real(space, {0.8, 2.5, 2.5}));
  const AsymptoticMap map = make_contraction(
      ball, L0Real::constant(space, 0.5), RNElement::zero(space, fiber));
  const auto pieces = decompose(map, ball, 32);
  REQUIRE(pieces.size() == 2);
  // Bins 0 <= 0.8 < 1 and 2 <= 2.5 < 3.
  CHECK(pieces[0].piece == MeasurableSet::of(space, {0}));
  CHECK(pieces[0].norm_bound == 1);
  CHECK(pieces[1].piece == MeasurableSet::of(space, {1, 2}));
  CHECK(pieces[1].norm_bound == 3);
  for (const auto& pd : pieces) {
    CHECK(pd.beta_at(1) == doctest::Approx(1.0));
  }
}

TEST_CASE("decompose: eta sup lands in the [1,2) bracket") {
  const SpacePtr space = space3();
  const FiberSpec fiber(2, 2.0);
  const ConvexBody ball = ConvexBody::ball(RNElement::zero(space, fiber),
                                           L0Real::constant(space, 0.9));
  const AsymptoticMap base = make_contraction(
      ball, L0Real::constant(space, 0.5), RNElement::zero(space, fiber));
  // eta_m = 1 + 0.5^m everywhere: sup at the pivot index is 1.5.
  const AsymptoticMap map = with_eta_slack(base, L0Real::constant(space, 1.0),
                                           L0Real::constant(space, 0.5));
  const auto pieces = decompose(map, ball, 64);
  REQUIRE(pieces.size() == 1);
  CHECK(pieces[0].piece.count() == 3);
  CHECK(pieces[0].norm_bound == 1);
  CHECK(pieces[0].beta_at(1) == doctest::Approx(1.5));
}

TEST_CASE("decompose: single atom space is one piece") {
  const SpacePtr space = make_space({1.0});
  const FiberSpec fiber(2, 2.0);
  const ConvexBody ball = ConvexBody::ball(RNElement::zero(space, fiber),
                                           L0Real::constant(space, 3.7));
  const AsymptoticMap map = make_rotation(ball, L0Real::constant(space, 1.0));
  const auto pieces = decompose(map, 16);
  CHECK(pieces.size() == 1);
  CHECK(pieces[0].norm_bound == 4);
}

TEST_CASE("decompose: beta is the exact per-piece supremum") {
  Rng rng(51);
  for (int trial = 0; trial < 25; ++trial) {
    const SpacePtr space = rnmtest::random_space(rng, 6);
    const FiberSpec fiber(2, 2.0);
    const ConvexBody ball =
        ConvexBody::ball(rnmtest::random_element(rng, space, fiber, 0.5),
                         rnmtest::random_l0(rng, space, 0.2, 3.0));
    const AsymptoticMap base = make_rotation(
        ball, rnmtest::random_l0(rng, space, 0.2, 2.0));
    const AsymptoticMap map = with_eta_slack(
        base, rnmtest::random_l0(rng, space, 0.0, 3.0),
        rnmtest::random_l0(rng, space, 0.3, 0.7));
    const int horizon = 64;
    const auto pieces = decompose(map, horizon);

    std::vector<MeasurableSet> sets;
    for (const auto& pd : pieces) sets.push_back(pd.piece);
    CHECK_NOTHROW(validate_partition(sets));  // disjoint cover, no empties

    const L0Real bound = ball.bound();
    for (const auto& pd : pieces) {
      CHECK(pd.beta.back() >= 1.0 - 1e-9);
      CHECK(std::abs(pd.beta.back() - 1.0) <= 1e-6);
      for (int m = 1; m <= horizon; ++m) {
        double expect = 0.0;
        for (std::size_t a = 0; a < space->atom_count(); ++a) {
          if (pd.piece.contains(a)) {
            expect = std::max(expect, map.eta_at(m).value(a));
          }
        }
        CHECK(pd.beta_at(m) == expect);
      }
      for (std::size_t a = 0; a < space->atom_count(); ++a) {
        if (pd.piece.contains(a)) {
          CHECK(bound.value(a) <= pd.norm_bound);
        }
      }
    }
  }
}

TEST_CASE("restricted bodies are norm-bounded in every Lp") {
  Rng rng(52);
  const SpacePtr space = space3();
  const FiberSpec fiber(2, 2.0);
  const ConvexBody ball = ConvexBody::ball(RNElement::zero(space, fiber),
                                           L0Real(space, {0.8, 2.5, 2.5}));
  const AsymptoticMap map = make_contraction(
      ball, L0Real::constant(space, 0.5), RNElement::zero(space, fiber));
  const auto pieces = decompose(map, 32);
  for (const auto& pd : pieces) {
    for (int k = 0; k < 50; ++k) {
      const RNElement member = restrict_to(ball.sample(rng), pd.piece);
      for (double p : {1.0, 2.0, 3.0, std::numeric_limits<double>::infinity()}) {
        CHECK(lp_norm(member, p) <= pd.norm_bound + 1e-9);
      }
    }
  }
}

TEST_CASE("restricted bodies are convex under sampling") {
  Rng rng(59);
  for (int trial = 0; trial < 30; ++trial) {
    const SpacePtr space = rnmtest::random_space(rng, 6);
    const FiberSpec fiber = rnmtest::random_fiber(rng);
    const ConvexBody body = rnmtest::random_body(rng, space, fiber);
    const MeasurableSet piece = rnmtest::random_partition(rng, space).piece(0);
    const RNElement u = restrict_to(body.sample(rng), piece);
    const RNElement v = restrict_to(body.sample(rng), piece);
    const double t = rng.uniform(0.0, 1.0);
    const RNElement combo = u * t + v * (1.0 - t);
    // A restricted point belongs to the restricted body iff completing it
    // with any member off the piece lands in the body.
    const RNElement completed =
        combo + module_scale(indicator(piece.complement()), body.center_point());
    CHECK(body.contains(completed, 1e-9));
    for (std::size_t a = 0; a < space->atom_count(); ++a) {
      if (!piece.contains(a)) {
        CHECK(l0_norm(combo).value(a) == 0.0);
      }
    }
  }
}

TEST_CASE("induced map") {
  const SpacePtr space = space3();
  const FiberSpec fiber(2, 2.0);
  const ConvexBody ball = unit_ball(space);
  Rng rng(53);

  SUBCASE("whole-space piece reproduces the map") {
    const AsymptoticMap halve = make_contraction(
        ball, L0Real::constant(space, 0.5), RNElement::zero(space, fiber));
    const InducedMap fi = induced_map(halve, MeasurableSet::all(space));
    const RNElement x = ball.sample(rng);
    CHECK(exact_equal(fi.apply(x), halve.apply(x)));
  }

  SUBCASE("identity induces the identity on the restricted body") {
    const AsymptoticMap id = make_identity(ball);
    const MeasurableSet piece = MeasurableSet::of(space, {0, 2});
    const InducedMap fi = induced_map(id, piece);
    const RNElement u = restrict_to(ball.sample(rng), piece);
    CHECK(exact_equal(fi.apply(u), u));
  }

  SUBCASE("glued map restricted to a piece acts by its component") {
    const MeasurableSet A = MeasurableSet::of(space, {0, 1});
    const Partition partition = validate_partition({A, A.complement()});
    const AsymptoticMap g = make_contraction(
        ball, L0Real::constant(space, 0.25), RNElement::zero(space, fiber));
    const AsymptoticMap h = make_rotation(ball, L0Real::constant(space, 0.9));
    const AsymptoticMap glued = make_glued(partition, {g, h});
    const InducedMap fi = induced_map(glued, A);
    const RNElement x = ball.sample(rng);
    const RNElement u = restrict_to(x, A);
    CHECK(exact_equal(fi.apply(u), restrict_to(g.apply(x), A)));
  }

  SUBCASE("a non-sigma-stable map is caught") {
    // Couples atoms through the total norm, so representatives disagree.
    const ConvexBody domain = ball;
    auto coupled = [domain](const RNElement& x) {
      const double total = lp_norm(x, 2.0);
      return x * (0.5 / (1.0 + total));
    };
    const AsymptoticMap bad = AsymptoticMap::make(
        "coupled", ball, coupled, constant_ones(space, 8), /*sigma_stable=*/false,
        std::nullopt);
    const InducedMap fi = induced_map(bad, MeasurableSet::of(space, {0}));
    const RNElement u =
        restrict_to(ball.sample(rng), MeasurableSet::of(space, {0}));
    CHECK_THROWS_AS(fi.apply(u), SigmaStabilityError);
  }
}

TEST_CASE("induced Lipschitz check") {
  const SpacePtr space = space3();
  const FiberSpec fiber(2, 2.0);

  SUBCASE("halving passes with beta = 1") {
    const ConvexBody ball = unit_ball(space);
    const AsymptoticMap halve = make_contraction(
        ball, L0Real::constant(space, 0.5), RNElement::zero(space, fiber));
    const auto pieces = decompose(halve, 32);
    for (const auto& pd : pieces) {
      CHECK(induced_lipschitz_check(halve, pd, 2.0, 32, 24, 54).passed());
    }
  }

  SUBCASE("a stretching chain passes against its own beta") {
    std::vector<double> ones(space->atom_count() * 2, 1.0);
    const ConvexBody box =
        ConvexBody::box(RNElement::zero(space, FiberSpec(2, 2.0)),
                        RNElement(space, FiberSpec(2, 2.0), ones));
    const AsymptoticMap chain = make_stretch_chain(box, {1.0, 1.5});
    const auto pieces = decompose(chain, 32);
    bool saw_stretch = false;
    for (const auto& pd : pieces) {
      saw_stretch = saw_stretch || pd.beta_at(1) == doctest::Approx(1.5);
      CHECK(induced_lipschitz_check(chain, pd, 2.0, 16, 24, 55).passed());
    }
    CHECK(saw_stretch);
  }

  SUBCASE("degenerate pairs cost nothing") {
    const ConvexBody ball = unit_ball(space);
    const AsymptoticMap id = make_identity(ball);
    const auto pieces = decompose(id, 8);
    // u = v makes both sides zero; the check runs and passes trivially.
    CHECK(induced_lipschitz_check(id, pieces.front(), 2.0, 8, 4, 56).passed());
  }

  SUBCASE("parameter guards") {
    const ConvexBody ball = unit_ball(space);
    const AsymptoticMap id = make_identity(ball);
    const auto pieces = decompose(id, 8);
    CHECK_THROWS_AS(
        induced_lipschitz_check(id, pieces.front(), 1.0, 8, 4, 57), DomainError);
  }
}

TEST_CASE("recomposition") {
  const SpacePtr space = space3();
  const FiberSpec fiber(2, 2.0);
  const ConvexBody ball = unit_ball(space);
  Rng rng(58);

  SUBCASE("single piece is trivial") {
    const AsymptoticMap halve = make_contraction(
        ball, L0Real::constant(space, 0.5), RNElement::zero(space, fiber));
    const auto pieces = decompose(halve, 16);
    REQUIRE(pieces.size() == 1);
    CHECK(recomposition_check(halve, pieces, ball.sample(rng)));
  }

  SUBCASE("piecewise-glued maps recompose exactly") {
    const Partition partition = validate_partition(
        {MeasurableSet::of(space, {0}), MeasurableSet::of(space, {1, 2})});
    const AsymptoticMap glued = make_glued(
        partition,
        {make_rotation(ball, L0Real::constant(space, 0.4)),
         make_contraction(ball, L0Real::constant(space, 0.5),
                          RNElement::zero(space, fiber))});
    const auto pieces = decompose(glued, 16);
    for (int k = 0; k < 25; ++k) {
      CHECK(recomposition_check(glued, pieces, ball.sample(rng)));
    }
  }

  SUBCASE("identity recomposes across arbitrary refinements") {
    const AsymptoticMap id = make_identity(ball);
    const auto pieces = decompose(id, 8);
    for (int k = 0; k < 10; ++k) {
      CHECK(recomposition_check(id, pieces, ball.sample(rng)));
    }
  }
}
