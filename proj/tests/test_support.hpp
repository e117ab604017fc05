#pragma once

#include <vector>

#include "rnm/dynamics.hpp"
#include "rnm/measure.hpp"
#include "rnm/module.hpp"
#include "rnm/rng.hpp"

namespace rnmtest {

using namespace rnm;

inline SpacePtr random_space(Rng& rng, std::size_t max_atoms = 8,
                             std::size_t min_atoms = 1) {
  const std::size_t atoms = min_atoms + rng.index(max_atoms - min_atoms + 1);
  std::vector<double> weights(atoms);
  double sum = 0.0;
  for (double& w : weights) {
    w = rng.uniform(0.05, 1.0);
    sum += w;
  }
  for (double& w : weights) w /= sum;
  double head = 0.0;
  for (std::size_t i = 0; i + 1 < weights.size(); ++i) head += weights[i];
  weights.back() = 1.0 - head;
  return make_space(weights);
}

inline FiberSpec random_fiber(Rng& rng, int max_dim = 3) {
  static const double qs[] = {1.5, 2.0, 3.0};
  return FiberSpec(1 + static_cast<int>(rng.index(static_cast<std::size_t>(max_dim))),
                   qs[rng.index(3)]);
}

inline RNElement random_element(Rng& rng, const SpacePtr& space,
                                const FiberSpec& fiber, double scale = 2.0) {
  std::vector<double> data(space->atom_count() *
                           static_cast<std::size_t>(fiber.dimension()));
  for (double& v : data) v = scale * rng.normal();
  return RNElement(space, fiber, std::move(data));
}

inline L0Real random_l0(Rng& rng, const SpacePtr& space, double lo = -3.0,
                        double hi = 3.0) {
  std::vector<double> v(space->atom_count());
  for (double& x : v) x = rng.uniform(lo, hi);
  return L0Real(space, std::move(v));
}

inline MeasurableSet random_set(Rng& rng, const SpacePtr& space) {
  std::vector<std::uint8_t> m(space->atom_count());
  for (auto& f : m) f = rng.coin() ? 1 : 0;
  return MeasurableSet(space, std::move(m));
}

inline ConvexBody random_body(Rng& rng, const SpacePtr& space,
                              const FiberSpec& fiber) {
  if (rng.coin()) {
    return ConvexBody::ball(random_element(rng, space, fiber, 1.0),
                            random_l0(rng, space, 0.2, 2.0));
  }
  const RNElement lower = random_element(rng, space, fiber, 1.0);
  std::vector<double> upper = lower.data();
  for (double& v : upper) v += rng.uniform(0.2, 2.0);
  return ConvexBody::box(lower, RNElement(space, fiber, std::move(upper)));
}

inline Partition random_partition(Rng& rng, const SpacePtr& space,
                                  std::size_t max_pieces = 4) {
  const std::size_t labels =
      1 + rng.index(std::min(max_pieces, space->atom_count()));
  std::vector<std::vector<std::size_t>> groups(labels);
  for (std::size_t a = 0; a < space->atom_count(); ++a) {
    groups[rng.index(labels)].push_back(a);
  }
  std::vector<MeasurableSet> pieces;
  for (const auto& g : groups) {
    if (!g.empty()) pieces.push_back(MeasurableSet::of(space, g));
  }
  return validate_partition(pieces);
}

}  // namespace rnmtest
