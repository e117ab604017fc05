#include "rnm/partition_engine.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <tuple>
#include <utility>

#include "rnm/duality.hpp"
#include "rnm/rng.hpp"

namespace rnm {

namespace {

constexpr double kEtaConvergenceTol = 1e-3;
constexpr double kBetaHorizonTol = 1e-6;
constexpr double kLipschitzSlack = 1e-9;
constexpr double kRecompositionTol = 1e-12;

const L0Real& eta_entry(const std::vector<L0Real>& eta, int m) {
  const auto idx = std::min<std::size_t>(static_cast<std::size_t>(m), eta.size());
  return eta[idx - 1];
}

}  // namespace

double PieceData::beta_at(int m) const {
  if (m < 1) throw DomainError("beta index is 1-based");
  const auto idx = std::min<std::size_t>(static_cast<std::size_t>(m), beta.size());
  return beta[idx - 1];
}

Partition egoroff_pieces(const std::vector<L0Real>& eta, int horizon) {
  if (horizon < 1) throw DomainError("egoroff_pieces requires horizon >= 1");
  if (eta.empty()) throw DomainError("certificate sequence must be nonempty");
  const SpacePtr& space = eta.front().space();
  const std::size_t atoms = space->atom_count();

  const L0Real& last = eta_entry(eta, horizon);
  for (std::size_t a = 0; a < atoms; ++a) {
    if (std::abs(last.value(a) - 1.0) > kEtaConvergenceTol) {
      throw NonConvergenceError("certificate does not converge at atom " +
                                std::to_string(a) + " (|eta_M - 1| = " +
                                std::to_string(std::abs(last.value(a) - 1.0)) +
                                ")");
    }
  }

  // Rate bin: the integer bracket of sup_m m |eta_m - 1|. Atoms whose
  // certificates settle at comparable speed land in one piece.
  std::map<long long, std::vector<std::size_t>> bins;
  for (std::size_t a = 0; a < atoms; ++a) {
    double rate = 0.0;
    for (int m = 1; m <= horizon; ++m) {
      rate = std::max(rate, m * std::abs(eta_entry(eta, m).value(a) - 1.0));
    }
    bins[static_cast<long long>(std::floor(rate))].push_back(a);
  }

  std::vector<MeasurableSet> pieces;
  pieces.reserve(bins.size());
  for (const auto& [bin, members] : bins) {
    pieces.push_back(MeasurableSet::of(space, members));
  }
  Partition partition = validate_partition(pieces);

  // Uniformity on each piece: the tail deviation must be within tolerance at
  // the horizon for the piece as a whole.
  for (const auto& piece : partition.pieces()) {
    double dev = 0.0;
    for (std::size_t a = 0; a < atoms; ++a) {
      if (!piece.contains(a)) continue;
      dev = std::max(dev, std::abs(last.value(a) - 1.0));
    }
    if (dev > kEtaConvergenceTol) {
      throw NonConvergenceError("piece fails uniform convergence at the horizon");
    }
  }
  return partition;
}

std::vector<PieceData> decompose(const AsymptoticMap& f, const ConvexBody& G,
                                 int horizon) {
  const std::vector<L0Real>& eta = f.eta();
  const SpacePtr& space = G.space();
  const std::size_t atoms = space->atom_count();
  if (eta.front().atom_count() != atoms) {
    throw DimensionError("map and body live on different spaces");
  }
  const Partition rate_pieces = egoroff_pieces(eta, horizon);
  const L0Real xi = G.bound();

  // Key: (rate piece, eta-sup bracket, body-bound bracket), in that order.
  std::map<std::tuple<std::size_t, long long, long long>, std::vector<std::size_t>>
      cells;
  for (std::size_t k = 0; k < rate_pieces.size(); ++k) {
    const MeasurableSet& omega_k = rate_pieces.piece(k);
    // First index with piece-uniform |eta_m - 1| <= 1, capped at the horizon.
    int m_k = horizon;
    for (int m = 1; m <= horizon; ++m) {
      double dev = 0.0;
      for (std::size_t a = 0; a < atoms; ++a) {
        if (!omega_k.contains(a)) continue;
        dev = std::max(dev, std::abs(eta_entry(eta, m).value(a) - 1.0));
      }
      if (dev <= 1.0) {
        m_k = m;
        break;
      }
    }
    for (std::size_t a = 0; a < atoms; ++a) {
      if (!omega_k.contains(a)) continue;
      double sup_eta = 0.0;
      for (int m = 1; m <= m_k; ++m) {
        sup_eta = std::max(sup_eta, eta_entry(eta, m).value(a));
      }
      const auto j = static_cast<long long>(std::floor(sup_eta)) + 1;  // j-1 <= v < j
      const auto n = static_cast<long long>(std::floor(xi.value(a))) + 1;
      cells[{k, j, n}].push_back(a);
    }
  }

  std::vector<PieceData> result;
  result.reserve(cells.size());
  for (const auto& [key, members] : cells) {
    MeasurableSet piece = MeasurableSet::of(space, members);
    double max_xi = 0.0;
    for (std::size_t a : members) max_xi = std::max(max_xi, xi.value(a));
    const int norm_bound = std::max(1, static_cast<int>(std::ceil(max_xi)));

    std::vector<double> beta(static_cast<std::size_t>(horizon), 0.0);
    for (int m = 1; m <= horizon; ++m) {
      double b = 0.0;
      for (std::size_t a : members) {
        b = std::max(b, eta_entry(eta, m).value(a));
      }
      beta[static_cast<std::size_t>(m - 1)] = b;
    }
    if (beta.back() < 1.0 - 1e-9 || beta.back() > 1.0 + kBetaHorizonTol) {
      throw NonConvergenceError("per-piece certificate supremum fails to settle "
                                "at 1 by the horizon");
    }
    result.push_back(PieceData{std::move(piece), norm_bound, std::move(beta)});
  }

  // The cells refine a partition, so they form one; validate anyway.
  std::vector<MeasurableSet> check;
  check.reserve(result.size());
  for (const auto& pd : result) check.push_back(pd.piece);
  validate_partition(check);
  return result;
}

std::vector<PieceData> decompose(const AsymptoticMap& f, int horizon) {
  return decompose(f, f.domain(), horizon);
}

namespace {

// A second in-body reference point that differs from the center: half way
// toward the upper-right of the body.
RNElement second_reference(const ConvexBody& body) {
  if (body.kind() == ConvexBody::Kind::box) {
    return (body.center_point() + body.box_upper()) * 0.5;
  }
  const RNElement center = body.ball_center();
  const auto d = static_cast<std::size_t>(body.fiber_spec().dimension());
  std::vector<double> v = center.data();
  for (std::size_t a = 0; a < center.atom_count(); ++a) {
    v[a * d] += 0.5 * body.ball_radius().value(a);
  }
  return RNElement(center.space(), center.fiber_spec(), std::move(v));
}

// Completes a piece-supported element to a full body member using the given
// off-piece reference.
RNElement complete(const RNElement& u, const MeasurableSet& piece,
                   const RNElement& reference) {
  const auto d = static_cast<std::size_t>(u.dimension());
  std::vector<double> v = reference.data();
  for (std::size_t a = 0; a < u.atom_count(); ++a) {
    if (!piece.contains(a)) continue;
    for (std::size_t i = 0; i < d; ++i) v[a * d + i] = u.data()[a * d + i];
  }
  return RNElement(u.space(), u.fiber_spec(), std::move(v));
}

}  // namespace

InducedMap::InducedMap(AsymptoticMap parent, MeasurableSet piece)
    : parent_(std::move(parent)),
      piece_(std::move(piece)),
      ref_a_(parent_.domain().center_point()),
      ref_b_(second_reference(parent_.domain())) {
  if (piece_.atom_count() != parent_.domain().space()->atom_count()) {
    throw DimensionError("piece must live on the map's space");
  }
  if (piece_.empty()) {
    throw DomainError("induced map needs a nonempty piece");
  }
}

RNElement InducedMap::apply(const RNElement& u) const {
  const RNElement via_a =
      restrict_to(parent_.apply(complete(u, piece_, ref_a_)), piece_);
  const RNElement via_b =
      restrict_to(parent_.apply(complete(u, piece_, ref_b_)), piece_);
  if (!exact_equal(via_a, via_b)) {
    throw SigmaStabilityError(
        "induced map is not well defined: representatives that agree on the "
        "piece map to different values");
  }
  return via_a;
}

RNElement InducedMap::iterate(const RNElement& u, int m) const {
  if (m < 0) throw DomainError("iterate count must be >= 0");
  RNElement y = u;
  for (int k = 0; k < m; ++k) y = apply(y);
  return y;
}

InducedMap induced_map(const AsymptoticMap& f, const MeasurableSet& piece) {
  return InducedMap(f, piece);
}

LipschitzReport induced_lipschitz_check(const AsymptoticMap& f,
                                        const PieceData& pd, double p,
                                        int horizon, std::size_t samples,
                                        std::uint64_t seed) {
  if (!(p > 1.0) || std::isinf(p)) {
    throw DomainError("induced Lipschitz check requires 1 < p < infinity");
  }
  if (horizon < 1 || samples < 1) {
    throw DomainError("induced Lipschitz check requires horizon, samples >= 1");
  }
  const InducedMap fi = induced_map(f, pd.piece);
  LipschitzReport report;
  report.horizon = horizon;
  report.samples = samples;
  Rng rng(seed);
  for (std::size_t s = 0; s < samples; ++s) {
    const RNElement u = restrict_to(f.domain().sample(rng), pd.piece);
    const RNElement v = restrict_to(f.domain().sample(rng), pd.piece);
    const double base = lp_norm(u - v, p);
    RNElement um = u;
    RNElement vm = v;
    for (int m = 1; m <= horizon; ++m) {
      um = fi.apply(um);
      vm = fi.apply(vm);
      const double lhs = lp_norm(um - vm, p);
      const double bound = pd.beta_at(m) * base + kLipschitzSlack;
      if (lhs > bound) {
        ++report.violation_count;
        if (report.violations.size() < 16) {
          report.violations.push_back(LipschitzViolation{s, m, lhs, bound});
        }
      }
    }
  }
  return report;
}

bool recomposition_check(const AsymptoticMap& f,
                         const std::vector<PieceData>& pieces,
                         const RNElement& x) {
  if (!f.domain().contains(x, 1e-9)) {
    throw PreconditionError("recomposition check needs x in the domain");
  }
  const RNElement fx = f.apply(x);
  const auto d = static_cast<std::size_t>(x.dimension());
  std::vector<double> assembled(x.data().size(), 0.0);
  for (const auto& pd : pieces) {
    const InducedMap fi = induced_map(f, pd.piece);
    const RNElement image = fi.apply(restrict_to(x, pd.piece));
    for (std::size_t a = 0; a < x.atom_count(); ++a) {
      if (!pd.piece.contains(a)) continue;
      for (std::size_t i = 0; i < d; ++i) {
        assembled[a * d + i] = image.data()[a * d + i];
      }
    }
  }
  const RNElement glued(x.space(), x.fiber_spec(), std::move(assembled));
  const L0Real gap = l0_norm(glued - fx);
  return gap.max_value() <= kRecompositionTol;
}

}  // namespace rnm
