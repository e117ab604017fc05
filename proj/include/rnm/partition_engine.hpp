#pragma once

#include <cstdint>
#include <vector>

#include "rnm/dynamics.hpp"

namespace rnm {

/// One piece of the decomposition of a certified map: the atoms it covers,
/// an integer bound on the norms of the restricted body, and the exact
/// per-piece certificate suprema beta_m.
struct PieceData {
  MeasurableSet piece;
  int norm_bound;            // positive integer with ||x|| <= norm_bound on the piece
  std::vector<double> beta;  // beta_m = max over the piece of eta_m, m = 1..horizon

  double beta_at(int m) const;  // 1-based, clamped to the stored horizon
};

/// Groups atoms whose certificates settle at comparable rates; on each
/// returned piece the deviation sup |eta_m - 1| shrinks to the tolerance by
/// the horizon (the finite-space form of uniform convergence off small sets).
/// Atoms are binned by floor(sup_m m |eta_m - 1|).
Partition egoroff_pieces(const std::vector<L0Real>& eta, int horizon);

/// Refines egoroff_pieces by two integer binnings: on each rate piece, atoms
/// split by the integer bracket of sup_{m <= m_k} eta_m (m_k = first index
/// with piece-uniform |eta_m - 1| <= 1, capped at the horizon), and globally
/// by the integer bracket of the body bound. Empty intersections are dropped.
std::vector<PieceData> decompose(const AsymptoticMap& f, const ConvexBody& G,
                                 int horizon);

std::vector<PieceData> decompose(const AsymptoticMap& f, int horizon);

/// The classical map induced on the restricted body: u -> restrict(f(x))
/// for any representative x of u. Applications complete u with two distinct
/// off-piece references and cross-check the results, so a map that is not
/// sigma-stable is caught at use.
class InducedMap {
 public:
  InducedMap(AsymptoticMap parent, MeasurableSet piece);

  const MeasurableSet& piece() const { return piece_; }

  RNElement apply(const RNElement& u) const;
  RNElement iterate(const RNElement& u, int m) const;

 private:
  AsymptoticMap parent_;
  MeasurableSet piece_;
  RNElement ref_a_;
  RNElement ref_b_;
};

InducedMap induced_map(const AsymptoticMap& f, const MeasurableSet& piece);

struct LipschitzViolation {
  std::size_t sample;
  int m;
  double lhs;
  double bound;
};

struct LipschitzReport {
  int horizon = 0;
  std::size_t samples = 0;
  std::size_t violation_count = 0;
  std::vector<LipschitzViolation> violations;  // at most 16 kept

  bool passed() const { return violation_count == 0; }
};

/// Samples pairs in the restricted body and checks the per-piece classical
/// bound ||f_i^m u - f_i^m v||_p <= beta_m ||u - v||_p + 1e-9 for m up to the
/// horizon.
LipschitzReport induced_lipschitz_check(const AsymptoticMap& f,
                                        const PieceData& pd, double p,
                                        int horizon, std::size_t samples,
                                        std::uint64_t seed);

/// True iff reassembling the per-piece images reproduces f(x) atom-wise
/// within 1e-12.
bool recomposition_check(const AsymptoticMap& f,
                         const std::vector<PieceData>& pieces,
                         const RNElement& x);

}  // namespace rnm
