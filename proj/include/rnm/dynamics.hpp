#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rnm/module.hpp"

namespace rnm {

/// Number of certificate entries a constructor declares by default.
inline constexpr int kDefaultEtaHorizon = 64;

/// A self-map of an L0-convex body together with its iterate-Lipschitz
/// certificate sequence {eta_m}. Every shipped constructor acts atom by atom,
/// which makes the map sigma-stable by construction.
class AsymptoticMap {
 public:
  using MapFn = std::function<RNElement(const RNElement&)>;

  /// General factory. Verifies eta >= 0 atom-wise, spot-checks that the map
  /// sends body members to body members, and (unless enforce_eta_limit is
  /// cleared, which only test fixtures do) requires |eta_M - 1| <= 1e-6 at the
  /// declared horizon.
  static AsymptoticMap make(std::string name, ConvexBody domain, MapFn fn,
                            std::vector<L0Real> eta, bool sigma_stable,
                            std::optional<RNElement> fixed_point,
                            bool enforce_eta_limit = true);

  const std::string& name() const { return name_; }
  const ConvexBody& domain() const { return domain_; }
  bool sigma_stable() const { return sigma_stable_; }
  const std::optional<RNElement>& fixed_point() const { return fixed_point_; }

  RNElement apply(const RNElement& x) const { return fn_(x); }
  RNElement iterate(const RNElement& x, int m) const;

  int eta_horizon() const { return static_cast<int>(eta_.size()); }
  const std::vector<L0Real>& eta() const { return eta_; }
  /// 1-based access, clamped to the declared horizon beyond it.
  const L0Real& eta_at(int m) const;

 private:
  AsymptoticMap(std::string name, ConvexBody domain, MapFn fn,
                std::vector<L0Real> eta, bool sigma_stable,
                std::optional<RNElement> fixed_point);

  std::string name_;
  ConvexBody domain_;
  MapFn fn_;
  std::vector<L0Real> eta_;
  bool sigma_stable_;
  std::optional<RNElement> fixed_point_;
};

/// f(x) = x.
AsymptoticMap make_identity(ConvexBody body, int horizon = kDefaultEtaHorizon);

/// f(x) = anchor + alpha (x - anchor) with 0 <= alpha <= 1 atom-wise.
AsymptoticMap make_contraction(ConvexBody body, const L0Real& alpha,
                               const RNElement& anchor,
                               int horizon = kDefaultEtaHorizon);

/// Per-atom rotation of the leading coordinate plane about the ball center,
/// composed with the metric projection. Requires a ball body with q = 2.
AsymptoticMap make_rotation(ConvexBody body, const L0Real& theta,
                            int horizon = kDefaultEtaHorizon);

/// Coordinate chain on a box body: coordinate 0 is pinned to the anchor and
/// coordinate i feeds on coordinate i-1 through a power map of exponent
/// exponents[i] >= 1. Individual links stretch, but the chain collapses after
/// d steps, so the certificate windows Prod exponents shrink back to 1.
AsymptoticMap make_stretch_chain(ConvexBody body,
                                 const std::vector<double>& exponents,
                                 double anchor01 = 0.0,
                                 int horizon = kDefaultEtaHorizon);

/// Different component maps on different partition pieces; the certificate is
/// glued atom-wise from the components'.
AsymptoticMap make_glued(const Partition& partition,
                         const std::vector<AsymptoticMap>& components);

/// Same map, looser certificate: eta'_m = eta_m + slack * rate^m. Used to give
/// atoms individually decaying certificate tails.
AsymptoticMap with_eta_slack(const AsymptoticMap& map, const L0Real& slack,
                             const L0Real& rate);

/// (1 + rho)-scaled rotation clipped back into the ball. Its iterates expand
/// near the center, so eta_m = (1+rho)^m is tight and never settles at 1; the
/// factory is only meant for certificate tests and skips the eta-limit check.
AsymptoticMap make_expansive_rotation(ConvexBody body, double rho, double theta,
                                      int horizon = kDefaultEtaHorizon);

struct CertifyViolation {
  std::size_t sample;
  int m;
  std::size_t atom;
  double lhs;
  double bound;
  RNElement x;
  RNElement y;
};

struct CertifyReport {
  int horizon = 0;
  std::size_t samples = 0;
  std::size_t violation_count = 0;
  std::vector<CertifyViolation> violations;  // at most 16 witnesses kept

  bool passed() const { return violation_count == 0; }
};

/// Draws seeded pairs from the domain and checks
/// ||f^m x - f^m y|| <= eta_m ||x - y|| + 1e-9 atom-wise for m = 1..horizon.
CertifyReport certify(const AsymptoticMap& f, int horizon, std::size_t samples,
                      std::uint64_t seed);

struct IterationTrace {
  std::vector<RNElement> iterates;
  std::vector<L0Real> residuals;  // ||x_n - f(x_n)||, same length as iterates
  std::vector<double> schedule;
};

/// x_{n+1} = c_n f(x_n) + (1 - c_n) x_n. The schedule is either one entry
/// (used for every step) or at least `steps` entries.
IterationTrace mann_iterate(const AsymptoticMap& f, const RNElement& x0,
                            const std::vector<double>& schedule, int steps);

/// ||x - f(x)||.
L0Real residual(const AsymptoticMap& f, const RNElement& x);

}  // namespace rnm
