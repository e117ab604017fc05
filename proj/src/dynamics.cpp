#include "rnm/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "rnm/rng.hpp"

namespace rnm {

namespace {

constexpr double kMembershipTol = 1e-9;
constexpr double kCertifySlack = 1e-9;
constexpr double kEtaLimitTol = 1e-6;

std::vector<L0Real> constant_eta(const SpacePtr& space, int horizon) {
  if (horizon < 1) throw DomainError("eta horizon must be >= 1");
  return std::vector<L0Real>(static_cast<std::size_t>(horizon),
                             L0Real::constant(space, 1.0));
}

}  // namespace

AsymptoticMap::AsymptoticMap(std::string name, ConvexBody domain, MapFn fn,
                             std::vector<L0Real> eta, bool sigma_stable,
                             std::optional<RNElement> fixed_point)
    : name_(std::move(name)),
      domain_(std::move(domain)),
      fn_(std::move(fn)),
      eta_(std::move(eta)),
      sigma_stable_(sigma_stable),
      fixed_point_(std::move(fixed_point)) {}

AsymptoticMap AsymptoticMap::make(std::string name, ConvexBody domain, MapFn fn,
                                  std::vector<L0Real> eta, bool sigma_stable,
                                  std::optional<RNElement> fixed_point,
                                  bool enforce_eta_limit) {
  if (eta.empty()) {
    throw DomainError("certificate sequence must be nonempty");
  }
  for (const auto& em : eta) {
    if (em.atom_count() != domain.space()->atom_count()) {
      throw DimensionError("certificate entries must live on the body's space");
    }
    if (em.min_value() < 0.0) {
      throw DomainError("certificate entries must be nonnegative atom-wise");
    }
  }
  if (enforce_eta_limit) {
    const double gap = (eta.back() + (-1.0)).max_abs();
    if (gap > kEtaLimitTol) {
      throw NonConvergenceError(
          "certificate does not settle at 1 by the declared horizon (gap " +
          std::to_string(gap) + ")");
    }
  }
  // Spot check that the map is a self-map of the body.
  Rng rng(0x5e1fc8ecULL);
  for (int k = 0; k < 8; ++k) {
    const RNElement x = domain.sample(rng);
    if (!domain.contains(fn(x), kMembershipTol)) {
      throw DomainError("map does not send the body into itself");
    }
  }
  return AsymptoticMap(std::move(name), std::move(domain), std::move(fn),
                       std::move(eta), sigma_stable, std::move(fixed_point));
}

RNElement AsymptoticMap::iterate(const RNElement& x, int m) const {
  if (m < 0) throw DomainError("iterate count must be >= 0");
  RNElement y = x;
  for (int k = 0; k < m; ++k) y = fn_(y);
  return y;
}

const L0Real& AsymptoticMap::eta_at(int m) const {
  if (m < 1) throw DomainError("certificate index is 1-based");
  const auto idx = std::min<std::size_t>(static_cast<std::size_t>(m), eta_.size());
  return eta_[idx - 1];
}

AsymptoticMap make_identity(ConvexBody body, int horizon) {
  auto eta = constant_eta(body.space(), horizon);
  return AsymptoticMap::make("identity", std::move(body),
                             [](const RNElement& x) { return x; }, std::move(eta),
                             /*sigma_stable=*/true, std::nullopt);
}

AsymptoticMap make_contraction(ConvexBody body, const L0Real& alpha,
                               const RNElement& anchor, int horizon) {
  if (alpha.min_value() < 0.0 || alpha.max_value() > 1.0) {
    throw DomainError("contraction factor must satisfy 0 <= alpha <= 1");
  }
  if (!body.contains(anchor, kMembershipTol)) {
    throw DomainError("contraction anchor must belong to the body");
  }
  auto eta = constant_eta(body.space(), horizon);
  std::optional<RNElement> fixed;
  if (alpha.max_value() < 1.0) fixed = anchor;
  auto fn = [alpha, anchor](const RNElement& x) {
    return anchor + module_scale(alpha, x - anchor);
  };
  return AsymptoticMap::make("contraction", std::move(body), std::move(fn),
                             std::move(eta), /*sigma_stable=*/true,
                             std::move(fixed));
}

AsymptoticMap make_rotation(ConvexBody body, const L0Real& theta, int horizon) {
  if (body.kind() != ConvexBody::Kind::ball) {
    throw DomainError("rotation maps need a ball body");
  }
  if (body.fiber_spec().exponent() != 2.0) {
    throw UnsupportedError("rotation maps need q = 2 fibers");
  }
  if (body.fiber_spec().dimension() < 2) {
    throw DomainError("rotation maps need fiber dimension >= 2");
  }
  if (theta.atom_count() != body.space()->atom_count()) {
    throw DimensionError("rotation angle must live on the body's space");
  }
  auto eta = constant_eta(body.space(), horizon);
  const RNElement center = body.ball_center();
  bool moves_everywhere = true;
  for (std::size_t a = 0; a < theta.atom_count(); ++a) {
    const double t = std::remainder(theta.value(a), 2.0 * M_PI);
    if (std::abs(t) <= 1e-12) moves_everywhere = false;
  }
  // For d > 2 the rotation fixes a whole axis, so the center is not the
  // unique attractor and no fixed point is declared.
  std::optional<RNElement> fixed;
  if (moves_everywhere && body.fiber_spec().dimension() == 2) fixed = center;
  ConvexBody domain = body;
  auto fn = [domain, center, theta](const RNElement& x) {
    const auto d = static_cast<std::size_t>(x.dimension());
    std::vector<double> v = (x - center).data();
    for (std::size_t a = 0; a < x.atom_count(); ++a) {
      const double c = std::cos(theta.value(a));
      const double s = std::sin(theta.value(a));
      const double w0 = v[a * d];
      const double w1 = v[a * d + 1];
      v[a * d] = c * w0 - s * w1;
      v[a * d + 1] = s * w0 + c * w1;
    }
    RNElement rotated(x.space(), x.fiber_spec(), std::move(v));
    return domain.project(center + rotated);
  };
  return AsymptoticMap::make("rotation", std::move(body), std::move(fn),
                             std::move(eta), /*sigma_stable=*/true,
                             std::move(fixed));
}

AsymptoticMap make_stretch_chain(ConvexBody body,
                                 const std::vector<double>& exponents,
                                 double anchor01, int horizon) {
  if (body.kind() != ConvexBody::Kind::box) {
    throw DomainError("stretch chains need a box body");
  }
  const auto d = static_cast<std::size_t>(body.fiber_spec().dimension());
  if (exponents.size() != d) {
    throw DimensionError("one exponent per fiber coordinate required");
  }
  for (std::size_t i = 1; i < d; ++i) {
    if (!(exponents[i] >= 1.0) || !std::isfinite(exponents[i])) {
      throw DomainError("chain exponents must satisfy k >= 1");
    }
  }
  if (!(anchor01 >= 0.0 && anchor01 <= 1.0)) {
    throw DomainError("chain anchor must lie in [0, 1]");
  }
  const RNElement lo = body.box_lower();
  const RNElement hi = body.box_upper();
  const std::size_t atoms = body.space()->atom_count();
  std::vector<double> width(atoms * d);
  for (std::size_t i = 0; i < width.size(); ++i) {
    width[i] = hi.data()[i] - lo.data()[i];
    if (!(width[i] > 0.0)) {
      throw DomainError("stretch chains need strictly positive box widths");
    }
  }

  // Per-atom Lipschitz factor of link j (output coordinate j fed by j-1).
  std::vector<double> link(atoms * d, 1.0);
  for (std::size_t a = 0; a < atoms; ++a) {
    for (std::size_t j = 1; j < d; ++j) {
      link[a * d + j] = exponents[j] * width[a * d + j] / width[a * d + j - 1];
    }
  }
  if (horizon < 1) throw DomainError("eta horizon must be >= 1");
  std::vector<L0Real> eta;
  eta.reserve(static_cast<std::size_t>(horizon));
  for (int m = 1; m <= horizon; ++m) {
    std::vector<double> em(atoms, 1.0);
    for (std::size_t a = 0; a < atoms; ++a) {
      for (std::size_t j = static_cast<std::size_t>(m); j < d; ++j) {
        double window = 1.0;
        for (std::size_t t = j + 1 - static_cast<std::size_t>(m); t <= j; ++t) {
          window *= link[a * d + t];
        }
        em[a] = std::max(em[a], window);
      }
    }
    eta.emplace_back(body.space(), std::move(em));
  }

  std::vector<double> fixed_data(atoms * d);
  for (std::size_t a = 0; a < atoms; ++a) {
    double s = anchor01;
    fixed_data[a * d] = lo.data()[a * d] + width[a * d] * s;
    for (std::size_t j = 1; j < d; ++j) {
      s = std::pow(s, exponents[j]);
      fixed_data[a * d + j] = lo.data()[a * d + j] + width[a * d + j] * s;
    }
  }
  RNElement fixed(body.space(), body.fiber_spec(), std::move(fixed_data));

  std::vector<double> ks = exponents;
  auto fn = [lo, width, ks, anchor01, d](const RNElement& x) {
    std::vector<double> v(x.data().size());
    for (std::size_t a = 0; a < x.atom_count(); ++a) {
      v[a * d] = lo.data()[a * d] + width[a * d] * anchor01;
      for (std::size_t j = 1; j < d; ++j) {
        const double t = std::clamp(
            (x.data()[a * d + j - 1] - lo.data()[a * d + j - 1]) /
                width[a * d + j - 1],
            0.0, 1.0);
        v[a * d + j] = lo.data()[a * d + j] + width[a * d + j] * std::pow(t, ks[j]);
      }
    }
    return RNElement(x.space(), x.fiber_spec(), std::move(v));
  };
  return AsymptoticMap::make("stretch_chain", std::move(body), std::move(fn),
                             std::move(eta), /*sigma_stable=*/true,
                             std::move(fixed));
}

namespace {

bool same_body(const ConvexBody& a, const ConvexBody& b) {
  if (a.kind() != b.kind() ||
      a.space()->atom_count() != b.space()->atom_count() ||
      !(a.fiber_spec() == b.fiber_spec())) {
    return false;
  }
  if (a.kind() == ConvexBody::Kind::ball) {
    return a.ball_center().data() == b.ball_center().data() &&
           a.ball_radius().values() == b.ball_radius().values();
  }
  return a.box_lower().data() == b.box_lower().data() &&
         a.box_upper().data() == b.box_upper().data();
}

}  // namespace

AsymptoticMap make_glued(const Partition& partition,
                         const std::vector<AsymptoticMap>& components) {
  if (partition.size() != components.size()) {
    throw DomainError("one component map per partition piece required");
  }
  const ConvexBody& body = components.front().domain();
  bool sigma_stable = true;
  bool all_fixed = true;
  int horizon = 1;
  for (const auto& c : components) {
    if (!same_body(c.domain(), body)) {
      throw DomainError("glued components must share one domain body");
    }
    sigma_stable = sigma_stable && c.sigma_stable();
    all_fixed = all_fixed && c.fixed_point().has_value();
    horizon = std::max(horizon, c.eta_horizon());
  }

  std::vector<L0Real> eta;
  eta.reserve(static_cast<std::size_t>(horizon));
  for (int m = 1; m <= horizon; ++m) {
    std::vector<L0Real> per_piece;
    per_piece.reserve(components.size());
    for (const auto& c : components) per_piece.push_back(c.eta_at(m));
    eta.push_back(glue(partition, per_piece));
  }

  std::optional<RNElement> fixed;
  if (all_fixed) {
    std::vector<RNElement> points;
    points.reserve(components.size());
    for (const auto& c : components) points.push_back(*c.fixed_point());
    fixed = glue(partition, points);
  }

  std::vector<AsymptoticMap> comps = components;
  Partition part = partition;
  auto fn = [part, comps](const RNElement& x) {
    std::vector<RNElement> values;
    values.reserve(comps.size());
    for (const auto& c : comps) values.push_back(c.apply(x));
    return glue(part, values);
  };
  return AsymptoticMap::make("glued", body, std::move(fn), std::move(eta),
                             sigma_stable, std::move(fixed));
}

AsymptoticMap with_eta_slack(const AsymptoticMap& map, const L0Real& slack,
                             const L0Real& rate) {
  if (slack.min_value() < 0.0) {
    throw DomainError("certificate slack must be nonnegative");
  }
  if (rate.min_value() <= 0.0 || rate.max_value() >= 1.0) {
    throw DomainError("slack rate must satisfy 0 < rate < 1 atom-wise");
  }
  std::vector<L0Real> eta;
  eta.reserve(map.eta().size());
  L0Real geometric = rate;
  for (int m = 1; m <= map.eta_horizon(); ++m) {
    eta.push_back(map.eta_at(m) + slack * geometric);
    geometric = geometric * rate;
  }
  const AsymptoticMap inner = map;
  return AsymptoticMap::make(map.name() + "+slack", map.domain(),
                             [inner](const RNElement& x) { return inner.apply(x); },
                             std::move(eta), map.sigma_stable(),
                             map.fixed_point());
}

AsymptoticMap make_expansive_rotation(ConvexBody body, double rho, double theta,
                                      int horizon) {
  if (!(rho > 0.0)) {
    throw DomainError("expansive rotation requires rho > 0");
  }
  if (body.kind() != ConvexBody::Kind::ball ||
      body.fiber_spec().exponent() != 2.0 || body.fiber_spec().dimension() < 2) {
    throw UnsupportedError("expansive rotation needs a q = 2 ball body");
  }
  if (horizon < 1) throw DomainError("eta horizon must be >= 1");
  const RNElement center = body.ball_center();
  std::vector<L0Real> eta;
  eta.reserve(static_cast<std::size_t>(horizon));
  double factor = 1.0;
  for (int m = 1; m <= horizon; ++m) {
    factor *= 1.0 + rho;
    eta.push_back(L0Real::constant(body.space(), factor));
  }
  ConvexBody domain = body;
  auto fn = [domain, center, rho, theta](const RNElement& x) {
    const auto d = static_cast<std::size_t>(x.dimension());
    std::vector<double> v = (x - center).data();
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    for (std::size_t a = 0; a < x.atom_count(); ++a) {
      const double w0 = v[a * d];
      const double w1 = v[a * d + 1];
      v[a * d] = (1.0 + rho) * (c * w0 - s * w1);
      v[a * d + 1] = (1.0 + rho) * (s * w0 + c * w1);
      for (std::size_t i = 2; i < d; ++i) v[a * d + i] *= 1.0 + rho;
    }
    RNElement scaled(x.space(), x.fiber_spec(), std::move(v));
    return domain.project(center + scaled);
  };
  return AsymptoticMap::make("expansive_rotation", std::move(body), std::move(fn),
                             std::move(eta), /*sigma_stable=*/true, center,
                             /*enforce_eta_limit=*/false);
}

CertifyReport certify(const AsymptoticMap& f, int horizon, std::size_t samples,
                      std::uint64_t seed) {
  if (horizon < 1) throw DomainError("certify requires horizon >= 1");
  if (samples < 1) throw DomainError("certify requires samples >= 1");
  CertifyReport report;
  report.horizon = horizon;
  report.samples = samples;
  Rng rng(seed);
  for (std::size_t s = 0; s < samples; ++s) {
    const RNElement x = f.domain().sample(rng);
    const RNElement y = f.domain().sample(rng);
    const L0Real base = l0_norm(x - y);
    RNElement um = x;
    RNElement vm = y;
    for (int m = 1; m <= horizon; ++m) {
      um = f.apply(um);
      vm = f.apply(vm);
      const L0Real lhs = l0_norm(um - vm);
      const L0Real& eta_m = f.eta_at(m);
      for (std::size_t a = 0; a < lhs.atom_count(); ++a) {
        const double bound = eta_m.value(a) * base.value(a) + kCertifySlack;
        if (lhs.value(a) > bound) {
          ++report.violation_count;
          if (report.violations.size() < 16) {
            report.violations.push_back(
                CertifyViolation{s, m, a, lhs.value(a), bound, x, y});
          }
        }
      }
    }
  }
  return report;
}

IterationTrace mann_iterate(const AsymptoticMap& f, const RNElement& x0,
                            const std::vector<double>& schedule, int steps) {
  if (steps < 0) throw DomainError("step count must be >= 0");
  if (schedule.empty() ||
      (schedule.size() != 1 && schedule.size() < static_cast<std::size_t>(steps))) {
    throw DomainError("schedule needs one entry or at least `steps` entries");
  }
  for (double c : schedule) {
    if (!(c >= 0.0 && c <= 1.0)) {
      throw DomainError("mixing coefficients must lie in [0, 1]");
    }
  }
  if (!f.domain().contains(x0, kMembershipTol)) {
    throw PreconditionError("mann iteration must start inside the domain");
  }
  IterationTrace trace;
  trace.iterates.reserve(static_cast<std::size_t>(steps) + 1);
  trace.residuals.reserve(static_cast<std::size_t>(steps) + 1);
  if (schedule.size() == 1) {
    trace.schedule.assign(static_cast<std::size_t>(steps), schedule.front());
  } else {
    trace.schedule.assign(schedule.begin(), schedule.begin() + steps);
  }
  RNElement x = x0;
  for (int n = 0; n <= steps; ++n) {
    const RNElement fx = f.apply(x);
    trace.iterates.push_back(x);
    trace.residuals.push_back(l0_norm(x - fx));
    if (n == steps) break;
    const double c = trace.schedule[static_cast<std::size_t>(n)];
    x = fx * c + x * (1.0 - c);
    if (!f.domain().contains(x, kMembershipTol)) {
      throw Error("mann iterate left the domain at step " + std::to_string(n + 1));
    }
  }
  return trace;
}

L0Real residual(const AsymptoticMap& f, const RNElement& x) {
  return l0_norm(x - f.apply(x));
}

}  // namespace rnm
