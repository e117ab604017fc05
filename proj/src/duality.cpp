#include "rnm/duality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "rnm/rng.hpp"

namespace rnm {

namespace {

void require_shapes(const SpacePtr& sa, const FiberSpec& fa, const SpacePtr& sb,
                    const FiberSpec& fb, const char* what) {
  if (sa->atom_count() != sb->atom_count() || !(fa == fb)) {
    throw DimensionError(std::string(what) + ": shapes differ");
  }
}

double sign_of(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

}  // namespace

RandomFunctional::RandomFunctional(SpacePtr space, FiberSpec primal_fiber,
                                   std::vector<double> dual_data)
    : space_(std::move(space)), fiber_(primal_fiber), data_(std::move(dual_data)) {
  if (!space_) {
    throw DomainError("functional needs a space");
  }
  const std::size_t expected =
      space_->atom_count() * static_cast<std::size_t>(fiber_.dimension());
  if (data_.size() != expected) {
    throw DimensionError("functional data has " + std::to_string(data_.size()) +
                         " entries, expected " + std::to_string(expected));
  }
  for (double v : data_) {
    if (!std::isfinite(v)) throw DomainError("functional has a non-finite entry");
  }
}

RandomFunctional RandomFunctional::zero(SpacePtr space, FiberSpec primal_fiber) {
  std::vector<double> data(
      space->atom_count() * static_cast<std::size_t>(primal_fiber.dimension()),
      0.0);
  return RandomFunctional(std::move(space), primal_fiber, std::move(data));
}

RandomFunctional RandomFunctional::from_fibers(
    SpacePtr space, FiberSpec primal_fiber,
    const std::vector<std::vector<double>>& fibers) {
  RNElement carrier = RNElement::from_fibers(space, primal_fiber, fibers);
  return RandomFunctional(std::move(space), primal_fiber, carrier.data());
}

std::span<const double> RandomFunctional::dual_fiber(std::size_t atom) const {
  const auto d = static_cast<std::size_t>(fiber_.dimension());
  return {data_.data() + atom * d, d};
}

L0Real RandomFunctional::evaluate(const RNElement& x) const {
  require_shapes(space_, fiber_, x.space(), x.fiber_spec(), "evaluate");
  const auto d = static_cast<std::size_t>(fiber_.dimension());
  std::vector<double> v(space_->atom_count());
  for (std::size_t a = 0; a < v.size(); ++a) {
    double dot = 0.0;
    for (std::size_t i = 0; i < d; ++i) dot += data_[a * d + i] * x.data()[a * d + i];
    v[a] = dot;
  }
  return L0Real(space_, std::move(v));
}

RandomFunctional RandomFunctional::scale(const L0Real& xi) const {
  if (xi.atom_count() != space_->atom_count()) {
    throw DimensionError("scale: atom counts differ");
  }
  const auto d = static_cast<std::size_t>(fiber_.dimension());
  std::vector<double> v(data_.size());
  for (std::size_t a = 0; a < space_->atom_count(); ++a) {
    for (std::size_t i = 0; i < d; ++i) v[a * d + i] = xi.value(a) * data_[a * d + i];
  }
  return RandomFunctional(space_, fiber_, std::move(v));
}

HolderPair holder_pair(double p) {
  if (!(p >= 1.0)) {
    throw DomainError("Holder pair requires p >= 1");
  }
  const double q =
      p == 1.0 ? std::numeric_limits<double>::infinity() : p / (p - 1.0);
  return HolderPair{p, q};
}

double lp_norm(const L0Real& xi, double p) {
  if (std::isinf(p)) {
    return xi.abs().max_value();
  }
  if (!(p >= 1.0)) {
    throw DomainError("lp_norm requires p >= 1");
  }
  double sum = 0.0;
  for (std::size_t a = 0; a < xi.atom_count(); ++a) {
    sum += xi.space()->weight(a) * std::pow(std::abs(xi.value(a)), p);
  }
  return std::pow(sum, 1.0 / p);
}

double lp_norm(const RNElement& x, double p) { return lp_norm(l0_norm(x), p); }

L0Real conjugate_norm(const RandomFunctional& F) {
  const double qs = F.dual_exponent();
  std::vector<double> v(F.space()->atom_count());
  for (std::size_t a = 0; a < v.size(); ++a) {
    double sum = 0.0;
    for (double c : F.dual_fiber(a)) sum += std::pow(std::abs(c), qs);
    v[a] = std::pow(sum, 1.0 / qs);
  }
  return L0Real(F.space(), std::move(v));
}

double canonical_pairing(const RandomFunctional& F, const RNElement& x) {
  require_shapes(F.space(), F.primal_fiber(), x.space(), x.fiber_spec(),
                 "canonical_pairing");
  const L0Real pairing = F.evaluate(x);
  double sum = 0.0;
  for (std::size_t a = 0; a < pairing.atom_count(); ++a) {
    sum += F.space()->weight(a) * pairing.value(a);
  }
  return sum;
}

double operator_norm_oracle(const RandomFunctional& F, HolderPair pair, int grid) {
  if (grid < 1) {
    throw DomainError("operator_norm_oracle requires grid >= 1");
  }
  const SpacePtr& space = F.space();
  const FiberSpec fiber = F.primal_fiber();
  const auto d = static_cast<std::size_t>(fiber.dimension());
  const std::size_t atoms = space->atom_count();
  const double q_fiber = fiber.exponent();
  const double qs_fiber = fiber.dual_exponent();

  double best = 0.0;
  auto consider = [&](const RNElement& candidate) {
    double norm = lp_norm(candidate, pair.p);
    RNElement x = candidate;
    if (norm > 1.0) x = candidate * (1.0 / norm);
    best = std::max(best, std::abs(canonical_pairing(F, x)));
  };

  // Alignment candidate: the per-atom norming direction of the dual fiber,
  // carrying the Holder-tight scalar profile across atoms.
  std::vector<double> aligned(atoms * d, 0.0);
  std::vector<double> strength(atoms, 0.0);
  for (std::size_t a = 0; a < atoms; ++a) {
    auto g = F.dual_fiber(a);
    double unit_q = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      const double u = sign_of(g[i]) * std::pow(std::abs(g[i]), qs_fiber - 1.0);
      aligned[a * d + i] = u;
      unit_q += std::pow(std::abs(u), q_fiber);
    }
    const double unit_norm = std::pow(unit_q, 1.0 / q_fiber);
    if (unit_norm > 0.0) {
      double dot = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        aligned[a * d + i] /= unit_norm;
        dot += g[i] * aligned[a * d + i];
      }
      strength[a] = dot;
    }
  }
  if (pair.p == 1.0) {
    std::size_t a_star = 0;
    for (std::size_t a = 1; a < atoms; ++a) {
      if (strength[a] > strength[a_star]) a_star = a;
    }
    std::vector<double> v(atoms * d, 0.0);
    const double t = 1.0 / space->weight(a_star);
    for (std::size_t i = 0; i < d; ++i) v[a_star * d + i] = t * aligned[a_star * d + i];
    consider(RNElement(space, fiber, std::move(v)));
  } else {
    double moment = 0.0;
    for (std::size_t a = 0; a < atoms; ++a) {
      moment += space->weight(a) * std::pow(strength[a], pair.q);
    }
    if (moment > 0.0) {
      const double scale = std::pow(moment, 1.0 / pair.p);
      std::vector<double> v(atoms * d);
      for (std::size_t a = 0; a < atoms; ++a) {
        const double t = std::pow(strength[a], pair.q - 1.0) / scale;
        for (std::size_t i = 0; i < d; ++i) v[a * d + i] = t * aligned[a * d + i];
      }
      consider(RNElement(space, fiber, std::move(v)));
    }
  }

  // Grid-sampled candidates on the unit sphere of Lp(E).
  Rng rng(0x6f7261636c65ULL ^ (static_cast<std::uint64_t>(grid) << 16) ^
          (atoms * 131 + d));
  for (int k = 0; k < grid; ++k) {
    std::vector<double> v(atoms * d);
    for (double& c : v) c = rng.normal();
    RNElement candidate(space, fiber, std::move(v));
    const double norm = lp_norm(candidate, pair.p);
    if (norm > 0.0) consider(candidate * (1.0 / norm));
  }
  return best;
}

bool random_weak_converges(const std::vector<RNElement>& seq, const RNElement& x,
                           const std::vector<RandomFunctional>& family, double eps,
                           double lambda, std::size_t tail) {
  if (family.empty()) {
    throw DomainError("random_weak_converges requires a nonempty test family");
  }
  for (const auto& F : family) {
    std::vector<L0Real> values;
    values.reserve(seq.size());
    for (const auto& xn : seq) values.push_back(F.evaluate(xn));
    if (!converges_in_probability(values, F.evaluate(x), eps, lambda, tail)) {
      return false;
    }
  }
  return true;
}

bool eps_lambda_converges(const std::vector<RNElement>& seq, const RNElement& x,
                          double eps, double lambda, std::size_t tail) {
  std::vector<L0Real> norms;
  norms.reserve(seq.size());
  for (const auto& xn : seq) norms.push_back(l0_norm(xn - x));
  return converges_in_probability(norms, L0Real::zero(x.space()), eps, lambda,
                                  tail);
}

ConvexityParams::ConvexityParams(L0Real epsilon, L0Real delta)
    : epsilon_(std::move(epsilon)), delta_(std::move(delta)) {
  const double tol = epsilon_.space()->order_tolerance();
  if (!(epsilon_.min_value() > 0.0) || epsilon_.max_value() > 2.0 + tol) {
    throw DomainError("epsilon must have a positive floor and stay <= 2");
  }
  if (!(delta_.min_value() > 0.0) || delta_.max_value() > 1.0 + tol) {
    throw DomainError("delta must have a positive floor and stay <= 1");
  }
  if (epsilon_.atom_count() != delta_.atom_count()) {
    throw DimensionError("epsilon and delta live on different spaces");
  }
}

bool random_uc_witness_check(const RNElement& x, const RNElement& y,
                             const MeasurableSet& D,
                             const ConvexityParams& params) {
  require_shapes(x.space(), x.fiber_spec(), y.space(), y.fiber_spec(),
                 "random_uc_witness_check");
  const double tol = x.space()->order_tolerance();
  const L0Real nx = l0_norm(x);
  const L0Real ny = l0_norm(y);
  for (std::size_t a = 0; a < nx.atom_count(); ++a) {
    if (nx.value(a) > 1.0 + tol || ny.value(a) > 1.0 + tol) {
      throw PreconditionError("witness pair must lie in the random unit ball");
    }
  }
  const MeasurableSet joint =
      support(x).intersect(support(y)).intersect(support(x - y));
  if (!D.subset_of(joint)) {
    throw PreconditionError("D must lie inside the joint support of x, y, x - y");
  }
  if (!(D.prob() > 0.0)) {
    throw PreconditionError("D must have positive probability");
  }
  const L0Real diff = l0_norm(x - y);
  const L0Real sum = l0_norm(x + y);
  for (std::size_t a = 0; a < diff.atom_count(); ++a) {
    if (!D.contains(a)) continue;
    if (diff.value(a) < params.epsilon().value(a)) continue;  // hypothesis off
    if (sum.value(a) > 2.0 * (1.0 - params.delta().value(a)) + tol) return false;
  }
  return true;
}

namespace {

struct ModulusProbe {
  SpacePtr space;
  FiberSpec fiber;

  explicit ModulusProbe(double p)
      : space(make_space({0.5, 0.3, 0.2})), fiber(2, p) {}

  std::size_t flat_size() const {
    return space->atom_count() * static_cast<std::size_t>(fiber.dimension());
  }

  RNElement element(std::vector<double> flat) const {
    return RNElement(space, fiber, std::move(flat));
  }
};

// 1 - t* where t* is the largest t keeping both m*t +- (eps/2) h inside the
// unit ball of Lp(E); the pair then satisfies the modulus constraints tightly.
double tight_pair_objective(double p, double eps, const RNElement& mid_dir,
                            const RNElement& half_dir) {
  const double mid_norm = lp_norm(mid_dir, p);
  if (mid_norm <= 0.0) return 1.0;
  const RNElement m = mid_dir * (1.0 / mid_norm);
  const double half_norm = lp_norm(half_dir, p);
  if (half_norm <= 0.0) return 1.0;
  const RNElement h = half_dir * (eps / 2.0 / half_norm);

  auto feasible = [&](double t) {
    const RNElement scaled = m * t;
    return std::max(lp_norm(scaled + h, p), lp_norm(scaled - h, p)) <= 1.0;
  };
  if (!feasible(0.0)) return 1.0;
  double lo = 0.0;
  double hi = 2.0 + eps;
  for (int iter = 0; iter < 200 && feasible(hi); ++iter) hi *= 2.0;
  for (int iter = 0; iter < 100; ++iter) {
    const double midpoint = 0.5 * (lo + hi);
    (feasible(midpoint) ? lo : hi) = midpoint;
  }
  return 1.0 - lo;
}

}  // namespace

double lp_uc_modulus_estimate(double p, double eps, int samples,
                              std::uint64_t seed) {
  if (!(p > 1.0) || std::isinf(p)) {
    throw DomainError("modulus estimate requires 1 < p < infinity");
  }
  if (!(eps > 0.0 && eps <= 2.0)) {
    throw DomainError("modulus estimate requires 0 < eps <= 2");
  }
  if (samples < 1) {
    throw DomainError("modulus estimate requires samples >= 1");
  }
  const ModulusProbe probe(p);
  const std::size_t n = probe.flat_size();

  double best = 1.0;
  std::vector<double> best_m(n, 0.0);
  std::vector<double> best_h(n, 0.0);

  auto consider = [&](const std::vector<double>& m, const std::vector<double>& h) {
    const double value =
        tight_pair_objective(p, eps, probe.element(m), probe.element(h));
    if (value < best) {
      best = value;
      best_m = m;
      best_h = h;
    }
  };

  // Deterministic two-coordinate candidates; these attain the known moduli
  // of the classical Lp spaces for p >= 2 and the Hilbert modulus at p = 2.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      std::vector<double> m(n, 0.0), h(n, 0.0);
      m[i] = 1.0;
      h[j] = 1.0;
      consider(m, h);
    }
  }

  Rng rng(seed);
  for (int s = 0; s < samples; ++s) {
    std::vector<double> m(n), h(n);
    for (double& c : m) c = rng.normal();
    for (double& c : h) c = rng.normal();
    consider(m, h);
  }

  // Local refinement around the best candidate with a shrinking step.
  double step = 0.25;
  for (int s = 0; s < 2 * samples; ++s) {
    std::vector<double> m = best_m;
    std::vector<double> h = best_h;
    for (double& c : m) c += step * rng.normal();
    for (double& c : h) c += step * rng.normal();
    consider(m, h);
    step *= 0.97;
  }
  return std::max(0.0, best);
}

std::vector<RandomFunctional> coordinate_dual_family(const SpacePtr& space,
                                                     const FiberSpec& fiber) {
  const auto d = static_cast<std::size_t>(fiber.dimension());
  const std::size_t atoms = space->atom_count();
  std::vector<RandomFunctional> family;
  family.reserve(atoms * d);
  for (std::size_t a = 0; a < atoms; ++a) {
    for (std::size_t i = 0; i < d; ++i) {
      std::vector<double> data(atoms * d, 0.0);
      data[a * d + i] = 1.0;
      family.emplace_back(space, fiber, std::move(data));
    }
  }
  return family;
}

}  // namespace rnm
