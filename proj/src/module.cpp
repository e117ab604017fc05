#include "rnm/module.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace rnm {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw DimensionError(msg);
}

double fiber_norm(std::span<const double> v, double q) {
  double sum = 0.0;
  for (double c : v) sum += std::pow(std::abs(c), q);
  return std::pow(sum, 1.0 / q);
}

}  // namespace

FiberSpec::FiberSpec(int dimension, double exponent)
    : dimension_(dimension), exponent_(exponent) {
  if (dimension < 1) {
    throw DomainError("fiber dimension must be positive");
  }
  if (!(exponent > 1.0) || !std::isfinite(exponent)) {
    throw DomainError("fiber exponent must satisfy 1 < q < infinity");
  }
}

double FiberSpec::dual_exponent() const { return exponent_ / (exponent_ - 1.0); }

RNElement::RNElement(SpacePtr space, FiberSpec fiber, std::vector<double> data)
    : space_(std::move(space)), fiber_(fiber), data_(std::move(data)) {
  if (!space_) {
    throw DomainError("element needs a space");
  }
  const std::size_t expected =
      space_->atom_count() * static_cast<std::size_t>(fiber_.dimension());
  if (data_.size() != expected) {
    throw DimensionError("element data has " + std::to_string(data_.size()) +
                         " entries, expected " + std::to_string(expected));
  }
  for (double v : data_) {
    if (!std::isfinite(v)) throw DomainError("element has a non-finite entry");
  }
}

RNElement RNElement::zero(SpacePtr space, FiberSpec fiber) {
  std::vector<double> data(
      space->atom_count() * static_cast<std::size_t>(fiber.dimension()), 0.0);
  return RNElement(std::move(space), fiber, std::move(data));
}

RNElement RNElement::from_fibers(SpacePtr space, FiberSpec fiber,
                                 const std::vector<std::vector<double>>& fibers) {
  if (fibers.size() != space->atom_count()) {
    throw DimensionError("one fiber per atom required");
  }
  std::vector<double> data;
  data.reserve(fibers.size() * static_cast<std::size_t>(fiber.dimension()));
  for (const auto& f : fibers) {
    if (f.size() != static_cast<std::size_t>(fiber.dimension())) {
      throw DimensionError("fiber dimension mismatch");
    }
    data.insert(data.end(), f.begin(), f.end());
  }
  return RNElement(std::move(space), fiber, std::move(data));
}

std::span<const double> RNElement::fiber(std::size_t atom) const {
  const auto d = static_cast<std::size_t>(fiber_.dimension());
  return {data_.data() + atom * d, d};
}

RNElement RNElement::operator+(const RNElement& other) const {
  require(atom_count() == other.atom_count() && fiber_ == other.fiber_,
          "add: element shapes differ");
  std::vector<double> v(data_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = data_[i] + other.data_[i];
  return RNElement(space_, fiber_, std::move(v));
}

RNElement RNElement::operator-(const RNElement& other) const {
  require(atom_count() == other.atom_count() && fiber_ == other.fiber_,
          "subtract: element shapes differ");
  std::vector<double> v(data_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = data_[i] - other.data_[i];
  return RNElement(space_, fiber_, std::move(v));
}

RNElement RNElement::operator*(double scalar) const {
  std::vector<double> v(data_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = data_[i] * scalar;
  return RNElement(space_, fiber_, std::move(v));
}

L0Real l0_norm(const RNElement& x) {
  std::vector<double> v(x.atom_count());
  for (std::size_t a = 0; a < x.atom_count(); ++a) {
    v[a] = fiber_norm(x.fiber(a), x.fiber_spec().exponent());
  }
  return L0Real(x.space(), std::move(v));
}

RNElement module_scale(const L0Real& xi, const RNElement& x) {
  require(xi.atom_count() == x.atom_count(), "module_scale: atom counts differ");
  const auto d = static_cast<std::size_t>(x.dimension());
  std::vector<double> v(x.data().size());
  for (std::size_t a = 0; a < x.atom_count(); ++a) {
    for (std::size_t i = 0; i < d; ++i) {
      v[a * d + i] = xi.value(a) * x.data()[a * d + i];
    }
  }
  return RNElement(x.space(), x.fiber_spec(), std::move(v));
}

MeasurableSet support(const RNElement& x) {
  const L0Real norms = l0_norm(x);
  const double tol = x.space()->order_tolerance();
  std::vector<std::uint8_t> m(x.atom_count());
  for (std::size_t a = 0; a < m.size(); ++a) m[a] = norms.value(a) > tol ? 1 : 0;
  return MeasurableSet(x.space(), std::move(m));
}

RNElement glue(const Partition& partition, const std::vector<RNElement>& elements) {
  if (partition.size() != elements.size()) {
    throw DomainError("glue: " + std::to_string(partition.size()) +
                      " pieces but " + std::to_string(elements.size()) +
                      " elements");
  }
  const RNElement& first = elements.front();
  const auto d = static_cast<std::size_t>(first.dimension());
  const std::size_t atoms = partition.space()->atom_count();
  std::vector<double> v(atoms * d);
  for (std::size_t a = 0; a < atoms; ++a) {
    const RNElement& src = elements[partition.assignment()[a]];
    require(src.atom_count() == atoms && src.fiber_spec() == first.fiber_spec(),
            "glue: element shapes differ");
    for (std::size_t i = 0; i < d; ++i) v[a * d + i] = src.data()[a * d + i];
  }
  return RNElement(partition.space(), first.fiber_spec(), std::move(v));
}

RNElement restrict_to(const RNElement& x, const MeasurableSet& A) {
  require(x.atom_count() == A.atom_count(), "restrict_to: atom counts differ");
  const auto d = static_cast<std::size_t>(x.dimension());
  std::vector<double> v(x.data().size(), 0.0);
  for (std::size_t a = 0; a < x.atom_count(); ++a) {
    if (!A.contains(a)) continue;
    for (std::size_t i = 0; i < d; ++i) v[a * d + i] = x.data()[a * d + i];
  }
  return RNElement(x.space(), x.fiber_spec(), std::move(v));
}

bool exact_equal(const RNElement& a, const RNElement& b) {
  return a.atom_count() == b.atom_count() && a.fiber_spec() == b.fiber_spec() &&
         a.data() == b.data();
}

ConvexBody::ConvexBody(Kind kind, RNElement a, RNElement b, L0Real radius)
    : kind_(kind), a_(std::move(a)), b_(std::move(b)), radius_(std::move(radius)) {}

ConvexBody ConvexBody::ball(RNElement center, L0Real radius) {
  require(center.atom_count() == radius.atom_count(),
          "ball: center and radius atom counts differ");
  for (std::size_t a = 0; a < radius.atom_count(); ++a) {
    if (radius.value(a) < 0.0) {
      throw DomainError("ball radius must be nonnegative at every atom");
    }
  }
  RNElement b = center;
  return ConvexBody(Kind::ball, std::move(center), std::move(b), std::move(radius));
}

ConvexBody ConvexBody::box(RNElement lower, RNElement upper) {
  require(lower.atom_count() == upper.atom_count() &&
              lower.fiber_spec() == upper.fiber_spec(),
          "box: bound shapes differ");
  for (std::size_t i = 0; i < lower.data().size(); ++i) {
    if (lower.data()[i] > upper.data()[i]) {
      throw DomainError("box bounds must satisfy lower <= upper");
    }
  }
  L0Real zero = L0Real::zero(lower.space());
  return ConvexBody(Kind::box, std::move(lower), std::move(upper), std::move(zero));
}

const RNElement& ConvexBody::ball_center() const {
  if (kind_ != Kind::ball) throw DomainError("not a ball body");
  return a_;
}

const L0Real& ConvexBody::ball_radius() const {
  if (kind_ != Kind::ball) throw DomainError("not a ball body");
  return radius_;
}

const RNElement& ConvexBody::box_lower() const {
  if (kind_ != Kind::box) throw DomainError("not a box body");
  return a_;
}

const RNElement& ConvexBody::box_upper() const {
  if (kind_ != Kind::box) throw DomainError("not a box body");
  return b_;
}

L0Real ConvexBody::bound() const {
  if (kind_ == Kind::ball) {
    return l0_norm(a_) + radius_;
  }
  // Box: the l_q norm of the coordinate-wise largest magnitude corner.
  std::vector<double> corner(a_.data().size());
  for (std::size_t i = 0; i < corner.size(); ++i) {
    corner[i] = std::max(std::abs(a_.data()[i]), std::abs(b_.data()[i]));
  }
  return l0_norm(RNElement(a_.space(), a_.fiber_spec(), std::move(corner)));
}

RNElement ConvexBody::center_point() const {
  if (kind_ == Kind::ball) return a_;
  return (a_ + b_) * 0.5;
}

bool ConvexBody::contains(const RNElement& x, double tol) const {
  if (tol < 0.0) throw DomainError("containment tolerance must be >= 0");
  require(x.atom_count() == a_.atom_count() && x.fiber_spec() == a_.fiber_spec(),
          "contains: element shape differs from body");
  if (kind_ == Kind::ball) {
    const L0Real dist = l0_norm(x - a_);
    for (std::size_t atom = 0; atom < x.atom_count(); ++atom) {
      if (dist.value(atom) > radius_.value(atom) + tol) return false;
    }
    return true;
  }
  for (std::size_t i = 0; i < x.data().size(); ++i) {
    if (x.data()[i] < a_.data()[i] - tol || x.data()[i] > b_.data()[i] + tol) {
      return false;
    }
  }
  return true;
}

RNElement ConvexBody::project(const RNElement& x) const {
  require(x.atom_count() == a_.atom_count() && x.fiber_spec() == a_.fiber_spec(),
          "project: element shape differs from body");
  if (kind_ == Kind::ball) {
    if (x.fiber_spec().exponent() != 2.0) {
      throw UnsupportedError(
          "ball projection is only available for q = 2 fibers");
    }
    const auto d = static_cast<std::size_t>(x.dimension());
    std::vector<double> v(x.data().size());
    for (std::size_t atom = 0; atom < x.atom_count(); ++atom) {
      double dist2 = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        const double w = x.data()[atom * d + i] - a_.data()[atom * d + i];
        dist2 += w * w;
      }
      const double dist = std::sqrt(dist2);
      const double r = radius_.value(atom);
      const double scale = dist > r && dist > 0.0 ? r / dist : 1.0;
      for (std::size_t i = 0; i < d; ++i) {
        const double w = x.data()[atom * d + i] - a_.data()[atom * d + i];
        v[atom * d + i] = a_.data()[atom * d + i] + scale * w;
      }
    }
    return RNElement(x.space(), x.fiber_spec(), std::move(v));
  }
  std::vector<double> v(x.data().size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = std::clamp(x.data()[i], a_.data()[i], b_.data()[i]);
  }
  return RNElement(x.space(), x.fiber_spec(), std::move(v));
}

RNElement ConvexBody::sample(Rng& rng) const {
  const auto d = static_cast<std::size_t>(a_.dimension());
  std::vector<double> v(a_.data().size());
  if (kind_ == Kind::box) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      v[i] = a_.data()[i] == b_.data()[i]
                 ? a_.data()[i]
                 : rng.uniform(a_.data()[i], b_.data()[i]);
    }
    return RNElement(a_.space(), a_.fiber_spec(), std::move(v));
  }
  const double q = a_.fiber_spec().exponent();
  std::vector<double> w(d);
  for (std::size_t atom = 0; atom < a_.atom_count(); ++atom) {
    const double r = radius_.value(atom);
    // Rejection from the bounding cube; fine at fiber dimensions <= 8.
    for (int attempt = 0;; ++attempt) {
      double norm_q = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        w[i] = rng.uniform(-1.0, 1.0);
        norm_q += std::pow(std::abs(w[i]), q);
      }
      const double norm = std::pow(norm_q, 1.0 / q);
      if (norm <= 1.0) break;
      if (attempt >= 1000) {
        for (std::size_t i = 0; i < d; ++i) w[i] /= norm;
        break;
      }
    }
    for (std::size_t i = 0; i < d; ++i) {
      v[atom * d + i] = a_.data()[atom * d + i] + r * w[i];
    }
  }
  return RNElement(a_.space(), a_.fiber_spec(), std::move(v));
}

ConvexBody ConvexBody::translate(const RNElement& u) const {
  if (kind_ == Kind::ball) return ball(a_ + u, radius_);
  return box(a_ + u, b_ + u);
}

bool body_contains(const ConvexBody& body, const RNElement& x, double tol) {
  return body.contains(x, tol);
}

RNElement body_project(const ConvexBody& body, const RNElement& x) {
  return body.project(x);
}

}  // namespace rnm
