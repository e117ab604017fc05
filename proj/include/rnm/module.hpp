#pragma once

#include <span>
#include <vector>

#include "rnm/measure.hpp"
#include "rnm/rng.hpp"

namespace rnm {

/// Each fiber is R^d with the l_q norm; 1 < q < infinity keeps the
/// resulting module random uniformly convex.
class FiberSpec {
 public:
  FiberSpec(int dimension, double exponent);

  int dimension() const { return dimension_; }
  double exponent() const { return exponent_; }
  double dual_exponent() const;

  bool operator==(const FiberSpec& other) const {
    return dimension_ == other.dimension_ && exponent_ == other.exponent_;
  }

 private:
  int dimension_;
  double exponent_;
};

/// One fiber vector per atom: the computable model of a module element.
class RNElement {
 public:
  RNElement(SpacePtr space, FiberSpec fiber, std::vector<double> data);

  static RNElement zero(SpacePtr space, FiberSpec fiber);
  static RNElement from_fibers(SpacePtr space, FiberSpec fiber,
                               const std::vector<std::vector<double>>& fibers);

  const SpacePtr& space() const { return space_; }
  const FiberSpec& fiber_spec() const { return fiber_; }
  std::size_t atom_count() const { return space_->atom_count(); }
  int dimension() const { return fiber_.dimension(); }

  std::span<const double> fiber(std::size_t atom) const;
  const std::vector<double>& data() const { return data_; }
  double coord(std::size_t atom, int i) const {
    return data_[atom * static_cast<std::size_t>(fiber_.dimension()) +
                 static_cast<std::size_t>(i)];
  }

  RNElement operator+(const RNElement& other) const;
  RNElement operator-(const RNElement& other) const;
  RNElement operator*(double scalar) const;
  RNElement operator-() const { return (*this) * -1.0; }

 private:
  SpacePtr space_;
  FiberSpec fiber_;
  std::vector<double> data_;  // atom-major, dimension() entries per atom
};

/// Per-atom l_q norm of the fibers; the L0-norm of the module.
L0Real l0_norm(const RNElement& x);

/// Atom-wise scaling of fibers: the module action of L0 on E.
RNElement module_scale(const L0Real& xi, const RNElement& x);

/// Atoms where the L0-norm exceeds the order tolerance.
MeasurableSet support(const RNElement& x);

/// Piecewise selection along a partition; agrees with elements[i] on piece i.
RNElement glue(const Partition& partition, const std::vector<RNElement>& elements);

/// Zero the fibers outside A. Equals module_scale(indicator(A), x).
RNElement restrict_to(const RNElement& x, const MeasurableSet& A);

bool exact_equal(const RNElement& a, const RNElement& b);

/// Atom-wise product of balls or boxes: the closed, a.s. bounded,
/// L0-convex bodies the toolkit works on.
class ConvexBody {
 public:
  enum class Kind { ball, box };

  static ConvexBody ball(RNElement center, L0Real radius);
  static ConvexBody box(RNElement lower, RNElement upper);

  Kind kind() const { return kind_; }
  const SpacePtr& space() const { return a_.space(); }
  const FiberSpec& fiber_spec() const { return a_.fiber_spec(); }

  const RNElement& ball_center() const;
  const L0Real& ball_radius() const;
  const RNElement& box_lower() const;
  const RNElement& box_upper() const;

  /// Per-atom bound xi with ||g|| <= xi for every member g.
  L0Real bound() const;

  /// A canonical interior member: ball center, or box midpoint.
  RNElement center_point() const;

  bool contains(const RNElement& x, double tol) const;

  /// Atom-wise nearest point. Ball bodies require q = 2 fibers.
  RNElement project(const RNElement& x) const;

  /// Seeded draw of a member, atom by atom.
  RNElement sample(Rng& rng) const;

  /// The translated body G + u.
  ConvexBody translate(const RNElement& u) const;

 private:
  ConvexBody(Kind kind, RNElement a, RNElement b, L0Real radius);

  Kind kind_;
  RNElement a_;    // ball center, or box lower bounds
  RNElement b_;    // box upper bounds (unused for balls)
  L0Real radius_;  // ball radii (zero for boxes)
};

bool body_contains(const ConvexBody& body, const RNElement& x, double tol);
RNElement body_project(const ConvexBody& body, const RNElement& x);

}  // namespace rnm
