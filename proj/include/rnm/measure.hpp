#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include "rnm/errors.hpp"

namespace rnm {

/// Absolute tolerance shared by all order predicates.
inline constexpr double kOrderTolerance = 1e-12;

/// Finite list of atoms with strictly positive weights summing to 1.
/// The computable model of a probability space with full support.
class AtomicProbabilitySpace {
 public:
  explicit AtomicProbabilitySpace(std::vector<double> weights,
                                  double order_tolerance = kOrderTolerance);

  std::size_t atom_count() const { return weights_.size(); }
  double weight(std::size_t atom) const { return weights_[atom]; }
  const std::vector<double>& weights() const { return weights_; }
  double order_tolerance() const { return order_tolerance_; }

 private:
  std::vector<double> weights_;
  double order_tolerance_;
};

using SpacePtr = std::shared_ptr<const AtomicProbabilitySpace>;

SpacePtr make_space(std::vector<double> weights,
                    double order_tolerance = kOrderTolerance);

/// Measurable set: one membership flag per atom.
class MeasurableSet {
 public:
  MeasurableSet(SpacePtr space, std::vector<std::uint8_t> membership);

  static MeasurableSet all(SpacePtr space);
  static MeasurableSet none(SpacePtr space);
  static MeasurableSet of(SpacePtr space, const std::vector<std::size_t>& atoms);

  const SpacePtr& space() const { return space_; }
  std::size_t atom_count() const { return membership_.size(); }
  bool contains(std::size_t atom) const { return membership_[atom] != 0; }
  const std::vector<std::uint8_t>& membership() const { return membership_; }

  bool empty() const;
  std::size_t count() const;
  double prob() const;

  MeasurableSet complement() const;
  MeasurableSet intersect(const MeasurableSet& other) const;
  MeasurableSet unite(const MeasurableSet& other) const;
  bool subset_of(const MeasurableSet& other) const;
  bool operator==(const MeasurableSet& other) const;

 private:
  SpacePtr space_;
  std::vector<std::uint8_t> membership_;
};

/// One finite real value per atom; the scalar lattice the module acts through.
class L0Real {
 public:
  L0Real(SpacePtr space, std::vector<double> values);

  static L0Real constant(SpacePtr space, double value);
  static L0Real zero(SpacePtr space) { return constant(std::move(space), 0.0); }

  const SpacePtr& space() const { return space_; }
  std::size_t atom_count() const { return values_.size(); }
  double value(std::size_t atom) const { return values_[atom]; }
  const std::vector<double>& values() const { return values_; }

  L0Real operator+(const L0Real& other) const;
  L0Real operator-(const L0Real& other) const;
  L0Real operator*(const L0Real& other) const;
  L0Real operator*(double scalar) const;
  L0Real operator+(double scalar) const;
  L0Real operator-() const;

  L0Real abs() const;
  double max_value() const;
  double min_value() const;
  double max_abs() const;

 private:
  SpacePtr space_;
  std::vector<double> values_;
};

/// Disjoint cover of the atom set; empty pieces are never stored.
class Partition {
 public:
  const SpacePtr& space() const { return space_; }
  std::size_t size() const { return pieces_.size(); }
  const MeasurableSet& piece(std::size_t i) const { return pieces_[i]; }
  const std::vector<MeasurableSet>& pieces() const { return pieces_; }
  /// Index of the piece containing each atom.
  const std::vector<std::size_t>& assignment() const { return assignment_; }

  static Partition trivial(SpacePtr space);
  static Partition atomic(SpacePtr space);

  friend Partition validate_partition(const std::vector<MeasurableSet>& pieces);

 private:
  Partition(SpacePtr space, std::vector<MeasurableSet> pieces,
            std::vector<std::size_t> assignment);

  SpacePtr space_;
  std::vector<MeasurableSet> pieces_;
  std::vector<std::size_t> assignment_;
};

/// True iff xi(w) <= eta(w) + tol at every atom. Atoms carry positive mass,
/// so the almost-sure order is the everywhere order.
bool almost_sure_leq(const L0Real& xi, const L0Real& eta);

/// Atom-wise maximum over a nonempty family.
L0Real lattice_sup(const std::vector<L0Real>& family);

/// Atom-wise minimum over a nonempty family.
L0Real lattice_inf(const std::vector<L0Real>& family);

/// 1 on atoms of A, 0 elsewhere.
L0Real indicator(const MeasurableSet& A);

/// P{ |xi| >= eps }.
double prob_of_exceed(const L0Real& xi, double eps);

/// True iff prob_of_exceed(seq[n] - limit, eps) < lambda for every n >= tail.
bool converges_in_probability(const std::vector<L0Real>& seq, const L0Real& limit,
                              double eps, double lambda, std::size_t tail);

/// Drops empty pieces, then checks disjointness and coverage.
Partition validate_partition(const std::vector<MeasurableSet>& pieces);

/// Piecewise selection: result agrees with values[i] on partition piece i.
L0Real glue(const Partition& partition, const std::vector<L0Real>& values);

}  // namespace rnm
