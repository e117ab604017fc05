#include "rnm/measure.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace rnm {

namespace {

void require_same_atoms(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": atom counts differ (" +
                         std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

}  // namespace

AtomicProbabilitySpace::AtomicProbabilitySpace(std::vector<double> weights,
                                               double order_tolerance)
    : weights_(std::move(weights)), order_tolerance_(order_tolerance) {
  if (weights_.empty()) {
    throw DomainError("space needs at least one atom");
  }
  if (!(order_tolerance_ >= 0.0)) {
    throw DomainError("order tolerance must be nonnegative");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (!std::isfinite(weights_[i]) || weights_[i] <= 0.0) {
      throw DomainError("atom " + std::to_string(i) +
                        " has nonpositive weight; full support requires every "
                        "weight > 0");
    }
    sum += weights_[i];
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw DomainError("weights sum to " + std::to_string(sum) +
                      ", expected 1 within 1e-12");
  }
}

SpacePtr make_space(std::vector<double> weights, double order_tolerance) {
  return std::make_shared<const AtomicProbabilitySpace>(std::move(weights),
                                                        order_tolerance);
}

MeasurableSet::MeasurableSet(SpacePtr space, std::vector<std::uint8_t> membership)
    : space_(std::move(space)), membership_(std::move(membership)) {
  if (!space_) {
    throw DomainError("measurable set needs a space");
  }
  require_same_atoms(space_->atom_count(), membership_.size(), "measurable set");
}

MeasurableSet MeasurableSet::all(SpacePtr space) {
  std::vector<std::uint8_t> m(space->atom_count(), 1);
  return MeasurableSet(std::move(space), std::move(m));
}

MeasurableSet MeasurableSet::none(SpacePtr space) {
  std::vector<std::uint8_t> m(space->atom_count(), 0);
  return MeasurableSet(std::move(space), std::move(m));
}

MeasurableSet MeasurableSet::of(SpacePtr space,
                                const std::vector<std::size_t>& atoms) {
  std::vector<std::uint8_t> m(space->atom_count(), 0);
  for (std::size_t atom : atoms) {
    if (atom >= m.size()) {
      throw DomainError("atom index " + std::to_string(atom) + " out of range");
    }
    m[atom] = 1;
  }
  return MeasurableSet(std::move(space), std::move(m));
}

bool MeasurableSet::empty() const { return count() == 0; }

std::size_t MeasurableSet::count() const {
  std::size_t n = 0;
  for (auto f : membership_) n += (f != 0);
  return n;
}

double MeasurableSet::prob() const {
  double p = 0.0;
  for (std::size_t i = 0; i < membership_.size(); ++i) {
    if (membership_[i]) p += space_->weight(i);
  }
  return p;
}

MeasurableSet MeasurableSet::complement() const {
  std::vector<std::uint8_t> m(membership_.size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = membership_[i] ? 0 : 1;
  return MeasurableSet(space_, std::move(m));
}

MeasurableSet MeasurableSet::intersect(const MeasurableSet& other) const {
  require_same_atoms(atom_count(), other.atom_count(), "intersect");
  std::vector<std::uint8_t> m(membership_.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    m[i] = (membership_[i] && other.membership_[i]) ? 1 : 0;
  }
  return MeasurableSet(space_, std::move(m));
}

MeasurableSet MeasurableSet::unite(const MeasurableSet& other) const {
  require_same_atoms(atom_count(), other.atom_count(), "unite");
  std::vector<std::uint8_t> m(membership_.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    m[i] = (membership_[i] || other.membership_[i]) ? 1 : 0;
  }
  return MeasurableSet(space_, std::move(m));
}

bool MeasurableSet::subset_of(const MeasurableSet& other) const {
  require_same_atoms(atom_count(), other.atom_count(), "subset_of");
  for (std::size_t i = 0; i < membership_.size(); ++i) {
    if (membership_[i] && !other.membership_[i]) return false;
  }
  return true;
}

bool MeasurableSet::operator==(const MeasurableSet& other) const {
  return atom_count() == other.atom_count() && membership_ == other.membership_;
}

L0Real::L0Real(SpacePtr space, std::vector<double> values)
    : space_(std::move(space)), values_(std::move(values)) {
  if (!space_) {
    throw DomainError("L0 value needs a space");
  }
  require_same_atoms(space_->atom_count(), values_.size(), "L0 value");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw DomainError("L0 value at atom " + std::to_string(i) +
                        " is not finite");
    }
  }
}

L0Real L0Real::constant(SpacePtr space, double value) {
  std::vector<double> v(space->atom_count(), value);
  return L0Real(std::move(space), std::move(v));
}

L0Real L0Real::operator+(const L0Real& other) const {
  require_same_atoms(atom_count(), other.atom_count(), "add");
  std::vector<double> v(values_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = values_[i] + other.values_[i];
  return L0Real(space_, std::move(v));
}

L0Real L0Real::operator-(const L0Real& other) const {
  require_same_atoms(atom_count(), other.atom_count(), "subtract");
  std::vector<double> v(values_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = values_[i] - other.values_[i];
  return L0Real(space_, std::move(v));
}

L0Real L0Real::operator*(const L0Real& other) const {
  require_same_atoms(atom_count(), other.atom_count(), "multiply");
  std::vector<double> v(values_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = values_[i] * other.values_[i];
  return L0Real(space_, std::move(v));
}

L0Real L0Real::operator*(double scalar) const {
  std::vector<double> v(values_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = values_[i] * scalar;
  return L0Real(space_, std::move(v));
}

L0Real L0Real::operator+(double scalar) const {
  std::vector<double> v(values_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = values_[i] + scalar;
  return L0Real(space_, std::move(v));
}

L0Real L0Real::operator-() const { return (*this) * -1.0; }

L0Real L0Real::abs() const {
  std::vector<double> v(values_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::abs(values_[i]);
  return L0Real(space_, std::move(v));
}

double L0Real::max_value() const {
  return *std::max_element(values_.begin(), values_.end());
}

double L0Real::min_value() const {
  return *std::min_element(values_.begin(), values_.end());
}

double L0Real::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

Partition::Partition(SpacePtr space, std::vector<MeasurableSet> pieces,
                     std::vector<std::size_t> assignment)
    : space_(std::move(space)),
      pieces_(std::move(pieces)),
      assignment_(std::move(assignment)) {}

Partition Partition::trivial(SpacePtr space) {
  return validate_partition({MeasurableSet::all(std::move(space))});
}

Partition Partition::atomic(SpacePtr space) {
  std::vector<MeasurableSet> pieces;
  pieces.reserve(space->atom_count());
  for (std::size_t i = 0; i < space->atom_count(); ++i) {
    pieces.push_back(MeasurableSet::of(space, {i}));
  }
  return validate_partition(pieces);
}

bool almost_sure_leq(const L0Real& xi, const L0Real& eta) {
  require_same_atoms(xi.atom_count(), eta.atom_count(), "almost_sure_leq");
  const double tol = xi.space()->order_tolerance();
  for (std::size_t i = 0; i < xi.atom_count(); ++i) {
    if (xi.value(i) > eta.value(i) + tol) return false;
  }
  return true;
}

L0Real lattice_sup(const std::vector<L0Real>& family) {
  if (family.empty()) {
    throw DomainError("lattice_sup over an empty family");
  }
  std::vector<double> v = family.front().values();
  for (std::size_t k = 1; k < family.size(); ++k) {
    require_same_atoms(v.size(), family[k].atom_count(), "lattice_sup");
    for (std::size_t i = 0; i < v.size(); ++i) {
      v[i] = std::max(v[i], family[k].value(i));
    }
  }
  return L0Real(family.front().space(), std::move(v));
}

L0Real lattice_inf(const std::vector<L0Real>& family) {
  if (family.empty()) {
    throw DomainError("lattice_inf over an empty family");
  }
  std::vector<double> v = family.front().values();
  for (std::size_t k = 1; k < family.size(); ++k) {
    require_same_atoms(v.size(), family[k].atom_count(), "lattice_inf");
    for (std::size_t i = 0; i < v.size(); ++i) {
      v[i] = std::min(v[i], family[k].value(i));
    }
  }
  return L0Real(family.front().space(), std::move(v));
}

L0Real indicator(const MeasurableSet& A) {
  std::vector<double> v(A.atom_count());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = A.contains(i) ? 1.0 : 0.0;
  return L0Real(A.space(), std::move(v));
}

double prob_of_exceed(const L0Real& xi, double eps) {
  if (!(eps > 0.0)) {
    throw DomainError("prob_of_exceed requires eps > 0");
  }
  double p = 0.0;
  for (std::size_t i = 0; i < xi.atom_count(); ++i) {
    if (std::abs(xi.value(i)) >= eps) p += xi.space()->weight(i);
  }
  return p;
}

bool converges_in_probability(const std::vector<L0Real>& seq, const L0Real& limit,
                              double eps, double lambda, std::size_t tail) {
  if (!(eps > 0.0)) {
    throw DomainError("converges_in_probability requires eps > 0");
  }
  if (!(lambda > 0.0 && lambda < 1.0)) {
    throw DomainError("converges_in_probability requires 0 < lambda < 1");
  }
  if (tail >= seq.size()) {
    throw DomainError("tail index " + std::to_string(tail) +
                      " out of range for sequence of length " +
                      std::to_string(seq.size()));
  }
  for (std::size_t n = tail; n < seq.size(); ++n) {
    if (prob_of_exceed(seq[n] - limit, eps) >= lambda) return false;
  }
  return true;
}

Partition validate_partition(const std::vector<MeasurableSet>& pieces) {
  std::vector<MeasurableSet> kept;
  for (const auto& p : pieces) {
    if (!p.empty()) kept.push_back(p);
  }
  if (kept.empty()) {
    throw PartitionError("partition has no nonempty piece");
  }
  SpacePtr space = kept.front().space();
  const std::size_t atoms = space->atom_count();
  std::vector<std::size_t> assignment(atoms, kept.size());
  for (std::size_t k = 0; k < kept.size(); ++k) {
    require_same_atoms(atoms, kept[k].atom_count(), "validate_partition");
    for (std::size_t i = 0; i < atoms; ++i) {
      if (!kept[k].contains(i)) continue;
      if (assignment[i] != kept.size()) {
        throw PartitionError("pieces overlap at atom " + std::to_string(i));
      }
      assignment[i] = k;
    }
  }
  for (std::size_t i = 0; i < atoms; ++i) {
    if (assignment[i] == kept.size()) {
      throw PartitionError("pieces leave a gap at atom " + std::to_string(i));
    }
  }
  return Partition(std::move(space), std::move(kept), std::move(assignment));
}

L0Real glue(const Partition& partition, const std::vector<L0Real>& values) {
  if (partition.size() != values.size()) {
    throw DomainError("glue: " + std::to_string(partition.size()) +
                      " pieces but " + std::to_string(values.size()) + " values");
  }
  const std::size_t atoms = partition.space()->atom_count();
  std::vector<double> v(atoms);
  for (std::size_t i = 0; i < atoms; ++i) {
    const L0Real& src = values[partition.assignment()[i]];
    require_same_atoms(atoms, src.atom_count(), "glue");
    v[i] = src.value(i);
  }
  return L0Real(partition.space(), std::move(v));
}

}  // namespace rnm
