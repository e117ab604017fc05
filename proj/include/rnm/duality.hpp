#pragma once

#include <cstdint>
#include <vector>

#include "rnm/module.hpp"

namespace rnm {

/// A module functional represented by one dual fiber vector per atom;
/// evaluation is the atom-wise pairing with the element's fiber.
class RandomFunctional {
 public:
  RandomFunctional(SpacePtr space, FiberSpec primal_fiber,
                   std::vector<double> dual_data);

  static RandomFunctional zero(SpacePtr space, FiberSpec primal_fiber);
  static RandomFunctional from_fibers(SpacePtr space, FiberSpec primal_fiber,
                                      const std::vector<std::vector<double>>& fibers);

  const SpacePtr& space() const { return space_; }
  const FiberSpec& primal_fiber() const { return fiber_; }
  double dual_exponent() const { return fiber_.dual_exponent(); }
  std::span<const double> dual_fiber(std::size_t atom) const;
  const std::vector<double>& dual_data() const { return data_; }

  /// F(x): the atom-wise pairing <F(w), x(w)> as an L0 scalar.
  L0Real evaluate(const RNElement& x) const;

  RandomFunctional scale(const L0Real& xi) const;

 private:
  SpacePtr space_;
  FiberSpec fiber_;
  std::vector<double> data_;
};

/// Conjugate exponents with 1/p + 1/q = 1; q is +infinity when p = 1.
struct HolderPair {
  double p;
  double q;
};

HolderPair holder_pair(double p);

/// (sum_w P(w) ||x||(w)^p)^(1/p); the max atom norm when p = infinity.
double lp_norm(const RNElement& x, double p);

/// Same moment functional applied to an L0 scalar.
double lp_norm(const L0Real& xi, double p);

/// Per-atom dual norm of the functional: the minimal Lipschitz bound ||F||*.
L0Real conjugate_norm(const RandomFunctional& F);

/// Integral of the pairing: the scalar functional induced on Lp(E).
double canonical_pairing(const RandomFunctional& F, const RNElement& x);

/// Brute-force estimate of sup{ |canonical_pairing(F, x)| : lp_norm(x, p) <= 1 },
/// from the analytic alignment maximizer plus grid-sampled candidates. Every
/// candidate is evaluated through the pairing itself, so the value is an
/// implementation-independent probe of the dual norm.
double operator_norm_oracle(const RandomFunctional& F, HolderPair pair, int grid);

/// Convergence of F(x_n) to F(x) in probability for every F in the family.
bool random_weak_converges(const std::vector<RNElement>& seq, const RNElement& x,
                           const std::vector<RandomFunctional>& family, double eps,
                           double lambda, std::size_t tail);

/// Convergence of ||x_n - x|| to zero in probability.
bool eps_lambda_converges(const std::vector<RNElement>& seq, const RNElement& x,
                          double eps, double lambda, std::size_t tail);

/// L0-valued (epsilon, delta) pair for uniform-convexity witnesses:
/// epsilon has a positive floor and stays <= 2, delta likewise within (0, 1].
class ConvexityParams {
 public:
  ConvexityParams(L0Real epsilon, L0Real delta);

  const L0Real& epsilon() const { return epsilon_; }
  const L0Real& delta() const { return delta_; }

 private:
  L0Real epsilon_;
  L0Real delta_;
};

/// Checks, atom by atom on D, that ||x - y|| >= epsilon forces
/// ||x + y|| <= 2 (1 - delta). Both x and y must sit in the random unit ball
/// and D must lie inside the joint support of x, y and x - y.
bool random_uc_witness_check(const RNElement& x, const RNElement& y,
                             const MeasurableSet& D, const ConvexityParams& params);

/// Seeded estimate of the uniform-convexity modulus
///   delta(eps) = inf{ 1 - ||(x+y)/2||_p : ||x||_p <= 1, ||y||_p <= 1,
///                     ||x-y||_p >= eps }
/// on a fixed probe instance (three atoms, two-dimensional fibers with q = p).
double lp_uc_modulus_estimate(double p, double eps, int samples,
                              std::uint64_t seed);

/// The indicator-scaled coordinate duals: a norming family of size
/// atom_count * dimension used as the default random-weak test family.
std::vector<RandomFunctional> coordinate_dual_family(const SpacePtr& space,
                                                     const FiberSpec& fiber);

}  // namespace rnm
