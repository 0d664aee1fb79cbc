#ifndef CCOLLECT_ORACLE_HPP
#define CCOLLECT_ORACLE_HPP

#include <cstdint>
#include <vector>

#include "ccollect/collector.hpp"
#include "ccollect/distribution.hpp"

namespace ccollect::oracle {

// Brute-force verifiers. None of these share evaluation code with the
// closed forms in collector.hpp; agreement between the two sides is what
// the test suites assert.

/// Forward mass propagation over the lattice of collected sets: state J
/// holds Pr{collection == J after `steps` draws}. Dense over 2^n masks.
class SubsetChain {
 public:
  /// Requires n <= 20 (dense 2^n state vector).
  explicit SubsetChain(const DrawDistribution& p);

  void step();
  long steps() const { return steps_; }

  /// mass[mask] after the current number of steps.
  const std::vector<Rational>& masses() const { return mass_; }

  /// sum of masses over states with fewer than c coupons collected,
  /// i.e. Pr{T_{c,n} > steps()}.
  Rational mass_below(int c) const;

  /// Exact total mass (1 at every step; a conservation check for tests).
  Rational total_mass() const;

 private:
  const DrawDistribution p_;
  std::vector<Rational> mass_;
  std::vector<Rational> stay_;  // p0 + P_J per state
  long steps_ = 0;
};

/// Pr{T_{c,n}(p) > k} by stepping the subset chain k times.
Rational markov_tail_dp(const DrawDistribution& p, int c, long k);

TailCurve markov_tail_curve(const DrawDistribution& p, int c, long k_max);

/// Ground truth by enumerating every draw sequence of length k over
/// {0,1,...,n}; requires (n+1)^k <= 1e7. Subtrees whose distinct count
/// already reached c are pruned (they contribute nothing to the tail).
Rational sequence_enumeration_tail(const DrawDistribution& p, int c, long k);

/// One enumeration pass, all depths at once: occ[k][d] = Pr{exactly d
/// distinct non-null coupons after k draws}, k = 0..k_max. The tail for
/// any c is sum_{d<c} occ[k][d]. Requires (n+1)^k_max <= 1e7.
std::vector<std::vector<Rational>> sequence_occupancy(
    const DrawDistribution& p, long k_max);

/// Pr{T_{n,n}(p) <= k} by the multinomial split over positive counts of
/// coupons 1..n-2, with the inner three-way bracket over (null, n-1, n)
/// renormalized by their total mass. n >= 2.
Rational full_collection_cdf_multinomial(const DrawDistribution& p, long k,
                                         std::uint64_t term_cap = 2'000'000);

}  // namespace ccollect::oracle

#endif  // CCOLLECT_ORACLE_HPP
