#ifndef CCOLLECT_DISTRIBUTION_HPP
#define CCOLLECT_DISTRIBUTION_HPP

#include <vector>

#include "ccollect/rational.hpp"

namespace ccollect {

/// The drawing distribution p = (p_1,...,p_n) over n coupons plus the
/// implicit null coupon 0 with mass p_0 = 1 - sum(p). Immutable; every
/// weight lies strictly inside (0,1) and the weights sum to at most 1,
/// so the null mass is always the derived complement.
///
/// Indices are 0-based throughout the library; the CLI's 1-based schedule
/// notation is translated at the parsing boundary.
class DrawDistribution {
 public:
  /// Validating constructor. Rejects empty lists, entries outside (0,1)
  /// and total mass above 1.
  static DrawDistribution from_rationals(std::vector<Rational> weights);

  /// Convenience for float callers: converts each double to its exact
  /// binary rational. Total mass in (1, 1+1e-12] is treated as
  /// representation noise: weights are rescaled by 1/sum and the null
  /// mass becomes 0. Anything above that is rejected.
  static DrawDistribution from_doubles(const std::vector<double>& weights);

  /// v: every coupon gets (1-null_mass)/n.
  static DrawDistribution almost_uniform(int n, const Rational& null_mass);

  /// u: almost_uniform with null mass 0.
  static DrawDistribution uniform(int n);

  int size() const { return static_cast<int>(weights_.size()); }
  const std::vector<Rational>& weights() const { return weights_; }
  const Rational& weight(int i) const { return weights_.at(i); }
  const Rational& null_mass() const { return null_mass_; }
  Rational total_weight() const { return 1 - null_mass_; }

  /// The vector with entry i removed; the null coupon absorbs its mass.
  DrawDistribution removed(int i) const;

  /// The almost-uniform vector sharing this null mass.
  DrawDistribution flattened() const;

  bool is_almost_uniform() const;

  std::vector<double> weights_f64() const;
  double null_mass_f64() const { return to_double(null_mass_); }

  bool operator==(const DrawDistribution& other) const {
    return weights_ == other.weights_;
  }

 private:
  explicit DrawDistribution(std::vector<Rational> weights);

  std::vector<Rational> weights_;
  Rational null_mass_;  // cached 1 - sum(weights_); class is immutable
};

}  // namespace ccollect

#endif  // CCOLLECT_DISTRIBUTION_HPP
