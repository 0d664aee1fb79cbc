#include "ccollect/distribution.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace ccollect {

DrawDistribution::DrawDistribution(std::vector<Rational> weights)
    : weights_(std::move(weights)) {
  Rational total(0);
  for (const Rational& w : weights_) total += w;
  null_mass_ = 1 - total;
}

DrawDistribution DrawDistribution::from_rationals(
    std::vector<Rational> weights) {
  if (weights.empty())
    throw std::invalid_argument("distribution: needs at least one coupon");
  Rational total(0);
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const Rational& w = weights[i];
    if (w <= 0 || w >= 1)
      throw std::invalid_argument(
          "distribution: weight " + std::to_string(i + 1) +
          " must lie strictly in (0,1); drop zero-mass coupons instead");
    total += w;
  }
  if (total > 1)
    throw std::invalid_argument("distribution: weights sum above 1");
  return DrawDistribution(std::move(weights));
}

DrawDistribution DrawDistribution::from_doubles(
    const std::vector<double>& weights) {
  if (weights.empty())
    throw std::invalid_argument("distribution: needs at least one coupon");
  std::vector<Rational> exact;
  exact.reserve(weights.size());
  Rational total(0);
  for (std::size_t i = 0; i < weights.size(); ++i) {
    double w = weights[i];
    if (!std::isfinite(w) || w <= 0.0 || w >= 1.0)
      throw std::invalid_argument(
          "distribution: weight " + std::to_string(i + 1) +
          " must be finite and strictly in (0,1)");
    exact.push_back(rational_from_double(w));
    total += exact.back();
  }
  if (total > 1) {
    // representation noise only; anything larger is a real violation
    if (total > Rational(1) + make_rational(1, 1000000000000L))
      throw std::invalid_argument("distribution: weights sum above 1");
    for (Rational& w : exact) w /= total;
  }
  return DrawDistribution(std::move(exact));
}

DrawDistribution DrawDistribution::almost_uniform(int n,
                                                  const Rational& null_mass) {
  if (n < 1) throw std::invalid_argument("almost_uniform: n must be >= 1");
  if (null_mass < 0 || null_mass >= 1)
    throw std::invalid_argument("almost_uniform: null mass must be in [0,1)");
  Rational share = (1 - null_mass) / n;
  return DrawDistribution(std::vector<Rational>(n, share));
}

DrawDistribution DrawDistribution::uniform(int n) {
  return almost_uniform(n, Rational(0));
}

DrawDistribution DrawDistribution::removed(int i) const {
  if (i < 0 || i >= size())
    throw std::invalid_argument("removed: index out of range");
  if (size() == 1)
    throw std::invalid_argument("removed: cannot empty the coupon set");
  std::vector<Rational> rest;
  rest.reserve(weights_.size() - 1);
  for (int j = 0; j < size(); ++j)
    if (j != i) rest.push_back(weights_[j]);
  return DrawDistribution(std::move(rest));
}

DrawDistribution DrawDistribution::flattened() const {
  return almost_uniform(size(), null_mass_);
}

bool DrawDistribution::is_almost_uniform() const {
  for (const Rational& w : weights_)
    if (w != weights_.front()) return false;
  return true;
}

std::vector<double> DrawDistribution::weights_f64() const {
  std::vector<double> out;
  out.reserve(weights_.size());
  for (const Rational& w : weights_) out.push_back(to_double(w));
  return out;
}

}  // namespace ccollect
