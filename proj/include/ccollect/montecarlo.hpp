#ifndef CCOLLECT_MONTECARLO_HPP
#define CCOLLECT_MONTECARLO_HPP

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "ccollect/distribution.hpp"

namespace ccollect::mc {

/// RNG scheme identifier embedded in every report.
inline constexpr std::string_view kRngScheme = "splitmix64-streams/v1";

/// SplitMix64 in counter mode. Substream `stream` of a given seed is an
/// independent generator; replication r always uses stream r, so results
/// are reproducible and independent of execution order.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64();

  /// Uniform in [0,1), 53 random bits.
  double next_unit();

  /// Uniform integer in [0, bound), bound >= 1; rejection-sampled.
  std::uint64_t next_below(std::uint64_t bound);

 private:
  std::uint64_t state_;
};

/// Inverse-CDF draw table; returns 0 for the null coupon, 1..n otherwise.
class CouponSampler {
 public:
  explicit CouponSampler(const DrawDistribution& p);
  int n() const { return static_cast<int>(cdf_.size()); }
  int draw(CounterRng& rng) const;

 private:
  std::vector<double> cdf_;  // cumulative weights of coupons 1..n
};

inline constexpr std::uint64_t kDefaultDrawGuard = 1'000'000'000;

/// Draws until c distinct non-null coupons are collected; returns the draw
/// count (>= c), or nullopt if the guard fired first.
std::optional<long> sample_waiting_time(const CouponSampler& sampler, int c,
                                        CounterRng& rng,
                                        std::uint64_t guard = kDefaultDrawGuard);
std::optional<long> sample_waiting_time(const DrawDistribution& p, int c,
                                        CounterRng& rng,
                                        std::uint64_t guard = kDefaultDrawGuard);

struct SimulationConfig {
  DrawDistribution p;
  int c = 1;
  std::uint64_t replications = 1;
  std::uint64_t seed = 0;
  long k_max = 0;
  std::uint64_t draw_guard = kDefaultDrawGuard;
};

struct TailEstimate {
  long k = 0;
  double estimate = 0.0;   // fraction of replications with T > k
  double std_error = 0.0;  // binomial standard error
  std::uint64_t exceed_count = 0;
};

struct EstimateReport {
  std::string_view rng_scheme = kRngScheme;
  std::uint64_t seed = 0;
  std::uint64_t replications = 0;
  int c = 1;
  std::vector<double> p_f64;
  double mean = 0.0;
  double variance = 0.0;  // unbiased sample variance
  double std_error_mean = 0.0;
  std::vector<TailEstimate> tail;
  std::uint64_t aborted = 0;  // replications that hit the draw guard
};

/// Independent seeded replications; raw per-k frequencies (no monotone
/// correction). Identical config => identical report.
EstimateReport estimate_tail(const SimulationConfig& config);

/// Random exact-rational drawing distribution: weights a_i/denominator with
/// a_i >= 1 and total <= denominator. Used by sweeps and the scan's random
/// scheme so every sampled instance stays exactly checkable.
DrawDistribution sample_rational_distribution(int n, int denominator,
                                              CounterRng& rng);

/// Random rational in [0,1] with the given denominator.
Rational sample_rational_unit(int denominator, CounterRng& rng);

}  // namespace ccollect::mc

#endif  // CCOLLECT_MONTECARLO_HPP
