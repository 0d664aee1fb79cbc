#include "ccollect/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ccollect::mc {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream) {
  // substream key: two finalizer rounds decorrelate (seed, stream) pairs
  state_ = mix64(seed + kGolden) ^ mix64(stream * kGolden + 0x1234567887654321ull);
}

std::uint64_t CounterRng::next_u64() {
  state_ += kGolden;
  return mix64(state_);
}

double CounterRng::next_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t CounterRng::next_below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("next_below: bound must be >= 1");
  std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % bound;
  for (;;) {
    std::uint64_t x = next_u64();
    if (x < limit) return x % bound;
  }
}

CouponSampler::CouponSampler(const DrawDistribution& p) {
  cdf_.reserve(p.size());
  double acc = 0.0;
  for (double w : p.weights_f64()) {
    acc += w;
    cdf_.push_back(acc);
  }
}

int CouponSampler::draw(CounterRng& rng) const {
  double u = rng.next_unit();
  if (u >= cdf_.back()) return 0;  // null coupon
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  return static_cast<int>(it - cdf_.begin()) + 1;
}

std::optional<long> sample_waiting_time(const CouponSampler& sampler, int c,
                                        CounterRng& rng, std::uint64_t guard) {
  if (c < 1 || c > sampler.n())
    throw std::invalid_argument("sample_waiting_time: need 1 <= c <= n");
  std::vector<std::uint8_t> seen(sampler.n() + 1, 0);
  int distinct = 0;
  for (std::uint64_t draws = 1; draws <= guard; ++draws) {
    int coupon = sampler.draw(rng);
    if (coupon != 0 && !seen[coupon]) {
      seen[coupon] = 1;
      if (++distinct == c) return static_cast<long>(draws);
    }
  }
  return std::nullopt;
}

std::optional<long> sample_waiting_time(const DrawDistribution& p, int c,
                                        CounterRng& rng, std::uint64_t guard) {
  CouponSampler sampler(p);
  return sample_waiting_time(sampler, c, rng, guard);
}

EstimateReport estimate_tail(const SimulationConfig& config) {
  if (config.replications < 1)
    throw std::invalid_argument("estimate_tail: replications must be >= 1");
  if (config.c < 1 || config.c > config.p.size())
    throw std::invalid_argument("estimate_tail: need 1 <= c <= n");
  if (config.k_max < 0)
    throw std::invalid_argument("estimate_tail: k_max must be >= 0");

  CouponSampler sampler(config.p);
  std::vector<std::uint64_t> exceed(config.k_max + 1, 0);
  double sum = 0.0, sum_sq = 0.0;
  std::uint64_t aborted = 0;

  // replication r always runs on substream r: the merge order is fixed
  for (std::uint64_t rep = 0; rep < config.replications; ++rep) {
    CounterRng rng(config.seed, rep);
    std::optional<long> t =
        sample_waiting_time(sampler, config.c, rng, config.draw_guard);
    if (!t) {
      ++aborted;
      continue;
    }
    double td = static_cast<double>(*t);
    sum += td;
    sum_sq += td * td;
    long upto = std::min<long>(*t - 1, config.k_max);
    for (long k = 0; k <= upto; ++k) ++exceed[k];
  }

  EstimateReport report;
  report.seed = config.seed;
  report.replications = config.replications;
  report.c = config.c;
  report.p_f64 = config.p.weights_f64();
  report.aborted = aborted;
  double r = static_cast<double>(config.replications - aborted);
  if (r > 0) {
    report.mean = sum / r;
    if (r > 1)
      report.variance = (sum_sq - r * report.mean * report.mean) / (r - 1);
    report.std_error_mean = r > 1 ? std::sqrt(report.variance / r) : 0.0;
  }
  report.tail.reserve(config.k_max + 1);
  for (long k = 0; k <= config.k_max; ++k) {
    double est = r > 0 ? static_cast<double>(exceed[k]) / r : 0.0;
    double se = r > 0 ? std::sqrt(est * (1.0 - est) / r) : 0.0;
    report.tail.push_back({k, est, se, exceed[k]});
  }
  return report;
}

DrawDistribution sample_rational_distribution(int n, int denominator,
                                              CounterRng& rng) {
  if (n < 1) throw std::invalid_argument("sample_rational_distribution: n >= 1");
  if (denominator < n + 1)
    throw std::invalid_argument(
        "sample_rational_distribution: denominator must exceed n");
  // total mass M/denominator with every part >= 1; n = 1 keeps M < denominator
  // so that single weights stay below 1
  long hi = (n == 1) ? denominator - 1 : denominator;
  long total = n + static_cast<long>(rng.next_below(hi - n + 1));

  // uniform composition of `total` into n positive parts: n-1 distinct cuts
  std::vector<long> cuts;
  if (n > 1) {
    std::vector<long> positions(total - 1);
    std::iota(positions.begin(), positions.end(), 1L);
    for (int i = 0; i < n - 1; ++i) {
      std::size_t j =
          i + static_cast<std::size_t>(rng.next_below(positions.size() - i));
      std::swap(positions[i], positions[j]);
    }
    cuts.assign(positions.begin(), positions.begin() + (n - 1));
    std::sort(cuts.begin(), cuts.end());
  }
  cuts.insert(cuts.begin(), 0L);
  cuts.push_back(total);

  std::vector<Rational> weights;
  weights.reserve(n);
  for (int i = 0; i < n; ++i)
    weights.push_back(make_rational(cuts[i + 1] - cuts[i], denominator));
  return DrawDistribution::from_rationals(std::move(weights));
}

Rational sample_rational_unit(int denominator, CounterRng& rng) {
  if (denominator < 1)
    throw std::invalid_argument("sample_rational_unit: denominator >= 1");
  return make_rational(
      static_cast<long>(rng.next_below(denominator + 1)), denominator);
}

}  // namespace ccollect::mc
