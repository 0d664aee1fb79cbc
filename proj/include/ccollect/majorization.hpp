#ifndef CCOLLECT_MAJORIZATION_HPP
#define CCOLLECT_MAJORIZATION_HPP

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "ccollect/collector.hpp"
#include "ccollect/distribution.hpp"

namespace ccollect::majorization {

// Pairwise mixing moves a drawing distribution down the majorization order
// toward the almost-uniform vector v and can only shrink the full-collection
// time's CDF disadvantage; the checks below measure those inequalities
// exactly so that a genuinely negative margin is a certified finding, not
// rounding noise.

/// One lambda-mix of entries i and j: after_i = l*p_i + (1-l)*p_j,
/// after_j = (1-l)*p_i + l*p_j. Total and null mass are conserved.
struct MixingStep {
  int i = 0;
  int j = 0;
  Rational lambda;
  DrawDistribution before;
  DrawDistribution after;
};

MixingStep mix_pair(const DrawDistribution& p, int i, int j,
                    const Rational& lambda);

/// Mixing steps ending exactly at v = ((1-p0)/n,...); at most n-1 steps,
/// each pinning at least one new entry to the target.
struct FlattenTrace {
  std::vector<MixingStep> steps;
  DrawDistribution final;
};

/// Default pair rule: lowest index below the target mixed with the lowest
/// index above it.
FlattenTrace flatten_to_v(const DrawDistribution& p);

/// Explicit 0-based (i,j) schedule; every pair must straddle the target
/// (in either orientation).
FlattenTrace flatten_to_v(const DrawDistribution& p,
                          const std::vector<std::pair<int, int>>& schedule);

/// min over k <= k_max of Pr{T_{n,n}(mixed) <= k} - Pr{T_{n,n}(p) <= k}
/// (the mix may only help full collection; expected >= 0).
Rational check_theorem3(const DrawDistribution& p, int i, int j,
                        const Rational& lambda, long k_max,
                        std::uint64_t cap = kDefaultSubsetCap);

/// Minimum margins of a two-link inequality chain (p vs v, then v vs u).
struct ChainMargins {
  Rational first;
  Rational second;
};

/// Full-collection tail chain: Pr{T_{n,n}(p)>k} >= Pr{T_{n,n}(v)>k}
/// >= Pr{T_{n,n}(u)>k}, min margins over k <= k_max.
ChainMargins check_theorem4(const DrawDistribution& p, long k_max,
                            std::uint64_t cap = kDefaultSubsetCap);

/// Expectation chain: E(T_{c,n}(p)) >= E(T_{c,n}(v)) >= E(T_{c,n}(u)).
ChainMargins check_theorem2(const DrawDistribution& p, int c,
                            std::uint64_t cap = kDefaultSubsetCap);

/// Pair-collection (c = 2) tail chain, min margins over k <= k_max.
ChainMargins check_theorem5(const DrawDistribution& p, long k_max,
                            std::uint64_t cap = kDefaultSubsetCap);

/// sum(1/r_l) - n^2 for positive r summing to 1; >= 0, zero iff uniform.
Rational lemma2_residual(const std::vector<Rational>& r);

/// Convexity cross-difference of f(x)=x^s on [0,1]:
/// (t-y)f(x) + (z-x)f(t) - (t-y)f(z) - (z-x)f(y), requires x < y,z < t.
Rational lemma3_gap(int s, const Rational& x, const Rational& y,
                    const Rational& z, const Rational& t);

/// F_{n,k}(x) = -(n-1)x^k + n(x+(1-x)/n)^k on a grid in [0,1]; returns the
/// minimum forward difference (expected >= 0: F is increasing).
Rational check_fnk_monotone(int n, long k, std::vector<Rational> grid);

// --- conjecture scan --------------------------------------------------------

enum class ScanScheme { grid, random };

struct ScanParams {
  int n = 2;
  int c = 1;
  long k_max = 10;
  ScanScheme scheme = ScanScheme::grid;
  /// Grid: weights are a_i/resolution. Random: denominator of the sampled
  /// rationals.
  int resolution = 10;
  /// Random scheme only: number of sampled vectors.
  std::uint64_t samples = 200;
  std::uint64_t seed = 1;
  std::uint64_t cap = kDefaultSubsetCap;
};

/// Exact margin scan of the two-link tail chain
/// Pr{T_{c,n}(p)>k} >= Pr{T_{c,n}(v)>k} >= Pr{T_{c,n}(u)>k}
/// over sampled p. Any strictly negative exact margin yields a
/// counterexample certificate (reproducible: exact p, c, k, margins).
struct ScanReport {
  ScanParams params;
  std::uint64_t sample_count = 0;
  Rational min_margin_pv;
  Rational min_margin_vu;
  std::vector<Rational> argmin_pv_p;
  long argmin_pv_k = 0;
  std::vector<Rational> argmin_vu_p;
  long argmin_vu_k = 0;

  struct Counterexample {
    std::vector<Rational> p;
    int c = 0;
    long k = 0;
    Rational margin_pv;
    Rational margin_vu;
  };
  std::optional<Counterexample> counterexample;
};

ScanReport scan_conjecture(const ScanParams& params);

}  // namespace ccollect::majorization

#endif  // CCOLLECT_MAJORIZATION_HPP
