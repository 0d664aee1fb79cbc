#ifndef CCOLLECT_COLLECTOR_HPP
#define CCOLLECT_COLLECTOR_HPP

#include <cstdint>
#include <vector>

#include "ccollect/distribution.hpp"
#include "ccollect/scalar.hpp"
#include "ccollect/subsets.hpp"

namespace ccollect {

// T_{c,n}(p): number of draws (with replacement, null coupon allowed) until
// c distinct non-null coupons have been collected. This header evaluates its
// tail Pr{T > k}, pmf and moments exactly or in compensated float64.

enum class Method { closed_form, recurrence, oracle_dp, monte_carlo };

const char* method_name(Method m);
const char* mode_name(Mode m);

/// Pr{T_{c,n}(p) > k} for k = 0..k_max plus evaluation metadata. Exactly one
/// of `tail` / `tail_f64` is populated, per `mode`.
struct TailCurve {
  int c = 1;
  Method method = Method::closed_form;
  Mode mode = Mode::exact;
  std::vector<Rational> tail;
  std::vector<double> tail_f64;
  bool precision_warning = false;

  long k_max() const {
    return static_cast<long>(
               (mode == Mode::exact ? tail.size() : tail_f64.size())) -
           1;
  }
};

/// Moments of T_{c,n}(p); `higher` entries carry a certified truncation
/// bound (the r-th moment has no closed form here).
struct MomentReport {
  Rational expectation;
  Rational second_moment;
  Rational variance;
  struct Higher {
    int r;
    Rational value;
    Rational bound;
  };
  std::vector<Higher> higher;
};

/// P_J = sum of the masked weights; mask bit i = coupon i (0-based).
Rational subset_mass(const DrawDistribution& p, std::uint64_t mask);
/// Same, from an explicit 0-based index list (duplicates rejected).
Rational subset_mass(const DrawDistribution& p, const std::vector<int>& indices);

// --- tail distribution ----------------------------------------------------

/// Signed subset-sum form: sum_{i<c} (-1)^{c-1-i} C(n-i-1,n-c)
/// sum_{|J|=i} (p0+P_J)^k. Exact; visits sum_{i<c} C(n,i) subsets.
Rational tail_closed_form(const DrawDistribution& p, int c, long k,
                          std::uint64_t cap = kDefaultSubsetCap);

/// float64 evaluation of the same sum with compensated accumulation;
/// the result is clamped to [0,1] (float mode only).
F64 tail_closed_form_f64(const DrawDistribution& p, int c, long k,
                         std::uint64_t cap = kDefaultSubsetCap);

TailCurve tail_curve_closed_form(const DrawDistribution& p, int c, long k_max,
                                 Mode mode = Mode::exact,
                                 std::uint64_t cap = kDefaultSubsetCap);

/// First-step conditioning: Pr{T_{c,n}(p)>k} = p0 Pr{T_{c,n}(p)>k-1}
/// + sum_l p_l Pr{T_{c-1,n-1}(p^(l))>k-1}, with Pr{T_{1,m}>k} = p0^k.
/// Exact; an independent route to the same numbers as the closed form.
Rational tail_recurrence(const DrawDistribution& p, int c, long k,
                         std::uint64_t cap = kDefaultSubsetCap);

TailCurve tail_curve_recurrence(const DrawDistribution& p, int c, long k_max,
                                std::uint64_t cap = kDefaultSubsetCap);

/// Tail for the almost-uniform vector (every coupon (1-v0)/n): only binomial
/// weights, no subset enumeration, so large n stays cheap.
Rational tail_almost_uniform(int n, int c, const Rational& v0, long k);
F64 tail_almost_uniform_f64(int n, int c, double v0, long k);
TailCurve tail_curve_almost_uniform(int n, int c, const Rational& v0,
                                    long k_max);

/// Pr{T = k} = tail(k-1) - tail(k), k >= 1.
Rational pmf(const DrawDistribution& p, int c, long k,
             std::uint64_t cap = kDefaultSubsetCap);
F64 pmf_f64(const DrawDistribution& p, int c, long k,
            std::uint64_t cap = kDefaultSubsetCap);

// --- moments ----------------------------------------------------------------

/// E(T) = sum_{i<c} (-1)^{c-1-i} C(n-i-1,n-c) sum_{|J|=i} 1/(1-(p0+P_J)).
Rational expectation(const DrawDistribution& p, int c,
                     std::uint64_t cap = kDefaultSubsetCap);
F64 expectation_f64(const DrawDistribution& p, int c,
                    std::uint64_t cap = kDefaultSubsetCap);

/// E(T^2), same signed sum with summand (1+(p0+P_J))/(1-(p0+P_J))^2.
Rational second_moment(const DrawDistribution& p, int c,
                       std::uint64_t cap = kDefaultSubsetCap);
F64 second_moment_f64(const DrawDistribution& p, int c,
                      std::uint64_t cap = kDefaultSubsetCap);

struct TruncatedMoment {
  Rational value;      // sum_{k<=K} ((k+1)^r - k^r) tail(k)
  Rational bound;      // certified geometric bound on the discarded remainder
  long terms_used = 0; // K+1
};

/// r-th moment via the truncated tail expansion; stops once the geometric
/// remainder bound (tail(k) <= A rho^k) drops below epsilon.
TruncatedMoment moment_r(const DrawDistribution& p, int c, int r,
                         const Rational& epsilon,
                         std::uint64_t cap = kDefaultSubsetCap,
                         long max_terms = 2'000'000);

/// E, E^2, variance, plus moment_r for each requested r >= 3.
MomentReport moment_report(const DrawDistribution& p, int c,
                           const std::vector<int>& higher_orders,
                           const Rational& epsilon,
                           std::uint64_t cap = kDefaultSubsetCap);

/// n(H_n - H_{n-c}) and its almost-uniform scaling by 1/(1-v0).
Rational expectation_uniform(int n, int c);
Rational expectation_almost_uniform(int n, int c, const Rational& v0);

/// E(T_{c,n}(u)) - c; positive and shrinking in n (the limit is c).
Rational limit_gap_uniform(int n, int c);

// --- identity residuals (all exactly zero) ---------------------------------

/// tail(k) - 1 for k = 0..c-1.
std::vector<Rational> corollary_identity_residual(
    const DrawDistribution& p, int c, std::uint64_t cap = kDefaultSubsetCap);

/// sum_{i<c} (-1)^{c-1-i} C(n-i-1,n-c) C(n,i) - 1.
Rational binomial_identity_residual(int n, int c);

/// LHS - RHS of the subset-sum exchange identity:
/// sum_l y_l sum_{J in S_{i-1,n}(l)} (a+y_l+Y_J)^k
///   = sum_{J in S_{i,n}} Y_J (a+Y_J)^k.
Rational lemma1_residual(const std::vector<Rational>& y, const Rational& a,
                         int i, long k);

}  // namespace ccollect

#endif  // CCOLLECT_COLLECTOR_HPP
