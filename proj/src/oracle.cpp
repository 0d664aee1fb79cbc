#include "ccollect/oracle.hpp"

#include <stdexcept>
#include <utility>

#include "ccollect/combinatorics.hpp"
#include "ccollect/errors.hpp"
#include "ccollect/subsets.hpp"

namespace ccollect::oracle {

namespace {

constexpr int kMaxChainCoupons = 20;
constexpr double kMaxSequenceNodes = 1e7;

void validate_target(const DrawDistribution& p, int c) {
  if (c < 1 || c > p.size())
    throw std::invalid_argument("collection target c must satisfy 1 <= c <= n");
}

// (n+1)^k <= 1e7, checked without overflow.
void require_sequence_budget(int n, long k) {
  double nodes = 1.0;
  for (long i = 0; i < k; ++i) {
    nodes *= n + 1;
    if (nodes > kMaxSequenceNodes)
      throw CapExceeded("sequence enumeration needs (n+1)^k <= 1e7");
  }
}

// Common-denominator view of (p0, p1, ..., pn): weight i = num[i]/denom.
struct IntegerWeights {
  Integer denom;
  std::vector<Integer> num;  // index 0 = null coupon
};

IntegerWeights integer_weights(const DrawDistribution& p) {
  IntegerWeights iw;
  iw.denom = 1;
  for (const Rational& w : p.weights())
    mpz_lcm(iw.denom.get_mpz_t(), iw.denom.get_mpz_t(),
            w.get_den().get_mpz_t());
  Integer total = 0;
  iw.num.resize(p.size() + 1);
  for (int i = 0; i < p.size(); ++i) {
    iw.num[i + 1] = p.weight(i).get_num() * (iw.denom / p.weight(i).get_den());
    total += iw.num[i + 1];
  }
  iw.num[0] = iw.denom - total;
  return iw;
}

}  // namespace

SubsetChain::SubsetChain(const DrawDistribution& p) : p_(p) {
  if (p.size() > kMaxChainCoupons)
    throw CapExceeded("subset chain limited to n <= 20 (dense 2^n states)");
  std::size_t states = std::size_t{1} << p.size();
  mass_.assign(states, Rational(0));
  mass_[0] = 1;
  stay_.reserve(states);
  for (std::size_t mask = 0; mask < states; ++mask) {
    Rational stay = p.null_mass();
    for (int i = 0; i < p.size(); ++i)
      if (mask & (std::size_t{1} << i)) stay += p.weight(i);
    stay_.push_back(std::move(stay));
  }
}

void SubsetChain::step() {
  std::vector<Rational> next(mass_.size(), Rational(0));
  for (std::size_t mask = 0; mask < mass_.size(); ++mask) {
    if (mass_[mask] == 0) continue;
    next[mask] += mass_[mask] * stay_[mask];
    for (int l = 0; l < p_.size(); ++l) {
      std::size_t bit = std::size_t{1} << l;
      if (mask & bit) continue;
      next[mask | bit] += mass_[mask] * p_.weight(l);
    }
  }
  mass_ = std::move(next);
  ++steps_;
}

Rational SubsetChain::mass_below(int c) const {
  Rational sum(0);
  for (std::size_t mask = 0; mask < mass_.size(); ++mask)
    if (__builtin_popcountll(mask) < c) sum += mass_[mask];
  return sum;
}

Rational SubsetChain::total_mass() const {
  Rational sum(0);
  for (const Rational& m : mass_) sum += m;
  return sum;
}

Rational markov_tail_dp(const DrawDistribution& p, int c, long k) {
  validate_target(p, c);
  if (k < 0) throw std::invalid_argument("markov_tail_dp: k must be >= 0");
  SubsetChain chain(p);
  for (long i = 0; i < k; ++i) chain.step();
  return chain.mass_below(c);
}

TailCurve markov_tail_curve(const DrawDistribution& p, int c, long k_max) {
  validate_target(p, c);
  if (k_max < 0) throw std::invalid_argument("markov_tail_curve: k_max >= 0");
  SubsetChain chain(p);
  TailCurve curve;
  curve.c = c;
  curve.method = Method::oracle_dp;
  curve.mode = Mode::exact;
  curve.tail.reserve(k_max + 1);
  curve.tail.push_back(chain.mass_below(c));
  for (long k = 1; k <= k_max; ++k) {
    chain.step();
    curve.tail.push_back(chain.mass_below(c));
  }
  return curve;
}

Rational sequence_enumeration_tail(const DrawDistribution& p, int c, long k) {
  validate_target(p, c);
  if (k < 0) throw std::invalid_argument("sequence_enumeration_tail: k >= 0");
  require_sequence_budget(p.size(), k);

  IntegerWeights iw = integer_weights(p);
  int n = p.size();
  Integer acc = 0;

  // weight = product of drawn numerators; seen = distinct non-null coupons
  auto dfs = [&](auto&& self, long depth, int distinct, std::uint64_t seen,
                 const Integer& weight) -> void {
    if (distinct >= c) return;  // whole subtree already fails the tail event
    if (depth == k) {
      acc += weight;
      return;
    }
    self(self, depth + 1, distinct, seen, weight * iw.num[0]);
    for (int i = 1; i <= n; ++i) {
      std::uint64_t bit = std::uint64_t{1} << (i - 1);
      bool is_new = !(seen & bit);
      self(self, depth + 1, distinct + (is_new ? 1 : 0), seen | bit,
           weight * iw.num[i]);
    }
  };
  dfs(dfs, 0, 0, 0, Integer(1));
  return make_rational(std::move(acc),
                       int_pow(iw.denom, static_cast<unsigned long>(k)));
}

namespace {

// Numerator accumulation runs in whatever integer type holds denom^k_max;
// u128 covers the common sweep sizes, mpz the rest.
template <typename Acc>
std::vector<std::vector<Acc>> occupancy_counts(int n, long k_max,
                                               const std::vector<Acc>& num,
                                               const Acc& denom) {
  std::vector<std::vector<Acc>> acc(k_max + 1,
                                    std::vector<Acc>(n + 1, Acc(0)));
  auto dfs = [&](auto&& self, long depth, int distinct, std::uint64_t seen,
                 const Acc& weight) -> void {
    acc[depth][distinct] += weight;
    if (depth == k_max) return;
    if (distinct == n) {
      // saturated subtree: every deeper level carries weight * denom^extra
      Acc w = weight * denom;
      for (long d = depth + 1; d <= k_max; ++d) {
        acc[d][n] += w;
        if (d < k_max) w *= denom;
      }
      return;
    }
    self(self, depth + 1, distinct, seen, Acc(weight * num[0]));
    for (int i = 1; i <= n; ++i) {
      std::uint64_t bit = std::uint64_t{1} << (i - 1);
      bool is_new = !(seen & bit);
      self(self, depth + 1, distinct + (is_new ? 1 : 0), seen | bit,
           Acc(weight * num[i]));
    }
  };
  dfs(dfs, 0, 0, 0, Acc(1));
  return acc;
}

Integer u128_to_mpz(unsigned __int128 v) {
  Integer hi(static_cast<std::uint64_t>(v >> 64));
  Integer lo(static_cast<std::uint64_t>(v));
  return (hi << 64) | lo;
}

}  // namespace

std::vector<std::vector<Rational>> sequence_occupancy(
    const DrawDistribution& p, long k_max) {
  if (k_max < 0) throw std::invalid_argument("sequence_occupancy: k_max >= 0");
  require_sequence_budget(p.size(), k_max);

  IntegerWeights iw = integer_weights(p);
  int n = p.size();

  // u128 fast path whenever denom^k_max stays below 2^120
  std::size_t denom_bits = mpz_sizeinbase(iw.denom.get_mpz_t(), 2);
  bool small = denom_bits <= 63 &&
               denom_bits * static_cast<std::size_t>(k_max > 0 ? k_max : 1) <=
                   120;
  std::vector<std::vector<Integer>> acc;
  if (small) {
    using U = unsigned __int128;
    std::vector<U> num;
    num.reserve(n + 1);
    for (const Integer& x : iw.num) num.push_back(U(x.get_ui()));
    auto counts = occupancy_counts<U>(n, k_max, num, U(iw.denom.get_ui()));
    acc.resize(k_max + 1);
    for (long k = 0; k <= k_max; ++k) {
      acc[k].reserve(n + 1);
      for (int d = 0; d <= n; ++d) acc[k].push_back(u128_to_mpz(counts[k][d]));
    }
  } else {
    acc = occupancy_counts<Integer>(n, k_max, iw.num, iw.denom);
  }

  std::vector<std::vector<Rational>> out(k_max + 1);
  Integer scale = 1;
  for (long k = 0; k <= k_max; ++k) {
    out[k].reserve(n + 1);
    for (int d = 0; d <= n; ++d)
      out[k].push_back(make_rational(acc[k][d], scale));
    if (k < k_max) scale *= iw.denom;
  }
  return out;
}

Rational full_collection_cdf_multinomial(const DrawDistribution& p, long k,
                                         std::uint64_t term_cap) {
  int n = p.size();
  if (n < 2)
    throw std::invalid_argument("full_collection_cdf_multinomial: n >= 2");
  if (k < 0) throw std::invalid_argument("full_collection_cdf_multinomial: k >= 0");
  if (k < n) return Rational(0);

  const Rational& p0 = p.null_mass();
  const Rational& pa = p.weight(n - 2);
  const Rational& pb = p.weight(n - 1);
  Rational trio = p0 + pa + pb;
  Rational q0 = p0 / trio, qa = pa / trio, qb = pb / trio;

  // three-way bracket over (null, second-to-last, last), s leftover draws
  auto bracket = [&](unsigned long s) -> Rational {
    return 1 - rat_pow(q0 + qa, s) - rat_pow(q0 + qb, s) + rat_pow(q0, s);
  };

  if (n == 2)
    return rat_pow(trio, static_cast<unsigned long>(k)) *
           bracket(static_cast<unsigned long>(k));  // trio == 1 here

  // power tables for the first n-2 weights and the residual mass
  int m = n - 2;
  std::vector<std::vector<Rational>> pw(m);
  Rational head(0);
  for (int i = 0; i < m; ++i) {
    pw[i].reserve(k + 1);
    Rational acc(1);
    for (long e = 0; e <= k; ++e) {
      pw[i].push_back(acc);
      acc *= p.weight(i);
    }
    head += p.weight(i);
  }
  std::vector<Rational> rest_pow;  // (1 - head)^s == trio^s
  {
    Rational acc(1);
    for (long e = 0; e <= k; ++e) {
      rest_pow.push_back(acc);
      acc *= 1 - head;
    }
  }
  std::vector<Rational> brackets;
  brackets.reserve(k + 1);
  for (long s = 0; s <= k; ++s)
    brackets.push_back(bracket(static_cast<unsigned long>(s)));

  // odometer over positive counts k_1..k_m with sum <= k
  std::vector<long> counts(m, 1);
  long used = m;
  std::uint64_t terms = 0;
  Rational sum(0);
  while (true) {
    if (++terms > term_cap)
      throw CapExceeded("full_collection_cdf_multinomial: term cap exceeded");
    long s = k - used;
    Integer coef(1);
    long remaining = k;
    for (int i = 0; i < m; ++i) {
      coef *= binomial(static_cast<unsigned long>(remaining),
                       static_cast<unsigned long>(counts[i]));
      remaining -= counts[i];
    }
    Rational term = Rational(coef) * rest_pow[s] * brackets[s];
    for (int i = 0; i < m; ++i) term *= pw[i][counts[i]];
    sum += term;

    // advance: bump the last coordinate that still fits
    int pos = m - 1;
    while (pos >= 0) {
      ++counts[pos];
      ++used;
      if (used <= k) break;
      used -= counts[pos] - 1;
      counts[pos] = 1;
      --pos;
    }
    if (pos < 0) break;
  }
  return sum;
}

}  // namespace ccollect::oracle
