#include "ccollect/collector.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_map>
#include <utility>

#include "ccollect/combinatorics.hpp"
#include "ccollect/errors.hpp"

namespace ccollect {

namespace {

void validate_target(const DrawDistribution& p, int c) {
  if (c < 1 || c > p.size())
    throw std::invalid_argument("collection target c must satisfy 1 <= c <= n");
}

void validate_k(long k) {
  if (k < 0) throw std::invalid_argument("draw count k must be >= 0");
}

Rational masked_sum(const DrawDistribution& p, std::uint64_t mask) {
  Rational sum(0);
  while (mask) {
    int bit = __builtin_ctzll(mask);
    sum += p.weight(bit);
    mask &= mask - 1;
  }
  return sum;
}

double masked_sum_f64(const std::vector<double>& w, std::uint64_t mask) {
  double sum = 0;
  while (mask) {
    sum += w[__builtin_ctzll(mask)];
    mask &= mask - 1;
  }
  return sum;
}

double float_pow(double base, long exp) {
  double out = 1.0, b = base;
  for (long e = exp; e > 0; e >>= 1) {
    if (e & 1) out *= b;
    b *= b;
  }
  return out;
}

// Signed coefficient (-1)^(c-1-i) C(n-i-1, n-c) of the size-i subset layer.
Integer layer_coefficient(int n, int c, int i) {
  Integer coef = binomial(n - i - 1, n - c);
  if ((c - 1 - i) % 2 != 0) coef = -coef;
  return coef;
}

// Applies fn(signed_coef, subset_mass) to every subset of size < c.
template <typename Fn>
void for_each_layer_subset(const DrawDistribution& p, int c, std::uint64_t cap,
                           Fn&& fn) {
  int n = p.size();
  require_subset_budget(n, c, cap);
  for (int i = 0; i < c; ++i) {
    Integer coef = layer_coefficient(n, c, i);
    std::uint64_t mask = first_subset(i);
    do {
      fn(coef, mask);
    } while (next_subset(mask, n));
  }
}

double clamp_unit(double x) { return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x); }

}  // namespace

const char* method_name(Method m) {
  switch (m) {
    case Method::closed_form: return "closed-form";
    case Method::recurrence: return "recurrence";
    case Method::oracle_dp: return "oracle-dp";
    case Method::monte_carlo: return "monte-carlo";
  }
  return "?";
}

const char* mode_name(Mode m) {
  return m == Mode::exact ? "exact" : "float64";
}

Rational subset_mass(const DrawDistribution& p, std::uint64_t mask) {
  if (p.size() < 64 && mask >= (std::uint64_t{1} << p.size()))
    throw std::invalid_argument("subset_mass: index out of range");
  return masked_sum(p, mask);
}

Rational subset_mass(const DrawDistribution& p,
                     const std::vector<int>& indices) {
  std::uint64_t mask = 0;
  for (int i : indices) {
    if (i < 0 || i >= p.size())
      throw std::invalid_argument("subset_mass: index out of range");
    std::uint64_t bit = std::uint64_t{1} << i;
    if (mask & bit) throw std::invalid_argument("subset_mass: duplicate index");
    mask |= bit;
  }
  return masked_sum(p, mask);
}

Rational tail_closed_form(const DrawDistribution& p, int c, long k,
                          std::uint64_t cap) {
  validate_target(p, c);
  validate_k(k);
  Rational sum(0);
  for_each_layer_subset(p, c, cap, [&](const Integer& coef, std::uint64_t mask) {
    sum += coef * rat_pow(p.null_mass() + masked_sum(p, mask),
                          static_cast<unsigned long>(k));
  });
  return sum;
}

F64 tail_closed_form_f64(const DrawDistribution& p, int c, long k,
                         std::uint64_t cap) {
  validate_target(p, c);
  validate_k(k);
  std::vector<double> w = p.weights_f64();
  double p0 = p.null_mass_f64();
  CompensatedSum acc;
  for_each_layer_subset(p, c, cap, [&](const Integer& coef, std::uint64_t mask) {
    acc.add(coef.get_d() * float_pow(p0 + masked_sum_f64(w, mask), k));
  });
  return {clamp_unit(acc.value()), acc.lost_precision()};
}

TailCurve tail_curve_closed_form(const DrawDistribution& p, int c, long k_max,
                                 Mode mode, std::uint64_t cap) {
  validate_target(p, c);
  validate_k(k_max);
  TailCurve curve;
  curve.c = c;
  curve.method = Method::closed_form;
  curve.mode = mode;
  if (mode == Mode::exact) {
    std::vector<Rational> acc(k_max + 1, Rational(0));
    for_each_layer_subset(p, c, cap,
                          [&](const Integer& coef, std::uint64_t mask) {
                            Rational base = p.null_mass() + masked_sum(p, mask);
                            Rational pow(1);
                            for (long k = 0; k <= k_max; ++k) {
                              acc[k] += coef * pow;
                              if (k < k_max) pow *= base;
                            }
                          });
    curve.tail = std::move(acc);
  } else {
    std::vector<double> w = p.weights_f64();
    double p0 = p.null_mass_f64();
    std::vector<CompensatedSum> acc(k_max + 1);
    for_each_layer_subset(p, c, cap,
                          [&](const Integer& coef, std::uint64_t mask) {
                            double base = p0 + masked_sum_f64(w, mask);
                            double co = coef.get_d();
                            double pow = 1.0;
                            for (long k = 0; k <= k_max; ++k) {
                              acc[k].add(co * pow);
                              if (k < k_max) pow *= base;
                            }
                          });
    curve.tail_f64.reserve(k_max + 1);
    for (auto& a : acc) {
      curve.tail_f64.push_back(clamp_unit(a.value()));
      curve.precision_warning |= a.lost_precision();
    }
  }
  return curve;
}

TailCurve tail_curve_recurrence(const DrawDistribution& p, int c, long k_max,
                                std::uint64_t cap) {
  validate_target(p, c);
  validate_k(k_max);
  int n = p.size();
  require_subset_budget(n, c, cap);

  // level s holds, per removed-set mask R with |R| = s, the tail curve of
  // the reduced instance: c-s coupons still wanted, null mass p0 + P_R.
  std::unordered_map<std::uint64_t, std::vector<Rational>> deeper;
  for (int s = c - 1; s >= 0; --s) {
    std::unordered_map<std::uint64_t, std::vector<Rational>> level;
    std::uint64_t mask = first_subset(s);
    do {
      std::vector<Rational> vec(k_max + 1);
      Rational stay = p.null_mass() + masked_sum(p, mask);
      vec[0] = 1;
      if (s == c - 1) {
        // one coupon missing: geometric tail stay^k
        for (long k = 1; k <= k_max; ++k) vec[k] = vec[k - 1] * stay;
      } else {
        for (long k = 1; k <= k_max; ++k) {
          Rational sum = stay * vec[k - 1];
          for (int l = 0; l < n; ++l) {
            std::uint64_t bit = std::uint64_t{1} << l;
            if (mask & bit) continue;
            sum += p.weight(l) * deeper.at(mask | bit)[k - 1];
          }
          vec[k] = std::move(sum);
        }
      }
      level.emplace(mask, std::move(vec));
    } while (next_subset(mask, n));
    deeper = std::move(level);
  }

  TailCurve curve;
  curve.c = c;
  curve.method = Method::recurrence;
  curve.mode = Mode::exact;
  curve.tail = std::move(deeper.at(0));
  return curve;
}

Rational tail_recurrence(const DrawDistribution& p, int c, long k,
                         std::uint64_t cap) {
  return tail_curve_recurrence(p, c, k, cap).tail.back();
}

Rational tail_almost_uniform(int n, int c, const Rational& v0, long k) {
  if (n < 1 || c < 1 || c > n)
    throw std::invalid_argument("tail_almost_uniform: need 1 <= c <= n");
  if (v0 < 0 || v0 >= 1)
    throw std::invalid_argument("tail_almost_uniform: v0 must be in [0,1)");
  validate_k(k);
  Rational sum(0);
  for (int i = 0; i < c; ++i) {
    // stay-mass of a size-i collection: v0 (1-i/n) + i/n
    Rational base = (v0 * (n - i) + i) / n;
    sum += layer_coefficient(n, c, i) * binomial(n, i) *
           rat_pow(base, static_cast<unsigned long>(k));
  }
  return sum;
}

F64 tail_almost_uniform_f64(int n, int c, double v0, long k) {
  if (n < 1 || c < 1 || c > n)
    throw std::invalid_argument("tail_almost_uniform: need 1 <= c <= n");
  if (!(v0 >= 0.0) || v0 >= 1.0)
    throw std::invalid_argument("tail_almost_uniform: v0 must be in [0,1)");
  validate_k(k);
  CompensatedSum acc;
  for (int i = 0; i < c; ++i) {
    double base = (v0 * (n - i) + i) / n;
    acc.add(layer_coefficient(n, c, i).get_d() * binomial(n, i).get_d() *
            float_pow(base, k));
  }
  return {clamp_unit(acc.value()), acc.lost_precision()};
}

TailCurve tail_curve_almost_uniform(int n, int c, const Rational& v0,
                                    long k_max) {
  if (n < 1 || c < 1 || c > n)
    throw std::invalid_argument("tail_curve_almost_uniform: need 1 <= c <= n");
  if (v0 < 0 || v0 >= 1)
    throw std::invalid_argument("tail_curve_almost_uniform: v0 in [0,1)");
  validate_k(k_max);
  TailCurve curve;
  curve.c = c;
  curve.method = Method::closed_form;
  curve.mode = Mode::exact;
  curve.tail.reserve(k_max + 1);
  std::vector<Rational> bases, pows;
  std::vector<Integer> coefs;
  for (int i = 0; i < c; ++i) {
    bases.push_back((v0 * (n - i) + i) / n);
    pows.emplace_back(1);
    coefs.push_back(layer_coefficient(n, c, i) * binomial(n, i));
  }
  for (long k = 0; k <= k_max; ++k) {
    Rational sum(0);
    for (int i = 0; i < c; ++i) {
      sum += coefs[i] * pows[i];
      pows[i] *= bases[i];
    }
    curve.tail.push_back(std::move(sum));
  }
  return curve;
}

Rational pmf(const DrawDistribution& p, int c, long k, std::uint64_t cap) {
  if (k < 1) throw std::invalid_argument("pmf: k must be >= 1");
  return tail_closed_form(p, c, k - 1, cap) - tail_closed_form(p, c, k, cap);
}

F64 pmf_f64(const DrawDistribution& p, int c, long k, std::uint64_t cap) {
  if (k < 1) throw std::invalid_argument("pmf: k must be >= 1");
  F64 a = tail_closed_form_f64(p, c, k - 1, cap);
  F64 b = tail_closed_form_f64(p, c, k, cap);
  return {clamp_unit(a.value - b.value),
          a.precision_warning || b.precision_warning};
}

Rational expectation(const DrawDistribution& p, int c, std::uint64_t cap) {
  validate_target(p, c);
  Rational sum(0);
  for_each_layer_subset(p, c, cap, [&](const Integer& coef, std::uint64_t mask) {
    sum += coef / (1 - (p.null_mass() + masked_sum(p, mask)));
  });
  return sum;
}

F64 expectation_f64(const DrawDistribution& p, int c, std::uint64_t cap) {
  validate_target(p, c);
  std::vector<double> w = p.weights_f64();
  double p0 = p.null_mass_f64();
  CompensatedSum acc;
  for_each_layer_subset(p, c, cap, [&](const Integer& coef, std::uint64_t mask) {
    acc.add(coef.get_d() / (1.0 - (p0 + masked_sum_f64(w, mask))));
  });
  return {acc.value(), acc.lost_precision()};
}

Rational second_moment(const DrawDistribution& p, int c, std::uint64_t cap) {
  validate_target(p, c);
  Rational sum(0);
  for_each_layer_subset(p, c, cap, [&](const Integer& coef, std::uint64_t mask) {
    Rational stay = p.null_mass() + masked_sum(p, mask);
    Rational miss = 1 - stay;
    sum += coef * (1 + stay) / (miss * miss);
  });
  return sum;
}

F64 second_moment_f64(const DrawDistribution& p, int c, std::uint64_t cap) {
  validate_target(p, c);
  std::vector<double> w = p.weights_f64();
  double p0 = p.null_mass_f64();
  CompensatedSum acc;
  for_each_layer_subset(p, c, cap, [&](const Integer& coef, std::uint64_t mask) {
    double stay = p0 + masked_sum_f64(w, mask);
    double miss = 1.0 - stay;
    acc.add(coef.get_d() * (1.0 + stay) / (miss * miss));
  });
  return {acc.value(), acc.lost_precision()};
}

TruncatedMoment moment_r(const DrawDistribution& p, int c, int r,
                         const Rational& epsilon, std::uint64_t cap,
                         long max_terms) {
  validate_target(p, c);
  if (r < 1) throw std::invalid_argument("moment_r: r must be >= 1");
  if (epsilon <= 0) throw std::invalid_argument("moment_r: epsilon must be > 0");

  // One pass of signed coefficients and stay-masses; powers advance with k.
  std::vector<Rational> bases;
  std::vector<Integer> coefs;
  Integer abs_coef_total = 0;
  Rational rho(0);
  for_each_layer_subset(p, c, cap, [&](const Integer& coef, std::uint64_t mask) {
    Rational base = p.null_mass() + masked_sum(p, mask);
    if (base > rho) rho = base;
    abs_coef_total += abs(coef);
    coefs.push_back(coef);
    bases.push_back(std::move(base));
  });

  std::vector<Rational> pows(bases.size(), Rational(1));
  Rational partial(0);
  Rational rho_pow = rho;  // rho^(k+1)
  for (long k = 0; k < max_terms; ++k) {
    Rational tail_k(0);
    for (std::size_t s = 0; s < bases.size(); ++s) {
      tail_k += coefs[s] * pows[s];
      pows[s] *= bases[s];
    }
    // weight (k+1)^r - k^r makes the partial sum equal
    // sum_{l<r} C(r,l) sum_{j<=k} j^l tail(j)
    Integer weight = int_pow(Integer(k + 1), r) - int_pow(Integer(k), r);
    partial += weight * tail_k;

    // remainder <= A r (k+2)^(r-1) rho^(k+1) / (1 - rho*),
    // rho* = rho ((k+3)/(k+2))^(r-1), valid once rho* < 1
    Rational rho_star = rho * rat_pow(make_rational(k + 3, k + 2), r - 1);
    if (rho_star < 1) {
      Rational bound = abs_coef_total * r *
                       int_pow(Integer(k + 2), r - 1) * rho_pow /
                       (1 - rho_star);
      if (bound <= epsilon) return {std::move(partial), std::move(bound), k + 1};
    }
    rho_pow *= rho;
  }
  throw CapExceeded("moment_r: truncation did not certify within max_terms");
}

MomentReport moment_report(const DrawDistribution& p, int c,
                           const std::vector<int>& higher_orders,
                           const Rational& epsilon, std::uint64_t cap) {
  MomentReport report;
  report.expectation = expectation(p, c, cap);
  report.second_moment = second_moment(p, c, cap);
  report.variance =
      report.second_moment - report.expectation * report.expectation;
  for (int r : higher_orders) {
    TruncatedMoment m = moment_r(p, c, r, epsilon, cap);
    report.higher.push_back({r, std::move(m.value), std::move(m.bound)});
  }
  return report;
}

Rational expectation_uniform(int n, int c) {
  if (n < 1 || c < 1 || c > n)
    throw std::invalid_argument("expectation_uniform: need 1 <= c <= n");
  return n * (harmonic(n) - harmonic(n - c));
}

Rational expectation_almost_uniform(int n, int c, const Rational& v0) {
  if (v0 < 0 || v0 >= 1)
    throw std::invalid_argument("expectation_almost_uniform: v0 in [0,1)");
  return expectation_uniform(n, c) / (1 - v0);
}

Rational limit_gap_uniform(int n, int c) {
  return expectation_uniform(n, c) - c;
}

std::vector<Rational> corollary_identity_residual(const DrawDistribution& p,
                                                  int c, std::uint64_t cap) {
  TailCurve curve = tail_curve_closed_form(p, c, c - 1, Mode::exact, cap);
  std::vector<Rational> residuals;
  residuals.reserve(c);
  for (Rational& t : curve.tail) residuals.push_back(t - 1);
  return residuals;
}

Rational binomial_identity_residual(int n, int c) {
  if (n < 1 || c < 1 || c > n)
    throw std::invalid_argument("binomial_identity_residual: need 1 <= c <= n");
  Integer sum = 0;
  for (int i = 0; i < c; ++i)
    sum += layer_coefficient(n, c, i) * binomial(n, i);
  return Rational(sum - 1);
}

Rational lemma1_residual(const std::vector<Rational>& y, const Rational& a,
                         int i, long k) {
  int n = static_cast<int>(y.size());
  if (n < 1 || n > kMaxMaskBits)
    throw std::invalid_argument("lemma1_residual: bad dimension");
  if (i < 1 || i > n)
    throw std::invalid_argument("lemma1_residual: need 1 <= i <= n");
  if (a < 0) throw std::invalid_argument("lemma1_residual: a must be >= 0");
  validate_k(k);
  for (const Rational& v : y)
    if (v <= 0) throw std::invalid_argument("lemma1_residual: y must be positive");

  auto y_sum = [&](std::uint64_t mask) {
    Rational sum(0);
    while (mask) {
      sum += y[__builtin_ctzll(mask)];
      mask &= mask - 1;
    }
    return sum;
  };

  Rational lhs(0);
  for (int l = 0; l < n; ++l) {
    std::uint64_t lbit = std::uint64_t{1} << l;
    std::uint64_t mask = first_subset(i - 1);
    do {
      if (mask & lbit) continue;
      lhs += y[l] * rat_pow(a + y[l] + y_sum(mask),
                            static_cast<unsigned long>(k));
    } while (next_subset(mask, n));
  }

  Rational rhs(0);
  std::uint64_t mask = first_subset(i);
  do {
    Rational yj = y_sum(mask);
    rhs += yj * rat_pow(a + yj, static_cast<unsigned long>(k));
  } while (next_subset(mask, n));

  return lhs - rhs;
}

}  // namespace ccollect
