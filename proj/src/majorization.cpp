#include "ccollect/majorization.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

#include "ccollect/combinatorics.hpp"
#include "ccollect/errors.hpp"
#include "ccollect/montecarlo.hpp"

namespace ccollect::majorization {

namespace {

Rational flatten_target(const DrawDistribution& p) {
  return (1 - p.null_mass()) / p.size();
}

void update_min(Rational& current_min, bool& has_min, const Rational& candidate,
                long k, long& argmin_k, const DrawDistribution& p,
                std::vector<Rational>& argmin_p) {
  if (!has_min || candidate < current_min) {
    current_min = candidate;
    has_min = true;
    argmin_k = k;
    argmin_p = p.weights();
  }
}

void keep_min(Rational& current, Rational candidate) {
  if (candidate < current) current = std::move(candidate);
}

}  // namespace

MixingStep mix_pair(const DrawDistribution& p, int i, int j,
                    const Rational& lambda) {
  if (i < 0 || i >= p.size() || j < 0 || j >= p.size() || i == j)
    throw std::invalid_argument("mix_pair: need two distinct valid indices");
  if (lambda < 0 || lambda > 1)
    throw std::invalid_argument("mix_pair: lambda must be in [0,1]");
  std::vector<Rational> w = p.weights();
  Rational wi = w[i], wj = w[j];
  w[i] = lambda * wi + (1 - lambda) * wj;
  w[j] = (1 - lambda) * wi + lambda * wj;
  return {i, j, lambda, p, DrawDistribution::from_rationals(std::move(w))};
}

FlattenTrace flatten_to_v(const DrawDistribution& p) {
  Rational target = flatten_target(p);
  FlattenTrace trace{{}, p};
  for (int round = 0; round < p.size(); ++round) {
    const auto& w = trace.final.weights();
    int below = -1, above = -1;
    for (int idx = 0; idx < trace.final.size(); ++idx) {
      if (below < 0 && w[idx] < target) below = idx;
      if (above < 0 && w[idx] > target) above = idx;
    }
    if (below < 0 && above < 0) break;  // already almost-uniform
    // both exist: the mean of the entries is exactly the target
    Rational lambda = (w[above] - target) / (w[above] - w[below]);
    MixingStep step = mix_pair(trace.final, below, above, lambda);
    trace.final = step.after;
    trace.steps.push_back(std::move(step));
  }
  return trace;
}

FlattenTrace flatten_to_v(const DrawDistribution& p,
                          const std::vector<std::pair<int, int>>& schedule) {
  Rational target = flatten_target(p);
  FlattenTrace trace{{}, p};
  for (auto [i, j] : schedule) {
    if (i < 0 || i >= p.size() || j < 0 || j >= p.size() || i == j)
      throw std::invalid_argument("flatten schedule: invalid index pair");
    const auto& w = trace.final.weights();
    // the pair must straddle the target (either orientation); i is pinned
    bool i_low = w[i] < target && target < w[j];
    bool i_high = w[j] < target && target < w[i];
    if (!i_low && !i_high)
      throw std::invalid_argument(
          "flatten schedule: pair does not straddle the target mass");
    Rational lambda = (w[j] - target) / (w[j] - w[i]);
    MixingStep step = mix_pair(trace.final, i, j, lambda);
    trace.final = step.after;
    trace.steps.push_back(std::move(step));
  }
  if (!trace.final.is_almost_uniform())
    throw std::invalid_argument(
        "flatten schedule: trace does not end at the almost-uniform vector");
  return trace;
}

Rational check_theorem3(const DrawDistribution& p, int i, int j,
                        const Rational& lambda, long k_max, std::uint64_t cap) {
  MixingStep step = mix_pair(p, i, j, lambda);
  int n = p.size();
  TailCurve before = tail_curve_closed_form(p, n, k_max, Mode::exact, cap);
  TailCurve after =
      tail_curve_closed_form(step.after, n, k_max, Mode::exact, cap);
  // CDF(mixed) - CDF(p) = tail(p) - tail(mixed); mixing toward equal
  // entries can only speed up full collection
  Rational min_margin;
  bool has = false;
  for (long k = 0; k <= k_max; ++k) {
    Rational margin = before.tail[k] - after.tail[k];
    if (!has || margin < min_margin) {
      min_margin = std::move(margin);
      has = true;
    }
  }
  return min_margin;
}

ChainMargins check_theorem4(const DrawDistribution& p, long k_max,
                            std::uint64_t cap) {
  int n = p.size();
  TailCurve tp = tail_curve_closed_form(p, n, k_max, Mode::exact, cap);
  TailCurve tv = tail_curve_almost_uniform(n, n, p.null_mass(), k_max);
  TailCurve tu = tail_curve_almost_uniform(n, n, Rational(0), k_max);
  ChainMargins margins{tp.tail[0] - tv.tail[0], tv.tail[0] - tu.tail[0]};
  for (long k = 1; k <= k_max; ++k) {
    keep_min(margins.first, tp.tail[k] - tv.tail[k]);
    keep_min(margins.second, tv.tail[k] - tu.tail[k]);
  }
  return margins;
}

ChainMargins check_theorem2(const DrawDistribution& p, int c,
                            std::uint64_t cap) {
  Rational ep = expectation(p, c, cap);
  Rational ev = expectation_almost_uniform(p.size(), c, p.null_mass());
  Rational eu = expectation_uniform(p.size(), c);
  return {ep - ev, ev - eu};
}

ChainMargins check_theorem5(const DrawDistribution& p, long k_max,
                            std::uint64_t cap) {
  if (p.size() < 2)
    throw std::invalid_argument("check_theorem5: needs n >= 2 (c = 2)");
  int n = p.size();
  TailCurve tp = tail_curve_closed_form(p, 2, k_max, Mode::exact, cap);
  TailCurve tv = tail_curve_almost_uniform(n, 2, p.null_mass(), k_max);
  TailCurve tu = tail_curve_almost_uniform(n, 2, Rational(0), k_max);
  ChainMargins margins{tp.tail[0] - tv.tail[0], tv.tail[0] - tu.tail[0]};
  for (long k = 1; k <= k_max; ++k) {
    keep_min(margins.first, tp.tail[k] - tv.tail[k]);
    keep_min(margins.second, tv.tail[k] - tu.tail[k]);
  }
  return margins;
}

Rational lemma2_residual(const std::vector<Rational>& r) {
  if (r.empty()) throw std::invalid_argument("lemma2_residual: empty vector");
  Rational total(0), inv_sum(0);
  for (const Rational& x : r) {
    if (x <= 0 || x >= 1) {
      if (!(r.size() == 1 && x == 1))
        throw std::invalid_argument(
            "lemma2_residual: entries must lie in (0,1) and sum to 1");
    }
    total += x;
    inv_sum += 1 / x;
  }
  if (total != 1)
    throw std::invalid_argument("lemma2_residual: entries must sum to 1");
  long n = static_cast<long>(r.size());
  return inv_sum - Rational(n * n);
}

Rational lemma3_gap(int s, const Rational& x, const Rational& y,
                    const Rational& z, const Rational& t) {
  if (s < 0) throw std::invalid_argument("lemma3_gap: exponent must be >= 0");
  if (!(x < y && x < z && y < t && z < t))
    throw std::invalid_argument("lemma3_gap: need x < y,z < t");
  for (const Rational* v : {&x, &y, &z, &t})
    if (*v < 0 || *v > 1)
      throw std::invalid_argument("lemma3_gap: arguments must be in [0,1]");
  auto f = [&](const Rational& v) { return rat_pow(v, s); };
  return (t - y) * f(x) + (z - x) * f(t) - (t - y) * f(z) - (z - x) * f(y);
}

Rational check_fnk_monotone(int n, long k, std::vector<Rational> grid) {
  if (n < 2) throw std::invalid_argument("check_fnk_monotone: n >= 2");
  if (k < 0) throw std::invalid_argument("check_fnk_monotone: k >= 0");
  if (grid.size() < 2)
    throw std::invalid_argument("check_fnk_monotone: need >= 2 grid points");
  for (const Rational& x : grid)
    if (x < 0 || x > 1)
      throw std::invalid_argument("check_fnk_monotone: grid outside [0,1]");
  std::sort(grid.begin(), grid.end());
  auto fnk = [&](const Rational& x) -> Rational {
    return -(n - 1) * rat_pow(x, static_cast<unsigned long>(k)) +
           n * rat_pow(x + (1 - x) / n, static_cast<unsigned long>(k));
  };
  Rational prev = fnk(grid[0]);
  Rational min_diff;
  bool has = false;
  for (std::size_t m = 1; m < grid.size(); ++m) {
    Rational cur = fnk(grid[m]);
    Rational diff = cur - prev;
    if (!has || diff < min_diff) {
      min_diff = diff;
      has = true;
    }
    prev = std::move(cur);
  }
  return min_diff;
}

namespace {

// Visits every grid point a/resolution with all a_i >= 1, a_i <= res-1 and
// sum <= res; deterministic odometer order.
template <typename Fn>
void for_each_grid_point(int n, int resolution, Fn&& fn) {
  std::vector<long> a(n, 1);
  long used = n;
  if (used > resolution) return;
  while (true) {
    std::vector<Rational> w;
    w.reserve(n);
    for (long ai : a) w.push_back(make_rational(ai, resolution));
    fn(DrawDistribution::from_rationals(std::move(w)));
    int pos = n - 1;
    while (pos >= 0) {
      ++a[pos];
      ++used;
      if (used <= resolution && a[pos] <= resolution - 1) break;
      used -= a[pos] - 1;
      a[pos] = 1;
      --pos;
    }
    if (pos < 0) break;
  }
}

}  // namespace

ScanReport scan_conjecture(const ScanParams& params) {
  if (params.n < 1) throw std::invalid_argument("scan: n must be >= 1");
  if (params.c < 1 || params.c > params.n)
    throw std::invalid_argument("scan: need 1 <= c <= n");
  if (params.k_max < 0) throw std::invalid_argument("scan: k_max >= 0");
  if (params.resolution < params.n + 1)
    throw std::invalid_argument("scan: resolution must exceed n");

  ScanReport report;
  report.params = params;
  TailCurve tu = tail_curve_almost_uniform(params.n, params.c, Rational(0),
                                           params.k_max);
  bool has_pv = false, has_vu = false;

  auto evaluate = [&](const DrawDistribution& p) {
    report.sample_count += 1;
    TailCurve tp = tail_curve_closed_form(p, params.c, params.k_max,
                                          Mode::exact, params.cap);
    TailCurve tv = tail_curve_almost_uniform(params.n, params.c, p.null_mass(),
                                             params.k_max);
    for (long k = 0; k <= params.k_max; ++k) {
      Rational m_pv = tp.tail[k] - tv.tail[k];
      Rational m_vu = tv.tail[k] - tu.tail[k];
      update_min(report.min_margin_pv, has_pv, m_pv, k, report.argmin_pv_k, p,
                 report.argmin_pv_p);
      update_min(report.min_margin_vu, has_vu, m_vu, k, report.argmin_vu_k, p,
                 report.argmin_vu_p);
      if ((m_pv < 0 || m_vu < 0) && !report.counterexample) {
        report.counterexample = ScanReport::Counterexample{
            p.weights(), params.c, k, m_pv, m_vu};
      }
    }
  };

  if (params.scheme == ScanScheme::grid) {
    for_each_grid_point(params.n, params.resolution, evaluate);
  } else {
    for (std::uint64_t s = 0; s < params.samples; ++s) {
      mc::CounterRng rng(params.seed, s);
      evaluate(mc::sample_rational_distribution(params.n, params.resolution,
                                                rng));
    }
  }
  return report;
}

}  // namespace ccollect::majorization
