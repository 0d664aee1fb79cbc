#include "ccollect/iceberg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "ccollect/collector.hpp"

namespace ccollect::iceberg {

namespace {

double nearest_rank(const std::vector<long>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  std::size_t rank = static_cast<std::size_t>(
      std::ceil(q * static_cast<double>(sorted.size())));
  if (rank == 0) rank = 1;
  if (rank > sorted.size()) rank = sorted.size();
  return static_cast<double>(sorted[rank - 1]);
}

}  // namespace

AggregateReport run_simulation(const std::vector<RouterConfig>& routers,
                               std::uint64_t rounds, std::uint64_t seed) {
  if (routers.empty())
    throw std::invalid_argument("run_simulation: no routers configured");
  if (rounds < 1)
    throw std::invalid_argument("run_simulation: rounds must be >= 1");
  if (rounds >= (std::uint64_t{1} << 32) ||
      routers.size() >= (std::size_t{1} << 31))
    throw std::invalid_argument("run_simulation: rounds/routers too large");

  AggregateReport report;
  report.rounds = rounds;
  report.seed = seed;

  double pooled_sum = 0.0, pooled_sq = 0.0;
  std::uint64_t pooled_count = 0;

  for (std::size_t r = 0; r < routers.size(); ++r) {
    const RouterConfig& cfg = routers[r];
    if (cfg.c < 1 || cfg.c > cfg.p.size())
      throw std::invalid_argument("run_simulation: router c out of range");

    mc::CouponSampler sampler(cfg.p);
    std::vector<long> times;
    times.reserve(rounds);
    std::uint64_t aborted = 0;
    for (std::uint64_t round = 0; round < rounds; ++round) {
      // epoch substream: deterministic in (router index, round)
      mc::CounterRng rng(seed, (static_cast<std::uint64_t>(r) << 32) | round);
      std::optional<long> t =
          mc::sample_waiting_time(sampler, cfg.c, rng, cfg.stream_cap);
      if (!t) {
        ++aborted;
        continue;
      }
      times.push_back(*t);
    }

    RouterStats stats;
    stats.name = cfg.name.empty() ? "router-" + std::to_string(r + 1) : cfg.name;
    stats.n = cfg.p.size();
    stats.c = cfg.c;
    stats.null_mass = cfg.p.null_mass();
    stats.almost_uniform = cfg.p.is_almost_uniform();
    stats.rounds = rounds;
    stats.aborted = aborted;
    stats.exact_mean = expectation(cfg.p, cfg.c);
    stats.uniform_baseline =
        expectation_almost_uniform(cfg.p.size(), cfg.c, cfg.p.null_mass());
    if (!times.empty()) {
      double sum = 0.0, sq = 0.0;
      for (long t : times) {
        sum += t;
        sq += static_cast<double>(t) * t;
      }
      stats.empirical_mean = sum / static_cast<double>(times.size());
      pooled_sum += sum;
      pooled_sq += sq;
      pooled_count += times.size();
      std::vector<long> sorted = times;
      std::sort(sorted.begin(), sorted.end());
      stats.q50 = nearest_rank(sorted, 0.50);
      stats.q90 = nearest_rank(sorted, 0.90);
      stats.q99 = nearest_rank(sorted, 0.99);
    }
    report.routers.push_back(std::move(stats));
  }

  if (pooled_count > 0) {
    report.pooled_mean = pooled_sum / static_cast<double>(pooled_count);
    if (pooled_count > 1)
      report.pooled_variance =
          (pooled_sq - pooled_count * report.pooled_mean * report.pooled_mean) /
          static_cast<double>(pooled_count - 1);
  }
  return report;
}

bool comparable(const AggregateReport& report) {
  if (report.routers.size() < 2) return false;
  const RouterStats& first = report.routers.front();
  for (const RouterStats& r : report.routers)
    if (r.n != first.n || r.c != first.c || r.null_mass != first.null_mass)
      return false;
  return true;
}

OrderingSummary compare_to_optimal(const AggregateReport& report) {
  if (!comparable(report))
    throw std::invalid_argument(
        "compare_to_optimal: routers must share n, c and null mass");
  OrderingSummary summary;
  summary.order.resize(report.routers.size());
  std::iota(summary.order.begin(), summary.order.end(), std::size_t{0});
  std::stable_sort(summary.order.begin(), summary.order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return report.routers[a].exact_mean <
                            report.routers[b].exact_mean;
                   });
  summary.minimizer = summary.order.front();
  summary.minimizer_almost_uniform =
      report.routers[summary.minimizer].almost_uniform;
  return summary;
}

IcebergConfig load_config(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("config: not valid JSON: ") +
                                e.what());
  }
  if (!doc.is_object() || doc.value("version", 0) != 1)
    throw std::invalid_argument("config: expected {\"version\":1,...}");

  IcebergConfig cfg;
  cfg.rounds = doc.value("rounds", std::uint64_t{10000});
  cfg.seed = doc.value("seed", std::uint64_t{0});
  if (!doc.contains("routers") || !doc["routers"].is_array() ||
      doc["routers"].empty())
    throw std::invalid_argument("config: needs a non-empty routers array");

  for (const auto& rj : doc["routers"]) {
    if (!rj.contains("p") || !rj["p"].is_array())
      throw std::invalid_argument("config: each router needs a weights array p");
    std::vector<Rational> weights;
    for (const auto& wj : rj["p"]) {
      if (wj.is_string())
        weights.push_back(parse_rational(wj.get<std::string>()));
      else if (wj.is_number())
        weights.push_back(rational_from_double(wj.get<double>()));
      else
        throw std::invalid_argument("config: weights must be strings or numbers");
    }
    cfg.routers.push_back(
        RouterConfig{rj.value("name", ""),
                     DrawDistribution::from_rationals(std::move(weights)),
                     rj.value("c", 1),
                     rj.value("stream_cap", mc::kDefaultDrawGuard)});
  }
  return cfg;
}

IcebergConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  return load_config(in);
}

}  // namespace ccollect::iceberg
