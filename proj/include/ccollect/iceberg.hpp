#ifndef CCOLLECT_ICEBERG_HPP
#define CCOLLECT_ICEBERG_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ccollect/distribution.hpp"
#include "ccollect/montecarlo.hpp"

namespace ccollect::iceberg {

// Desk-scale model of distributed heavy-hitter monitoring: each router sees
// a stream of items (n frequent ones plus a discarded low-probability mass
// p0) and reports once it has observed c distinct frequent items. Routers
// are simulated independently and compared against the library's exact
// expected collection times.

struct RouterConfig {
  std::string name;
  DrawDistribution p;
  int c = 1;
  std::uint64_t stream_cap = mc::kDefaultDrawGuard;  // per-epoch draw guard
};

struct RouterStats {
  std::string name;
  int n = 0;
  int c = 0;
  Rational null_mass;
  bool almost_uniform = false;
  std::uint64_t rounds = 0;
  std::uint64_t aborted = 0;
  double empirical_mean = 0.0;
  double q50 = 0.0, q90 = 0.0, q99 = 0.0;  // nearest-rank quantiles
  Rational exact_mean;                     // E(T_{c,n}(p)), exact
  Rational uniform_baseline;               // n(H_n - H_{n-c})/(1-p0)
};

struct AggregateReport {
  std::uint64_t rounds = 0;
  std::uint64_t seed = 0;
  std::vector<RouterStats> routers;
  double pooled_mean = 0.0;
  double pooled_variance = 0.0;
};

/// `rounds` independent collection epochs per router; epoch j of router r
/// runs on RNG substream (r << 32) | j, so the report is a pure function of
/// (configs, rounds, seed).
AggregateReport run_simulation(const std::vector<RouterConfig>& routers,
                               std::uint64_t rounds, std::uint64_t seed);

/// Routers ranked by exact expected collection time (requires >= 2 routers
/// sharing n, c and null mass).
struct OrderingSummary {
  std::vector<std::size_t> order;  // router indices, best first
  std::size_t minimizer = 0;
  bool minimizer_almost_uniform = false;
};

OrderingSummary compare_to_optimal(const AggregateReport& report);

/// true when every router shares (n, c, null mass), i.e. the ordering
/// summary is meaningful.
bool comparable(const AggregateReport& report);

struct IcebergConfig {
  std::uint64_t rounds = 0;
  std::uint64_t seed = 0;
  std::vector<RouterConfig> routers;
};

/// JSON config, schema version 1:
/// {"version":1,"rounds":N,"seed":S,
///  "routers":[{"name":"...","p":["1/16","0.25",...],"c":3,
///              "stream_cap":1000000000},...]}
/// Weights are rational or decimal strings (or plain JSON numbers).
IcebergConfig load_config(std::istream& in);
IcebergConfig load_config_file(const std::string& path);

}  // namespace ccollect::iceberg

#endif  // CCOLLECT_ICEBERG_HPP
