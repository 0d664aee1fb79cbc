#include <doctest.h>

#include <cmath>
#include <sstream>

#include "ccollect/collector.hpp"
#include "ccollect/iceberg.hpp"
#include "ccollect/majorization.hpp"
#include "ccollect/serialize.hpp"
#include "test_helpers.hpp"

using namespace ccollect;
using namespace ccollect::testing;
namespace ib = ccollect::iceberg;

namespace {

ib::IcebergConfig parse_config(const std::string& text) {
  std::istringstream in(text);
  return ib::load_config(in);
}

}  // namespace

TEST_CASE("config parsing: schema v1 with rational and decimal weights") {
  auto cfg = parse_config(R"({
    "version": 1, "rounds": 500, "seed": 9,
    "routers": [
      {"name": "a", "p": ["1/4", "0.25", "1/4"], "c": 2},
      {"name": "b", "p": [0.125, "1/8", "0.5"], "c": 2, "stream_cap": 1000}
    ]})");
  CHECK(cfg.rounds == 500);
  CHECK(cfg.seed == 9);
  REQUIRE(cfg.routers.size() == 2);
  CHECK(cfg.routers[0].p.weight(1) == rat("1/4"));
  CHECK(cfg.routers[0].p.null_mass() == rat("1/4"));
  CHECK(cfg.routers[1].stream_cap == 1000);

  CHECK_THROWS_AS(parse_config("{\"version\":2,\"routers\":[]}"),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_config("{\"version\":1,\"routers\":[]}"),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_config("not json"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config(R"({"version":1,"routers":[{"c":1}]})"),
                  std::invalid_argument);
}

TEST_CASE("simulation reports are reproducible, even a single round") {
  std::vector<ib::RouterConfig> routers;
  routers.push_back({"u", DrawDistribution::uniform(3), 3,
                     mc::kDefaultDrawGuard});
  auto once = ib::run_simulation(routers, 1, 123);
  auto again = ib::run_simulation(routers, 1, 123);
  CHECK(aggregate_report_json(once) == aggregate_report_json(again));
  CHECK(once.routers[0].empirical_mean >= 3.0);  // collection needs >= c draws

  auto big_a = ib::run_simulation(routers, 5000, 7);
  auto big_b = ib::run_simulation(routers, 5000, 7);
  CHECK(aggregate_report_json(big_a) == aggregate_report_json(big_b));
}

TEST_CASE("uniform three-of-three pooled mean near the harmonic value") {
  std::vector<ib::RouterConfig> routers;
  routers.push_back({"u", DrawDistribution::uniform(3), 3,
                     mc::kDefaultDrawGuard});
  const std::uint64_t rounds = 50000;
  auto report = ib::run_simulation(routers, rounds, 2718);
  const auto& r = report.routers[0];
  CHECK(r.exact_mean == rat("11/2"));
  CHECK(r.uniform_baseline == rat("11/2"));
  auto u = DrawDistribution::uniform(3);
  Rational var = second_moment(u, 3) - expectation(u, 3) * expectation(u, 3);
  double sigma_mean = std::sqrt(to_double(var) / double(rounds));
  CHECK(std::fabs(r.empirical_mean - 5.5) < 3 * sigma_mean);
  CHECK(r.q50 >= 3);
  CHECK(r.q90 >= r.q50);
  CHECK(r.q99 >= r.q90);
}

TEST_CASE("flat router is flagged as the exact minimizer") {
  auto skew = example5();
  std::vector<ib::RouterConfig> routers;
  routers.push_back({"flat", skew.flattened(), 3, mc::kDefaultDrawGuard});
  routers.push_back({"skew", skew, 3, mc::kDefaultDrawGuard});
  auto report = ib::run_simulation(routers, 20000, 5);
  REQUIRE(ib::comparable(report));
  auto summary = ib::compare_to_optimal(report);
  CHECK(report.routers[summary.minimizer].name == "flat");
  CHECK(summary.minimizer_almost_uniform);
  CHECK(report.routers[0].exact_mean < report.routers[1].exact_mean);
  // flat router's baseline equals the closed harmonic form
  CHECK(report.routers[0].exact_mean == report.routers[0].uniform_baseline);
}

TEST_CASE("baselines weakly decrease along a flattening trace") {
  auto p = example5();
  auto trace = majorization::flatten_to_v(p);
  REQUIRE(!trace.steps.empty());
  std::vector<ib::RouterConfig> routers;
  routers.push_back({"p", p, 3, mc::kDefaultDrawGuard});
  routers.push_back({"mid", trace.steps.front().after, 3,
                     mc::kDefaultDrawGuard});
  routers.push_back({"v", trace.final, 3, mc::kDefaultDrawGuard});
  auto report = ib::run_simulation(routers, 100, 1);
  CHECK(report.routers[0].exact_mean >= report.routers[1].exact_mean);
  CHECK(report.routers[1].exact_mean >= report.routers[2].exact_mean);
  auto summary = ib::compare_to_optimal(report);
  CHECK(report.routers[summary.minimizer].name == "v");
}

TEST_CASE("identical routers share every baseline") {
  std::vector<ib::RouterConfig> routers;
  for (int i = 0; i < 3; ++i)
    routers.push_back({"r" + std::to_string(i), example5(), 2,
                       mc::kDefaultDrawGuard});
  auto report = ib::run_simulation(routers, 50, 3);
  for (const auto& r : report.routers)
    CHECK(r.exact_mean == report.routers[0].exact_mean);
  auto summary = ib::compare_to_optimal(report);
  CHECK(summary.order.front() == 0);  // stable order on ties
}

TEST_CASE("incomparable router sets are rejected") {
  std::vector<ib::RouterConfig> routers;
  routers.push_back({"a", example5(), 2, mc::kDefaultDrawGuard});
  routers.push_back({"b", example5(), 3, mc::kDefaultDrawGuard});
  auto report = ib::run_simulation(routers, 10, 1);
  CHECK(!ib::comparable(report));
  CHECK_THROWS_AS(ib::compare_to_optimal(report), std::invalid_argument);
}
