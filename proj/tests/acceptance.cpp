// Acceptance suite: one pass/fail line per criterion, exit 0 only if all
// pass. argv[1] must point at the ccollect CLI binary (used by the scan and
// determinism criteria).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ccollect/collector.hpp"
#include "ccollect/combinatorics.hpp"
#include "ccollect/iceberg.hpp"
#include "ccollect/majorization.hpp"
#include "ccollect/montecarlo.hpp"
#include "ccollect/oracle.hpp"

using namespace ccollect;
namespace maj = ccollect::majorization;

namespace {

std::string g_cli;
int g_failures = 0;

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

void report(int index, const std::string& name, bool ok,
            const std::string& detail) {
  std::printf("[%s] criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", index,
              name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

DrawDistribution sweep_p(std::uint64_t stream, int n, int denominator = 48,
                         std::uint64_t seed = 1) {
  mc::CounterRng rng(seed, stream);
  return mc::sample_rational_distribution(n, denominator, rng);
}

DrawDistribution example5() {
  return DrawDistribution::from_rationals(
      {parse_rational("1/16"), parse_rational("1/6"), parse_rational("1/4"),
       parse_rational("1/8"), parse_rational("7/24")});
}

int run_cli(const std::string& args) {
  std::string cmd = g_cli + " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

// --- criterion 1 -----------------------------------------------------------

void criterion1() {
  auto start = std::chrono::steady_clock::now();
  const long k_top = 25;
  std::uint64_t instances = 0, seq_instances = 0;
  bool ok = true;
  std::string first_fail;

  for (int n = 1; n <= 7 && ok; ++n) {
    long k_enum = 0;
    for (double nodes = 1; nodes * (n + 1) <= 1e7 && k_enum < k_top;
         nodes *= n + 1)
      ++k_enum;

    for (std::uint64_t s = 0; s < 50 && ok; ++s) {
      DrawDistribution p = sweep_p(1000 * n + s, n);

      oracle::SubsetChain chain(p);
      std::vector<std::vector<Rational>> dp(n + 1);
      for (int c = 1; c <= n; ++c) dp[c].push_back(chain.mass_below(c));
      for (long k = 1; k <= k_top; ++k) {
        chain.step();
        for (int c = 1; c <= n; ++c) dp[c].push_back(chain.mass_below(c));
      }

      auto occ = oracle::sequence_occupancy(p, k_enum);
      for (int c = 1; c <= n && ok; ++c) {
        TailCurve cf = tail_curve_closed_form(p, c, k_top);
        TailCurve rec = tail_curve_recurrence(p, c, k_top);
        for (long k = 0; k <= k_top; ++k) {
          ++instances;
          if (cf.tail[k] != rec.tail[k] || cf.tail[k] != dp[c][k]) {
            ok = false;
            first_fail = "closed/recurrence/dp mismatch at n=" +
                         std::to_string(n) + " c=" + std::to_string(c) +
                         " k=" + std::to_string(k);
            break;
          }
          if (k <= k_enum) {
            ++seq_instances;
            Rational seq(0);
            for (int d = 0; d < c; ++d) seq += occ[k][d];
            if (cf.tail[k] != seq) {
              ok = false;
              first_fail = "sequence oracle mismatch at n=" +
                           std::to_string(n) + " c=" + std::to_string(c) +
                           " k=" + std::to_string(k);
              break;
            }
          }
        }
      }
    }
  }
  double elapsed = seconds_since(start);
  if (elapsed > 300.0) {
    ok = false;
    first_fail = "runtime budget of 300s exceeded";
  }
  std::ostringstream detail;
  detail << instances << " exact triples, " << seq_instances
         << " sequence-checked, " << elapsed << "s";
  if (!ok) detail << "; " << first_fail;
  report(1, "oracle equivalence across all four tail methods", ok,
         detail.str());
}

// --- criterion 2 -----------------------------------------------------------

void criterion2() {
  bool ok = true;
  std::string fail;
  std::uint64_t count = 0;

  for (int n = 1; n <= 20 && ok; ++n)
    for (int c = 1; c <= n; ++c) {
      ++count;
      if (binomial_identity_residual(n, c) != 0) {
        ok = false;
        fail = "binomial identity at n=" + std::to_string(n);
        break;
      }
    }

  for (std::uint64_t s = 0; s < 200 && ok; ++s) {
    mc::CounterRng rng(1, 50000 + s);
    int n = 1 + static_cast<int>(rng.next_below(6));
    std::vector<Rational> y;
    for (int l = 0; l < n; ++l)
      y.push_back(
          make_rational(1 + static_cast<long>(rng.next_below(96)), 48));
    Rational a = make_rational(static_cast<long>(rng.next_below(49)), 48);
    int i = 1 + static_cast<int>(rng.next_below(n));
    long k = static_cast<long>(rng.next_below(7));
    ++count;
    if (lemma1_residual(y, a, i, k) != 0) {
      ok = false;
      fail = "subset-sum exchange identity at sample " + std::to_string(s);
    }
  }

  for (int n = 1; n <= 7 && ok; ++n)
    for (std::uint64_t s = 0; s < 50 && ok; ++s) {
      DrawDistribution p = sweep_p(1000 * n + s, n);
      for (int c = 1; c <= n && ok; ++c) {
        ++count;
        for (const Rational& r : corollary_identity_residual(p, c))
          if (r != 0) {
            ok = false;
            fail = "certain-start residual at n=" + std::to_string(n);
            break;
          }
      }
    }

  report(2, "combinatorial identities hold exactly", ok,
         std::to_string(count) + " instances" + (ok ? "" : "; " + fail));
}

// --- criterion 3 -----------------------------------------------------------

void criterion3() {
  bool ok = true;
  std::string fail;
  std::uint64_t count = 0;
  std::vector<Rational> null_masses = {Rational(0), parse_rational("1/7"),
                                       parse_rational("5/48")};
  for (int n = 1; n <= 12 && ok; ++n) {
    for (const Rational& v0 : null_masses) {
      DrawDistribution v = DrawDistribution::almost_uniform(n, v0);
      for (int c = 1; c <= n; ++c) {
        ++count;
        if (expectation(v, c) != expectation_almost_uniform(n, c, v0)) {
          ok = false;
          fail = "subset form vs harmonic form at n=" + std::to_string(n) +
                 " c=" + std::to_string(c);
          break;
        }
      }
      if (!ok) break;
    }
  }
  for (int n = 2; n <= 12 && ok; ++n)
    for (int c = 2; c <= n; ++c) {
      ++count;
      Rational lhs = expectation_uniform(n, c);
      Rational rhs = 1 + Rational(n) / (n - 1) * expectation_uniform(n - 1, c - 1);
      if (lhs != rhs) {
        ok = false;
        fail = "dimension recurrence at n=" + std::to_string(n);
        break;
      }
    }
  report(3, "closed-form expectations and the dimension recurrence", ok,
         std::to_string(count) + " identities" + (ok ? "" : "; " + fail));
}

// --- criterion 4 -----------------------------------------------------------

void criterion4() {
  bool ok = true;
  std::string fail;
  std::uint64_t count = 0;
  for (int c : {2, 3, 4}) {
    Rational prev;
    for (int n = c; n <= 40; ++n) {
      Rational gap = limit_gap_uniform(n, c);
      ++count;
      if (gap <= 0) {
        ok = false;
        fail = "gap not positive at n=" + std::to_string(n) +
               " c=" + std::to_string(c);
        break;
      }
      if (n > c && gap >= prev) {
        ok = false;
        fail = "gap not strictly decreasing at n=" + std::to_string(n);
        break;
      }
      prev = gap;
    }
    if (!ok) break;
  }
  report(4, "expected-time gap above the limit is positive and shrinking", ok,
         std::to_string(count) + " gaps" + (ok ? "" : "; " + fail));
}

// --- criterion 5 -----------------------------------------------------------

void criterion5() {
  bool ok = true;
  std::string fail;
  std::uint64_t count = 0;
  for (std::uint64_t idx = 0; idx < 500 && ok; ++idx) {
    int n = 1 + static_cast<int>(idx % 6);
    DrawDistribution p = sweep_p(70000 + idx, n);
    for (int c = 1; c <= n; ++c) {
      ++count;
      auto m = maj::check_theorem2(p, c);
      if (m.first < 0 || m.second < 0) {
        ok = false;
        fail = "negative margin at sample " + std::to_string(idx) +
               " c=" + std::to_string(c);
        break;
      }
    }
  }
  report(5, "expected-time ordering p >= v >= u on 500 random vectors", ok,
         std::to_string(count) + " margin pairs" + (ok ? "" : "; " + fail));
}

// --- criterion 6 -----------------------------------------------------------

void criterion6() {
  auto start = std::chrono::steady_clock::now();
  bool ok = true;
  std::string fail;
  std::uint64_t count = 0;
  const long k_top = 25;

  for (std::uint64_t idx = 0; idx < 200 && ok; ++idx) {
    int n = 2 + static_cast<int>(idx % 4);  // 2..5
    DrawDistribution p = sweep_p(90000 + idx, n);
    mc::CounterRng rng(1, 95000 + idx);
    int i = static_cast<int>(rng.next_below(n));
    int j = static_cast<int>(rng.next_below(n - 1));
    if (j >= i) ++j;
    Rational lambda =
        make_rational(static_cast<long>(rng.next_below(49)), 48);
    ++count;
    if (maj::check_theorem3(p, i, j, lambda, k_top) < 0) {
      ok = false;
      fail = "mixing margin negative at sample " + std::to_string(idx);
      break;
    }

    auto trace = maj::flatten_to_v(p);
    if (static_cast<int>(trace.steps.size()) > n - 1 ||
        !(trace.final == p.flattened())) {
      ok = false;
      fail = "flatten trace malformed at sample " + std::to_string(idx);
      break;
    }
    TailCurve prev = tail_curve_closed_form(p, n, k_top);
    for (const auto& step : trace.steps) {
      TailCurve next = tail_curve_closed_form(step.after, n, k_top);
      for (long k = 0; k <= k_top; ++k) {
        ++count;
        if (prev.tail[k] < next.tail[k]) {
          ok = false;
          fail = "flatten step raised the tail at sample " +
                 std::to_string(idx);
          break;
        }
      }
      if (!ok) break;
      prev = std::move(next);
    }
    if (!ok) break;
    auto chain_margins = maj::check_theorem4(p, k_top);
    ++count;
    if (chain_margins.first < 0 || chain_margins.second < 0) {
      ok = false;
      fail = "chain margin negative at sample " + std::to_string(idx);
      break;
    }
  }

  if (ok) {
    // the worked five-coupon trace must come out verbatim
    auto trace = maj::flatten_to_v(example5(), {{3, 4}, {1, 4}, {0, 2}, {4, 2}});
    auto expect = [](const char* a, const char* b, const char* c,
                     const char* d, const char* e) {
      return DrawDistribution::from_rationals(
          {parse_rational(a), parse_rational(b), parse_rational(c),
           parse_rational(d), parse_rational(e)});
    };
    bool verbatim =
        trace.steps.size() == 4 &&
        trace.steps[0].after ==
            expect("1/16", "1/6", "1/4", "43/240", "19/80") &&
        trace.steps[1].after ==
            expect("1/16", "43/240", "1/4", "43/240", "9/40") &&
        trace.steps[2].after ==
            expect("43/240", "43/240", "2/15", "43/240", "9/40") &&
        trace.steps[3].after ==
            expect("43/240", "43/240", "43/240", "43/240", "43/240");
    if (!verbatim) {
      ok = false;
      fail = "worked example trace not reproduced";
    }
  }

  std::ostringstream detail;
  detail << count << " exact checks, " << seconds_since(start) << "s";
  if (!ok) detail << "; " << fail;
  report(6, "mixing and flattening only improve full collection", ok,
         detail.str());
}

// --- criterion 7 -----------------------------------------------------------

void criterion7() {
  bool ok = true;
  std::string fail;
  std::uint64_t count = 0;
  for (std::uint64_t idx = 0; idx < 500 && ok; ++idx) {
    int n = 1 + static_cast<int>(idx % 6);
    if (n < 2) continue;
    DrawDistribution p = sweep_p(70000 + idx, n);
    ++count;
    auto m = maj::check_theorem5(p, 25);
    if (m.first < 0 || m.second < 0) {
      ok = false;
      fail = "pair-collection margin negative at sample " + std::to_string(idx);
    }
  }

  std::string out = "/tmp/ccollect_acceptance_scan.json";
  int code = run_cli("scan --n 4 --c 3 --kmax 20 --scheme grid --resolution 10 "
                     "--out " + out);
  if (code != 0) {
    ok = false;
    fail = "scan exited with code " + std::to_string(code);
  } else {
    auto doc = nlohmann::json::parse(slurp(out));
    if (!doc["results"]["counterexample"].is_null()) {
      ok = false;
      fail = "scan certified a counterexample (reportable research event)";
    }
    count += doc["results"]["sample_count"].get<std::uint64_t>();
  }
  std::remove(out.c_str());
  report(7, "pair-collection ordering plus open-case grid scan", ok,
         std::to_string(count) + " instances" + (ok ? "" : "; " + fail));
}

// --- criterion 8 -----------------------------------------------------------

struct Calibration {
  const char* label;
  DrawDistribution p;
  int c;
  std::vector<long> ks;
};

void criterion8() {
  auto start = std::chrono::steady_clock::now();
  bool ok = true;
  std::string fail;
  const std::uint64_t reps = 1000000;

  std::vector<Calibration> cases;
  cases.push_back({"pair", DrawDistribution::from_rationals(
                               {parse_rational("0.3"), parse_rational("0.5")}),
                   2, {2, 4, 8}});
  cases.push_back({"five", example5(), 5, {6, 10, 16}});

  for (std::size_t idx = 0; idx < cases.size() && ok; ++idx) {
    const Calibration& cal = cases[idx];
    long k_max = cal.ks.back();
    mc::SimulationConfig cfg{cal.p, cal.c, reps, 8801 + idx, k_max};
    mc::EstimateReport rep = mc::estimate_tail(cfg);

    Rational e = expectation(cal.p, cal.c);
    Rational var = second_moment(cal.p, cal.c) - e * e;
    double sigma_mean = std::sqrt(to_double(var) / double(reps));
    if (std::fabs(rep.mean - to_double(e)) > 3 * sigma_mean) {
      ok = false;
      fail = std::string(cal.label) + ": mean outside 3 sigma";
      break;
    }
    for (long k : cal.ks) {
      double q = to_double(tail_closed_form(cal.p, cal.c, k));
      double se = std::sqrt(q * (1 - q) / double(reps));
      if (std::fabs(rep.tail[k].estimate - q) > 3 * se) {
        ok = false;
        fail = std::string(cal.label) + ": tail at k=" + std::to_string(k) +
               " outside 3 sigma";
        break;
      }
    }
  }

  double elapsed = seconds_since(start);
  if (elapsed > 120.0) {
    ok = false;
    fail = "runtime budget of 120s exceeded";
  }
  std::ostringstream detail;
  detail << "2x" << reps << " replications, " << elapsed << "s";
  if (!ok) detail << "; " << fail;
  report(8, "Monte Carlo calibration against exact values", ok, detail.str());
}

// --- criterion 9 -----------------------------------------------------------

void criterion9() {
  bool ok = true;
  std::string fail;
  const std::uint64_t rounds = 100000;
  auto skew = example5();
  std::vector<iceberg::RouterConfig> routers;
  routers.push_back({"flat", skew.flattened(), 3, mc::kDefaultDrawGuard});
  routers.push_back({"skew", skew, 3, mc::kDefaultDrawGuard});
  auto report_data = iceberg::run_simulation(routers, rounds, 99);

  for (std::size_t r = 0; r < routers.size(); ++r) {
    Rational e = expectation(routers[r].p, 3);
    Rational var = second_moment(routers[r].p, 3) - e * e;
    double sigma_mean = std::sqrt(to_double(var) / double(rounds));
    if (std::fabs(report_data.routers[r].empirical_mean - to_double(e)) >
        3 * sigma_mean) {
      ok = false;
      fail = report_data.routers[r].name + ": mean outside 3 sigma";
    }
  }
  auto summary = iceberg::compare_to_optimal(report_data);
  if (report_data.routers[summary.minimizer].name != "flat" ||
      !summary.minimizer_almost_uniform) {
    ok = false;
    fail = "flat router not flagged as exact minimizer";
  }
  if (!(report_data.routers[0].exact_mean < report_data.routers[1].exact_mean)) {
    ok = false;
    fail = "exact baselines not strictly ordered";
  }
  report(9, "two-router experiment matches exact baselines", ok,
         std::to_string(rounds) + " rounds/router" + (ok ? "" : "; " + fail));
}

// --- criterion 10 ----------------------------------------------------------

void criterion10() {
  bool ok = true;
  std::string fail;
  std::string cfg_path = "/tmp/ccollect_acceptance_iceberg.json";
  {
    std::ofstream cfg(cfg_path);
    cfg << R"({"version":1,"rounds":20000,"seed":3,"routers":[
      {"name":"flat","p":["43/240","43/240","43/240","43/240","43/240"],"c":3},
      {"name":"skew","p":["1/16","1/6","1/4","1/8","7/24"],"c":3}]})";
  }

  std::vector<std::string> commands = {
      "simulate --p 0.3,0.5 --c 2 --reps 100000 --seed 5 --kmax 6",
      "scan --n 3 --c 2 --kmax 10 --scheme random --samples 30 --seed 12 "
      "--resolution 24",
      "iceberg --config " + cfg_path,
      "verify --suite theorem2 --nmax 4 --samples 5 --seed 2",
      "tail --p 1/16,1/6,1/4,1/8,7/24 --c 5 --kmax 20 --format csv",
  };
  int checked = 0;
  for (const std::string& cmd : commands) {
    std::string f = "/tmp/ccollect_acceptance_det.out";
    int ca = run_cli(cmd + " --out " + f);
    std::string a = slurp(f);
    int cb = run_cli(cmd + " --out " + f);
    std::string b = slurp(f);
    std::remove(f.c_str());
    if (ca != cb || a.empty() || a != b) {
      ok = false;
      fail = "outputs differ for: " + cmd;
      break;
    }
    ++checked;
  }
  std::remove(cfg_path.c_str());
  report(10, "seeded commands produce byte-identical outputs", ok,
         std::to_string(checked) + " commands replayed" +
             (ok ? "" : "; " + fail));
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: acceptance <path-to-ccollect-cli>\n");
    return 2;
  }
  g_cli = argv[1];

  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10();

  if (g_failures == 0) {
    std::printf("acceptance: all 10 criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criterion(s) FAILED\n", g_failures);
  return 1;
}
