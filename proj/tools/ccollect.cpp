// ccollect — exact and simulated collection-time analysis for weighted
// coupon drawing with a discard (null) mass.
//
// Exit codes: 0 success, 1 validation error, 2 enumeration cap exceeded,
// 3 a verify suite failed or a scan certified a counterexample.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ccollect/collector.hpp"
#include "ccollect/errors.hpp"
#include "ccollect/iceberg.hpp"
#include "ccollect/majorization.hpp"
#include "ccollect/montecarlo.hpp"
#include "ccollect/oracle.hpp"
#include "ccollect/serialize.hpp"
#include "ccollect/version.hpp"

namespace {

using namespace ccollect;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitCap = 2;
constexpr int kExitFinding = 3;

// ---------------------------------------------------------------------------
// parsing helpers

std::vector<Rational> parse_weights(const std::string& text) {
  std::vector<Rational> weights;
  std::size_t pos = 0, entry = 1;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    std::size_t end = comma == std::string::npos ? text.size() : comma;
    std::string token = text.substr(pos, end - pos);
    try {
      weights.push_back(parse_rational(token));
    } catch (const RationalParseError& e) {
      throw std::invalid_argument(
          "--p entry " + std::to_string(entry) + " at position " +
          std::to_string(pos + e.offset()) + ": " + e.what());
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
    ++entry;
  }
  return weights;
}

std::vector<std::pair<int, int>> parse_schedule(const std::string& text) {
  std::vector<std::pair<int, int>> pairs;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t colon = item.find(':');
    if (colon == std::string::npos)
      throw std::invalid_argument("--schedule: expected i:j pairs, got '" +
                                  item + "'");
    int i = std::stoi(item.substr(0, colon));
    int j = std::stoi(item.substr(colon + 1));
    if (i < 1 || j < 1)
      throw std::invalid_argument("--schedule: indices are 1-based");
    pairs.emplace_back(i - 1, j - 1);
  }
  return pairs;
}

Mode parse_mode(const std::string& flag_value) {
  std::string value = flag_value;
  if (value.empty()) {
    if (const char* env = std::getenv("CCOLLECT_MODE")) value = env;
  }
  if (value.empty() || value == "exact") return Mode::exact;
  if (value == "float" || value == "float64") return Mode::float64;
  throw std::invalid_argument("mode must be 'exact' or 'float'");
}

std::string join_args(int argc, char** argv) {
  std::string out;
  for (int i = 0; i < argc; ++i) {
    if (i) out += ' ';
    out += argv[i];
  }
  return out;
}

std::string hash_hex(std::string_view canonical) {
  char buf[19];
  std::snprintf(buf, sizeof(buf), "0x%016llx",
                static_cast<unsigned long long>(fnv1a64(canonical)));
  return buf;
}

// ---------------------------------------------------------------------------
// output record

struct Output {
  std::string command_echo;
  std::string canonical;  // hashed into input_hash
  Mode mode = Mode::exact;
  Json results;
  std::string csv;  // used when --format csv
};

int emit(const Output& out, const std::string& format,
         const std::string& out_path) {
  std::string body;
  if (format == "csv") {
    body = out.csv;
  } else {
    Json record;
    record["command"] = out.command_echo;
    record["input_hash"] = hash_hex(out.canonical);
    record["mode"] = mode_name(out.mode);
    record["version"] = std::string(kToolName) + " " + kVersion;
    record["results"] = out.results;
    body = record.dump(2);
    body += '\n';
  }
  if (out_path.empty()) {
    std::cout << body;
  } else {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot open output file " + out_path);
    f << body;
  }
  return kExitOk;
}

std::string curve_value(const TailCurve& c, long k) {
  return c.mode == Mode::exact ? to_string(c.tail[k])
                               : format_double(c.tail_f64[k]);
}

// k,tail,pmf rows for a full curve
std::string curve_csv(const TailCurve& curve) {
  std::ostringstream os;
  os << "k,tail,pmf\n";
  for (long k = 0; k <= curve.k_max(); ++k) {
    os << k << ',' << curve_value(curve, k) << ',';
    if (k == 0) {
      os << 0;
    } else if (curve.mode == Mode::exact) {
      os << to_string(curve.tail[k - 1] - curve.tail[k]);
    } else {
      double d = curve.tail_f64[k - 1] - curve.tail_f64[k];
      os << format_double(d < 0 ? 0.0 : d);
    }
    os << '\n';
  }
  return os.str();
}

TailCurve compute_curve(const DrawDistribution& p, int c, long k_max,
                        Method method, Mode mode, std::uint64_t cap) {
  switch (method) {
    case Method::recurrence: {
      TailCurve curve = tail_curve_recurrence(p, c, k_max, cap);
      if (mode == Mode::float64) {
        curve.mode = Mode::float64;
        for (const Rational& t : curve.tail)
          curve.tail_f64.push_back(to_double(t));
        curve.tail.clear();
      }
      return curve;
    }
    case Method::oracle_dp: {
      TailCurve curve = oracle::markov_tail_curve(p, c, k_max);
      if (mode == Mode::float64) {
        curve.mode = Mode::float64;
        for (const Rational& t : curve.tail)
          curve.tail_f64.push_back(to_double(t));
        curve.tail.clear();
      }
      return curve;
    }
    default:
      return tail_curve_closed_form(p, c, k_max, mode, cap);
  }
}

// ---------------------------------------------------------------------------
// verify suites

struct SuiteResult {
  std::string suite;
  std::uint64_t instances = 0;
  std::uint64_t violations = 0;
  Json details = Json::array();  // first few violations
  Json stats;

  void violation(Json detail) {
    ++violations;
    if (details.size() < 5) details.push_back(std::move(detail));
  }
  bool ok() const { return violations == 0; }
};

struct VerifyParams {
  int n_max = 5;
  long k_max = 20;
  std::uint64_t samples = 10;
  std::uint64_t seed = 1;
  int denominator = 48;
  std::uint64_t cap = kDefaultSubsetCap;
};

DrawDistribution sample_p(const VerifyParams& vp, int n, std::uint64_t index) {
  mc::CounterRng rng(vp.seed, static_cast<std::uint64_t>(n) * 1000003 + index);
  return mc::sample_rational_distribution(n, vp.denominator, rng);
}

SuiteResult run_oracles_suite(const VerifyParams& vp) {
  SuiteResult res;
  res.suite = "oracles";
  for (int n = 1; n <= vp.n_max; ++n) {
    // largest depth the sequence oracle visits cheaply in this sweep
    long k_seq = 0;
    for (double nodes = 1; nodes * (n + 1) <= 1e5; nodes *= n + 1) ++k_seq;
    if (k_seq > vp.k_max) k_seq = vp.k_max;

    for (std::uint64_t s = 0; s < vp.samples; ++s) {
      DrawDistribution p = sample_p(vp, n, s);
      oracle::SubsetChain chain(p);
      std::vector<std::vector<Rational>> dp(n + 1);  // dp[c][k]
      for (int c = 1; c <= n; ++c) dp[c].push_back(chain.mass_below(c));
      for (long k = 1; k <= vp.k_max; ++k) {
        chain.step();
        for (int c = 1; c <= n; ++c) dp[c].push_back(chain.mass_below(c));
      }
      if (chain.total_mass() != 1)
        res.violation({{"check", "mass-conservation"}, {"n", n}, {"sample", s}});

      auto occ = oracle::sequence_occupancy(p, k_seq);
      for (int c = 1; c <= n; ++c) {
        TailCurve cf =
            tail_curve_closed_form(p, c, vp.k_max, Mode::exact, vp.cap);
        TailCurve rec = tail_curve_recurrence(p, c, vp.k_max, vp.cap);
        for (long k = 0; k <= vp.k_max; ++k) {
          ++res.instances;
          bool match = cf.tail[k] == rec.tail[k] && cf.tail[k] == dp[c][k];
          if (match && k <= k_seq) {
            Rational seq(0);
            for (int d = 0; d < c; ++d) seq += occ[k][d];
            match = cf.tail[k] == seq;
          }
          if (!match)
            res.violation({{"check", "oracle-equality"},
                           {"n", n},
                           {"c", c},
                           {"k", k},
                           {"sample", s}});
        }
      }
      if (n >= 2) {
        for (long k = 0; k <= std::min<long>(vp.k_max, 10); ++k) {
          ++res.instances;
          if (oracle::full_collection_cdf_multinomial(p, k) != 1 - dp[n][k])
            res.violation({{"check", "multinomial-cdf"},
                           {"n", n},
                           {"k", k},
                           {"sample", s}});
        }
      }
    }
  }
  return res;
}

SuiteResult run_theorem1_suite(const VerifyParams& vp) {
  SuiteResult res;
  res.suite = "theorem1";
  for (int n = 1; n <= vp.n_max; ++n) {
    for (std::uint64_t s = 0; s < vp.samples; ++s) {
      DrawDistribution p = sample_p(vp, n, s);
      // deterministic rotation exercises symmetry of the closed form
      std::vector<Rational> rotated = p.weights();
      std::rotate(rotated.begin(), rotated.begin() + (n > 1 ? 1 : 0),
                  rotated.end());
      DrawDistribution q = DrawDistribution::from_rationals(rotated);
      for (int c = 1; c <= n; ++c) {
        TailCurve cf =
            tail_curve_closed_form(p, c, vp.k_max, Mode::exact, vp.cap);
        TailCurve dp = oracle::markov_tail_curve(p, c, vp.k_max);
        TailCurve sym =
            tail_curve_closed_form(q, c, vp.k_max, Mode::exact, vp.cap);
        for (long k = 0; k <= vp.k_max; ++k) {
          ++res.instances;
          bool ok = cf.tail[k] == dp.tail[k] && cf.tail[k] == sym.tail[k] &&
                    cf.tail[k] >= 0 && cf.tail[k] <= 1 &&
                    (k == 0 || cf.tail[k] <= cf.tail[k - 1]) &&
                    (k >= c || cf.tail[k] == 1);
          if (!ok)
            res.violation({{"check", "theorem1"},
                           {"n", n},
                           {"c", c},
                           {"k", k},
                           {"sample", s}});
        }
      }
    }
  }
  return res;
}

SuiteResult run_lemma1_suite(const VerifyParams& vp) {
  SuiteResult res;
  res.suite = "lemma1";
  for (std::uint64_t s = 0; s < vp.samples * 10; ++s) {
    mc::CounterRng rng(vp.seed, 777000 + s);
    int n = 1 + static_cast<int>(rng.next_below(vp.n_max));
    std::vector<Rational> y;
    for (int l = 0; l < n; ++l)
      y.push_back(make_rational(
          1 + static_cast<long>(rng.next_below(2 * vp.denominator)),
          vp.denominator));
    Rational a = mc::sample_rational_unit(vp.denominator, rng);
    int i = 1 + static_cast<int>(rng.next_below(n));
    long k = static_cast<long>(rng.next_below(std::min<long>(vp.k_max, 6) + 1));
    ++res.instances;
    if (lemma1_residual(y, a, i, k) != 0)
      res.violation(
          {{"check", "lemma1"}, {"n", n}, {"i", i}, {"k", k}, {"sample", s}});
  }
  return res;
}

SuiteResult run_corollary1_suite(const VerifyParams& vp) {
  SuiteResult res;
  res.suite = "corollary1";
  for (int n = 1; n <= vp.n_max; ++n) {
    for (std::uint64_t s = 0; s < vp.samples; ++s) {
      DrawDistribution p = sample_p(vp, n, s);
      for (int c = 1; c <= n; ++c) {
        ++res.instances;
        for (const Rational& r : corollary_identity_residual(p, c, vp.cap))
          if (r != 0)
            res.violation(
                {{"check", "corollary1"}, {"n", n}, {"c", c}, {"sample", s}});
      }
    }
  }
  return res;
}

SuiteResult run_theorem2_suite(const VerifyParams& vp) {
  SuiteResult res;
  res.suite = "theorem2";
  Rational worst;
  bool has_worst = false;
  for (int n = 1; n <= vp.n_max; ++n) {
    for (std::uint64_t s = 0; s < vp.samples; ++s) {
      DrawDistribution p = sample_p(vp, n, s);
      for (int c = 1; c <= n; ++c) {
        ++res.instances;
        auto margins = majorization::check_theorem2(p, c, vp.cap);
        if (!has_worst || margins.first < worst) {
          worst = margins.first;
          has_worst = true;
        }
        if (margins.second < worst) worst = margins.second;
        if (margins.first < 0 || margins.second < 0)
          res.violation(
              {{"check", "theorem2"}, {"n", n}, {"c", c}, {"sample", s}});
      }
    }
  }
  if (has_worst) res.stats["min_margin"] = to_string(worst);
  return res;
}

SuiteResult run_theorem3_suite(const VerifyParams& vp) {
  SuiteResult res;
  res.suite = "theorem3";
  for (int n = 2; n <= vp.n_max; ++n) {
    for (std::uint64_t s = 0; s < vp.samples; ++s) {
      DrawDistribution p = sample_p(vp, n, s);
      mc::CounterRng rng(vp.seed, 333000 + n * 1000 + s);
      int i = static_cast<int>(rng.next_below(n));
      int j = static_cast<int>(rng.next_below(n - 1));
      if (j >= i) ++j;
      Rational lambda = mc::sample_rational_unit(vp.denominator, rng);
      ++res.instances;
      if (majorization::check_theorem3(p, i, j, lambda, vp.k_max, vp.cap) < 0)
        res.violation({{"check", "theorem3"}, {"n", n}, {"sample", s}});
    }
  }
  return res;
}

SuiteResult run_theorem4_suite(const VerifyParams& vp) {
  SuiteResult res;
  res.suite = "theorem4";
  for (int n = 2; n <= vp.n_max; ++n) {
    for (std::uint64_t s = 0; s < vp.samples; ++s) {
      DrawDistribution p = sample_p(vp, n, s);
      auto trace = majorization::flatten_to_v(p);
      bool ok = static_cast<int>(trace.steps.size()) <= n - 1 &&
                trace.final == p.flattened();
      // each mixing step may only lower the full-collection tail
      TailCurve prev =
          tail_curve_closed_form(p, n, vp.k_max, Mode::exact, vp.cap);
      for (const auto& step : trace.steps) {
        TailCurve next = tail_curve_closed_form(step.after, n, vp.k_max,
                                                Mode::exact, vp.cap);
        for (long k = 0; k <= vp.k_max && ok; ++k)
          if (prev.tail[k] < next.tail[k]) ok = false;
        prev = std::move(next);
      }
      auto margins = majorization::check_theorem4(p, vp.k_max, vp.cap);
      if (margins.first < 0 || margins.second < 0) ok = false;
      ++res.instances;
      if (!ok) res.violation({{"check", "theorem4"}, {"n", n}, {"sample", s}});
    }
  }
  return res;
}

SuiteResult run_theorem5_suite(const VerifyParams& vp) {
  SuiteResult res;
  res.suite = "theorem5";
  for (int n = 2; n <= vp.n_max; ++n) {
    for (std::uint64_t s = 0; s < vp.samples; ++s) {
      DrawDistribution p = sample_p(vp, n, s);
      ++res.instances;
      auto margins = majorization::check_theorem5(p, vp.k_max, vp.cap);
      if (margins.first < 0 || margins.second < 0)
        res.violation({{"check", "theorem5"}, {"n", n}, {"sample", s}});
    }
  }
  return res;
}

SuiteResult run_suite(const std::string& name, const VerifyParams& vp) {
  if (name == "oracles") return run_oracles_suite(vp);
  if (name == "theorem1") return run_theorem1_suite(vp);
  if (name == "lemma1") return run_lemma1_suite(vp);
  if (name == "corollary1") return run_corollary1_suite(vp);
  if (name == "theorem2") return run_theorem2_suite(vp);
  if (name == "theorem3") return run_theorem3_suite(vp);
  if (name == "theorem4") return run_theorem4_suite(vp);
  if (name == "theorem5") return run_theorem5_suite(vp);
  throw std::invalid_argument("unknown verify suite: " + name);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact and simulated coupon-collection time analysis"};
  app.require_subcommand(1);

  std::string p_text, mode_text, format = "json", out_path;
  std::string method_text = "closed";
  std::string schedule_text, scheme_text = "grid", suite_text, config_path;
  int c = 1, n = 2, resolution = 10, denominator = 48, n_max = 5, r_order = 0;
  long k = -1, k_max = -1;
  std::uint64_t seed = 1, samples = 10, scan_samples = 200, reps = 10000,
                cap = kDefaultSubsetCap;
  std::string epsilon_text = "1/1000000000";

  auto add_common = [&](CLI::App* sub, bool needs_p) {
    if (needs_p)
      sub->add_option("--p", p_text,
                      "comma-separated weights, rational a/b or decimal")
          ->required();
    sub->add_option("--mode", mode_text, "exact|float (env CCOLLECT_MODE)");
    sub->add_option("--format", format, "json|csv")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", out_path, "write the output record to a file");
    sub->add_option("--cap", cap, "subset enumeration cap per call");
  };

  CLI::App* tail_cmd = app.add_subcommand("tail", "Pr{T > k} curve or point");
  add_common(tail_cmd, true);
  tail_cmd->add_option("--c", c, "collection target")->required();
  tail_cmd->add_option("--k", k, "single draw count");
  tail_cmd->add_option("--kmax", k_max, "curve 0..kmax");
  tail_cmd->add_option("--method", method_text, "closed|recurrence|dp");

  CLI::App* pmf_cmd = app.add_subcommand("pmf", "Pr{T = k} curve or point");
  add_common(pmf_cmd, true);
  pmf_cmd->add_option("--c", c, "collection target")->required();
  pmf_cmd->add_option("--k", k, "single draw count");
  pmf_cmd->add_option("--kmax", k_max, "curve 0..kmax");
  pmf_cmd->add_option("--method", method_text, "closed|recurrence|dp");

  CLI::App* moments_cmd =
      app.add_subcommand("moments", "expectation, second moment, variance");
  add_common(moments_cmd, true);
  moments_cmd->add_option("--c", c, "collection target")->required();
  moments_cmd->add_option("--r", r_order, "also compute the r-th moment (r>=3)");
  moments_cmd->add_option("--epsilon", epsilon_text,
                          "truncation tolerance for --r (rational or decimal)");

  CLI::App* verify_cmd =
      app.add_subcommand("verify", "seeded self-verification sweeps");
  verify_cmd
      ->add_option("--suite", suite_text,
                   "theorem1|lemma1|corollary1|theorem2|theorem3|theorem4|"
                   "theorem5|oracles")
      ->required();
  verify_cmd->add_option("--nmax", n_max, "largest coupon count");
  verify_cmd->add_option("--kmax", k_max, "largest draw count");
  verify_cmd->add_option("--samples", samples, "sampled vectors per size");
  verify_cmd->add_option("--seed", seed, "sweep seed");
  verify_cmd->add_option("--denominator", denominator,
                         "denominator of sampled rationals");
  verify_cmd->add_option("--format", format, "json|csv")
      ->check(CLI::IsMember({"json", "csv"}));
  verify_cmd->add_option("--out", out_path, "output file");
  verify_cmd->add_option("--cap", cap, "subset enumeration cap");

  CLI::App* flatten_cmd =
      app.add_subcommand("flatten", "mixing trace down to the flat vector");
  add_common(flatten_cmd, true);
  flatten_cmd->add_option("--schedule", schedule_text,
                          "explicit 1-based pairs i:j,i:j,...");

  CLI::App* scan_cmd =
      app.add_subcommand("scan", "exact margin scan of the tail-ordering "
                                 "conjecture (exit 3 on counterexample)");
  scan_cmd->add_option("--n", n, "coupon count")->required();
  scan_cmd->add_option("--c", c, "collection target")->required();
  scan_cmd->add_option("--kmax", k_max, "largest draw count")->required();
  scan_cmd->add_option("--scheme", scheme_text, "grid|random")
      ->check(CLI::IsMember({"grid", "random"}));
  scan_cmd->add_option("--resolution", resolution,
                       "grid/sample weight denominator");
  scan_cmd->add_option("--samples", scan_samples, "random-scheme sample count");
  scan_cmd->add_option("--seed", seed, "random-scheme seed");
  scan_cmd->add_option("--format", format, "json|csv")
      ->check(CLI::IsMember({"json", "csv"}));
  scan_cmd->add_option("--out", out_path, "output file");
  scan_cmd->add_option("--cap", cap, "subset enumeration cap");

  CLI::App* simulate_cmd =
      app.add_subcommand("simulate", "seeded Monte Carlo tail/moment estimates");
  add_common(simulate_cmd, true);
  simulate_cmd->add_option("--c", c, "collection target")->required();
  simulate_cmd->add_option("--reps", reps, "replications");
  simulate_cmd->add_option("--seed", seed, "simulation seed");
  simulate_cmd->add_option("--kmax", k_max, "tail estimates for k = 0..kmax");

  CLI::App* iceberg_cmd = app.add_subcommand(
      "iceberg", "multi-router collection-time experiment from a config file");
  iceberg_cmd->add_option("--config", config_path, "JSON config (schema v1)")
      ->required();
  iceberg_cmd->add_option("--rounds", reps, "override configured rounds");
  iceberg_cmd->add_option("--seed", seed, "override configured seed");
  iceberg_cmd->add_option("--format", format, "json|csv")
      ->check(CLI::IsMember({"json", "csv"}));
  iceberg_cmd->add_option("--out", out_path, "output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    Output out;
    out.command_echo = join_args(argc, argv);
    int exit_code = kExitOk;

    if (tail_cmd->parsed() || pmf_cmd->parsed()) {
      bool want_pmf = pmf_cmd->parsed();
      Mode mode = parse_mode(mode_text);
      DrawDistribution p =
          DrawDistribution::from_rationals(parse_weights(p_text));
      Method method = method_text == "recurrence" ? Method::recurrence
                      : method_text == "dp"       ? Method::oracle_dp
                      : method_text == "closed"
                          ? Method::closed_form
                          : throw std::invalid_argument(
                                "--method must be closed|recurrence|dp");
      if (k < 0 && k_max < 0) throw std::invalid_argument("need --k or --kmax");
      long upto = k_max >= 0 ? k_max : k;
      if (want_pmf && upto < 1) throw std::invalid_argument("pmf needs k >= 1");
      TailCurve curve = compute_curve(p, c, upto, method, mode, cap);
      out.mode = mode;
      out.canonical = std::string(want_pmf ? "pmf" : "tail") + "|p=" + p_text +
                      "|c=" + std::to_string(c) + "|k=" + std::to_string(upto) +
                      "|mode=" + mode_name(mode) + "|method=" + method_text;
      Json results = tail_curve_json(curve);
      if (k >= 0 && k_max < 0) {
        // single point: trim the payload to the requested k
        results.erase("tail");
        results["k"] = k;
        auto point = [&](long at) {
          if (mode == Mode::exact) return Value::from_exact(curve.tail[at]);
          return Value::from_f64({curve.tail_f64[at], curve.precision_warning});
        };
        results["tail"] = value_json(point(k));
        if (k >= 1) {
          if (mode == Mode::exact) {
            results["pmf"] = value_json(
                Value::from_exact(curve.tail[k - 1] - curve.tail[k]));
          } else {
            double d = curve.tail_f64[k - 1] - curve.tail_f64[k];
            results["pmf"] = value_json(Value::from_f64(
                {d < 0 ? 0.0 : d, curve.precision_warning}));
          }
        }
      } else {
        Json pmf_arr = Json::array();
        for (long kk = 0; kk <= curve.k_max(); ++kk) {
          if (kk == 0) {
            pmf_arr.push_back(mode == Mode::exact ? rational_json(Rational(0))
                                                  : Json(0.0));
          } else if (mode == Mode::exact) {
            pmf_arr.push_back(
                rational_json(curve.tail[kk - 1] - curve.tail[kk]));
          } else {
            double d = curve.tail_f64[kk - 1] - curve.tail_f64[kk];
            pmf_arr.push_back(d < 0 ? 0.0 : d);
          }
        }
        results["pmf"] = std::move(pmf_arr);
      }
      out.results = std::move(results);
      out.csv = curve_csv(curve);
    } else if (moments_cmd->parsed()) {
      Mode mode = parse_mode(mode_text);
      DrawDistribution p =
          DrawDistribution::from_rationals(parse_weights(p_text));
      std::vector<int> higher;
      if (r_order > 0) {
        if (r_order < 3)
          throw std::invalid_argument("--r is for higher moments (r >= 3)");
        higher.push_back(r_order);
      }
      Rational epsilon = parse_rational(epsilon_text);
      MomentReport report = moment_report(p, c, higher, epsilon, cap);
      out.mode = mode;
      out.canonical = "moments|p=" + p_text + "|c=" + std::to_string(c) +
                      "|r=" + std::to_string(r_order) +
                      "|mode=" + mode_name(mode);
      std::ostringstream os;
      os << "stat,value,bound\n";
      if (mode == Mode::float64) {
        // float mode reports the compensated float evaluations for E and E2
        F64 e = expectation_f64(p, c, cap);
        F64 m2 = second_moment_f64(p, c, cap);
        double var = m2.value - e.value * e.value;
        if (var < 0) var = 0;
        Json j;
        j["expectation"] = e.value;
        j["second_moment"] = m2.value;
        j["variance"] = var;
        if (e.precision_warning || m2.precision_warning)
          j["precision_warning"] = true;
        if (!report.higher.empty()) {
          j["higher"] = Json::array();
          for (const auto& h : report.higher)
            j["higher"].push_back({{"r", h.r},
                                   {"value", to_double(h.value)},
                                   {"truncation_bound", to_double(h.bound)}});
        }
        out.results = std::move(j);
        os << "expectation," << format_double(e.value) << ",\n";
        os << "second_moment," << format_double(m2.value) << ",\n";
        os << "variance," << format_double(var) << ",\n";
        for (const auto& h : report.higher)
          os << "moment_" << h.r << ',' << format_double(to_double(h.value))
             << ',' << format_double(to_double(h.bound)) << '\n';
      } else {
        out.results = moment_report_json(report, Mode::exact);
        os << "expectation," << to_string(report.expectation) << ",\n";
        os << "second_moment," << to_string(report.second_moment) << ",\n";
        os << "variance," << to_string(report.variance) << ",\n";
        for (const auto& h : report.higher)
          os << "moment_" << h.r << ',' << to_string(h.value) << ','
             << to_string(h.bound) << '\n';
      }
      out.csv = os.str();
    } else if (verify_cmd->parsed()) {
      VerifyParams vp;
      vp.n_max = n_max;
      vp.k_max = k_max >= 0 ? k_max : 20;
      vp.samples = samples;
      vp.seed = seed;
      vp.denominator = denominator;
      vp.cap = cap;
      SuiteResult res = run_suite(suite_text, vp);
      out.canonical = "verify|suite=" + suite_text +
                      "|nmax=" + std::to_string(vp.n_max) +
                      "|kmax=" + std::to_string(vp.k_max) +
                      "|samples=" + std::to_string(vp.samples) +
                      "|seed=" + std::to_string(vp.seed) +
                      "|denominator=" + std::to_string(vp.denominator);
      Json j;
      j["suite"] = res.suite;
      j["nmax"] = vp.n_max;
      j["kmax"] = vp.k_max;
      j["samples"] = vp.samples;
      j["seed"] = vp.seed;
      j["instances"] = res.instances;
      j["violations"] = res.violations;
      j["ok"] = res.ok();
      if (!res.details.empty()) j["details"] = res.details;
      if (!res.stats.is_null()) j["stats"] = res.stats;
      out.results = std::move(j);
      std::ostringstream os;
      os << "suite,instances,violations,ok\n";
      os << res.suite << ',' << res.instances << ',' << res.violations << ','
         << (res.ok() ? "true" : "false") << '\n';
      out.csv = os.str();
      if (!res.ok()) exit_code = kExitFinding;
    } else if (flatten_cmd->parsed()) {
      DrawDistribution p =
          DrawDistribution::from_rationals(parse_weights(p_text));
      majorization::FlattenTrace trace =
          schedule_text.empty()
              ? majorization::flatten_to_v(p)
              : majorization::flatten_to_v(p, parse_schedule(schedule_text));
      out.canonical = "flatten|p=" + p_text + "|schedule=" + schedule_text;
      out.results = flatten_trace_json(trace);
      std::ostringstream os;
      os << "step,i,j,lambda";
      for (int w = 1; w <= p.size(); ++w) os << ",p" << w;
      os << '\n';
      for (std::size_t s = 0; s < trace.steps.size(); ++s) {
        const auto& step = trace.steps[s];
        os << s + 1 << ',' << step.i + 1 << ',' << step.j + 1 << ','
           << to_string(step.lambda);
        for (const Rational& w : step.after.weights())
          os << ',' << to_string(w);
        os << '\n';
      }
      out.csv = os.str();
    } else if (scan_cmd->parsed()) {
      majorization::ScanParams params;
      params.n = n;
      params.c = c;
      params.k_max = k_max;
      params.scheme = scheme_text == "random" ? majorization::ScanScheme::random
                                              : majorization::ScanScheme::grid;
      params.resolution = resolution;
      params.samples = scan_samples;
      params.seed = seed;
      params.cap = cap;
      majorization::ScanReport report = majorization::scan_conjecture(params);
      out.canonical =
          "scan|n=" + std::to_string(n) + "|c=" + std::to_string(c) +
          "|kmax=" + std::to_string(k_max) + "|scheme=" + scheme_text +
          "|resolution=" + std::to_string(resolution) +
          "|samples=" + std::to_string(scan_samples) +
          "|seed=" + std::to_string(seed);
      out.results = scan_report_json(report);
      std::ostringstream os;
      os << "n,c,k_max,scheme,resolution,sample_count,min_margin_pv,"
            "min_margin_vu,counterexample\n";
      os << n << ',' << c << ',' << k_max << ',' << scheme_text << ','
         << resolution << ',' << report.sample_count << ','
         << to_string(report.min_margin_pv) << ','
         << to_string(report.min_margin_vu) << ','
         << (report.counterexample ? "yes" : "no") << '\n';
      out.csv = os.str();
      if (report.counterexample) exit_code = kExitFinding;
    } else if (simulate_cmd->parsed()) {
      DrawDistribution p =
          DrawDistribution::from_rationals(parse_weights(p_text));
      mc::SimulationConfig cfg{p, c, reps, seed, k_max >= 0 ? k_max : 10};
      mc::EstimateReport report = mc::estimate_tail(cfg);
      out.canonical = "simulate|p=" + p_text + "|c=" + std::to_string(c) +
                      "|reps=" + std::to_string(reps) +
                      "|seed=" + std::to_string(seed) +
                      "|kmax=" + std::to_string(cfg.k_max);
      out.results = estimate_report_json(report);
      std::ostringstream os;
      os << "k,estimate,std_error,exceed_count\n";
      for (const auto& t : report.tail)
        os << t.k << ',' << format_double(t.estimate) << ','
           << format_double(t.std_error) << ',' << t.exceed_count << '\n';
      out.csv = os.str();
    } else if (iceberg_cmd->parsed()) {
      iceberg::IcebergConfig cfg = iceberg::load_config_file(config_path);
      if (iceberg_cmd->count("--rounds")) cfg.rounds = reps;
      if (iceberg_cmd->count("--seed")) cfg.seed = seed;
      iceberg::AggregateReport report =
          iceberg::run_simulation(cfg.routers, cfg.rounds, cfg.seed);
      out.canonical = "iceberg|config=" + config_path +
                      "|rounds=" + std::to_string(cfg.rounds) +
                      "|seed=" + std::to_string(cfg.seed);
      Json j = aggregate_report_json(report);
      if (iceberg::comparable(report)) {
        iceberg::OrderingSummary ord = iceberg::compare_to_optimal(report);
        Json oj;
        oj["by_exact_mean"] = Json::array();
        for (std::size_t idx : ord.order)
          oj["by_exact_mean"].push_back(report.routers[idx].name);
        oj["minimizer"] = report.routers[ord.minimizer].name;
        oj["minimizer_almost_uniform"] = ord.minimizer_almost_uniform;
        j["ordering"] = std::move(oj);
      } else {
        j["ordering"] = nullptr;
      }
      out.results = std::move(j);
      std::ostringstream os;
      os << "router,n,c,rounds,aborted,empirical_mean,q50,q90,q99,exact_mean,"
            "uniform_baseline,almost_uniform\n";
      for (const auto& r : report.routers)
        os << csv_field(r.name) << ',' << r.n << ',' << r.c << ',' << r.rounds
           << ',' << r.aborted << ',' << format_double(r.empirical_mean) << ','
           << format_double(r.q50) << ',' << format_double(r.q90) << ','
           << format_double(r.q99) << ',' << to_string(r.exact_mean) << ','
           << to_string(r.uniform_baseline) << ','
           << (r.almost_uniform ? "true" : "false") << '\n';
      out.csv = os.str();
    }

    int emit_code = emit(out, format, out_path);
    return exit_code != kExitOk ? exit_code : emit_code;
  } catch (const CapExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCap;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
}
