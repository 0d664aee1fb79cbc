#include "ccollect/serialize.hpp"

namespace ccollect {

Json rational_json(const Rational& q) {
  Json j;
  j["numerator"] = q.get_num().get_str();
  j["denominator"] = q.get_den().get_str();
  return j;
}

Json value_json(const Value& v) {
  if (v.mode == Mode::exact) return rational_json(v.exact);
  Json j = v.f64;
  if (v.precision_warning) {
    Json wrapped;
    wrapped["value"] = v.f64;
    wrapped["precision_warning"] = true;
    return wrapped;
  }
  return j;
}

Json tail_curve_json(const TailCurve& curve) {
  Json j;
  j["c"] = curve.c;
  j["method"] = method_name(curve.method);
  j["mode"] = mode_name(curve.mode);
  j["k_max"] = curve.k_max();
  Json values = Json::array();
  if (curve.mode == Mode::exact) {
    for (const Rational& t : curve.tail) values.push_back(rational_json(t));
  } else {
    for (double t : curve.tail_f64) values.push_back(t);
  }
  j["tail"] = std::move(values);
  if (curve.mode == Mode::float64)
    j["precision_warning"] = curve.precision_warning;
  return j;
}

Json moment_report_json(const MomentReport& report, Mode mode) {
  Json j;
  auto emit = [&](const Rational& q) -> Json {
    if (mode == Mode::exact) return rational_json(q);
    return to_double(q);
  };
  j["expectation"] = emit(report.expectation);
  j["second_moment"] = emit(report.second_moment);
  j["variance"] = emit(report.variance);
  if (!report.higher.empty()) {
    Json higher = Json::array();
    for (const auto& h : report.higher) {
      Json hj;
      hj["r"] = h.r;
      hj["value"] = emit(h.value);
      hj["truncation_bound"] = emit(h.bound);
      higher.push_back(std::move(hj));
    }
    j["higher"] = std::move(higher);
  }
  return j;
}

Json estimate_report_json(const mc::EstimateReport& report) {
  Json j;
  j["rng"] = report.rng_scheme;
  j["seed"] = report.seed;
  j["replications"] = report.replications;
  j["c"] = report.c;
  j["p"] = report.p_f64;
  j["mean"] = report.mean;
  j["variance"] = report.variance;
  j["std_error_mean"] = report.std_error_mean;
  j["aborted"] = report.aborted;
  Json tail = Json::array();
  for (const auto& t : report.tail) {
    Json tj;
    tj["k"] = t.k;
    tj["estimate"] = t.estimate;
    tj["std_error"] = t.std_error;
    tj["exceed_count"] = t.exceed_count;
    tail.push_back(std::move(tj));
  }
  j["tail"] = std::move(tail);
  return j;
}

namespace {

Json rational_vector_json(const std::vector<Rational>& v) {
  Json arr = Json::array();
  for (const Rational& q : v) arr.push_back(to_string(q));
  return arr;
}

}  // namespace

Json scan_report_json(const majorization::ScanReport& report) {
  using majorization::ScanScheme;
  Json j;
  j["n"] = report.params.n;
  j["c"] = report.params.c;
  j["k_max"] = report.params.k_max;
  j["scheme"] =
      report.params.scheme == ScanScheme::grid ? "grid" : "random";
  j["resolution"] = report.params.resolution;
  if (report.params.scheme == ScanScheme::random) {
    j["samples"] = report.params.samples;
    j["seed"] = report.params.seed;
  }
  j["sample_count"] = report.sample_count;
  j["min_margin_pv"] = rational_json(report.min_margin_pv);
  j["argmin_pv"] = {{"p", rational_vector_json(report.argmin_pv_p)},
                    {"k", report.argmin_pv_k}};
  j["min_margin_vu"] = rational_json(report.min_margin_vu);
  j["argmin_vu"] = {{"p", rational_vector_json(report.argmin_vu_p)},
                    {"k", report.argmin_vu_k}};
  if (report.counterexample) {
    const auto& ce = *report.counterexample;
    Json cj;
    cj["p"] = rational_vector_json(ce.p);
    cj["c"] = ce.c;
    cj["k"] = ce.k;
    cj["margin_pv"] = rational_json(ce.margin_pv);
    cj["margin_vu"] = rational_json(ce.margin_vu);
    j["counterexample"] = std::move(cj);
  } else {
    j["counterexample"] = nullptr;
  }
  return j;
}

Json flatten_trace_json(const majorization::FlattenTrace& trace) {
  Json j;
  j["steps"] = Json::array();
  for (std::size_t s = 0; s < trace.steps.size(); ++s) {
    const auto& step = trace.steps[s];
    Json sj;
    sj["step"] = s + 1;
    sj["i"] = step.i + 1;  // 1-based in the text interfaces
    sj["j"] = step.j + 1;
    sj["lambda"] = to_string(step.lambda);
    sj["after"] = rational_vector_json(step.after.weights());
    j["steps"].push_back(std::move(sj));
  }
  j["final"] = rational_vector_json(trace.final.weights());
  j["step_count"] = trace.steps.size();
  return j;
}

Json aggregate_report_json(const iceberg::AggregateReport& report) {
  Json j;
  j["rounds"] = report.rounds;
  j["seed"] = report.seed;
  j["rng"] = mc::kRngScheme;
  Json routers = Json::array();
  for (const auto& r : report.routers) {
    Json rj;
    rj["name"] = r.name;
    rj["n"] = r.n;
    rj["c"] = r.c;
    rj["null_mass"] = to_string(r.null_mass);
    rj["almost_uniform"] = r.almost_uniform;
    rj["rounds"] = r.rounds;
    rj["aborted"] = r.aborted;
    rj["empirical_mean"] = r.empirical_mean;
    rj["q50"] = r.q50;
    rj["q90"] = r.q90;
    rj["q99"] = r.q99;
    rj["exact_mean"] = rational_json(r.exact_mean);
    rj["exact_mean_f64"] = to_double(r.exact_mean);
    rj["uniform_baseline"] = rational_json(r.uniform_baseline);
    rj["uniform_baseline_f64"] = to_double(r.uniform_baseline);
    routers.push_back(std::move(rj));
  }
  j["routers"] = std::move(routers);
  j["pooled_mean"] = report.pooled_mean;
  j["pooled_variance"] = report.pooled_variance;
  return j;
}

std::string csv_field(std::string_view s) {
  bool needs_quote = s.find_first_of(",\"\n") != std::string_view::npos;
  if (!needs_quote) return std::string(s);
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t hash = 0xCBF29CE484222325ull;
  for (unsigned char ch : data) {
    hash ^= ch;
    hash *= 0x100000001B3ull;
  }
  return hash;
}

}  // namespace ccollect
