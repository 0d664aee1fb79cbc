#ifndef CCOLLECT_SERIALIZE_HPP
#define CCOLLECT_SERIALIZE_HPP

#include <cstdint>
#include <string>
#include <string_view>

#include <json.hpp>

#include "ccollect/collector.hpp"
#include "ccollect/iceberg.hpp"
#include "ccollect/majorization.hpp"
#include "ccollect/montecarlo.hpp"
#include "ccollect/scalar.hpp"

namespace ccollect {

// Key order in emitted JSON is fixed (ordered_json) so that identical
// inputs produce byte-identical output files.
using Json = nlohmann::ordered_json;

/// {"numerator":"a","denominator":"b"} — exact-mode wire form.
Json rational_json(const Rational& q);

/// Exact values as rational objects, float64 as IEEE doubles (plus the
/// precision warning when it fired).
Json value_json(const Value& v);

Json tail_curve_json(const TailCurve& curve);
Json moment_report_json(const MomentReport& report, Mode mode);
Json estimate_report_json(const mc::EstimateReport& report);
Json scan_report_json(const majorization::ScanReport& report);
Json flatten_trace_json(const majorization::FlattenTrace& trace);
Json aggregate_report_json(const iceberg::AggregateReport& report);

/// RFC-4180-style field quoting (only when needed).
std::string csv_field(std::string_view s);

/// FNV-1a 64-bit; used for the input hash echoed in every output record.
std::uint64_t fnv1a64(std::string_view data);

}  // namespace ccollect

#endif  // CCOLLECT_SERIALIZE_HPP
