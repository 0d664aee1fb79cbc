#ifndef CCOLLECT_SCALAR_HPP
#define CCOLLECT_SCALAR_HPP

#include <cmath>
#include <string>

#include "ccollect/rational.hpp"

namespace ccollect {

enum class Mode { exact, float64 };

/// Alternating subset sums can cancel catastrophically in float64; a result
/// is flagged once some intermediate term exceeded this multiple of it.
inline constexpr double kPrecisionWarnRatio = 1e12;

/// Neumaier-compensated accumulator that also tracks the largest term.
class CompensatedSum {
 public:
  void add(double x) {
    double mag = std::fabs(x);
    if (mag > max_abs_) max_abs_ = mag;
    double t = sum_ + x;
    if (std::fabs(sum_) >= mag) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  double value() const { return sum_ + comp_; }
  double max_abs_term() const { return max_abs_; }

  bool lost_precision() const {
    double v = std::fabs(value());
    return max_abs_ > kPrecisionWarnRatio * (v > 0 ? v : 1e-300);
  }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
  double max_abs_ = 0.0;
};

/// float64-mode result; `precision_warning` is set when intermediate terms
/// dwarfed the result (see kPrecisionWarnRatio).
struct F64 {
  double value = 0.0;
  bool precision_warning = false;
};

/// Mode-tagged scalar for the text/JSON interfaces.
struct Value {
  Mode mode = Mode::exact;
  Rational exact;
  double f64 = 0.0;
  bool precision_warning = false;

  static Value from_exact(Rational q) {
    Value v;
    v.mode = Mode::exact;
    v.exact = std::move(q);
    return v;
  }
  static Value from_f64(const F64& x) {
    Value v;
    v.mode = Mode::float64;
    v.f64 = x.value;
    v.precision_warning = x.precision_warning;
    return v;
  }

  std::string text() const;
};

/// Shortest round-trip decimal form of a double.
std::string format_double(double x);

}  // namespace ccollect

#endif  // CCOLLECT_SCALAR_HPP
