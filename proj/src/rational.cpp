#include "ccollect/rational.hpp"

#include <cctype>
#include <charconv>

#include "ccollect/scalar.hpp"

namespace ccollect {

Rational rational_from_double(double x) {
  Rational q;
  mpq_set_d(q.get_mpq_t(), x);
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char ch : s)
    if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  std::size_t base = 0;
  bool negative = false;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
    base = 1;
  }
  if (s.empty()) throw RationalParseError("empty rational", 0);

  auto fail = [&](std::size_t rel, const std::string& why) -> Rational {
    throw RationalParseError("invalid rational '" + std::string(text) +
                                 "': " + why,
                             base + rel);
  };

  Rational out;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    std::string_view num = s.substr(0, slash);
    std::string_view den = s.substr(slash + 1);
    if (!all_digits(num)) return fail(0, "numerator must be an integer");
    if (!all_digits(den)) return fail(slash + 1, "denominator must be an integer");
    Integer n(std::string(num), 10);
    Integer d(std::string(den), 10);
    if (d == 0) return fail(slash + 1, "zero denominator");
    out = make_rational(std::move(n), std::move(d));
  } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view whole = s.substr(0, dot);
    std::string_view frac = s.substr(dot + 1);
    if (!whole.empty() && !all_digits(whole))
      return fail(0, "malformed decimal");
    if (frac.empty() || !all_digits(frac))
      return fail(dot + 1, "malformed decimal");
    Integer n(std::string(whole.empty() ? "0" : whole) + std::string(frac), 10);
    out = make_rational(std::move(n), int_pow(Integer(10), frac.size()));
  } else {
    if (!all_digits(s)) return fail(0, "not a number");
    out = Rational(Integer(std::string(s), 10));
  }
  if (negative) out = -out;
  return out;
}

std::string Value::text() const {
  return mode == Mode::exact ? to_string(exact) : format_double(f64);
}

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

}  // namespace ccollect
