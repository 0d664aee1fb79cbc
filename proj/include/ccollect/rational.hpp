#ifndef CCOLLECT_RATIONAL_HPP
#define CCOLLECT_RATIONAL_HPP

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace ccollect {

// Exact arithmetic is the reference path of the whole library: every
// closed form, recurrence and identity check is evaluated in Rational
// first, floating point is an explicitly requested approximation.
using Rational = mpq_class;
using Integer = mpz_class;

/// num/den reduced to lowest terms, den > 0.
inline Rational make_rational(Integer num, Integer den) {
  if (den == 0) throw std::invalid_argument("make_rational: zero denominator");
  Rational q(std::move(num), std::move(den));
  q.canonicalize();
  return q;
}

inline Rational make_rational(long num, long den) {
  return make_rational(Integer(num), Integer(den));
}

/// base^exp without canonicalization work: powers of a canonical
/// fraction stay canonical.
inline Rational rat_pow(const Rational& base, unsigned long exp) {
  Rational out;
  mpz_pow_ui(mpq_numref(out.get_mpq_t()), mpq_numref(base.get_mpq_t()), exp);
  mpz_pow_ui(mpq_denref(out.get_mpq_t()), mpq_denref(base.get_mpq_t()), exp);
  return out;
}

inline Integer int_pow(const Integer& base, unsigned long exp) {
  Integer out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exp);
  return out;
}

inline double to_double(const Rational& q) { return q.get_d(); }

/// Exact binary expansion of an IEEE double (no decimal rounding).
Rational rational_from_double(double x);

/// Canonical text form: "a/b", or "a" when the denominator is 1.
std::string to_string(const Rational& q);

class RationalParseError : public std::invalid_argument {
 public:
  RationalParseError(const std::string& what, std::size_t offset)
      : std::invalid_argument(what), offset_(offset) {}
  /// Byte offset of the first offending character within the token.
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Parses "a/b" or a plain decimal such as "0.25" or "7". Exact: decimals
/// become num/10^d. Throws RationalParseError with the offending offset.
Rational parse_rational(std::string_view text);

}  // namespace ccollect

#endif  // CCOLLECT_RATIONAL_HPP
