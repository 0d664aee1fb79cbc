#ifndef CCOLLECT_COMBINATORICS_HPP
#define CCOLLECT_COMBINATORICS_HPP

#include <stdexcept>

#include "ccollect/rational.hpp"

namespace ccollect {

/// C(n, k) as an exact integer; 0 when k > n.
inline Integer binomial(unsigned long n, unsigned long k) {
  Integer out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

/// H_l = sum_{i=1..l} 1/i, H_0 = 0.
inline Rational harmonic(long l) {
  if (l < 0) throw std::invalid_argument("harmonic: negative index");
  Rational h(0);
  for (long i = 1; i <= l; ++i) h += make_rational(1, i);
  return h;
}

}  // namespace ccollect

#endif  // CCOLLECT_COMBINATORICS_HPP
