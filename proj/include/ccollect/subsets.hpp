#ifndef CCOLLECT_SUBSETS_HPP
#define CCOLLECT_SUBSETS_HPP

#include <cstdint>

#include "ccollect/combinatorics.hpp"
#include "ccollect/errors.hpp"
#include "ccollect/rational.hpp"

namespace ccollect {

/// Index sets live in machine-word bitmasks, so exact enumeration tops out
/// at n = 62 coupons (well past the subset-count cap anyway).
inline constexpr int kMaxMaskBits = 62;

/// Default per-call budget for enumerated subsets.
inline constexpr std::uint64_t kDefaultSubsetCap = std::uint64_t{1} << 24;

/// Smallest i-element subset of {0,...,n-1} in mask order.
inline std::uint64_t first_subset(int i) {
  return (i == 0) ? 0 : ((std::uint64_t{1} << i) - 1);
}

/// Gosper's hack: advance to the next mask with the same popcount.
/// Returns false once the subsets of {0,...,n-1} are exhausted.
inline bool next_subset(std::uint64_t& mask, int n) {
  if (mask == 0) return false;  // the empty set is its own orbit
  std::uint64_t c = mask & -mask;
  std::uint64_t r = mask + c;
  mask = (((r ^ mask) >> 2) / c) | r;
  return mask < (std::uint64_t{1} << n);
}

/// sum_{i=0}^{c-1} C(n,i): the subsets a closed-form evaluation visits.
inline Integer subsets_to_enumerate(int n, int c) {
  Integer total = 0;
  for (int i = 0; i < c; ++i) total += binomial(n, i);
  return total;
}

/// Throws CapExceeded when the closed-form enumeration would visit more
/// than `cap` subsets.
inline void require_subset_budget(int n, int c, std::uint64_t cap) {
  if (n > kMaxMaskBits)
    throw CapExceeded("subset enumeration limited to n <= 62 (bitmask width)");
  if (subsets_to_enumerate(n, c) > cap)
    throw CapExceeded(
        "subset enumeration cap exceeded; raise the cap, or use the "
        "almost-uniform closed form or Monte Carlo estimation");
}

}  // namespace ccollect

#endif  // CCOLLECT_SUBSETS_HPP
