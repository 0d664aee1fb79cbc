#ifndef CCOLLECT_ERRORS_HPP
#define CCOLLECT_ERRORS_HPP

#include <stdexcept>

namespace ccollect {

/// An exact evaluation would exceed its enumeration budget (subset count,
/// sequence count, state-space size or term count). The message says which
/// budget and what to use instead.
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ccollect

#endif  // CCOLLECT_ERRORS_HPP
