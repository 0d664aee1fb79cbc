#ifndef CCOLLECT_VERSION_HPP
#define CCOLLECT_VERSION_HPP

namespace ccollect {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr const char* kToolName = "ccollect";

}  // namespace ccollect

#endif  // CCOLLECT_VERSION_HPP
