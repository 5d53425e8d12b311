#pragma once

#include <boost/multiprecision/float128.hpp>

#include <limits>
#include <string>

namespace thetacf {

/// Working floating type of the numeric modules: IEEE binary128
/// (113-bit significand).
using Real = boost::multiprecision::float128;

inline constexpr int kRealBits = std::numeric_limits<Real>::digits;

inline Real real_epsilon() { return std::numeric_limits<Real>::epsilon(); }

/// Shortest round-trippable decimal form used in reports.
std::string format_real(const Real& x, int digits = 36);

/// Parses a decimal literal at full binary128 precision.
Real parse_real(const std::string& text);

}  // namespace thetacf
