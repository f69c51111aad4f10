// Exact integer arithmetic used throughout the library.

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace graphk {

using Int = boost::multiprecision::cpp_int;

inline Int abs_int(const Int& x) { return x < 0 ? Int(-x) : x; }

// Floor division for a positive divisor, so the remainder a - b*fdiv(a, b)
// always lands in [0, b).
inline Int fdiv(const Int& a, const Int& b) {
  Int q = a / b;
  if (a % b < 0) --q;
  return q;
}

}  // namespace graphk
