#pragma once

#include <cstdint>
#include <limits>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace lfk {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline std::string to_string(const Integer& v) { return v.str(); }

inline bool fits_int64(const Integer& v) {
  return v >= std::numeric_limits<std::int64_t>::min() &&
         v <= std::numeric_limits<std::int64_t>::max();
}

// Floor division and non-negative remainder for machine integers.
inline long floor_div(long a, long b) {
  long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline long mod_pos(long a, long m) {
  long r = a % m;
  return r < 0 ? r + m : r;
}

inline Integer mod_pos(const Integer& a, const Integer& m) {
  Integer r = a % m;
  return r < 0 ? Integer(r + m) : r;
}

}  // namespace lfk
