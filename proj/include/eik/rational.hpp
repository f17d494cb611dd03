#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>
#include <string_view>

namespace eik {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Parse "p", "-p", "p/q" with arbitrary-precision integers.
/// Whitespace is not accepted; q must be positive after normalization.
Rational parse_rational(std::string_view text);

/// Canonical form: "p" when the denominator is 1, else "p/q" with q > 0.
std::string format_rational(const Rational& r);

inline double to_double(const Rational& r) { return r.convert_to<double>(); }
inline long double to_long_double(const Rational& r) {
  return r.convert_to<long double>();
}

}  // namespace eik
