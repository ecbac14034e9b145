#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace fairalloc {

using Value = std::int64_t;
using Rational = boost::rational<std::int64_t>;

/// Parses "p", "p/q" or a plain decimal such as "0.25". Throws
/// std::invalid_argument on malformed input or a zero denominator.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& r);

/// Exact test value >= bound.
inline bool at_least(Value value, const Rational& bound) {
  return static_cast<__int128>(value) * bound.denominator() >= static_cast<__int128>(bound.numerator());
}

long double to_long_double(const Rational& r);

}  // namespace fairalloc
