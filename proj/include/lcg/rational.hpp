#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace lcg {

/// Exact rational number. GMP keeps it canonical (gcd 1, positive
/// denominator) after every arithmetic operation.
using Rational = mpq_class;

/// "p" for integers, "p/q" otherwise.
std::string to_string(const Rational& q);

/// Parses "p", "-p", "p/q" (q != 0). Surrounding whitespace is ignored.
/// Throws std::invalid_argument on malformed input.
Rational parse_rational(std::string_view text);

inline bool is_zero(const Rational& q) { return sgn(q) == 0; }

}  // namespace lcg
