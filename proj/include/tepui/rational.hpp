#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace tepui {

using Rational = mpq_class;
using Integer = mpz_class;

using RationalPoint = std::vector<Rational>;
using RealPoint = std::vector<double>;

/// Parses "3", "-7/2", "0.125" or "1e-3" into an exact rational.
Rational parse_rational(std::string_view text);

/// Canonical text: "a" or "a/b".
std::string to_string(const Rational& q);

RealPoint to_real(const RationalPoint& p);

/// Exact rational value of a finite double.
Rational from_double(double v);

/// Shortest-stable text for a double: 17 significant digits.
std::string format_double(double v);

}  // namespace tepui
