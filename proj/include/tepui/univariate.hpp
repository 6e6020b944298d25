#pragma once

#include <cstddef>
#include <vector>

#include "tepui/polynomial.hpp"

namespace tepui {

/// Dense univariate polynomial: c[i] is the coefficient of x^i. Trimmed, so
/// the zero polynomial is the empty vector.
using UPoly = std::vector<Rational>;

/// Requires at most one variable (DimensionError otherwise).
UPoly to_upoly(const Polynomial& p);
Polynomial from_upoly(const UPoly& p, const RingPtr& ring);

void trim(UPoly& p);
int degree(const UPoly& p);
UPoly operator+(const UPoly& a, const UPoly& b);
UPoly operator-(const UPoly& a, const UPoly& b);
UPoly operator*(const UPoly& a, const UPoly& b);
UPoly operator*(const Rational& c, const UPoly& a);
UPoly derivative(const UPoly& p);
Rational eval(const UPoly& p, const Rational& x);

/// Quotient and remainder; b must be nonzero.
std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b);
UPoly monic(const UPoly& p);
/// Monic gcd; gcd(0, 0) = 0.
UPoly gcd(const UPoly& a, const UPoly& b);
/// Monic product of the distinct irreducible factors.
UPoly square_free_part(const UPoly& p);

/// Distinct rational roots, ascending.
std::vector<Rational> rational_roots(const UPoly& p);

/// Number of distinct real roots (Sturm).
std::size_t count_real_roots(const UPoly& p);
/// Number of distinct real roots in (a, b] (Sturm).
std::size_t count_roots_in(const UPoly& p, const Rational& a, const Rational& b);

/// Half-open isolating interval (lo, hi]; a rational root r is reported exactly as lo == hi == r.
struct RootInterval {
  Rational lo, hi;
  bool exact() const { return lo == hi; }
};

/// Isolating intervals for the distinct real roots, ascending, each of width <= width.
std::vector<RootInterval> isolate_real_roots(const UPoly& p, const Rational& width = Rational(1, 1 << 30));

/// Monic irreducible factors over Q of the square-free part of p (Kronecker's
/// method after removing rational roots). When the search space exceeds an
/// internal cap the remaining cofactor is returned as one factor.
std::vector<UPoly> irreducible_factors(const UPoly& p);

/// Product of the distinct irreducible factors of p that have a real root (monic; 1 when none).
UPoly real_radical_part(const UPoly& p);

}  // namespace tepui
