#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tepui/rational.hpp"

namespace tepui {

/// Exponent tuple, one entry per ring variable.
using Monomial = std::vector<int>;

/// An ordered list of variable names. Rings compare equal by their names.
class Ring {
 public:
  explicit Ring(std::vector<std::string> vars);

  const std::vector<std::string>& vars() const { return vars_; }
  std::size_t size() const { return vars_.size(); }
  std::optional<std::size_t> index_of(std::string_view name) const;

  bool operator==(const Ring& other) const { return vars_ == other.vars_; }

 private:
  std::vector<std::string> vars_;
};

using RingPtr = std::shared_ptr<const Ring>;

RingPtr make_ring(std::vector<std::string> vars);

/// Ring of `base` followed by `extra` (names must be fresh).
RingPtr extend_ring(const RingPtr& base, const std::vector<std::string>& extra);

/// Returns a name not used by `ring`, derived from `stem`.
std::string fresh_variable(const Ring& ring, const std::string& stem);

/// The ring shared by `a` and `b`. A ring with no variables is compatible with
/// any other ring; otherwise names must agree.
RingPtr common_ring(const RingPtr& a, const RingPtr& b);

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Terms live in a map keyed by exponent tuple, so two polynomials with the
/// same terms compare equal regardless of how they were built. Zero
/// coefficients are never stored.
class Polynomial {
 public:
  using TermMap = std::map<Monomial, Rational>;

  Polynomial();
  explicit Polynomial(RingPtr ring);
  Polynomial(RingPtr ring, TermMap terms);

  static Polynomial constant(RingPtr ring, const Rational& c);
  static Polynomial variable(RingPtr ring, std::size_t index);
  static Polynomial variable(RingPtr ring, std::string_view name);
  static Polynomial monomial(RingPtr ring, Monomial exps, const Rational& c = 1);

  const RingPtr& ring() const { return ring_; }
  std::size_t nvars() const { return ring_->size(); }
  const TermMap& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Rational constant_term() const;
  /// Total degree; -1 for the zero polynomial.
  int total_degree() const;
  int degree_in(std::size_t var) const;

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(const Polynomial& other);
  Polynomial& operator*=(const Rational& c);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
  friend Polynomial operator*(const Rational& c, Polynomial a) { return a *= c; }

  Polynomial pow(unsigned e) const;

  bool operator==(const Polynomial& other) const;

  Rational evaluate(std::span<const Rational> point) const;
  double evaluate(std::span<const double> point) const;

  Polynomial differentiate(std::size_t var) const;
  Polynomial differentiate(std::string_view var) const;

  /// Composition: variable i is replaced by images[i]. All images must share a ring.
  Polynomial substitute(const std::vector<Polynomial>& images, const RingPtr& target) const;

  /// The same polynomial viewed in `target`, matching variables by name.
  /// Variables of this ring absent from `target` must not occur.
  Polynomial in_ring(const RingPtr& target) const;

  /// Text form accepted by parse_polynomial, e.g. "3/2*x^2*y - 1".
  std::string to_string() const;

 private:
  void adopt_ring(const RingPtr& other);

  RingPtr ring_;
  TermMap terms_;
};

using PolyVector = std::vector<Polynomial>;

/// Parses text in the grammar: sums of products of rationals, variables,
/// parenthesized expressions and non-negative integer powers. Division is
/// allowed only by nonzero constants.
Polynomial parse_polynomial(std::string_view text, const RingPtr& ring);

std::ostream& operator<<(std::ostream& os, const Polynomial& p);

}  // namespace tepui
