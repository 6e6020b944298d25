#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "tepui/poly_matrix.hpp"
#include "tepui/polynomial.hpp"

namespace tepui {

enum class OrderKind { GrevLex, Lex };

/// Monomial order on ring elements; on free modules it is extended
/// position-over-term with the lower component index taking priority.
struct MonomialOrder {
  OrderKind kind = OrderKind::GrevLex;

  /// Three-way comparison of monomials: negative, zero, positive.
  int compare(const Monomial& a, const Monomial& b) const;
  /// Comparison of module terms (component, monomial).
  int compare(std::size_t comp_a, const Monomial& a, std::size_t comp_b, const Monomial& b) const;
};

/// A finite set of vectors in the free module Q[x]^rank.
struct ModuleBasis {
  RingPtr ring;
  std::size_t rank = 1;
  std::vector<PolyVector> columns;
  MonomialOrder order;
  bool is_groebner = false;

  ModuleBasis() : ring(make_ring({})) {}
  ModuleBasis(RingPtr r, std::size_t p, std::vector<PolyVector> cols = {}, MonomialOrder o = {});

  /// An ideal: rank one, each generator a single polynomial.
  static ModuleBasis ideal(RingPtr r, const std::vector<Polynomial>& gens, MonomialOrder o = {});
  static ModuleBasis from_matrix(const PolyMatrix& m, MonomialOrder o = {});

  PolyMatrix matrix() const;
  /// Generators of an ideal basis (rank must be one).
  std::vector<Polynomial> ideal_generators() const;
};

/// Reduced Groebner basis of the submodule generated by `gens`. Buchberger's
/// algorithm with the product criterion (ideals only), the chain criterion,
/// and normal pair selection; output sorted by increasing leading term.
ModuleBasis groebner_basis(const ModuleBasis& gens);

/// Full normal form of `v` modulo the Groebner basis `gb`.
PolyVector normal_form(const PolyVector& v, const ModuleBasis& gb);

bool module_member(const PolyVector& v, const ModuleBasis& basis);
bool ideal_member(const Polynomial& f, const ModuleBasis& ideal);

/// Coefficients lambda with sum_i lambda_i * basis.columns[i] == v, or nullopt
/// when v is not in the submodule. The result is checked by re-expansion.
std::optional<std::vector<Polynomial>> lift_combination(const PolyVector& v, const ModuleBasis& basis);

/// f in sqrt(I), decided by 1 in I + (1 - t f) over Q[x, t].
bool radical_member(const Polynomial& f, const ModuleBasis& ideal);

/// Generators of the module of relations among basis.columns (Schreyer's
/// construction), returned as a reduced Groebner basis in Q[x]^(#columns).
ModuleBasis syzygies(const ModuleBasis& basis);

/// Leading (component, monomial) pairs of a Groebner basis.
std::vector<std::pair<std::size_t, Monomial>> leading_terms(const ModuleBasis& gb);

/// Number of standard (component, monomial) pairs of total degree <= max_degree,
/// i.e. those not divisible by any leading term of `gb`.
std::size_t count_standard_terms(const ModuleBasis& gb, int max_degree);

/// All exponent tuples in `nvars` variables of total degree exactly `degree`.
std::vector<Monomial> monomials_of_degree(std::size_t nvars, int degree);

}  // namespace tepui

namespace tepui {

/// Some rational common zeros of an ideal, found by back substitution through
/// a lex Groebner basis: each step takes the rational roots of the univariate
/// gcd of the basis elements left in one variable, and free variables are
/// assigned 0, 1, -1 and a seeded random value. Not exhaustive; every returned
/// point is checked against the generators.
std::vector<RationalPoint> rational_zeros(const ModuleBasis& ideal, std::size_t max_points = 16,
                                          std::uint64_t seed = 0);

}  // namespace tepui
