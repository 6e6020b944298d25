#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tepui/errors.hpp"
#include "tepui/groebner.hpp"
#include "tepui/poly_matrix.hpp"

namespace tepui {

/// Section sum_j f_j e_j of the trivial rank-N bundle, or a vector field
/// sum_i X_i d/dx_i when the length is the variable count.
using Section = PolyVector;

/// Anchor plus frame structure functions [e_i, e_j] = sum_k c[i][j][k] e_k.
class AnchoredBracket {
 public:
  /// Zero structure functions. The anchor is n x N with column j = rho(e_j).
  explicit AnchoredBracket(PolyMatrix anchor);

  const RingPtr& ring() const { return anchor_.ring(); }
  std::size_t rank() const { return anchor_.cols(); }
  const PolyMatrix& anchor() const { return anchor_; }

  /// Sets c[i][j] = v and c[j][i] = -v; i == j must come with v = 0.
  void set_structure(std::size_t i, std::size_t j, const Section& v);
  const Section& structure(std::size_t i, std::size_t j) const { return c_.at(i).at(j); }

 private:
  PolyMatrix anchor_;
  std::vector<std::vector<Section>> c_;
};

/// X(f) for a vector field X.
Polynomial apply_field(const Section& field, const Polynomial& f);
/// rho(a) = A a as a vector field.
Section anchor_of(const AnchoredBracket& l, const Section& a);
/// [X, Y] of polynomial vector fields.
Section lie_bracket(const Section& x, const Section& y);

/// Leibniz expansion from the frame table:
/// sum f_i g_j c_ij + sum_j rho(a)(g_j) e_j - sum_i rho(b)(f_i) e_i.
Section bracket(const Section& a, const Section& b, const AnchoredBracket& l);

using BracketFn = std::function<Section(const Section&, const Section&)>;

struct LeibnizReport {
  bool holds = true;
  /// Frame indices, slot (0: [f e_i, e_j], 1: [e_i, f e_j]) and the nonzero residual.
  std::optional<std::size_t> i, j, slot;
  std::optional<Section> residual;
};

/// Checks [e_i, f e_j] = f [e_i, e_j] + rho(e_i)(f) e_j and the mirrored rule in the
/// first slot, for all frame pairs, with f a generic degree-2 polynomial whose
/// coefficients are fresh variables. `fn` defaults to the table bracket; a
/// hand-supplied bracket must accept sections over the extended ring.
LeibnizReport check_leibniz(const AnchoredBracket& l, const BracketFn& fn = nullptr);

struct JacobiEntry {
  std::size_t i, j, k;
  Section value;
};

/// Jac(e_i, e_j, e_k) for i < j < k.
std::vector<JacobiEntry> check_jacobi(const AnchoredBracket& l);
bool jacobi_vanishes(const std::vector<JacobiEntry>& table);

struct WeakJacobiReport {
  bool holds = true;
  std::optional<JacobiEntry> failing;
  std::optional<Section> anchored;  // A Jac of the failing triple
};

/// A Jac(e_i, e_j, e_k) = 0 for every frame triple.
WeakJacobiReport check_weak_jacobi(const AnchoredBracket& l);

struct IdealReport {
  bool holds = true;
  std::optional<std::size_t> frame;
  std::optional<Section> generator, value;
};

/// [d, e_j] in <D> for every reduced Groebner generator d of D and every frame e_j.
IdealReport check_ideal(const ModuleBasis& d, const AnchoredBracket& l);

struct ObstructionWitness {
  std::size_t frame;
  Section sigma, value;
  RationalPoint point;
};

/// Searches a = e_j and sigma = x^alpha d_i (deg alpha <= bound, generators of D
/// in order) for [a, sigma] not pointwise in D. The point is re-verified:
/// sigma(m) in span D(m) and [a, sigma](m) outside it, by exact ranks.
/// nullopt means "none up to the bound", never a proof of absence.
std::optional<ObstructionWitness> quotient_obstruction(const ModuleBasis& d, const AnchoredBracket& l,
                                                        int bound = 2, std::uint64_t seed = 0);

/// Raised when [rho(e_i), rho(e_j)] is not in the module generated by the anchor columns.
class InvolutivityError : public DomainError {
 public:
  InvolutivityError(std::size_t i, std::size_t j, Section field, const std::string& what)
      : DomainError(what), i(i), j(j), field(std::move(field)) {}
  std::size_t i, j;
  Section field;
};

/// c~_ij lifts [rho e_i, rho e_j] through the anchor columns; c_ij = (c~_ij - c~_ji) / 2.
AnchoredBracket synthesize_bracket(const PolyMatrix& anchor);

struct FoliationReport {
  ModuleBasis module;  // reduced Groebner basis of the anchor image, rank n
  bool involutive = true;
  std::vector<std::pair<std::size_t, std::size_t>> failing_pairs;
  /// Generators after bracket-and-adjoin rounds (starting from the nonzero anchor columns).
  std::vector<Section> closure;
  std::size_t rounds = 0;
  bool closure_complete = true;
};

/// Module generated by the anchor, with the involutivity verdict and a closure
/// suggestion from at most `max_rounds` bracket-and-adjoin rounds.
FoliationReport foliation_of(const AnchoredBracket& l, std::size_t max_rounds = 5);

}  // namespace tepui
