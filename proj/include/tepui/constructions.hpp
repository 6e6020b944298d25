#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tepui/bundle.hpp"
#include "tepui/groebner.hpp"
#include "tepui/modules.hpp"

namespace tepui {

/// Polynomial map from the source ring to the target ring: target coordinate
/// i is components[i], a polynomial in the source variables.
struct PolyMap {
  RingPtr source, target;
  std::vector<Polynomial> components;

  static PolyMap identity(const RingPtr& ring);
  bool is_identity() const;
  RationalPoint apply(const RationalPoint& p) const;
  RealPoint apply(const RealPoint& p) const;
  /// Composition g o f for g over the target ring.
  Polynomial pull(const Polynomial& g) const;
  /// Jacobian matrix (target dims x source dims).
  PolyMatrix jacobian() const;
};

/// Rank N + N'; generators block diagonal; cells are intersected pairwise.
Bundle direct_sum(const Bundle& a, const Bundle& b);

/// Rank N N'; generators g (x) e'_j and e_i (x) g' (row index i N' + j);
/// cells are intersected pairwise.
Bundle tensor(const Bundle& a, const Bundle& b);

/// Generators and cell polynomials composed with f. The image of `samples`
/// seeded points of the source domain must land in the domain of e.
Bundle pullback(const Bundle& e, const PolyMap& f, std::optional<Box> source_domain = std::nullopt,
                std::uint64_t seed = 0, std::size_t samples = 200);

/// Q[x] / I_m^(k+1) with its standard monomial basis.
struct JetModel {
  RationalPoint base;
  int order = 0;
  ModuleBasis ideal;  // reduced Groebner basis of I_m^(k+1)
  std::vector<Monomial> standard_monomials;

  std::size_t dimension() const { return standard_monomials.size(); }
};

JetModel make_jet_model(const RingPtr& ring, const RationalPoint& m, int k);

/// dim_Q of Q / I_m^(k+1) Q.
std::size_t jet_dimension(const FPModule& q, const RationalPoint& m, int k);

/// C^inf / {functions vanishing on [lo, hi]} on the line: a module whose
/// sections are not polynomial. Only its jets are used. Requires lo < hi.
struct FlatSpec {
  std::optional<Rational> lo, hi;
  bool contains(const Rational& x) const;
};

using JetFactor = std::variant<FPModule, FlatSpec>;

/// Dimension of the order-k jet model at m of Q (x) Q' (univariate). A flat
/// factor contributes the full jet algebra when m lies in its vanishing set
/// (flat functions have zero jets there) and kills the product otherwise.
std::size_t jet_module_tensor(const JetFactor& a, const JetFactor& b, const Rational& m, int k);

/// Order-k jet dimension at m of the section module of a univariate bundle.
/// Polynomial presentations: jets of the fiber determination of coker G.
/// Cellwise rank-one bundles: classified from the fibers of D just left of m,
/// at m and just right of m.
std::size_t bundle_section_jet_dim(const Bundle& e, const Rational& m, int k);

struct BaseChangeReport {
  bool alpha_D_surjective_at_order_k = true;
  bool ker_alpha_nontrivial = false;
  /// First generator of Gamma(f*D) outside f*Gamma(D) + I_m^(k+1) at order k.
  std::optional<PolyVector> witness;
  /// Membership of every Gamma(f*D) generator in f*Gamma(D) without truncation.
  bool globally_surjective = true;
  std::string method;
  std::vector<PolyVector> pulled_back_generators;
  std::vector<PolyVector> pointwise_generators;
};

/// Compares f*Gamma(D) (pulled-back generators of the pointwise sections of
/// D) with Gamma(f*D) at source point m and jet order k. Gamma(f*D) is
/// supplied, or detected for univariate principal D (content c, primitive
/// part u: sections are generated by rho(c) u), or taken to equal the
/// pullback when f is a submersion.
BaseChangeReport base_change_comparison(std::size_t v_rank, const ModuleBasis& d, const PolyMap& f,
                                        const RationalPoint& m, int k,
                                        const std::optional<std::vector<PolyVector>>& gamma_fd = std::nullopt);

/// Generators of the sections pointwise in span D for a univariate principal
/// D = <c u>: rho(c) u. UnsupportedError otherwise.
std::vector<PolyVector> pointwise_sections_univariate(const ModuleBasis& d);

}  // namespace tepui
