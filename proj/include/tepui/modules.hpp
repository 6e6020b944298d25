#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tepui/bundle.hpp"
#include "tepui/poly_matrix.hpp"

namespace tepui {

/// coker(P) for a p x q presentation matrix P over Q[x].
struct FPModule {
  PolyMatrix presentation;

  static FPModule free(const RingPtr& ring, std::size_t p) { return FPModule{PolyMatrix(ring, p, 0)}; }

  const RingPtr& ring() const { return presentation.ring(); }
  std::size_t free_rank() const { return presentation.rows(); }
};

/// p - rank P(m).
std::size_t fp_fiber_dim(const FPModule& q, const RationalPoint& m);
std::size_t fp_fiber_dim(const FPModule& q, const RealPoint& m, double tol = kDefaultRankTol);

enum class Visibility { CertifiedInvisible, CertifiedVisible, SampledInvisibleUncertified };

std::string to_string(Visibility v);

struct InvisibilityVerdict {
  Visibility status = Visibility::SampledInvisibleUncertified;
  /// Rational point with rank [P(m) | v(m)] > rank P(m); set iff certified_visible.
  std::optional<RationalPoint> witness;
  /// One line per minor size: which radical memberships were checked and how they came out.
  std::vector<std::string> certificate;
  /// Points checked on the sampling path.
  std::size_t points_checked = 0;
};

/// Three-valued invisibility decision for the class of v in coker(P). First the
/// Nullstellensatz certificate: every k-minor of [P | v] using the v column must
/// lie in the radical of the ideal of k-minors of P. When that fails, candidate
/// points are tried: rational zeros of the minor ideals of P (where the fiber
/// can jump) followed by `samples` seeded random rational points.
InvisibilityVerdict invisible_test(const FPModule& q, const PolyVector& v, std::size_t samples = 500,
                                   std::uint64_t seed = 0);

struct FiberDetermination {
  /// Generators of inv(Q), as vectors in the ambient free module.
  std::vector<PolyVector> invisible_generators;
  /// Presentation of Q / inv(Q).
  FPModule quotient;
  /// Smith diagonal d_i and the real-rooted radical parts rho_i.
  std::vector<Polynomial> diagonal, rho;
};

/// Univariate only. In Smith coordinates Q = (+) Q[x]/(d_i) (+) free, and the
/// invisible part of Q[x]/(d_i) is (rho_i)/(d_i), rho_i the product of the
/// distinct irreducible factors of d_i with a real root.
FiberDetermination fiber_determination_univariate(const FPModule& q);

/// Bundle of ambient rank p generated pointwise by the reduced Groebner basis of im P.
Bundle module_to_bundle(const FPModule& q);

/// Reduced Groebner basis of the column span of P.
ModuleBasis image_basis(const FPModule& q);

}  // namespace tepui
