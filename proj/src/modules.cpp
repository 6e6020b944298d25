#include "tepui/modules.hpp"

#include <random>

#include "tepui/errors.hpp"
#include "tepui/smith.hpp"
#include "tepui/univariate.hpp"

namespace tepui {

std::size_t fp_fiber_dim(const FPModule& q, const RationalPoint& m) {
  return q.free_rank() - matrix_rank_at(q.presentation, m);
}

std::size_t fp_fiber_dim(const FPModule& q, const RealPoint& m, double tol) {
  return q.free_rank() - matrix_rank_at(q.presentation, m, tol);
}

std::string to_string(Visibility v) {
  switch (v) {
    case Visibility::CertifiedInvisible: return "certified_invisible";
    case Visibility::CertifiedVisible: return "certified_visible";
    case Visibility::SampledInvisibleUncertified: return "sampled_invisible_uncertified";
  }
  return "?";
}

namespace {

PolyMatrix with_column(const PolyMatrix& p, const PolyVector& v) {
  return p.hconcat(PolyMatrix::from_columns(p.ring(), p.rows(), {v}));
}

/// k-minors of m whose column set contains the last column.
std::vector<Polynomial> minors_using_last(const PolyMatrix& m, std::size_t k) {
  std::vector<Polynomial> out;
  const std::size_t last = m.cols() - 1;
  for (const auto& rs : subsets(m.rows(), k))
    for (auto cs : subsets(last, k - 1)) {
      cs.push_back(last);
      PolyMatrix s(m.ring(), k, k);
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) s.at(i, j) = m.at(rs[i], cs[j]);
      out.push_back(determinant(s));
    }
  return out;
}

bool jumps(const PolyMatrix& p, const PolyMatrix& pv, const RationalPoint& m) {
  return matrix_rank_at(pv, m) > matrix_rank_at(p, m);
}

}  // namespace

InvisibilityVerdict invisible_test(const FPModule& q, const PolyVector& v_in, std::size_t samples,
                                   std::uint64_t seed) {
  const PolyMatrix& p = q.presentation;
  if (v_in.size() != p.rows())
    throw DimensionError("element has length " + std::to_string(v_in.size()) + ", module has free rank " +
                         std::to_string(p.rows()));
  const RingPtr ring = p.ring();
  PolyVector v;
  for (const auto& e : v_in) v.push_back(e.in_ring(ring));
  PolyMatrix pv = with_column(p, v);
  InvisibilityVerdict out;

  // (i) Nullstellensatz certificate.
  bool certified = true;
  const std::size_t top = std::min(p.rows(), p.cols() + 1);
  for (std::size_t k = 1; k <= top && certified; ++k) {
    std::vector<Polynomial> ik;
    if (k <= std::min(p.rows(), p.cols()))
      for (auto& mi : minors(p, k))
        if (!mi.is_zero()) ik.push_back(std::move(mi));
    ModuleBasis ideal = groebner_basis(ModuleBasis::ideal(ring, ik));
    std::size_t checked = 0;
    for (const auto& f : minors_using_last(pv, k)) {
      if (f.is_zero()) continue;
      ++checked;
      bool ok = ik.empty() ? false : radical_member(f, ideal);
      if (!ok) {
        certified = false;
        break;
      }
    }
    out.certificate.push_back("k=" + std::to_string(k) + ": " + std::to_string(checked) + " nonzero minors " +
                              (certified ? "in the radical of I_k(P)" : "with one outside the radical of I_k(P)"));
  }
  if (certified) {
    out.status = Visibility::CertifiedInvisible;
    return out;
  }

  // (ii) Candidate points: where some minor ideal of P vanishes, then random rationals.
  std::vector<RationalPoint> candidates;
  for (std::size_t k = 1; k <= std::min(p.rows(), p.cols()); ++k) {
    std::vector<Polynomial> ik;
    for (auto& mi : minors(p, k))
      if (!mi.is_zero()) ik.push_back(std::move(mi));
    for (auto& z : rational_zeros(ModuleBasis::ideal(ring, ik), 16, seed + k)) candidates.push_back(std::move(z));
  }
  if (p.cols() == 0) candidates.push_back(RationalPoint(ring->size(), 0));
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> num(-400, 400), den(1, 40);
  for (std::size_t s = 0; s < samples; ++s) {
    RationalPoint m(ring->size());
    for (auto& c : m) {
      c = Rational(num(rng), den(rng));
      c.canonicalize();
    }
    candidates.push_back(std::move(m));
  }
  for (const auto& m : candidates) {
    ++out.points_checked;
    if (jumps(p, pv, m)) {
      out.status = Visibility::CertifiedVisible;
      out.witness = m;
      return out;
    }
  }
  out.status = Visibility::SampledInvisibleUncertified;
  return out;
}

FiberDetermination fiber_determination_univariate(const FPModule& q) {
  const RingPtr& ring = q.ring();
  if (ring->size() > 1)
    throw UnsupportedError("fiber determination is implemented for univariate modules only (got " +
                           std::to_string(ring->size()) + " variables)");
  const std::size_t p = q.free_rank();
  SmithForm s = smith_normal_form(q.presentation);
  FiberDetermination out;
  std::vector<PolyVector> quotient_cols;
  for (std::size_t i = 0; i < s.diagonal.size(); ++i) {
    UPoly d = to_upoly(s.diagonal[i]);
    if (d.empty()) break;  // zero entries come last: free summands
    UPoly rho = real_radical_part(d);
    out.diagonal.push_back(s.diagonal[i]);
    out.rho.push_back(from_upoly(rho, ring));
    PolyVector col(p, Polynomial(ring));
    Polynomial rp = from_upoly(rho, ring);
    for (std::size_t r = 0; r < p; ++r) col[r] = s.U_inv.at(r, i) * rp;
    quotient_cols.push_back(col);
    if (degree(rho) < degree(d)) out.invisible_generators.push_back(col);
  }
  out.quotient = FPModule{PolyMatrix::from_columns(ring, p, quotient_cols)};
  return out;
}

ModuleBasis image_basis(const FPModule& q) {
  return groebner_basis(ModuleBasis::from_matrix(q.presentation));
}

Bundle module_to_bundle(const FPModule& q) {
  ModuleBasis gb = image_basis(q);
  return Bundle::polynomial(PolyMatrix::from_columns(q.ring(), q.free_rank(), gb.columns));
}

}  // namespace tepui
