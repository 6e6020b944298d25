#include "tepui/constructions.hpp"

#include <algorithm>

#include "tepui/errors.hpp"
#include "tepui/univariate.hpp"

namespace tepui {

// ---------------------------------------------------------------- maps

PolyMap PolyMap::identity(const RingPtr& ring) {
  PolyMap f{ring, ring, {}};
  for (std::size_t i = 0; i < ring->size(); ++i) f.components.push_back(Polynomial::variable(ring, i));
  return f;
}

bool PolyMap::is_identity() const {
  if (!(*source == *target)) return false;
  for (std::size_t i = 0; i < components.size(); ++i)
    if (!(components[i] == Polynomial::variable(source, i))) return false;
  return true;
}

RationalPoint PolyMap::apply(const RationalPoint& p) const {
  RationalPoint out;
  for (const auto& c : components) out.push_back(c.evaluate(p));
  return out;
}

RealPoint PolyMap::apply(const RealPoint& p) const {
  RealPoint out;
  for (const auto& c : components) out.push_back(c.evaluate(std::span<const double>(p)));
  return out;
}

Polynomial PolyMap::pull(const Polynomial& g) const {
  if (components.size() != target->size()) throw DimensionError("map has the wrong number of components");
  return g.in_ring(target).substitute(components, source);
}

PolyMatrix PolyMap::jacobian() const {
  PolyMatrix j(source, components.size(), source->size());
  for (std::size_t i = 0; i < components.size(); ++i)
    for (std::size_t k = 0; k < source->size(); ++k) j.at(i, k) = components[i].differentiate(k);
  return j;
}

// ---------------------------------------------------------------- bundles

namespace {

void require_same_base(const Bundle& a, const Bundle& b) {
  if (!(*a.ring == *b.ring)) throw DomainError("domain mismatch: bundles live over different variables");
  if (!(a.domain == b.domain)) throw DomainError("domain mismatch: bundles have different domain boxes");
}

Cell meet(const Cell& a, const Cell& b) {
  Cell c = a;
  c.conditions.insert(c.conditions.end(), b.conditions.begin(), b.conditions.end());
  return c;
}

template <class Combine>
Bundle refine(const Bundle& a, const Bundle& b, std::size_t rank, Combine combine) {
  require_same_base(a, b);
  Bundle out;
  out.ring = a.ring;
  out.ambient_rank = rank;
  out.domain = a.domain;
  for (const auto& pa : a.pieces)
    for (const auto& pb : b.pieces) out.pieces.push_back({meet(pa.cell, pb.cell), combine(pa.generators, pb.generators)});
  return out;
}

}  // namespace

Bundle direct_sum(const Bundle& a, const Bundle& b) {
  const std::size_t n = a.ambient_rank, n2 = b.ambient_rank;
  return refine(a, b, n + n2, [&](const PolyMatrix& g, const PolyMatrix& h) {
    PolyMatrix m(a.ring, n + n2, g.cols() + h.cols());
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < g.cols(); ++j) m.at(i, j) = g.at(i, j).in_ring(a.ring);
    for (std::size_t i = 0; i < n2; ++i)
      for (std::size_t j = 0; j < h.cols(); ++j) m.at(n + i, g.cols() + j) = h.at(i, j).in_ring(a.ring);
    return m;
  });
}

Bundle tensor(const Bundle& a, const Bundle& b) {
  const std::size_t n = a.ambient_rank, n2 = b.ambient_rank;
  return refine(a, b, n * n2, [&](const PolyMatrix& g, const PolyMatrix& h) {
    PolyMatrix m(a.ring, n * n2, g.cols() * n2 + n * h.cols());
    std::size_t col = 0;
    for (std::size_t c = 0; c < g.cols(); ++c)
      for (std::size_t j = 0; j < n2; ++j, ++col)
        for (std::size_t i = 0; i < n; ++i) m.at(i * n2 + j, col) = g.at(i, c).in_ring(a.ring);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t c = 0; c < h.cols(); ++c, ++col)
        for (std::size_t j = 0; j < n2; ++j) m.at(i * n2 + j, col) = h.at(j, c).in_ring(a.ring);
    return m;
  });
}

Bundle pullback(const Bundle& e, const PolyMap& f, std::optional<Box> source_domain, std::uint64_t seed,
                std::size_t samples) {
  if (f.components.size() != e.ring->size())
    throw DimensionError("map has " + std::to_string(f.components.size()) + " components, bundle has " +
                         std::to_string(e.ring->size()) + " variables");
  if (!(*f.target == *e.ring)) throw DimensionError("map target variables differ from the bundle's variables");
  Box dom = source_domain ? *source_domain : Box::unbounded(f.source->size());
  if (dom.sides.size() != f.source->size()) throw DimensionError("source domain dimension mismatch");
  if (!e.domain.is_unbounded()) {
    std::mt19937_64 rng(seed);
    for (std::size_t s = 0; s < samples; ++s) {
      RationalPoint p = dom.sample(rng);
      if (!e.domain.contains(f.apply(p))) throw DomainError("map sends a sampled source point outside the bundle's domain");
    }
  }
  Bundle out;
  out.ring = f.source;
  out.ambient_rank = e.ambient_rank;
  out.domain = dom;
  for (const auto& p : e.pieces) {
    Piece q;
    for (const auto& c : p.cell.conditions) q.cell.conditions.push_back({f.pull(c.poly), c.rel});
    q.generators = p.generators.in_ring(e.ring).substitute(f.components, f.source);
    out.pieces.push_back(std::move(q));
  }
  return out;
}

// ---------------------------------------------------------------- jets

namespace {

std::vector<Polynomial> power_of_maximal_ideal(const RingPtr& ring, const RationalPoint& m, int e) {
  std::vector<Polynomial> lin;
  for (std::size_t i = 0; i < ring->size(); ++i)
    lin.push_back(Polynomial::variable(ring, i) - Polynomial::constant(ring, m[i]));
  std::vector<Polynomial> out;
  for (const auto& a : monomials_of_degree(ring->size(), e)) {
    Polynomial p = Polynomial::constant(ring, 1);
    for (std::size_t i = 0; i < a.size(); ++i) p *= lin[i].pow(static_cast<unsigned>(a[i]));
    out.push_back(std::move(p));
  }
  return out;
}

void check_point(const RingPtr& ring, const RationalPoint& m) {
  if (m.size() != ring->size())
    throw DimensionError("point has " + std::to_string(m.size()) + " coordinates, ring has " +
                         std::to_string(ring->size()) + " variables");
}

}  // namespace

JetModel make_jet_model(const RingPtr& ring, const RationalPoint& m, int k) {
  check_point(ring, m);
  if (k < 0) throw DomainError("jet order must be non-negative");
  JetModel out;
  out.base = m;
  out.order = k;
  out.ideal = groebner_basis(ModuleBasis::ideal(ring, power_of_maximal_ideal(ring, m, k + 1)));
  auto lts = leading_terms(out.ideal);
  for (int d = 0; d <= k + 1; ++d)
    for (const auto& mon : monomials_of_degree(ring->size(), d)) {
      bool divisible = std::any_of(lts.begin(), lts.end(), [&](const auto& lt) {
        for (std::size_t i = 0; i < mon.size(); ++i)
          if (lt.second[i] > mon[i]) return false;
        return true;
      });
      if (!divisible) out.standard_monomials.push_back(mon);
    }
  return out;
}

std::size_t jet_dimension(const FPModule& q, const RationalPoint& m, int k) {
  const RingPtr& ring = q.ring();
  check_point(ring, m);
  if (k < 0) throw DomainError("jet order must be non-negative");
  const std::size_t p = q.free_rank();
  std::vector<PolyVector> cols = q.presentation.columns();
  for (const auto& g : power_of_maximal_ideal(ring, m, k + 1))
    for (std::size_t i = 0; i < p; ++i) {
      PolyVector v(p, Polynomial(ring));
      v[i] = g;
      cols.push_back(std::move(v));
    }
  // Leading terms include every monomial of degree k + 1 in every component.
  return count_standard_terms(groebner_basis(ModuleBasis(ring, p, cols)), k);
}

bool FlatSpec::contains(const Rational& x) const { return (!lo || *lo <= x) && (!hi || x <= *hi); }

std::size_t jet_module_tensor(const JetFactor& a, const JetFactor& b, const Rational& m, int k) {
  if (k < 0) throw DomainError("jet order must be non-negative");
  for (const auto* f : {&a, &b}) {
    if (const auto* fs = std::get_if<FlatSpec>(f)) {
      if (fs->lo && fs->hi && !(*fs->lo < *fs->hi))
        throw DomainError("flat spec needs a nondegenerate vanishing interval");
    } else if (std::get<FPModule>(*f).ring()->size() > 1) {
      throw UnsupportedError("jet_module_tensor is univariate only");
    }
  }
  const auto* fa = std::get_if<FlatSpec>(&a);
  const auto* fb = std::get_if<FlatSpec>(&b);
  if (fa && fb) return fa->contains(m) && fb->contains(m) ? static_cast<std::size_t>(k + 1) : 0;
  if (fa || fb) {
    const FlatSpec& flat = fa ? *fa : *fb;
    const FPModule& mod = fa ? std::get<FPModule>(b) : std::get<FPModule>(a);
    if (!flat.contains(m)) return 0;
    RingPtr ring = mod.ring()->size() ? mod.ring() : make_ring({"x"});
    return jet_dimension(FPModule{mod.presentation.in_ring(ring)}, {m}, k);
  }
  const FPModule& qa = std::get<FPModule>(a);
  const FPModule& qb = std::get<FPModule>(b);
  RingPtr ring = common_ring(qa.ring(), qb.ring());
  if (ring->size() == 0) ring = make_ring({"x"});
  const std::size_t p = qa.free_rank(), p2 = qb.free_rank();
  const PolyMatrix& pa = qa.presentation;
  const PolyMatrix& pb = qb.presentation;
  std::vector<PolyVector> cols;
  for (std::size_t c = 0; c < pa.cols(); ++c)
    for (std::size_t j = 0; j < p2; ++j) {
      PolyVector v(p * p2, Polynomial(ring));
      for (std::size_t i = 0; i < p; ++i) v[i * p2 + j] = pa.at(i, c).in_ring(ring);
      cols.push_back(std::move(v));
    }
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t c = 0; c < pb.cols(); ++c) {
      PolyVector v(p * p2, Polynomial(ring));
      for (std::size_t j = 0; j < p2; ++j) v[i * p2 + j] = pb.at(j, c).in_ring(ring);
      cols.push_back(std::move(v));
    }
  return jet_dimension(FPModule{PolyMatrix::from_columns(ring, p * p2, cols)}, {m}, k);
}

namespace {

/// A radius eps <= 1/2 such that no polynomial in `polys` has a real root in
/// (m - eps, m) or (m, m + eps).
Rational clearance(const std::vector<Polynomial>& polys, const Rational& m) {
  Rational eps(1, 2);
  for (const auto& p : polys) {
    UPoly u = to_upoly(p);
    if (degree(u) < 1) continue;
    std::size_t at_m = eval(u, m) == 0 ? 1 : 0;
    while (count_roots_in(u, m - eps, m + eps) > at_m) eps /= 2;
  }
  return eps;
}

}  // namespace

std::size_t bundle_section_jet_dim(const Bundle& e, const Rational& m, int k) {
  if (e.ring->size() != 1) throw UnsupportedError("bundle-side jets are implemented on the line only");
  if (k < 0) throw DomainError("jet order must be non-negative");
  if (e.is_polynomial()) {
    auto fd = fiber_determination_univariate(FPModule{e.generators()});
    return jet_dimension(fd.quotient, {m}, k);
  }
  if (e.ambient_rank != 1) throw UnsupportedError("cellwise bundle-side jets need ambient rank one");

  std::vector<Polynomial> polys;
  for (const auto& p : e.pieces) {
    for (const auto& c : p.cell.conditions) polys.push_back(c.poly.in_ring(e.ring));
    for (std::size_t j = 0; j < p.generators.cols(); ++j) polys.push_back(p.generators.at(0, j).in_ring(e.ring));
  }
  Rational eps = clearance(polys, m);
  const auto& side = e.domain.sides[0];
  // D_x = 0 exactly where the fiber is the whole line.
  auto d_vanishes = [&](const Rational& x) { return fiber_dim(e, RationalPoint{x}) == 1; };
  Rational lo_probe = m - eps, hi_probe = m + eps;
  if (side.lo) lo_probe = std::max<Rational>(lo_probe, (m + *side.lo) / 2);
  if (side.hi) hi_probe = std::min<Rational>(hi_probe, (m + *side.hi) / 2);
  bool left = (!side.lo || *side.lo < m) && d_vanishes(lo_probe);
  bool right = (!side.hi || m < *side.hi) && d_vanishes(hi_probe);
  if (left || right) return static_cast<std::size_t>(k + 1);  // sections of D are flat at m
  if (d_vanishes(m)) return 1;
  return 0;
}

// ---------------------------------------------------------------- base change

std::vector<PolyVector> pointwise_sections_univariate(const ModuleBasis& d) {
  if (d.ring->size() > 1) throw UnsupportedError("pointwise sections are detected for univariate D only");
  ModuleBasis gb = groebner_basis(d);
  std::vector<PolyVector> nonzero;
  for (const auto& c : gb.columns)
    if (std::any_of(c.begin(), c.end(), [](const Polynomial& p) { return !p.is_zero(); })) nonzero.push_back(c);
  if (nonzero.empty()) return {};
  if (nonzero.size() > 1) throw UnsupportedError("pointwise sections are detected for principal D only");
  const PolyVector& v = nonzero[0];
  UPoly c;
  for (const auto& e : v) c = gcd(c, to_upoly(e));
  UPoly rho = real_radical_part(c);
  PolyVector out;
  for (const auto& e : v) out.push_back(from_upoly(rho * divmod(to_upoly(e), c).first, d.ring));
  return {out};
}

BaseChangeReport base_change_comparison(std::size_t v_rank, const ModuleBasis& d, const PolyMap& f,
                                        const RationalPoint& m, int k,
                                        const std::optional<std::vector<PolyVector>>& gamma_fd) {
  if (d.rank != v_rank) throw DimensionError("D has rank " + std::to_string(d.rank) + ", V has rank " +
                                             std::to_string(v_rank));
  if (f.components.size() != f.target->size() || !(*common_ring(d.ring, f.target) == *f.target))
    throw DimensionError("map target does not match the ring of D");
  check_point(f.source, m);
  if (k < 0) throw DomainError("jet order must be non-negative");
  const RingPtr& src = f.source;
  BaseChangeReport out;

  auto pull_all = [&](const std::vector<PolyVector>& cols) {
    std::vector<PolyVector> res;
    for (const auto& c : cols) {
      PolyVector v;
      for (const auto& e : c) v.push_back(f.pull(e));
      res.push_back(std::move(v));
    }
    return res;
  };

  if (f.is_identity() && !gamma_fd) {
    out.method = "identity";
    out.pulled_back_generators = d.columns;
    out.pointwise_generators = d.columns;
    return out;
  }

  std::vector<PolyVector> gamma_d = f.target->size() == 1 ? pointwise_sections_univariate(d) : d.columns;
  out.pulled_back_generators = pull_all(gamma_d);

  if (gamma_fd) {
    out.method = "supplied";
    for (const auto& g : *gamma_fd) {
      if (g.size() != v_rank) throw DimensionError("supplied section has the wrong length");
      PolyVector v;
      for (const auto& e : g) v.push_back(e.in_ring(src));
      out.pointwise_generators.push_back(std::move(v));
    }
  } else if (src->size() == 1 && f.target->size() == 1) {
    out.method = "univariate-principal";
    out.pointwise_generators =
        pointwise_sections_univariate(ModuleBasis(src, v_rank, out.pulled_back_generators));
  } else {
    std::vector<Polynomial> jm;
    PolyMatrix jac = f.jacobian();
    if (jac.rows() <= jac.cols())
      for (auto& p : minors(jac, jac.rows()))
        if (!p.is_zero()) jm.push_back(std::move(p));
    if (jm.empty() || !ideal_member(Polynomial::constant(src, 1), ModuleBasis::ideal(src, jm)))
      throw UnsupportedError("Gamma(f*D) cannot be detected: f is not a certified submersion; supply generators");
    out.method = "submersion";
    out.pointwise_generators = out.pulled_back_generators;
  }

  std::vector<PolyVector> jet_cols = out.pulled_back_generators;
  for (const auto& g : power_of_maximal_ideal(src, m, k + 1))
    for (std::size_t i = 0; i < v_rank; ++i) {
      PolyVector v(v_rank, Polynomial(src));
      v[i] = g;
      jet_cols.push_back(std::move(v));
    }
  ModuleBasis jet_gb = groebner_basis(ModuleBasis(src, v_rank, jet_cols));
  ModuleBasis global_gb = groebner_basis(ModuleBasis(src, v_rank, out.pulled_back_generators));
  for (const auto& g : out.pointwise_generators) {
    if (out.alpha_D_surjective_at_order_k && !module_member(g, jet_gb)) {
      out.alpha_D_surjective_at_order_k = false;
      out.witness = g;
    }
    if (!module_member(g, global_gb)) out.globally_surjective = false;
  }
  // coker(alpha_D) embeds in ker(alpha_{V/D}); V is trivial so alpha_V is an isomorphism.
  out.ker_alpha_nontrivial = !out.globally_surjective;
  return out;
}

}  // namespace tepui
