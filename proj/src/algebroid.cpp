#include "tepui/algebroid.hpp"

#include <algorithm>

#include "tepui/modules.hpp"

namespace tepui {

namespace {

bool is_zero(const Section& s) {
  return std::all_of(s.begin(), s.end(), [](const Polynomial& p) { return p.is_zero(); });
}

Section zero_section(const RingPtr& r, std::size_t n) { return Section(n, Polynomial(r)); }

// Sections may live in an extension of the algebroid's ring (check_leibniz).
RingPtr wider(const RingPtr& a, const RingPtr& b) {
  auto prefix = [](const Ring& s, const Ring& l) {
    return s.size() <= l.size() && std::equal(s.vars().begin(), s.vars().end(), l.vars().begin());
  };
  if (prefix(*a, *b)) return b;
  if (prefix(*b, *a)) return a;
  return common_ring(a, b);
}

RingPtr ring_of(const Section& s, RingPtr fallback) {
  for (const auto& p : s) fallback = wider(fallback, p.ring());
  return fallback;
}

Section lift(const Section& s, const RingPtr& r) {
  Section out;
  for (const auto& p : s) out.push_back(p.in_ring(r));
  return out;
}

Section unit(const RingPtr& r, std::size_t n, std::size_t i) {
  Section e = zero_section(r, n);
  e[i] = Polynomial::constant(r, 1);
  return e;
}

}  // namespace

AnchoredBracket::AnchoredBracket(PolyMatrix anchor) : anchor_(std::move(anchor)) {
  const std::size_t n = anchor_.cols();
  c_.assign(n, std::vector<Section>(n, zero_section(anchor_.ring(), n)));
}

void AnchoredBracket::set_structure(std::size_t i, std::size_t j, const Section& v) {
  const std::size_t n = rank();
  if (i >= n || j >= n) throw DimensionError("structure index out of range");
  if (v.size() != n) throw DimensionError("structure vector must have length " + std::to_string(n));
  Section w = lift(v, ring());
  if (i == j) {
    if (!is_zero(w)) throw DomainError("structure functions must vanish on the diagonal");
    return;
  }
  c_[i][j] = w;
  Section neg;
  for (const auto& p : w) neg.push_back(-p);
  c_[j][i] = neg;
}

Polynomial apply_field(const Section& field, const Polynomial& f) {
  Polynomial out(f.ring());
  for (std::size_t i = 0; i < field.size(); ++i)
    if (!field[i].is_zero()) out += field[i] * f.differentiate(i);
  return out;
}

Section anchor_of(const AnchoredBracket& l, const Section& a) {
  if (a.size() != l.rank()) throw DimensionError("section length does not match the algebroid rank");
  RingPtr r = ring_of(a, l.ring());
  const std::size_t n = l.anchor().rows();
  Section out = zero_section(r, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < a.size(); ++j)
      if (!a[j].is_zero() && !l.anchor().at(i, j).is_zero()) out[i] += l.anchor().at(i, j).in_ring(r) * a[j];
  return out;
}

Section lie_bracket(const Section& x, const Section& y) {
  if (x.size() != y.size()) throw DimensionError("vector fields of different lengths");
  RingPtr r = ring_of(y, ring_of(x, make_ring({})));
  Section out = zero_section(r, x.size());
  Section xs = lift(x, r), ys = lift(y, r);
  for (std::size_t k = 0; k < x.size(); ++k) out[k] = apply_field(xs, ys[k]) - apply_field(ys, xs[k]);
  return out;
}

Section bracket(const Section& a_in, const Section& b_in, const AnchoredBracket& l) {
  const std::size_t n = l.rank();
  if (a_in.size() != n || b_in.size() != n) throw DimensionError("section length does not match the algebroid rank");
  RingPtr r = ring_of(b_in, ring_of(a_in, l.ring()));
  Section a = lift(a_in, r), b = lift(b_in, r);
  Section out = zero_section(r, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (b[j].is_zero() || i == j) continue;
      Polynomial fg = a[i] * b[j];
      const Section& c = l.structure(i, j);
      for (std::size_t k = 0; k < n; ++k)
        if (!c[k].is_zero()) out[k] += fg * c[k].in_ring(r);
    }
  }
  Section ra = anchor_of(l, a), rb = anchor_of(l, b);
  for (std::size_t j = 0; j < n; ++j) {
    out[j] += apply_field(ra, b[j]);
    out[j] -= apply_field(rb, a[j]);
  }
  return out;
}

LeibnizReport check_leibniz(const AnchoredBracket& l, const BracketFn& fn_in) {
  BracketFn fn = fn_in ? fn_in : BracketFn([&l](const Section& a, const Section& b) { return bracket(a, b, l); });
  const RingPtr& base = l.ring();
  const std::size_t n = l.rank();
  // f = sum_{|alpha| <= 2} t_alpha x^alpha with fresh coefficient variables.
  std::vector<Monomial> mons;
  for (int d = 0; d <= 2; ++d)
    for (auto& m : monomials_of_degree(base->size(), d)) mons.push_back(m);
  std::vector<std::string> fresh;
  RingPtr probe = base;
  for (std::size_t k = 0; k < mons.size(); ++k) {
    fresh.push_back(fresh_variable(*probe, "t" + std::to_string(k)));
    probe = extend_ring(probe, {fresh.back()});
  }
  RingPtr ext = probe;
  Polynomial f(ext);
  for (std::size_t k = 0; k < mons.size(); ++k) {
    Monomial m = mons[k];
    m.resize(ext->size(), 0);
    m[base->size() + k] = 1;
    f += Polynomial::monomial(ext, m);
  }

  LeibnizReport out;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Section ei = unit(ext, n, i), ej = unit(ext, n, j);
      Section fei = ei, fej = ej;
      fei[i] = f;
      fej[j] = f;
      Section base_br = lift(fn(ei, ej), ext);
      Section rho_i = anchor_of(l, ei), rho_j = anchor_of(l, ej);
      for (std::size_t slot = 0; slot < 2; ++slot) {
        Section lhs = lift(slot == 0 ? fn(fei, ej) : fn(ei, fej), ext);
        Section res = zero_section(ext, n);
        for (std::size_t k = 0; k < n; ++k) res[k] = lhs[k] - f * base_br[k];
        if (slot == 0)
          res[i] += apply_field(rho_j, f);  // [f a, b] = f [a, b] - rho(b)(f) a
        else
          res[j] -= apply_field(rho_i, f);  // [a, f b] = f [a, b] + rho(a)(f) b
        if (!is_zero(res)) {
          out.holds = false;
          out.i = i;
          out.j = j;
          out.slot = slot;
          out.residual = res;
          return out;
        }
      }
    }
  return out;
}

std::vector<JacobiEntry> check_jacobi(const AnchoredBracket& l) {
  const std::size_t n = l.rank();
  const RingPtr& r = l.ring();
  std::vector<JacobiEntry> out;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        Section ei = unit(r, n, i), ej = unit(r, n, j), ek = unit(r, n, k);
        Section a = bracket(l.structure(i, j), ek, l);
        Section b = bracket(l.structure(j, k), ei, l);
        Section c = bracket(l.structure(k, i), ej, l);
        Section sum = zero_section(r, n);
        for (std::size_t t = 0; t < n; ++t) sum[t] = a[t] + b[t] + c[t];
        out.push_back({i, j, k, sum});
      }
  return out;
}

bool jacobi_vanishes(const std::vector<JacobiEntry>& table) {
  return std::all_of(table.begin(), table.end(), [](const JacobiEntry& e) { return is_zero(e.value); });
}

WeakJacobiReport check_weak_jacobi(const AnchoredBracket& l) {
  WeakJacobiReport out;
  for (auto& e : check_jacobi(l)) {
    Section a = anchor_of(l, e.value);
    if (!is_zero(a)) {
      out.holds = false;
      out.failing = e;
      out.anchored = a;
      return out;
    }
  }
  return out;
}

namespace {

void require_rank(const ModuleBasis& d, const AnchoredBracket& l) {
  if (d.rank != l.rank())
    throw DimensionError("D has ambient rank " + std::to_string(d.rank) + ", algebroid has rank " +
                         std::to_string(l.rank()));
}

}  // namespace

IdealReport check_ideal(const ModuleBasis& d_in, const AnchoredBracket& l) {
  require_rank(d_in, l);
  ModuleBasis d(common_ring(d_in.ring, l.ring()), d_in.rank, d_in.columns, d_in.order);
  ModuleBasis gb = groebner_basis(d);
  IdealReport out;
  for (const auto& g : gb.columns)
    for (std::size_t j = 0; j < l.rank(); ++j) {
      Section v = bracket(g, unit(gb.ring, l.rank(), j), l);
      if (!module_member(v, gb)) {
        out.holds = false;
        out.frame = j;
        out.generator = g;
        out.value = v;
        return out;
      }
    }
  return out;
}

std::optional<ObstructionWitness> quotient_obstruction(const ModuleBasis& d_in, const AnchoredBracket& l, int bound,
                                                        std::uint64_t seed) {
  require_rank(d_in, l);
  if (bound < 0) throw DomainError("degree bound must be non-negative");
  RingPtr r = common_ring(d_in.ring, l.ring());
  const std::size_t n = l.rank();
  std::vector<Section> gens;
  for (const auto& c : d_in.columns)
    if (!is_zero(c)) gens.push_back(lift(c, r));
  if (gens.empty()) return std::nullopt;
  PolyMatrix dm = PolyMatrix::from_columns(r, n, gens);
  FPModule q{dm};
  for (int deg = 0; deg <= bound; ++deg)
    for (const auto& alpha : monomials_of_degree(r->size(), deg))
      for (const auto& g : gens) {
        Section sigma;
        Polynomial mono = Polynomial::monomial(r, alpha);
        for (const auto& p : g) sigma.push_back(mono * p);
        for (std::size_t j = 0; j < n; ++j) {
          Section v = bracket(unit(r, n, j), sigma, l);
          if (is_zero(v)) continue;
          auto verdict = invisible_test(q, v, 100, seed);
          if (verdict.status != Visibility::CertifiedVisible) continue;
          const RationalPoint& m = *verdict.witness;
          PolyMatrix ds = dm.hconcat(PolyMatrix::from_columns(r, n, {sigma}));
          PolyMatrix dv = dm.hconcat(PolyMatrix::from_columns(r, n, {v}));
          std::size_t base = matrix_rank_at(dm, m);
          if (matrix_rank_at(ds, m) != base || matrix_rank_at(dv, m) <= base)
            throw Error("internal: obstruction witness failed exact re-verification");
          return ObstructionWitness{j, sigma, v, m};
        }
      }
  return std::nullopt;
}

AnchoredBracket synthesize_bracket(const PolyMatrix& anchor) {
  const RingPtr& r = anchor.ring();
  const std::size_t n = anchor.rows(), N = anchor.cols();
  AnchoredBracket l(anchor);
  ModuleBasis image(r, n, anchor.columns());
  auto field = [&](std::size_t i) { return anchor.column(i); };
  auto lift_pair = [&](std::size_t i, std::size_t j) {
    Section x = lie_bracket(field(i), field(j));
    auto c = lift_combination(x, image);
    if (!c) {
      std::string text;
      for (std::size_t k = 0; k < x.size(); ++k) text += (k ? ", " : "") + x[k].to_string();
      throw InvolutivityError(i, j, x,
                              "anchored module is not involutive: [rho(e" + std::to_string(i) + "), rho(e" +
                                  std::to_string(j) + ")] = (" + text + ") is not in the span of the anchor columns");
    }
    return *c;
  };
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = i + 1; j < N; ++j) {
      Section cij = lift_pair(i, j), cji = lift_pair(j, i);
      Section c;
      for (std::size_t k = 0; k < N; ++k) c.push_back((cij[k] - cji[k]) * Rational(1, 2));
      l.set_structure(i, j, c);
    }
  return l;
}

FoliationReport foliation_of(const AnchoredBracket& l, std::size_t max_rounds) {
  const RingPtr& r = l.ring();
  const std::size_t n = l.anchor().rows();
  FoliationReport out;
  for (const auto& c : l.anchor().columns())
    if (!is_zero(c)) out.closure.push_back(c);
  out.module = groebner_basis(ModuleBasis(r, n, out.closure));

  auto missing = [&](const std::vector<Section>& gens, const ModuleBasis& gb,
                     std::vector<std::pair<std::size_t, std::size_t>>* pairs) {
    std::vector<Section> extra;
    for (std::size_t i = 0; i < gens.size(); ++i)
      for (std::size_t j = i + 1; j < gens.size(); ++j) {
        Section b = lie_bracket(gens[i], gens[j]);
        if (module_member(b, gb)) continue;
        if (pairs) pairs->emplace_back(i, j);
        ModuleBasis grown = gb;
        grown.is_groebner = false;
        for (const auto& e : extra) grown.columns.push_back(e);
        if (!module_member(b, groebner_basis(grown))) extra.push_back(b);
      }
    return extra;
  };

  auto extra = missing(out.closure, out.module, &out.failing_pairs);
  out.involutive = extra.empty();
  while (!extra.empty() && out.rounds < max_rounds) {
    ++out.rounds;
    for (auto& e : extra) out.closure.push_back(std::move(e));
    ModuleBasis gb = groebner_basis(ModuleBasis(r, n, out.closure));
    extra = missing(out.closure, gb, nullptr);
  }
  out.closure_complete = extra.empty();
  return out;
}

}  // namespace tepui
