#include "tepui/groebner.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "tepui/errors.hpp"

namespace tepui {

// ---------------------------------------------------------------- orders

int MonomialOrder::compare(const Monomial& a, const Monomial& b) const {
  if (kind == OrderKind::GrevLex) {
    int da = std::accumulate(a.begin(), a.end(), 0);
    int db = std::accumulate(b.begin(), b.end(), 0);
    if (da != db) return da < db ? -1 : 1;
    for (std::size_t i = a.size(); i-- > 0;)
      if (a[i] != b[i]) return a[i] < b[i] ? 1 : -1;
    return 0;
  }
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  return 0;
}

int MonomialOrder::compare(std::size_t comp_a, const Monomial& a, std::size_t comp_b, const Monomial& b) const {
  if (comp_a != comp_b) return comp_a < comp_b ? 1 : -1;
  return compare(a, b);
}

// ---------------------------------------------------------------- ModuleBasis

ModuleBasis::ModuleBasis(RingPtr r, std::size_t p, std::vector<PolyVector> cols, MonomialOrder o)
    : ring(std::move(r)), rank(p), columns(std::move(cols)), order(o) {
  for (auto& c : columns) {
    if (c.size() != rank) throw DimensionError("module generator has wrong length");
    for (auto& e : c) e = e.in_ring(ring);
  }
}

ModuleBasis ModuleBasis::ideal(RingPtr r, const std::vector<Polynomial>& gens, MonomialOrder o) {
  std::vector<PolyVector> cols;
  cols.reserve(gens.size());
  for (const auto& g : gens) cols.push_back({g});
  return ModuleBasis(std::move(r), 1, std::move(cols), o);
}

ModuleBasis ModuleBasis::from_matrix(const PolyMatrix& m, MonomialOrder o) {
  return ModuleBasis(m.ring(), m.rows(), m.columns(), o);
}

PolyMatrix ModuleBasis::matrix() const { return PolyMatrix::from_columns(ring, rank, columns); }

std::vector<Polynomial> ModuleBasis::ideal_generators() const {
  if (rank != 1) throw DimensionError("not an ideal basis");
  std::vector<Polynomial> out;
  for (const auto& c : columns) out.push_back(c[0]);
  return out;
}

std::vector<Monomial> monomials_of_degree(std::size_t nvars, int degree) {
  std::vector<Monomial> out;
  if (nvars == 0) {
    if (degree == 0) out.emplace_back();
    return out;
  }
  Monomial m(nvars, 0);
  // Enumerate compositions of `degree` into nvars parts, lexicographically descending.
  auto rec = [&](auto&& self, std::size_t i, int left) -> void {
    if (i + 1 == nvars) {
      m[i] = left;
      out.push_back(m);
      return;
    }
    for (int e = left; e >= 0; --e) {
      m[i] = e;
      self(self, i + 1, left - e);
    }
  };
  rec(rec, 0, degree);
  return out;
}

// ---------------------------------------------------------------- engine

namespace {

struct Term {
  std::size_t comp;
  Monomial mon;
  Rational coef;
};

/// Sparse module vector, terms sorted by decreasing order.
using Vec = std::vector<Term>;

bool divides(const Monomial& a, const Monomial& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

Monomial mon_div(const Monomial& b, const Monomial& a) {
  Monomial r(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = b[i] - a[i];
  return r;
}

Monomial mon_mul(const Monomial& a, const Monomial& b) {
  Monomial r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

Monomial mon_lcm(const Monomial& a, const Monomial& b) {
  Monomial r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = std::max(a[i], b[i]);
  return r;
}

bool coprime(const Monomial& a, const Monomial& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] && b[i]) return false;
  return true;
}

class Engine {
 public:
  Engine(MonomialOrder order, std::size_t nvars) : ord_(order), nvars_(nvars) {}

  int cmp(const Term& a, const Term& b) const { return ord_.compare(a.comp, a.mon, b.comp, b.mon); }

  Vec from_poly_vector(const PolyVector& v) const {
    Vec out;
    for (std::size_t c = 0; c < v.size(); ++c)
      for (const auto& [m, coef] : v[c].terms()) out.push_back({c, m, coef});
    sort(out);
    return out;
  }

  PolyVector to_poly_vector(const Vec& v, const RingPtr& ring, std::size_t rank) const {
    std::vector<Polynomial::TermMap> maps(rank);
    for (const auto& t : v) maps.at(t.comp).emplace(t.mon, t.coef);
    PolyVector out;
    out.reserve(rank);
    for (auto& m : maps) out.emplace_back(ring, std::move(m));
    return out;
  }

  void sort(Vec& v) const {
    std::sort(v.begin(), v.end(), [this](const Term& a, const Term& b) { return cmp(a, b) > 0; });
  }

  /// f + c * x^m * g
  Vec axpy(const Vec& f, const Rational& c, const Monomial& m, const Vec& g) const {
    Vec out;
    out.reserve(f.size() + g.size());
    std::size_t i = 0, j = 0;
    while (i < f.size() || j < g.size()) {
      if (j == g.size()) {
        out.push_back(f[i++]);
        continue;
      }
      Term shifted{g[j].comp, mon_mul(g[j].mon, m), c * g[j].coef};
      if (i == f.size()) {
        out.push_back(std::move(shifted));
        ++j;
        continue;
      }
      int s = cmp(f[i], shifted);
      if (s > 0) {
        out.push_back(f[i++]);
      } else if (s < 0) {
        out.push_back(std::move(shifted));
        ++j;
      } else {
        Rational sum = f[i].coef + shifted.coef;
        if (sum != 0) out.push_back({f[i].comp, f[i].mon, sum});
        ++i;
        ++j;
      }
    }
    return out;
  }

  static void scale(Vec& v, const Rational& c) {
    for (auto& t : v) t.coef *= c;
  }

  /// Full reduction of h by `basis`. For every reduction step h -= c x^m b_k,
  /// `acc` (when given) receives += c x^m tags[k].
  Vec reduce(Vec h, const std::vector<const Vec*>& basis, const std::vector<const Vec*>* tags, Vec* acc) const {
    Vec rem;
    while (!h.empty()) {
      const Term& lead = h.front();
      std::size_t k = 0;
      for (; k < basis.size(); ++k) {
        const Term& bl = basis[k]->front();
        if (bl.comp == lead.comp && divides(bl.mon, lead.mon)) break;
      }
      if (k == basis.size()) {
        rem.push_back(lead);
        h.erase(h.begin());
        continue;
      }
      const Term& bl = basis[k]->front();
      Rational c = lead.coef / bl.coef;
      Monomial m = mon_div(lead.mon, bl.mon);
      h = axpy(h, -c, m, *basis[k]);
      if (acc && tags) *acc = axpy(*acc, c, m, *(*tags)[k]);
    }
    return rem;
  }

  const MonomialOrder& order() const { return ord_; }
  std::size_t nvars() const { return nvars_; }

 private:
  MonomialOrder ord_;
  std::size_t nvars_;
};

struct Elem {
  Vec v;
  Vec rep;  // expression in the original generators (component = generator index)
};

struct GBResult {
  std::vector<Elem> elems;
};

Vec unit(std::size_t comp, std::size_t nvars) { return Vec{Term{comp, Monomial(nvars, 0), Rational(1)}}; }

void make_monic(Elem& e) {
  Rational inv = 1 / e.v.front().coef;
  Engine::scale(e.v, inv);
  Engine::scale(e.rep, inv);
}

GBResult compute_gb(const Engine& eng, const std::vector<PolyVector>& gens, bool rank_one, bool track) {
  const std::size_t n = eng.nvars();
  std::vector<Elem> G;
  std::vector<bool> alive;

  struct Pair {
    std::size_t i, j;
    Monomial lcm;
  };
  auto pair_less = [&eng](const Pair& a, const Pair& b) {
    int c = eng.order().compare(a.lcm, b.lcm);
    if (c != 0) return c < 0;
    if (a.j != b.j) return a.j < b.j;
    return a.i < b.i;
  };
  std::set<Pair, decltype(pair_less)> pending(pair_less);
  std::set<std::pair<std::size_t, std::size_t>> pending_keys;

  auto add = [&](Elem e) {
    make_monic(e);
    std::size_t idx = G.size();
    const Term& lt = e.v.front();
    for (std::size_t i = 0; i < idx; ++i) {
      if (!alive[i]) continue;
      const Term& li = G[i].v.front();
      if (li.comp != lt.comp) continue;
      if (rank_one && coprime(li.mon, lt.mon)) continue;
      pending.insert(Pair{i, idx, mon_lcm(li.mon, lt.mon)});
      pending_keys.insert({i, idx});
    }
    G.push_back(std::move(e));
    alive.push_back(true);
  };

  auto current_basis = [&]() {
    std::vector<const Vec*> b;
    std::vector<const Vec*> t;
    for (std::size_t k = 0; k < G.size(); ++k)
      if (alive[k]) {
        b.push_back(&G[k].v);
        t.push_back(&G[k].rep);
      }
    return std::pair{b, t};
  };

  for (std::size_t k = 0; k < gens.size(); ++k) {
    Vec v = eng.from_poly_vector(gens[k]);
    if (v.empty()) continue;
    Elem e{std::move(v), track ? unit(k, n) : Vec{}};
    auto [b, t] = current_basis();
    Vec acc;
    Vec r = eng.reduce(e.v, b, &t, track ? &acc : nullptr);
    if (r.empty()) continue;
    if (track) e.rep = eng.axpy(e.rep, -1, Monomial(n, 0), acc);
    e.v = std::move(r);
    add(std::move(e));
  }

  auto key = [](std::size_t a, std::size_t b) { return std::pair{std::min(a, b), std::max(a, b)}; };

  while (!pending.empty()) {
    Pair p = *pending.begin();
    pending.erase(pending.begin());
    pending_keys.erase({p.i, p.j});
    if (!alive[p.i] || !alive[p.j]) continue;

    // Chain criterion.
    bool skip = false;
    std::size_t comp = G[p.i].v.front().comp;
    for (std::size_t k = 0; k < G.size() && !skip; ++k) {
      if (k == p.i || k == p.j || !alive[k]) continue;
      const Term& lk = G[k].v.front();
      if (lk.comp != comp || !divides(lk.mon, p.lcm)) continue;
      if (!pending_keys.count(key(p.i, k)) && !pending_keys.count(key(p.j, k))) skip = true;
    }
    if (skip) continue;

    const Elem& gi = G[p.i];
    const Elem& gj = G[p.j];
    Monomial mi = mon_div(p.lcm, gi.v.front().mon);
    Monomial mj = mon_div(p.lcm, gj.v.front().mon);
    Elem s;
    s.v = eng.axpy(eng.axpy(Vec{}, 1, mi, gi.v), -1, mj, gj.v);
    if (track) s.rep = eng.axpy(eng.axpy(Vec{}, 1, mi, gi.rep), -1, mj, gj.rep);
    auto [b, t] = current_basis();
    Vec acc;
    Vec r = eng.reduce(std::move(s.v), b, &t, track ? &acc : nullptr);
    if (r.empty()) continue;
    s.v = std::move(r);
    if (track) s.rep = eng.axpy(s.rep, -1, Monomial(n, 0), acc);
    add(std::move(s));
  }

  // Minimalize.
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < G.size(); ++i) {
    if (!alive[i]) continue;
    const Term& li = G[i].v.front();
    bool redundant = false;
    for (std::size_t j = 0; j < G.size() && !redundant; ++j) {
      if (j == i || !alive[j]) continue;
      const Term& lj = G[j].v.front();
      if (lj.comp != li.comp || !divides(lj.mon, li.mon)) continue;
      if (lj.mon != li.mon || j < i) redundant = true;
    }
    if (!redundant) keep.push_back(i);
  }
  std::vector<Elem> minimal;
  for (auto i : keep) minimal.push_back(std::move(G[i]));

  // Interreduce tails.
  for (std::size_t i = 0; i < minimal.size(); ++i) {
    std::vector<const Vec*> b, t;
    for (std::size_t j = 0; j < minimal.size(); ++j)
      if (j != i) {
        b.push_back(&minimal[j].v);
        t.push_back(&minimal[j].rep);
      }
    Vec acc;
    Vec r = eng.reduce(minimal[i].v, b, &t, track ? &acc : nullptr);
    minimal[i].v = std::move(r);
    if (track) minimal[i].rep = eng.axpy(minimal[i].rep, -1, Monomial(n, 0), acc);
    make_monic(minimal[i]);
  }
  std::sort(minimal.begin(), minimal.end(),
            [&eng](const Elem& a, const Elem& b) { return eng.cmp(a.v.front(), b.v.front()) < 0; });
  return GBResult{std::move(minimal)};
}

ModuleBasis to_basis(const Engine& eng, const GBResult& gb, const ModuleBasis& like) {
  ModuleBasis out(like.ring, like.rank, {}, like.order);
  for (const auto& e : gb.elems) out.columns.push_back(eng.to_poly_vector(e.v, like.ring, like.rank));
  out.is_groebner = true;
  return out;
}

void check_vector(const PolyVector& v, const ModuleBasis& b) {
  if (v.size() != b.rank)
    throw DimensionError("vector of length " + std::to_string(v.size()) + " tested against a module of rank " +
                         std::to_string(b.rank));
}

PolyVector in_ring(const PolyVector& v, const RingPtr& ring) {
  PolyVector out;
  out.reserve(v.size());
  for (const auto& p : v) out.push_back(p.in_ring(ring));
  return out;
}

}  // namespace

// ---------------------------------------------------------------- public API

ModuleBasis groebner_basis(const ModuleBasis& gens) {
  if (gens.is_groebner) return gens;
  Engine eng(gens.order, gens.ring->size());
  GBResult gb = compute_gb(eng, gens.columns, gens.rank == 1, false);
  return to_basis(eng, gb, gens);
}

PolyVector normal_form(const PolyVector& v, const ModuleBasis& basis) {
  check_vector(v, basis);
  ModuleBasis gb = groebner_basis(basis);
  Engine eng(gb.order, gb.ring->size());
  std::vector<Vec> vecs;
  for (const auto& c : gb.columns) vecs.push_back(eng.from_poly_vector(c));
  std::vector<const Vec*> ptrs;
  for (const auto& x : vecs) ptrs.push_back(&x);
  Vec r = eng.reduce(eng.from_poly_vector(in_ring(v, gb.ring)), ptrs, nullptr, nullptr);
  return eng.to_poly_vector(r, gb.ring, gb.rank);
}

bool module_member(const PolyVector& v, const ModuleBasis& basis) {
  auto nf = normal_form(v, basis);
  return std::all_of(nf.begin(), nf.end(), [](const Polynomial& p) { return p.is_zero(); });
}

bool ideal_member(const Polynomial& f, const ModuleBasis& ideal) {
  if (ideal.rank != 1) throw DimensionError("ideal membership needs a rank-one basis");
  return module_member({f}, ideal);
}

std::optional<std::vector<Polynomial>> lift_combination(const PolyVector& v, const ModuleBasis& basis) {
  check_vector(v, basis);
  const RingPtr& ring = basis.ring;
  const std::size_t n = ring->size();
  const std::size_t m = basis.columns.size();
  Engine eng(basis.order, n);
  GBResult gb = compute_gb(eng, basis.columns, basis.rank == 1, true);
  std::vector<const Vec*> b, t;
  for (const auto& e : gb.elems) {
    b.push_back(&e.v);
    t.push_back(&e.rep);
  }
  Vec acc;
  PolyVector target = in_ring(v, ring);
  Vec r = eng.reduce(eng.from_poly_vector(target), b, &t, &acc);
  if (!r.empty()) return std::nullopt;
  std::vector<Polynomial> lambda = eng.to_poly_vector(acc, ring, m);

  // Re-expansion check.
  for (std::size_t row = 0; row < basis.rank; ++row) {
    Polynomial s(ring);
    for (std::size_t k = 0; k < m; ++k) s += lambda[k] * basis.columns[k][row];
    if (!(s == target[row])) throw Error("internal: lift_combination failed re-expansion");
  }
  return lambda;
}

bool radical_member(const Polynomial& f, const ModuleBasis& ideal) {
  if (ideal.rank != 1) throw DimensionError("radical membership needs a rank-one basis");
  if (f.is_zero()) return true;
  std::string t = fresh_variable(*ideal.ring, "t");
  RingPtr ext = extend_ring(ideal.ring, {t});
  std::vector<Polynomial> gens;
  for (const auto& c : ideal.columns) gens.push_back(c[0].in_ring(ext));
  gens.push_back(Polynomial::constant(ext, 1) - Polynomial::variable(ext, t) * f.in_ring(ext));
  ModuleBasis gb = groebner_basis(ModuleBasis::ideal(ext, gens, ideal.order));
  for (const auto& c : gb.columns)
    if (!c[0].is_zero() && c[0].is_constant()) return true;
  return false;
}

ModuleBasis syzygies(const ModuleBasis& basis) {
  const RingPtr& ring = basis.ring;
  const std::size_t n = ring->size();
  const std::size_t m = basis.columns.size();
  Engine eng(basis.order, n);
  GBResult gb = compute_gb(eng, basis.columns, basis.rank == 1, true);
  const auto& G = gb.elems;

  std::vector<const Vec*> b, tags;
  std::vector<Vec> units;
  for (std::size_t k = 0; k < G.size(); ++k) units.push_back(unit(k, n));
  for (std::size_t k = 0; k < G.size(); ++k) {
    b.push_back(&G[k].v);
    tags.push_back(&units[k]);
  }

  // sigma in Q[x]^|G|  ->  T * sigma in Q[x]^m
  auto to_generators = [&](const Vec& sigma) {
    Vec out;
    for (const auto& term : sigma) {
      out = eng.axpy(out, term.coef, term.mon, G[term.comp].rep);
    }
    return out;
  };

  std::vector<Vec> syz;
  for (std::size_t i = 0; i < G.size(); ++i)
    for (std::size_t j = i + 1; j < G.size(); ++j) {
      const Term& li = G[i].v.front();
      const Term& lj = G[j].v.front();
      if (li.comp != lj.comp) continue;
      Monomial l = mon_lcm(li.mon, lj.mon);
      Monomial mi = mon_div(l, li.mon), mj = mon_div(l, lj.mon);
      Vec s = eng.axpy(eng.axpy(Vec{}, 1, mi, G[i].v), -1, mj, G[j].v);
      Vec acc;
      Vec r = eng.reduce(std::move(s), b, &tags, &acc);
      if (!r.empty()) throw Error("internal: S-vector of a Groebner basis did not reduce to zero");
      Vec sigma = eng.axpy(eng.axpy(Vec{}, 1, mi, units[i]), -1, mj, units[j]);
      sigma = eng.axpy(sigma, -1, Monomial(n, 0), acc);
      Vec z = to_generators(sigma);
      if (!z.empty()) syz.push_back(std::move(z));
    }

  // Columns of (I - T S): f_k = sum_l s_lk g_l.
  for (std::size_t k = 0; k < m; ++k) {
    Vec f = eng.from_poly_vector(basis.columns[k]);
    Vec acc;
    Vec r = eng.reduce(std::move(f), b, &tags, &acc);
    if (!r.empty()) throw Error("internal: generator not reduced to zero by its own Groebner basis");
    Vec col = eng.axpy(unit(k, n), -1, Monomial(n, 0), to_generators(acc));
    if (!col.empty()) syz.push_back(std::move(col));
  }

  ModuleBasis out(ring, m, {}, basis.order);
  for (const auto& z : syz) out.columns.push_back(eng.to_poly_vector(z, ring, m));
  ModuleBasis reduced = groebner_basis(out);

  // Every syzygy must annihilate the generators.
  for (const auto& z : reduced.columns)
    for (std::size_t row = 0; row < basis.rank; ++row) {
      Polynomial s(ring);
      for (std::size_t k = 0; k < m; ++k) s += z[k] * basis.columns[k][row];
      if (!s.is_zero()) throw Error("internal: computed syzygy does not annihilate the generators");
    }
  return reduced;
}

std::vector<std::pair<std::size_t, Monomial>> leading_terms(const ModuleBasis& gb) {
  Engine eng(gb.order, gb.ring->size());
  std::vector<std::pair<std::size_t, Monomial>> out;
  for (const auto& c : gb.columns) {
    Vec v = eng.from_poly_vector(c);
    if (!v.empty()) out.emplace_back(v.front().comp, v.front().mon);
  }
  return out;
}

std::size_t count_standard_terms(const ModuleBasis& gb, int max_degree) {
  ModuleBasis g = groebner_basis(gb);
  auto lts = leading_terms(g);
  std::size_t count = 0;
  for (std::size_t comp = 0; comp < g.rank; ++comp)
    for (int d = 0; d <= max_degree; ++d)
      for (const auto& mon : monomials_of_degree(g.ring->size(), d)) {
        bool divisible = std::any_of(lts.begin(), lts.end(), [&](const auto& lt) {
          return lt.first == comp && divides(lt.second, mon);
        });
        if (!divisible) ++count;
      }
  return count;
}

}  // namespace tepui
