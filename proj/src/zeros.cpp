#include <random>

#include "tepui/errors.hpp"
#include "tepui/groebner.hpp"
#include "tepui/univariate.hpp"

namespace tepui {

std::vector<RationalPoint> rational_zeros(const ModuleBasis& ideal, std::size_t max_points, std::uint64_t seed) {
  if (ideal.rank != 1) throw DimensionError("rational_zeros needs an ideal");
  const RingPtr& ring = ideal.ring;
  const std::size_t n = ring->size();
  std::vector<Polynomial> gens;
  for (const auto& c : ideal.columns)
    if (!c[0].is_zero()) gens.push_back(c[0]);
  std::vector<RationalPoint> out;
  if (gens.empty()) return {RationalPoint(n, 0)};

  ModuleBasis gb = groebner_basis(ModuleBasis::ideal(ring, gens, MonomialOrder{OrderKind::Lex}));
  std::vector<Polynomial> basis;
  for (const auto& c : gb.columns) basis.push_back(c[0]);
  for (const auto& b : basis)
    if (b.is_constant()) return out;

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> num(-9, 9), den(1, 4);
  RationalPoint point(n);
  std::size_t budget = 4096;

  // Lex with x_0 > ... > x_{n-1}: assign the last variable first.
  auto rec = [&](auto&& self, std::size_t level) -> void {
    if (out.size() >= max_points || budget == 0) return;
    --budget;
    if (level == 0) {
      for (const auto& g : gens)
        if (g.evaluate(point) != 0) return;
      out.push_back(point);
      return;
    }
    const std::size_t var = level - 1;
    // Assigned variables become constants and the current one stays; earlier
    // variables do not occur in the basis elements used below.
    RingPtr line = make_ring({ring->vars()[var]});
    std::vector<Polynomial> images;
    for (std::size_t i = 0; i < n; ++i) {
      if (i > var)
        images.push_back(Polynomial::constant(line, point[i]));
      else if (i == var)
        images.push_back(Polynomial::variable(line, 0));
      else
        images.push_back(Polynomial::constant(line, 0));
    }
    UPoly g;
    bool dead = false;
    for (const auto& b : basis) {
      bool only_tail = true;
      for (const auto& [m, c] : b.terms())
        for (std::size_t i = 0; i < var; ++i)
          if (m[i]) only_tail = false;
      if (!only_tail) continue;
      UPoly u = to_upoly(b.substitute(images, line));
      if (u.empty()) continue;
      if (degree(u) == 0) {
        dead = true;
        break;
      }
      g = g.empty() ? u : gcd(g, u);
      if (degree(g) == 0) {
        dead = true;
        break;
      }
    }
    if (dead) return;
    std::vector<Rational> values;
    if (!g.empty()) {
      values = rational_roots(g);
    } else {
      values = {Rational(0), Rational(1), Rational(-1)};
      Rational r(num(rng), den(rng));
      r.canonicalize();
      values.push_back(r);
    }
    for (const auto& v : values) {
      point[var] = v;
      self(self, level - 1);
    }
  };
  rec(rec, n);
  return out;
}

}  // namespace tepui
