#include <random>

#include "doctest.h"
#include "support/anchors.hpp"
#include "support/oracles.hpp"
#include "tepui/algebroid.hpp"

using namespace tepui;

namespace {

Polynomial P(const char* s, const RingPtr& r) { return parse_polynomial(s, r); }

Section sec(const RingPtr& r, std::initializer_list<const char*> entries) {
  Section s;
  for (auto e : entries) s.push_back(P(e, r));
  return s;
}

PolyMatrix mat(const RingPtr& r, std::size_t rows, std::size_t cols, std::initializer_list<const char*> row_major) {
  PolyMatrix m(r, rows, cols);
  std::size_t k = 0;
  for (auto e : row_major) {
    m.at(k / cols, k % cols) = P(e, r);
    ++k;
  }
  return m;
}

bool zero(const Section& s) {
  for (auto& p : s)
    if (!p.is_zero()) return false;
  return true;
}

Section diff(const Section& a, const Section& b) {
  Section out;
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(a[i] - b[i]);
  return out;
}

// e1 -> d/dx, e2 -> 0, c = 0.
AnchoredBracket twisted() { return AnchoredBracket(mat(make_ring({"x"}), 1, 2, {"1", "0"})); }

AnchoredBracket tangent_line() { return AnchoredBracket(mat(make_ring({"x"}), 1, 1, {"1"})); }

Section random_section(std::mt19937_64& rng, const RingPtr& r, std::size_t n) {
  Section s;
  for (std::size_t i = 0; i < n; ++i) s.push_back(rng() % 4 ? oracle::random_poly(rng, r, 2, 3) : Polynomial(r));
  return s;
}

}  // namespace

TEST_CASE("bracket examples") {
  auto l = tangent_line();
  auto r = l.ring();
  CHECK(bracket(sec(r, {"1"}), sec(r, {"x"}), l) == sec(r, {"1"}));

  auto t = twisted();
  auto tr = t.ring();
  std::mt19937_64 rng(3);
  for (int k = 0; k < 20; ++k) {
    auto f = oracle::random_poly(rng, tr, 3, 3), g = oracle::random_poly(rng, tr, 3, 3);
    Section a{f, Polynomial(tr)}, b{Polynomial(tr), g};
    CHECK(bracket(a, b, t) == Section{Polynomial(tr), f * g.differentiate(0)});
    Section s = random_section(rng, tr, 2);
    CHECK(zero(bracket(s, s, t)));
  }
  CHECK_THROWS_AS(bracket(sec(r, {"1", "0"}), sec(r, {"1"}), l), DimensionError);
}

TEST_CASE("structure functions are antisymmetric") {
  auto r = make_ring({"x"});
  AnchoredBracket l(mat(r, 1, 2, {"1", "x"}));
  l.set_structure(0, 1, sec(r, {"x", "1"}));
  CHECK(l.structure(1, 0) == sec(r, {"-x", "-1"}));
  CHECK_THROWS_AS(l.set_structure(0, 0, sec(r, {"1", "0"})), DomainError);
  CHECK_THROWS_AS(l.set_structure(0, 1, sec(r, {"1"})), DimensionError);
}

TEST_CASE("property: antisymmetry and Leibniz on random sections") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    PolyMatrix a = anchors::random_involutive(rng);
    AnchoredBracket l(a);
    auto r = l.ring();
    const std::size_t n = l.rank();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) l.set_structure(i, j, random_section(rng, r, n));
    Section s = random_section(rng, r, n), t = random_section(rng, r, n);
    Section st = bracket(s, t, l), ts = bracket(t, s, l);
    for (std::size_t k = 0; k < n; ++k) CHECK((st[k] + ts[k]).is_zero());
    Polynomial f = oracle::random_poly(rng, r, 2, 3);
    Section ft;
    for (auto& p : t) ft.push_back(f * p);
    Section lhs = bracket(s, ft, l);
    Polynomial rf = apply_field(anchor_of(l, s), f);
    for (std::size_t k = 0; k < n; ++k) CHECK((lhs[k] - f * st[k] - rf * t[k]).is_zero());
  }
}

TEST_CASE("check_leibniz") {
  CHECK(check_leibniz(twisted()).holds);
  CHECK(check_leibniz(tangent_line()).holds);

  auto r = make_ring({"x", "y"});
  AnchoredBracket zero_anchor(PolyMatrix(r, 2, 2));
  zero_anchor.set_structure(0, 1, sec(r, {"2", "-1/3"}));
  CHECK(check_leibniz(zero_anchor).holds);

  // A term quadratic in the second argument is not a derivation.
  auto l = twisted();
  BracketFn corrupted = [&l](const Section& a, const Section& b) {
    Section out = bracket(a, b, l);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += a[k] * b[k] * b[k];
    return out;
  };
  auto rep = check_leibniz(l, corrupted);
  CHECK_FALSE(rep.holds);
  REQUIRE(rep.residual);
  CHECK_FALSE(zero(*rep.residual));
  CHECK(*rep.i == *rep.j);
}

TEST_CASE("check_jacobi") {
  CHECK(check_jacobi(twisted()).empty());
  CHECK(jacobi_vanishes(check_jacobi(twisted())));

  auto pt = make_ring({});
  AnchoredBracket so3(PolyMatrix(pt, 0, 3));
  so3.set_structure(0, 1, sec(pt, {"0", "0", "1"}));
  so3.set_structure(1, 2, sec(pt, {"1", "0", "0"}));
  so3.set_structure(2, 0, sec(pt, {"0", "1", "0"}));
  auto table = check_jacobi(so3);
  CHECK(table.size() == 1);
  CHECK(jacobi_vanishes(table));
  CHECK(check_weak_jacobi(so3).holds);

  // Perturbed so(3): [e0,e1] = e2 + e0 breaks Jacobi.
  so3.set_structure(0, 1, sec(pt, {"1", "0", "1"}));
  CHECK_FALSE(jacobi_vanishes(check_jacobi(so3)));
}

TEST_CASE("check_weak_jacobi detects an anchored Jacobiator") {
  auto r = make_ring({"x"});
  AnchoredBracket l(mat(r, 1, 3, {"1", "0", "0"}));
  l.set_structure(1, 2, sec(r, {"x", "0", "0"}));
  auto table = check_jacobi(l);
  REQUIRE(table.size() == 1);
  CHECK(table[0].value == sec(r, {"-1", "0", "0"}));
  auto rep = check_weak_jacobi(l);
  CHECK_FALSE(rep.holds);
  REQUIRE(rep.anchored);
  CHECK(*rep.anchored == sec(r, {"-1"}));
  CHECK(check_weak_jacobi(twisted()).holds);
}

TEST_CASE("property: anchor is a morphism on Jacobi-passing tables") {
  std::mt19937_64 rng(5);
  std::vector<AnchoredBracket> lie{twisted(), tangent_line()};
  for (int k = 0; k < 30; ++k) {
    AnchoredBracket l = synthesize_bracket(anchors::random_involutive(rng));
    if (jacobi_vanishes(check_jacobi(l))) lie.push_back(l);
  }
  CHECK(lie.size() > 5);
  for (auto& l : lie)
    for (int k = 0; k < 5; ++k) {
      Section a = random_section(rng, l.ring(), l.rank()), b = random_section(rng, l.ring(), l.rank());
      CHECK(anchor_of(l, bracket(a, b, l)) == lie_bracket(anchor_of(l, a), anchor_of(l, b)));
    }
}

TEST_CASE("check_ideal") {
  auto l = tangent_line();
  auto r = l.ring();
  auto rep = check_ideal(ModuleBasis(r, 1, {sec(r, {"x"})}), l);
  CHECK_FALSE(rep.holds);
  CHECK(*rep.frame == 0);
  CHECK(*rep.generator == sec(r, {"x"}));
  CHECK(*rep.value == sec(r, {"-1"}));
  auto rep2 = check_ideal(ModuleBasis(r, 1, {sec(r, {"x^2"}), sec(r, {"x"})}), l);
  CHECK_FALSE(rep2.holds);
  CHECK(*rep2.generator == sec(r, {"x"}));
  CHECK(check_ideal(ModuleBasis(r, 1, {}), l).holds);
  CHECK_THROWS_AS(check_ideal(ModuleBasis(r, 2, {}), l), DimensionError);
}

TEST_CASE("quotient_obstruction") {
  auto r = make_ring({"y"});
  AnchoredBracket l(mat(r, 1, 2, {"1", "0"}));
  auto w = quotient_obstruction(ModuleBasis(r, 2, {sec(r, {"0", "y"})}), l);
  REQUIRE(w);
  CHECK(w->frame == 0);
  CHECK(w->sigma == sec(r, {"0", "y"}));
  CHECK(w->value == sec(r, {"0", "1"}));
  CHECK(w->point == RationalPoint{0});

  CHECK_FALSE(quotient_obstruction(ModuleBasis(r, 2, {sec(r, {"0", "y^2"})}), l, 2));
  CHECK_FALSE(quotient_obstruction(ModuleBasis(r, 2, {}), l));

  // An ideal (here all of e2) admits no witness.
  CHECK_FALSE(quotient_obstruction(ModuleBasis(r, 2, {sec(r, {"0", "1"})}), l));
}

TEST_CASE("property: obstruction witnesses re-verify by exact rank") {
  std::mt19937_64 rng(17);
  int found = 0;
  for (int trial = 0; trial < 15; ++trial) {
    auto r = make_ring({"x"});
    AnchoredBracket l(mat(r, 1, 2, {"1", "0"}));
    Section d{Polynomial(r), oracle::random_poly(rng, r, 2, 2, false)};
    auto w = quotient_obstruction(ModuleBasis(r, 2, {d}), l, 1, trial);
    if (!w) continue;
    ++found;
    PolyMatrix dm = PolyMatrix::from_columns(r, 2, {d});
    std::size_t base = matrix_rank_at(dm, w->point);
    CHECK(matrix_rank_at(dm.hconcat(PolyMatrix::from_columns(r, 2, {w->sigma})), w->point) == base);
    CHECK(matrix_rank_at(dm.hconcat(PolyMatrix::from_columns(r, 2, {w->value})), w->point) == base + 1);
  }
  CHECK(found > 0);
}

TEST_CASE("synthesize_bracket") {
  auto r = make_ring({"x"});
  auto l = synthesize_bracket(mat(r, 1, 2, {"1", "x"}));
  CHECK(l.structure(0, 1) == sec(r, {"1", "0"}));
  CHECK(check_leibniz(l).holds);
  CHECK(check_weak_jacobi(l).holds);

  auto r2 = make_ring({"x", "y"});
  auto flat = synthesize_bracket(mat(r2, 2, 2, {"1", "0", "0", "1"}));
  CHECK(zero(flat.structure(0, 1)));

  try {
    synthesize_bracket(mat(r2, 2, 2, {"1", "0", "0", "x"}));
    FAIL("expected InvolutivityError");
  } catch (const InvolutivityError& e) {
    CHECK(e.i == 0);
    CHECK(e.j == 1);
    CHECK(e.field == sec(r2, {"0", "1"}));
  }
}

TEST_CASE("property: synthesized brackets are almost-Lie") {
  std::mt19937_64 rng(2024);
  for (int k = 0; k < 20; ++k) {
    PolyMatrix a = anchors::random_involutive(rng);
    AnchoredBracket l = synthesize_bracket(a);
    CHECK(check_leibniz(l).holds);
    CHECK(check_weak_jacobi(l).holds);
    for (std::size_t i = 0; i < l.rank(); ++i)
      for (std::size_t j = 0; j < l.rank(); ++j) {
        Section ei(l.rank(), Polynomial(l.ring())), ej = ei;
        ei[i] = Polynomial::constant(l.ring(), 1);
        ej[j] = Polynomial::constant(l.ring(), 1);
        CHECK(zero(diff(anchor_of(l, bracket(ei, ej, l)), lie_bracket(a.column(i), a.column(j)))));
      }
  }
}

TEST_CASE("foliation_of") {
  auto r = make_ring({"x"});
  auto single = foliation_of(AnchoredBracket(mat(r, 1, 1, {"x"})));
  CHECK(single.involutive);
  CHECK(single.module.columns.size() == 1);

  auto r2 = make_ring({"x", "y"});
  auto rot = foliation_of(AnchoredBracket(mat(r2, 2, 1, {"-y", "x"})));
  CHECK(rot.involutive);

  auto bad = foliation_of(AnchoredBracket(mat(r2, 2, 2, {"1", "0", "0", "x"})));
  CHECK_FALSE(bad.involutive);
  CHECK(bad.failing_pairs.size() == 1);
  CHECK(bad.closure_complete);
  CHECK(bad.rounds == 1);
  REQUIRE(bad.closure.size() == 3);
  CHECK(bad.closure[2] == sec(r2, {"0", "1"}));
}
