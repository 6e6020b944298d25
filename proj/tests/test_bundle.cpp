#include <random>

#include "doctest.h"
#include "support/oracles.hpp"
#include "tepui/bundle.hpp"
#include "tepui/errors.hpp"

using namespace tepui;

namespace {

RingPtr rx() { return make_ring({"x"}); }
Polynomial P(const char* s, const RingPtr& r) { return parse_polynomial(s, r); }

PolyMatrix column(const RingPtr& r, std::initializer_list<const char*> entries) {
  PolyMatrix m(r, entries.size(), 1);
  std::size_t i = 0;
  for (auto e : entries) m.at(i++, 0) = P(e, r);
  return m;
}

Bundle cross() { return Bundle::polynomial(column(rx(), {"x"})); }

/// Fiber R on x >= 0 (no generators), 0 on x < 0.
Bundle e_geq() {
  auto r = rx();
  Bundle e;
  e.ring = r;
  e.ambient_rank = 1;
  e.domain = Box::unbounded(1);
  e.pieces.push_back({Cell{{{P("x", r), Relation::Ge}}}, PolyMatrix(r, 1, 0)});
  e.pieces.push_back({Cell{{{P("x", r), Relation::Lt}}}, column(r, {"1"})});
  return e;
}

}  // namespace

TEST_CASE("fiber_dim examples") {
  CHECK(fiber_dim(cross(), RationalPoint{0}) == 1);
  CHECK(fiber_dim(cross(), RationalPoint{Rational(1, 2)}) == 0);
  CHECK(fiber_dim(e_geq(), RationalPoint{-1}) == 0);
  CHECK(fiber_dim(e_geq(), RationalPoint{0}) == 1);
  CHECK(fiber_dim(cross(), RealPoint{0.0}) == 1);
  CHECK(fiber_dim(cross(), RealPoint{1e-12}) == 1);  // below the pivot threshold
  CHECK(fiber_dim(cross(), RealPoint{1e-12}, 0.0) == 0);
}

TEST_CASE("fiber_dim errors") {
  Box unit{{{Rational(-1), Rational(1)}}};
  auto e = Bundle::polynomial(column(rx(), {"x"}), unit);
  CHECK_THROWS_AS(fiber_dim(e, RationalPoint{2}), DomainError);
  auto gap = e_geq();
  gap.pieces[1].cell.conditions[0].rel = Relation::Lt;
  gap.pieces[0].cell.conditions[0].rel = Relation::Gt;
  CHECK_THROWS_AS(fiber_dim(gap, RationalPoint{0}), DomainError);
  CHECK_THROWS_AS(gap.validate(), DomainError);
  CHECK_NOTHROW(e_geq().validate());
}

TEST_CASE("generic_rank examples") {
  auto r = rx();
  CHECK(generic_rank(cross()) == 1);
  CHECK(generic_fiber_dim(cross()) == 0);
  auto zero = Bundle::polynomial(PolyMatrix(r, 2, 1));
  CHECK(generic_rank(zero) == 0);
  CHECK(generic_fiber_dim(zero) == 2);
  auto r2 = make_ring({"x", "y"});
  auto xy = Bundle::polynomial(column(r2, {"x", "y"}));
  CHECK(generic_rank(xy) == 1);
  CHECK(generic_fiber_dim(xy) == 1);
  CHECK_THROWS_AS(generic_rank(e_geq()), UnsupportedError);
}

TEST_CASE("rank_strata examples") {
  auto s = rank_strata(cross());
  REQUIRE(s.size() == 1);
  CHECK(s[0].ideal.columns.size() == 1);
  CHECK(s[0].ideal.columns[0][0] == P("x", rx()));

  auto r2 = make_ring({"x", "y"});
  PolyMatrix d(r2, 2, 2);
  d.at(0, 0) = P("x", r2);
  d.at(1, 1) = P("y", r2);
  auto s2 = rank_strata(Bundle::polynomial(d));
  REQUIRE(s2.size() == 2);
  CHECK(s2[0].ideal.columns.size() == 2);
  CHECK(module_member({P("x", r2)}, s2[0].ideal));
  CHECK(module_member({P("y", r2)}, s2[0].ideal));
  REQUIRE(s2[1].ideal.columns.size() == 1);
  CHECK(s2[1].ideal.columns[0][0] == P("x*y", r2));

  PolyMatrix row(r2, 1, 2);
  row.at(0, 0) = P("x", r2);
  row.at(0, 1) = P("y", r2);
  auto s3 = rank_strata(Bundle::polynomial(row));
  REQUIRE(s3.size() == 1);
  CHECK(s3[0].ideal.columns.size() == 2);
}

TEST_CASE("mrank_grid examples") {
  GridSpec g{{Rational(-1)}, {Rational(1)}, Rational(1, 2)};
  auto res = mrank_grid(cross(), g);
  CHECK(res.dims == std::vector<std::size_t>{0, 0, 1, 0, 0});
  CHECK(res.semicontinuous);
  auto free2 = Bundle::trivial(rx(), 2);
  auto res2 = mrank_grid(free2, g);
  CHECK(res2.dims == std::vector<std::size_t>{2, 2, 2, 2, 2});
  CHECK(res2.semicontinuous);
  CHECK_THROWS_AS(mrank_grid(cross(), GridSpec{{Rational(-1)}, {Rational(1)}, Rational(0)}), DomainError);
  CHECK_THROWS_AS(mrank_grid(cross(), GridSpec{{Rational(1)}, {Rational(-1)}, Rational(1)}), DomainError);
  auto csv = grid_csv(cross(), res);
  CHECK(csv.rfind("x,dim\n-1,0\n", 0) == 0);
}

TEST_CASE("grid assembly does not depend on the worker count") {
  auto r2 = make_ring({"x", "y"});
  PolyMatrix d(r2, 2, 2);
  d.at(0, 0) = P("x^2 - y", r2);
  d.at(1, 1) = P("x*y", r2);
  d.at(0, 1) = P("y", r2);
  auto e = Bundle::polynomial(d);
  GridSpec g{{Rational(-2), Rational(-2)}, {Rational(2), Rational(2)}, Rational(1, 4)};
  setenv("TEPUI_THREADS", "1", 1);
  auto a = mrank_grid(e, g);
  setenv("TEPUI_THREADS", "4", 1);
  auto b = mrank_grid(e, g);
  unsetenv("TEPUI_THREADS");
  CHECK(a.dims == b.dims);
  CHECK(a.semicontinuous);
}

TEST_CASE("fiber dimension is bounded below by the generic dimension") {
  std::mt19937_64 rng(41);
  auto r2 = make_ring({"x", "y"});
  for (int t = 0; t < 10; ++t) {
    PolyMatrix g(r2, 2, 2);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) g.at(i, j) = oracle::random_poly(rng, r2, 2, 2);
    auto e = Bundle::polynomial(g);
    std::size_t gen = generic_fiber_dim(e);
    auto strata = rank_strata(e);
    std::size_t gr = generic_rank(e);
    for (int s = 0; s < 20; ++s) {
      auto m = oracle::random_point(rng, 2);
      std::size_t d = fiber_dim(e, m);
      CHECK(d >= gen);
      // Off the zero set of the top nonzero minor ideal the dimension is generic.
      if (gr > 0) {
        bool off = false;
        for (const auto& c : strata[gr - 1].ideal.columns)
          if (c[0].evaluate(m) != 0) off = true;
        if (off) CHECK(d == gen);
      }
    }
  }
}

TEST_CASE("grid verdict passes on random polynomial presentations") {
  std::mt19937_64 rng(43);
  auto r2 = make_ring({"x", "y"});
  for (int t = 0; t < 10; ++t) {
    PolyMatrix g(r2, 2, 1 + rng() % 3);
    for (std::size_t i = 0; i < g.rows(); ++i)
      for (std::size_t j = 0; j < g.cols(); ++j) g.at(i, j) = oracle::random_poly(rng, r2, 2, 2);
    auto res = mrank_grid(Bundle::polynomial(g), GridSpec{{-2, -2}, {2, 2}, Rational(1, 2)});
    CHECK(res.semicontinuous);
    CHECK(res.violations.empty());
  }
}

TEST_CASE("cellwise and polynomial presentations agree") {
  auto r = make_ring({"x", "y"});
  PolyMatrix g = column(r, {"x", "y"});
  Bundle poly = Bundle::polynomial(g);
  Bundle cells;
  cells.ring = r;
  cells.ambient_rank = 2;
  cells.domain = Box::unbounded(2);
  auto x = P("x", r), y = P("y", r);
  cells.pieces.push_back({Cell{{{x, Relation::Gt}}}, g});
  cells.pieces.push_back({Cell{{{x, Relation::Lt}}}, g});
  cells.pieces.push_back({Cell{{{x, Relation::Eq}, {y, Relation::Gt}}}, g});
  cells.pieces.push_back({Cell{{{x, Relation::Eq}, {y, Relation::Lt}}}, g});
  cells.pieces.push_back({Cell{{{x, Relation::Eq}, {y, Relation::Eq}}}, PolyMatrix(r, 2, 0)});
  cells.validate();

  std::mt19937_64 rng(44);
  for (int s = 0; s < 100; ++s) {
    auto m = oracle::random_point(rng, 2, 1);
    if (s % 4 == 0) m[0] = 0;
    if (s % 8 == 0) m[1] = 0;
    CHECK(fiber_dim(poly, m) == fiber_dim(cells, m));
  }
  CHECK(fiber_dim(cells, RationalPoint{0, 0}) == 2);

  Bundle cross_cells = e_geq();
  cross_cells.pieces = {{Cell{{{P("x", rx()), Relation::Eq}}}, PolyMatrix(rx(), 1, 0)},
                        {Cell{{{P("x", rx()), Relation::Gt}}}, column(rx(), {"1"})},
                        {Cell{{{P("x", rx()), Relation::Lt}}}, column(rx(), {"1"})}};
  for (int s = 0; s < 100; ++s) {
    auto m = oracle::random_point(rng, 1, 1);
    CHECK(fiber_dim(cross(), m) == fiber_dim(cross_cells, m));
  }
}
