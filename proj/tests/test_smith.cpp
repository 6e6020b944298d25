#include <cmath>
#include <random>

#include "doctest.h"
#include "support/oracles.hpp"
#include "tepui/errors.hpp"
#include "tepui/smith.hpp"
#include "tepui/univariate.hpp"

using namespace tepui;

namespace {

RingPtr rx() { return make_ring({"x"}); }
Polynomial P(const char* s) { return parse_polynomial(s, rx()); }
UPoly U(const char* s) { return to_upoly(P(s)); }

PolyMatrix mat(std::size_t r, std::size_t c, std::initializer_list<const char*> entries) {
  PolyMatrix m(rx(), r, c);
  std::size_t k = 0;
  for (auto e : entries) {
    m.at(k / c, k % c) = P(e);
    ++k;
  }
  return m;
}

void check_smith_properties(const PolyMatrix& p, const SmithForm& s) {
  CHECK(s.U * p * s.V == s.D);
  Polynomial du = determinant(s.U), dv = determinant(s.V);
  CHECK(du.is_constant());
  CHECK_FALSE(du.is_zero());
  CHECK(dv.is_constant());
  CHECK_FALSE(dv.is_zero());
  for (std::size_t i = 0; i + 1 < s.diagonal.size(); ++i) {
    UPoly a = to_upoly(s.diagonal[i]), b = to_upoly(s.diagonal[i + 1]);
    if (a.empty()) {
      CHECK(b.empty());
      continue;
    }
    CHECK(divmod(b, a).second.empty());
  }
}

}  // namespace

TEST_CASE("univariate arithmetic and roots") {
  CHECK(gcd(U("x^2 - 1"), U("x^2 + 2*x + 1")) == U("x + 1"));
  CHECK(square_free_part(U("x^3 - x^2")) == U("x^2 - x"));
  auto roots = rational_roots(U("(x-1)*(2*x-1)*(3*x+1)"));
  REQUIRE(roots.size() == 3);
  CHECK(roots[0] == Rational(-1, 3));
  CHECK(roots[1] == Rational(1, 2));
  CHECK(roots[2] == 1);
  CHECK(count_real_roots(U("x^2 + 1")) == 0);
  CHECK(count_real_roots(U("x^2 - 2")) == 2);
  CHECK(count_real_roots(U("x^3 - x")) == 3);
  CHECK(count_real_roots(U("(x^2-2)^2*(x+5)")) == 3);
}

TEST_CASE("real root isolation is tight and correct") {
  auto iv = isolate_real_roots(U("(x^2 - 2)*(x - 1/3)"));
  REQUIRE(iv.size() == 3);
  Rational w(1, 1 << 30);
  CHECK(iv[1].exact());
  CHECK(iv[1].lo == Rational(1, 3));
  for (auto k : {0, 2}) {
    CHECK(iv[k].hi - iv[k].lo <= w);
    double mid = (iv[k].lo.get_d() + iv[k].hi.get_d()) / 2;
    CHECK(std::abs(std::abs(mid) - std::sqrt(2.0)) < 1e-8);
  }
}

TEST_CASE("irreducible factors and real radical part") {
  auto f = irreducible_factors(U("(x^2+1)*(x^2-2)*(x-3)^2"));
  CHECK(f.size() == 3);
  CHECK(real_radical_part(U("(x^2+1)*(x^2-2)*(x-3)^2")) == U("(x^2-2)*(x-3)"));
  CHECK(real_radical_part(U("x^2 + 1")) == U("1"));
  CHECK(real_radical_part(U("x^2")) == U("x"));
  // Quartic with no rational roots splitting into two quadratics.
  auto q = irreducible_factors(U("(x^2+x+1)*(x^2-3)"));
  CHECK(q.size() == 2);
  CHECK(real_radical_part(U("(x^2+x+1)*(x^2-3)")) == U("x^2-3"));
  // x^4 + 1 is irreducible over Q and has no real roots.
  CHECK(irreducible_factors(U("x^4 + 1")).size() == 1);
  CHECK(real_radical_part(U("x^4 + 1")) == U("1"));
}

TEST_CASE("smith_normal_form examples") {
  auto a = mat(1, 1, {"x^2"});
  auto sa = smith_normal_form(a);
  CHECK(sa.diagonal[0] == P("x^2"));
  check_smith_properties(a, sa);

  auto b = mat(2, 2, {"x", "0", "0", "x^2"});
  auto sb = smith_normal_form(b);
  CHECK(sb.diagonal[0] == P("x"));
  CHECK(sb.diagonal[1] == P("x^2"));
  check_smith_properties(b, sb);

  auto c = mat(2, 2, {"x", "1", "0", "x"});
  auto sc = smith_normal_form(c);
  CHECK(sc.diagonal[0] == P("1"));
  CHECK(sc.diagonal[1] == P("x^2"));
  check_smith_properties(c, sc);

  PolyMatrix bi(make_ring({"x", "y"}), 1, 1);
  CHECK_THROWS_AS(smith_normal_form(bi), DimensionError);
}

TEST_CASE("smith_normal_form on random matrices") {
  std::mt19937_64 rng(31);
  auto r = rx();
  for (int t = 0; t < 40; ++t) {
    std::size_t rows = 1 + t % 3, cols = 1 + (t / 3) % 3;
    PolyMatrix m(r, rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j)
        if (rng() % 3) m.at(i, j) = oracle::random_poly(rng, r, 3, 2);
    auto s = smith_normal_form(m);
    check_smith_properties(m, s);
    CHECK(s.U * s.U_inv == PolyMatrix::identity(r, rows));
  }
}
