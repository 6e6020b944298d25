#pragma once

// Seeded families of anchors whose column module is involutive by construction.

#include <random>

#include "support/oracles.hpp"
#include "tepui/poly_matrix.hpp"

namespace anchors {

using namespace tepui;

inline Polynomial var(const RingPtr& r, std::size_t i) { return Polynomial::variable(r, i); }

inline Rational nonzero(std::mt19937_64& rng) {
  Rational q;
  do q = oracle::small_rational(rng); while (q == 0);
  return q;
}

/// n, N <= 3, entries of degree <= 2.
inline PolyMatrix random_involutive(std::mt19937_64& rng) {
  static const std::vector<std::string> names{"x", "y", "z"};
  switch (rng() % 5) {
    case 0: {  // one variable: every submodule of R[x] d/dx is involutive
      auto r = make_ring({"x"});
      std::size_t big_n = 1 + rng() % 3;
      PolyMatrix a(r, 1, big_n);
      for (std::size_t j = 0; j < big_n; ++j) a.at(0, j) = oracle::random_poly(rng, r, 2, 3);
      return a;
    }
    case 1: {  // constant direction X with multipliers {c, f_2, ...}
      std::size_t n = 2 + rng() % 2, big_n = 2 + rng() % 2;
      auto r = make_ring({names.begin(), names.begin() + n});
      std::vector<Rational> x(n);
      for (auto& c : x) c = oracle::small_rational(rng);
      x[rng() % n] = nonzero(rng);
      PolyMatrix a(r, n, big_n);
      for (std::size_t j = 0; j < big_n; ++j) {
        Polynomial f = j == 0 ? Polynomial::constant(r, nonzero(rng)) : oracle::random_poly(rng, r, 2, 3);
        for (std::size_t i = 0; i < n; ++i) a.at(i, j) = f * x[i];
      }
      return a;
    }
    case 2: {  // scaled coordinate frame of R^2 plus one arbitrary field
      auto r = make_ring({"x", "y"});
      PolyMatrix a(r, 2, 3);
      a.at(0, 0) = Polynomial::constant(r, nonzero(rng));
      a.at(1, 1) = Polynomial::constant(r, nonzero(rng));
      a.at(0, 2) = oracle::random_poly(rng, r, 2, 3);
      a.at(1, 2) = oracle::random_poly(rng, r, 2, 3);
      std::vector<std::size_t> perm{0, 1, 2};
      std::shuffle(perm.begin(), perm.end(), rng);
      PolyMatrix b(r, 2, 3);
      for (std::size_t j = 0; j < 3; ++j)
        for (std::size_t i = 0; i < 2; ++i) b.at(i, j) = a.at(i, perm[j]);
      return b;
    }
    case 3: {  // sl2 acting linearly on R^2
      auto r = make_ring({"x", "y"});
      auto x = var(r, 0), y = var(r, 1);
      PolyMatrix a(r, 2, 3);
      a.at(1, 0) = x * nonzero(rng);
      a.at(0, 1) = y * nonzero(rng);
      Rational h = nonzero(rng);
      a.at(0, 2) = x * h;
      a.at(1, 2) = -y * h;
      return a;
    }
    default: {  // a single field, or rotation with Euler field
      std::size_t n = 1 + rng() % 3;
      auto r = make_ring({names.begin(), names.begin() + n});
      if (n == 2 && rng() % 2) {
        auto x = var(r, 0), y = var(r, 1);
        Rational s = nonzero(rng), t = nonzero(rng);
        PolyMatrix a(r, 2, 2);
        a.at(0, 0) = -y * s;
        a.at(1, 0) = x * s;
        a.at(0, 1) = x * t;
        a.at(1, 1) = y * t;
        return a;
      }
      PolyMatrix a(r, n, 1);
      for (std::size_t i = 0; i < n; ++i) a.at(i, 0) = oracle::random_poly(rng, r, 2, 3);
      return a;
    }
  }
}

}  // namespace anchors
