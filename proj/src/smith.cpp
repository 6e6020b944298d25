#include "tepui/smith.hpp"

#include <algorithm>

#include "tepui/errors.hpp"
#include "tepui/univariate.hpp"

namespace tepui {

namespace {

using Grid = std::vector<std::vector<UPoly>>;

Grid identity_grid(std::size_t n) {
  Grid g(n, std::vector<UPoly>(n));
  for (std::size_t i = 0; i < n; ++i) g[i][i] = UPoly{Rational(1)};
  return g;
}

PolyMatrix to_matrix(const Grid& g, const RingPtr& ring, std::size_t rows, std::size_t cols) {
  PolyMatrix m(ring, rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m.at(i, j) = from_upoly(g[i][j], ring);
  return m;
}

struct Reducer {
  Grid a, u, uinv, v;
  std::size_t p, q;

  // Row i -= f * row t (and the matching inverse column operation).
  void row_sub(std::size_t i, std::size_t t, const UPoly& f) {
    for (std::size_t j = 0; j < q; ++j) a[i][j] = a[i][j] - f * a[t][j];
    for (std::size_t j = 0; j < p; ++j) u[i][j] = u[i][j] - f * u[t][j];
    for (std::size_t r = 0; r < p; ++r) uinv[r][t] = uinv[r][t] + f * uinv[r][i];
  }
  // Column j -= f * column t.
  void col_sub(std::size_t j, std::size_t t, const UPoly& f) {
    for (std::size_t i = 0; i < p; ++i) a[i][j] = a[i][j] - f * a[i][t];
    for (std::size_t i = 0; i < q; ++i) v[i][j] = v[i][j] - f * v[i][t];
  }
  void swap_rows(std::size_t i, std::size_t k) {
    if (i == k) return;
    std::swap(a[i], a[k]);
    std::swap(u[i], u[k]);
    for (std::size_t r = 0; r < p; ++r) std::swap(uinv[r][i], uinv[r][k]);
  }
  void swap_cols(std::size_t j, std::size_t k) {
    if (j == k) return;
    for (std::size_t i = 0; i < p; ++i) std::swap(a[i][j], a[i][k]);
    for (std::size_t i = 0; i < q; ++i) std::swap(v[i][j], v[i][k]);
  }
  void scale_row(std::size_t t, const Rational& s) {
    for (auto& e : a[t]) e = s * e;
    for (auto& e : u[t]) e = s * e;
    Rational inv = 1 / s;
    for (std::size_t r = 0; r < p; ++r) uinv[r][t] = inv * uinv[r][t];
  }

  /// Returns false when the remaining block is zero.
  bool step(std::size_t t) {
    for (;;) {
      int best = -1;
      std::size_t bi = 0, bj = 0;
      for (std::size_t i = t; i < p; ++i)
        for (std::size_t j = t; j < q; ++j)
          if (!a[i][j].empty() && (best < 0 || degree(a[i][j]) < best)) {
            best = degree(a[i][j]);
            bi = i;
            bj = j;
          }
      if (best < 0) return false;
      swap_rows(t, bi);
      swap_cols(t, bj);

      bool clean = true;
      for (std::size_t i = t + 1; i < p; ++i) {
        if (a[i][t].empty()) continue;
        auto [f, r] = divmod(a[i][t], a[t][t]);
        row_sub(i, t, f);
        if (!r.empty()) clean = false;
      }
      for (std::size_t j = t + 1; j < q; ++j) {
        if (a[t][j].empty()) continue;
        auto [f, r] = divmod(a[t][j], a[t][t]);
        col_sub(j, t, f);
        if (!r.empty()) clean = false;
      }
      if (!clean) continue;

      bool divisible = true;
      for (std::size_t i = t + 1; i < p && divisible; ++i)
        for (std::size_t j = t + 1; j < q; ++j)
          if (!a[i][j].empty() && !divmod(a[i][j], a[t][t]).second.empty()) {
            // Row t += row i brings the offending entry into row t.
            row_sub(t, i, UPoly{Rational(-1)});
            divisible = false;
            break;
          }
      if (!divisible) continue;
      scale_row(t, 1 / a[t][t].back());
      return true;
    }
  }
};

}  // namespace

SmithForm smith_normal_form(const PolyMatrix& pm) {
  if (pm.ring()->size() > 1)
    throw DimensionError("smith_normal_form needs a univariate matrix, got " +
                         std::to_string(pm.ring()->size()) + " variables");
  const RingPtr& ring = pm.ring();
  Reducer red;
  red.p = pm.rows();
  red.q = pm.cols();
  red.a.assign(red.p, std::vector<UPoly>(red.q));
  for (std::size_t i = 0; i < red.p; ++i)
    for (std::size_t j = 0; j < red.q; ++j) red.a[i][j] = to_upoly(pm.at(i, j));
  red.u = identity_grid(red.p);
  red.uinv = identity_grid(red.p);
  red.v = identity_grid(red.q);

  const std::size_t n = std::min(red.p, red.q);
  for (std::size_t t = 0; t < n; ++t)
    if (!red.step(t)) break;

  SmithForm out;
  out.U = to_matrix(red.u, ring, red.p, red.p);
  out.U_inv = to_matrix(red.uinv, ring, red.p, red.p);
  out.V = to_matrix(red.v, ring, red.q, red.q);
  out.D = to_matrix(red.a, ring, red.p, red.q);
  for (std::size_t t = 0; t < n; ++t) out.diagonal.push_back(out.D.at(t, t));

  if (!(out.U * pm * out.V == out.D)) throw Error("internal: Smith form failed verification");
  if (!(out.U * out.U_inv == PolyMatrix::identity(ring, red.p)))
    throw Error("internal: Smith transform inverse failed verification");
  return out;
}

}  // namespace tepui
