#include "tepui/poly_matrix.hpp"

#include <algorithm>
#include <cmath>

#include "tepui/errors.hpp"

namespace tepui {

PolyMatrix::PolyMatrix(RingPtr ring, std::size_t rows, std::size_t cols)
    : ring_(std::move(ring)), rows_(rows), cols_(cols), entries_(rows * cols, Polynomial(ring_)) {}

PolyMatrix PolyMatrix::identity(RingPtr ring, std::size_t n) {
  PolyMatrix m(ring, n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = Polynomial::constant(ring, 1);
  return m;
}

PolyMatrix PolyMatrix::from_columns(RingPtr ring, std::size_t rows, const std::vector<PolyVector>& columns) {
  PolyMatrix m(ring, rows, columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c].size() != rows) throw DimensionError("column length does not match row count");
    for (std::size_t r = 0; r < rows; ++r) m.at(r, c) = columns[c][r].in_ring(ring);
  }
  return m;
}

PolyVector PolyMatrix::column(std::size_t c) const {
  PolyVector v;
  v.reserve(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v.push_back(at(r, c));
  return v;
}

std::vector<PolyVector> PolyMatrix::columns() const {
  std::vector<PolyVector> out;
  out.reserve(cols_);
  for (std::size_t c = 0; c < cols_; ++c) out.push_back(column(c));
  return out;
}

PolyMatrix PolyMatrix::transpose() const {
  PolyMatrix t(ring_, cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t.at(c, r) = at(r, c);
  return t;
}

PolyMatrix PolyMatrix::hconcat(const PolyMatrix& other) const {
  if (other.rows_ != rows_) throw DimensionError("hconcat: row counts differ");
  RingPtr ring = common_ring(ring_, other.ring_);
  PolyMatrix m(ring, rows_, cols_ + other.cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) m.at(r, c) = at(r, c).in_ring(ring);
    for (std::size_t c = 0; c < other.cols_; ++c) m.at(r, cols_ + c) = other.at(r, c).in_ring(ring);
  }
  return m;
}

PolyMatrix PolyMatrix::in_ring(const RingPtr& target) const {
  PolyMatrix m(target, rows_, cols_);
  for (std::size_t i = 0; i < entries_.size(); ++i) m.entries_[i] = entries_[i].in_ring(target);
  return m;
}

PolyMatrix PolyMatrix::substitute(const std::vector<Polynomial>& images, const RingPtr& target) const {
  PolyMatrix m(target, rows_, cols_);
  for (std::size_t i = 0; i < entries_.size(); ++i) m.entries_[i] = entries_[i].substitute(images, target);
  return m;
}

bool PolyMatrix::is_zero() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const Polynomial& p) { return p.is_zero(); });
}

PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b) {
  if (a.cols_ != b.rows_) throw DimensionError("matrix product: inner dimensions differ");
  RingPtr ring = common_ring(a.ring_, b.ring_);
  PolyMatrix m(ring, a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t j = 0; j < b.cols_; ++j) {
      Polynomial s(ring);
      for (std::size_t k = 0; k < a.cols_; ++k)
        if (!a.at(i, k).is_zero() && !b.at(k, j).is_zero()) s += a.at(i, k) * b.at(k, j);
      m.at(i, j) = std::move(s);
    }
  return m;
}

bool PolyMatrix::operator==(const PolyMatrix& other) const {
  return rows_ == other.rows_ && cols_ == other.cols_ && entries_ == other.entries_;
}

std::vector<std::vector<Rational>> PolyMatrix::evaluate(const RationalPoint& m) const {
  if (m.size() != ring_->size()) throw DimensionError("point dimension does not match matrix ring");
  std::vector<std::vector<Rational>> out(rows_, std::vector<Rational>(cols_));
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out[r][c] = at(r, c).evaluate(m);
  return out;
}

std::vector<std::vector<double>> PolyMatrix::evaluate(const RealPoint& m) const {
  if (m.size() != ring_->size()) throw DimensionError("point dimension does not match matrix ring");
  std::vector<std::vector<double>> out(rows_, std::vector<double>(cols_));
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out[r][c] = at(r, c).evaluate(std::span<const double>(m));
  return out;
}

std::size_t exact_rank(std::vector<std::vector<Rational>> a) {
  if (a.empty()) return 0;
  const std::size_t rows = a.size(), cols = a[0].size();
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t pivot = rank;
    while (pivot < rows && a[pivot][c] == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(a[pivot], a[rank]);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      if (a[r][c] == 0) continue;
      Rational f = a[r][c] / a[rank][c];
      for (std::size_t k = c; k < cols; ++k) a[r][k] -= f * a[rank][k];
    }
    ++rank;
  }
  return rank;
}

std::size_t numeric_rank(std::vector<std::vector<double>> a, double tol) {
  if (a.empty()) return 0;
  const std::size_t rows = a.size(), cols = a[0].size();
  std::size_t rank = 0;
  std::vector<std::size_t> col_index(cols);
  for (std::size_t c = 0; c < cols; ++c) col_index[c] = c;
  while (rank < std::min(rows, cols)) {
    double best = 0;
    std::size_t br = rank, bc = rank;
    for (std::size_t r = rank; r < rows; ++r)
      for (std::size_t c = rank; c < cols; ++c)
        if (std::abs(a[r][c]) > best) {
          best = std::abs(a[r][c]);
          br = r;
          bc = c;
        }
    if (!(best > tol)) break;
    std::swap(a[br], a[rank]);
    for (auto& row : a) std::swap(row[bc], row[rank]);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      double f = a[r][rank] / a[rank][rank];
      if (f == 0) continue;
      for (std::size_t c = rank; c < cols; ++c) a[r][c] -= f * a[rank][c];
    }
    ++rank;
  }
  return rank;
}

std::size_t matrix_rank_at(const PolyMatrix& g, const RationalPoint& m) { return exact_rank(g.evaluate(m)); }

std::size_t matrix_rank_at(const PolyMatrix& g, const RealPoint& m, double tol) {
  if (tol < 0) throw DomainError("rank tolerance must be non-negative");
  return numeric_rank(g.evaluate(m), tol);
}

std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  if (k > n) return out;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  for (;;) {
    out.push_back(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

namespace {

Polynomial det_rec(const std::vector<std::vector<const Polynomial*>>& m, const RingPtr& ring) {
  const std::size_t n = m.size();
  if (n == 0) return Polynomial::constant(ring, 1);
  if (n == 1) return *m[0][0];
  if (n == 2) return (*m[0][0]) * (*m[1][1]) - (*m[0][1]) * (*m[1][0]);
  Polynomial total(ring);
  for (std::size_t c = 0; c < n; ++c) {
    if (m[0][c]->is_zero()) continue;
    std::vector<std::vector<const Polynomial*>> sub(n - 1);
    for (std::size_t r = 1; r < n; ++r)
      for (std::size_t k = 0; k < n; ++k)
        if (k != c) sub[r - 1].push_back(m[r][k]);
    Polynomial term = (*m[0][c]) * det_rec(sub, ring);
    if (c % 2)
      total -= term;
    else
      total += term;
  }
  return total;
}

}  // namespace

Polynomial determinant(const PolyMatrix& g) {
  if (g.rows() != g.cols()) throw DimensionError("determinant of a non-square matrix");
  std::vector<std::vector<const Polynomial*>> m(g.rows());
  for (std::size_t r = 0; r < g.rows(); ++r)
    for (std::size_t c = 0; c < g.cols(); ++c) m[r].push_back(&g.at(r, c));
  return det_rec(m, g.ring());
}

std::vector<Polynomial> minors(const PolyMatrix& g, std::size_t k) {
  if (k < 1 || k > std::min(g.rows(), g.cols()))
    throw DomainError("minor size " + std::to_string(k) + " out of range");
  std::vector<Polynomial> out;
  for (const auto& rs : subsets(g.rows(), k))
    for (const auto& cs : subsets(g.cols(), k)) {
      std::vector<std::vector<const Polynomial*>> m(k);
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) m[i].push_back(&g.at(rs[i], cs[j]));
      out.push_back(det_rec(m, g.ring()));
    }
  return out;
}

}  // namespace tepui
