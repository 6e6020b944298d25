#pragma once

#include <cstddef>
#include <vector>

#include "tepui/polynomial.hpp"

namespace tepui {

/// Default pivot threshold for rank decisions at floating-point points.
inline constexpr double kDefaultRankTol = 1e-9;

/// Dense rows x cols matrix of polynomials over a shared ring.
class PolyMatrix {
 public:
  PolyMatrix() : ring_(make_ring({})) {}
  PolyMatrix(RingPtr ring, std::size_t rows, std::size_t cols);

  static PolyMatrix identity(RingPtr ring, std::size_t n);
  /// Builds a matrix whose columns are the given vectors (each of length `rows`).
  static PolyMatrix from_columns(RingPtr ring, std::size_t rows, const std::vector<PolyVector>& columns);

  const RingPtr& ring() const { return ring_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Polynomial& at(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  const Polynomial& at(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

  PolyVector column(std::size_t c) const;
  std::vector<PolyVector> columns() const;

  PolyMatrix transpose() const;
  /// Columns of `this` followed by columns of `other`.
  PolyMatrix hconcat(const PolyMatrix& other) const;
  PolyMatrix in_ring(const RingPtr& target) const;
  PolyMatrix substitute(const std::vector<Polynomial>& images, const RingPtr& target) const;

  bool is_zero() const;

  friend PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b);
  bool operator==(const PolyMatrix& other) const;

  std::vector<std::vector<Rational>> evaluate(const RationalPoint& m) const;
  std::vector<std::vector<double>> evaluate(const RealPoint& m) const;

 private:
  RingPtr ring_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Polynomial> entries_;
};

/// Exact rank of a rational matrix (Gaussian elimination over Q).
std::size_t exact_rank(std::vector<std::vector<Rational>> a);

/// Rank of a real matrix by full-pivot elimination; pivots with |p| <= tol count as zero.
std::size_t numeric_rank(std::vector<std::vector<double>> a, double tol = kDefaultRankTol);

/// Rank of G(m); exact at rational points.
std::size_t matrix_rank_at(const PolyMatrix& g, const RationalPoint& m);
/// Rank of G(m) at a real point with pivot threshold `tol`.
std::size_t matrix_rank_at(const PolyMatrix& g, const RealPoint& m, double tol = kDefaultRankTol);

/// All k x k minors, rows and columns chosen in lexicographic index order
/// (row subsets outer, column subsets inner).
std::vector<Polynomial> minors(const PolyMatrix& g, std::size_t k);

/// Laplace expansion; sizes here are small.
Polynomial determinant(const PolyMatrix& g);

/// All size-k subsets of {0..n-1} in lexicographic order.
std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t k);

}  // namespace tepui
