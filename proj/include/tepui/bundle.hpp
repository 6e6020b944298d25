#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "tepui/groebner.hpp"
#include "tepui/poly_matrix.hpp"

namespace tepui {

enum class Relation { Gt, Ge, Eq, Lt, Le };

Relation parse_relation(std::string_view text);
std::string to_string(Relation r);

/// poly `rel` 0.
struct SignCondition {
  Polynomial poly;
  Relation rel = Relation::Eq;

  bool holds(const RationalPoint& m) const;
  bool holds(const RealPoint& m) const;
};

/// Conjunction of sign conditions; the empty cell is everything.
struct Cell {
  std::vector<SignCondition> conditions;

  bool contains(const RationalPoint& m) const;
  bool contains(const RealPoint& m) const;
  bool is_everything() const { return conditions.empty(); }
};

/// Axis-aligned closed box; missing bounds are infinite.
struct Box {
  struct Side {
    std::optional<Rational> lo, hi;
  };
  std::vector<Side> sides;

  static Box unbounded(std::size_t n) { return Box{std::vector<Side>(n)}; }
  bool contains(const RationalPoint& m) const;
  bool contains(const RealPoint& m) const;
  bool operator==(const Box& other) const;
  bool is_unbounded() const;
  /// Seeded point with small denominators (at most 4), so boundaries such as
  /// x = 0 are hit. Infinite sides are sampled within 20 of the finite bound or in [-10, 10].
  RationalPoint sample(std::mt19937_64& rng) const;
};

struct Piece {
  Cell cell;
  /// N x k; k may differ between pieces.
  PolyMatrix generators;
};

/// E = V/D with V trivial of rank N and D spanned pointwise by generator
/// columns, either globally (one piece, empty cell) or per semialgebraic cell.
struct Bundle {
  RingPtr ring;
  std::size_t ambient_rank = 0;
  Box domain;
  std::vector<Piece> pieces;

  static Bundle polynomial(const PolyMatrix& generators, std::optional<Box> domain = std::nullopt);
  /// Rank-N bundle with no generators.
  static Bundle trivial(const RingPtr& ring, std::size_t n, std::optional<Box> domain = std::nullopt);

  bool is_polynomial() const { return pieces.size() == 1 && pieces[0].cell.is_everything(); }
  /// Generator matrix of a polynomial presentation (UnsupportedError for cellwise bundles).
  const PolyMatrix& generators() const;

  /// The unique piece containing m. DomainError outside the domain or when m
  /// lies in no cell or in several.
  const Piece& piece_at(const RationalPoint& m) const;
  const Piece& piece_at(const RealPoint& m) const;

  /// Checks shapes and exactly-one-cell membership at `samples` seeded points.
  void validate(std::uint64_t seed = 0, std::size_t samples = 1000) const;
};

/// N - rank G_cell(m), exact.
std::size_t fiber_dim(const Bundle& e, const RationalPoint& m);
/// N - rank G_cell(m) with pivot threshold tol.
std::size_t fiber_dim(const Bundle& e, const RealPoint& m, double tol = kDefaultRankTol);

/// Largest k with a nonzero k x k minor (polynomial presentations only).
std::size_t generic_rank(const Bundle& e);
std::size_t generic_fiber_dim(const Bundle& e);

struct RankStratum {
  std::size_t k;
  /// Reduced Groebner basis of the ideal of k x k minors; rank G(m) < k iff m is a common zero.
  ModuleBasis ideal;
};

std::vector<RankStratum> rank_strata(const Bundle& e);

struct GridSpec {
  std::vector<Rational> lo, hi;
  Rational step;
};

struct GridResult {
  std::vector<RationalPoint> nodes;
  std::vector<std::size_t> dims;
  bool semicontinuous = true;
  /// Node indices where a certified neighbor lost rank.
  std::vector<std::size_t> violations;
};

/// Fiber dimension at every node lo + i * step (per axis, up to hi), plus the
/// certified semicontinuity check: at each node a nonvanishing minor of its
/// rank is located, and every neighbor in the same cell where that minor is
/// still nonzero must have rank at least as large.
GridResult mrank_grid(const Bundle& e, const GridSpec& grid);

/// CSV with a header of variable names and "dim".
std::string grid_csv(const Bundle& e, const GridResult& g);

/// Worker count for data-parallel scans: TEPUI_THREADS when set, else hardware concurrency.
unsigned worker_count();

}  // namespace tepui
