#pragma once

#include <optional>
#include <vector>

#include "tepui/bundle.hpp"
#include "tepui/poly_matrix.hpp"

namespace tepui {

/// Polynomial vector field: component i is the coefficient of d/dx_i.
using VectorField = PolyVector;

struct FlowOptions {
  double step = 1e-3;
  std::optional<Box> domain;  // leaving it raises DomainError
  double blowup_norm = 1e12;  // exceeding it raises BlowUpError
  double rank_tol = 1e-9;     // singular values below tol * max(1, sigma_max) count as zero
};

/// Field compiled to double evaluation, with its Jacobian.
class CompiledField {
 public:
  explicit CompiledField(const VectorField& x);
  std::size_t dim() const { return n_; }
  std::vector<double> value(const RealPoint& p) const;
  /// Row-major n x n, entry (i, j) = d X_i / d x_j.
  std::vector<double> jacobian(const RealPoint& p) const;

 private:
  struct Term {
    double coef;
    std::vector<std::pair<std::size_t, int>> powers;
  };
  using Compiled = std::vector<Term>;
  static Compiled compile(const Polynomial& p);
  static double eval(const Compiled& c, const RealPoint& p);
  std::size_t n_;
  std::vector<Compiled> comps_, jac_;
};

/// Classical RK4 for x' = X(x) over time t (negative runs backwards).
RealPoint flow(const VectorField& x, const RealPoint& x0, double t, const FlowOptions& opts = {});

/// Numeric rank of span{g_i(p)}.
std::size_t span_rank(const std::vector<VectorField>& gens, const RealPoint& p, double tol = 1e-9);

struct LeafCloud {
  std::vector<RealPoint> points;  // BFS order
  std::vector<std::size_t> ranks;
  bool constant_rank = true;
};

/// Breadth-first composition of time +-step_time generator flows to depth max_depth,
/// deduplicating points within `dedup`.
LeafCloud leaf_explore(const std::vector<VectorField>& gens, const RealPoint& x0, double step_time, int max_depth,
                       const FlowOptions& opts = {}, double dedup = 1e-6);

struct FPath {
  struct Segment {
    std::vector<double> lambda;
    double t;
  };
  RealPoint start;
  std::vector<Segment> segments;
  /// Fields the coefficients refer to. Empty: the foliation generators themselves.
  std::vector<VectorField> drivers;

  double duration() const;
};

struct RankTrace {
  bool constant = true;
  /// False when some driving field leaves span{g_i(gamma(t))} at a node.
  bool f_path = true;
  std::vector<double> times;
  std::vector<RealPoint> points;
  std::vector<std::size_t> ranks;
};

/// Samples rank span{g_i(gamma(t))} at `nodes` uniformly spaced times over the whole path.
RankTrace rank_constancy_along(const FPath& path, const std::vector<VectorField>& gens, std::size_t nodes = 100,
                               const FlowOptions& opts = {});

struct TransportResult {
  RealPoint point;
  std::vector<double> w;               // transported vector
  std::vector<double> representative;  // projection of w onto the complement of the fiber span
  double residual = 0;                 // distance of a transported control vector from the fiber span
  std::size_t fiber_rank = 0;
};

/// Integrates gamma' = X(gamma), w' = J_X(gamma) w along the path and returns the class
/// of w in R^n / span{g_i(gamma(end))}. Requires constant rank along the path.
TransportResult bott_transport(const std::vector<VectorField>& gens, const FPath& path, const std::vector<double>& w0,
                               const FlowOptions& opts = {});

/// Orthogonal projector onto the complement of span{g_i(p)} applied to v.
std::vector<double> complement_projection(const std::vector<VectorField>& gens, const RealPoint& p,
                                          const std::vector<double>& v, double tol = 1e-9);

}  // namespace tepui
