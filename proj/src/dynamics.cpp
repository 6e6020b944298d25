#include "tepui/dynamics.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <functional>

#include "parallel.hpp"
#include "tepui/errors.hpp"

namespace tepui {

CompiledField::Compiled CompiledField::compile(const Polynomial& p) {
  Compiled out;
  for (const auto& [m, c] : p.terms()) {
    Term t{c.get_d(), {}};
    for (std::size_t i = 0; i < m.size(); ++i)
      if (m[i]) t.powers.emplace_back(i, m[i]);
    out.push_back(std::move(t));
  }
  return out;
}

double CompiledField::eval(const Compiled& c, const RealPoint& p) {
  double s = 0;
  for (const auto& t : c) {
    double v = t.coef;
    for (auto [i, e] : t.powers) {
      double b = p[i];
      for (int k = 0; k < e; ++k) v *= b;
    }
    s += v;
  }
  return s;
}

CompiledField::CompiledField(const VectorField& x) : n_(x.size()) {
  for (const auto& p : x) {
    if (p.ring()->size() != n_ && !p.is_zero())
      throw DimensionError("vector field has " + std::to_string(n_) + " components over " +
                           std::to_string(p.ring()->size()) + " variables");
    comps_.push_back(compile(p));
    for (std::size_t j = 0; j < n_; ++j) jac_.push_back(p.is_zero() ? Compiled{} : compile(p.differentiate(j)));
  }
}

std::vector<double> CompiledField::value(const RealPoint& p) const {
  std::vector<double> out(n_);
  for (std::size_t i = 0; i < n_; ++i) out[i] = eval(comps_[i], p);
  return out;
}

std::vector<double> CompiledField::jacobian(const RealPoint& p) const {
  std::vector<double> out(n_ * n_);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = eval(jac_[k], p);
  return out;
}

namespace {

using State = std::vector<double>;
using Rhs = std::function<State(const State&)>;

void axpy(State& y, double a, const State& x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

/// Checks the first n coordinates (the base point) of the state.
void guard(const State& s, std::size_t n, const FlowOptions& opts) {
  double norm = 0;
  for (double v : s) {
    if (!std::isfinite(v)) throw BlowUpError("non-finite value during integration");
    norm = std::max(norm, std::abs(v));
  }
  if (norm > opts.blowup_norm) throw BlowUpError("trajectory exceeded norm " + format_double(opts.blowup_norm));
  if (opts.domain) {
    RealPoint p(s.begin(), s.begin() + n);
    if (!opts.domain->contains(p)) throw DomainError("trajectory left the domain box");
  }
}

void rk4(State& y, const Rhs& f, double t, std::size_t n, const FlowOptions& opts) {
  if (!(opts.step > 0)) throw DomainError("step must be positive");
  if (t == 0) return;
  const double total = std::abs(t), dir = t < 0 ? -1 : 1;
  auto steps = static_cast<std::size_t>(std::ceil(total / opts.step - 1e-9));
  if (steps == 0) steps = 1;
  for (std::size_t s = 0; s < steps; ++s) {
    double h = dir * (s + 1 == steps ? total - opts.step * static_cast<double>(steps - 1) : opts.step);
    State k1 = f(y);
    State y2 = y;
    axpy(y2, h / 2, k1);
    State k2 = f(y2);
    State y3 = y;
    axpy(y3, h / 2, k2);
    State k3 = f(y3);
    State y4 = y;
    axpy(y4, h, k3);
    State k4 = f(y4);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    guard(y, n, opts);
  }
}

Eigen::MatrixXd span_matrix(const std::vector<CompiledField>& gens, std::size_t n, const RealPoint& p) {
  Eigen::MatrixXd m(n, gens.size());
  for (std::size_t j = 0; j < gens.size(); ++j) {
    auto v = gens[j].value(p);
    for (std::size_t i = 0; i < n; ++i) m(i, j) = v[i];
  }
  return m;
}

/// Orthonormal basis of the column span.
Eigen::MatrixXd span_basis(const Eigen::MatrixXd& m, double tol) {
  if (m.cols() == 0 || m.rows() == 0) return Eigen::MatrixXd(m.rows(), 0);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  double cut = tol * std::max(1.0, s.size() ? s(0) : 0.0);
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > cut) ++r;
  return svd.matrixU().leftCols(r);
}

std::vector<CompiledField> compile_all(const std::vector<VectorField>& gens, std::size_t n) {
  std::vector<CompiledField> out;
  for (const auto& g : gens) {
    if (g.size() != n) throw DimensionError("vector field length does not match the point dimension");
    out.emplace_back(g);
  }
  return out;
}

std::vector<double> project_out(const Eigen::MatrixXd& q, const std::vector<double>& v) {
  Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(v.data(), v.size());
  Eigen::VectorXd r = x - q * (q.transpose() * x);
  return {r.data(), r.data() + r.size()};
}

/// Piecewise-constant driving field along an FPath.
struct Driver {
  std::vector<CompiledField> fields;
  const FPath& path;
  std::size_t n;

  Driver(const FPath& p, const std::vector<VectorField>& gens)
      : fields(compile_all(p.drivers.empty() ? gens : p.drivers, p.start.size())), path(p), n(p.start.size()) {
    for (const auto& s : p.segments) {
      if (!(s.t > 0)) throw DomainError("segment durations must be positive");
      if (s.lambda.size() != fields.size())
        throw DimensionError("segment has " + std::to_string(s.lambda.size()) + " coefficients for " +
                             std::to_string(fields.size()) + " fields");
    }
  }

  State value(std::size_t seg, const RealPoint& p) const {
    State out(n, 0.0);
    for (std::size_t k = 0; k < fields.size(); ++k)
      if (double l = path.segments[seg].lambda[k]; l != 0) axpy(out, l, fields[k].value(p));
    return out;
  }

  std::vector<double> jacobian(std::size_t seg, const RealPoint& p) const {
    std::vector<double> out(n * n, 0.0);
    for (std::size_t k = 0; k < fields.size(); ++k)
      if (double l = path.segments[seg].lambda[k]; l != 0) axpy(out, l, fields[k].jacobian(p));
    return out;
  }

  /// Advances the state (base point followed by `extra` tangent vectors) from time a to b.
  void advance(State& y, double a, double b, std::size_t extra, const FlowOptions& opts) const {
    double start = 0;
    for (std::size_t seg = 0; seg < path.segments.size() && a < b; ++seg) {
      double end = start + path.segments[seg].t;
      if (seg + 1 == path.segments.size()) end = std::max(end, b);
      if (a < end) {
        double to = std::min(b, end);
        Rhs f = [&, seg](const State& s) {
          RealPoint p(s.begin(), s.begin() + n);
          State d = value(seg, p);
          if (extra) {
            auto j = jacobian(seg, p);
            d.resize(n * (1 + extra), 0.0);
            for (std::size_t e = 0; e < extra; ++e)
              for (std::size_t r = 0; r < n; ++r) {
                double acc = 0;
                for (std::size_t c = 0; c < n; ++c) acc += j[r * n + c] * s[n * (1 + e) + c];
                d[n * (1 + e) + r] = acc;
              }
          }
          return d;
        };
        rk4(y, f, to - a, n, opts);
        a = to;
      }
      start = end;
    }
  }
};

}  // namespace

RealPoint flow(const VectorField& x, const RealPoint& x0, double t, const FlowOptions& opts) {
  if (x.size() != x0.size()) throw DimensionError("vector field length does not match the point dimension");
  CompiledField cf(x);
  State y = x0;
  guard(y, y.size(), opts);
  rk4(y, [&](const State& s) { return cf.value(s); }, t, y.size(), opts);
  return y;
}

std::size_t span_rank(const std::vector<VectorField>& gens, const RealPoint& p, double tol) {
  return static_cast<std::size_t>(span_basis(span_matrix(compile_all(gens, p.size()), p.size(), p), tol).cols());
}

std::vector<double> complement_projection(const std::vector<VectorField>& gens, const RealPoint& p,
                                          const std::vector<double>& v, double tol) {
  if (v.size() != p.size()) throw DimensionError("vector length does not match the point dimension");
  return project_out(span_basis(span_matrix(compile_all(gens, p.size()), p.size(), p), tol), v);
}

LeafCloud leaf_explore(const std::vector<VectorField>& gens, const RealPoint& x0, double step_time, int max_depth,
                       const FlowOptions& opts, double dedup) {
  if (gens.empty()) throw DomainError("leaf exploration needs at least one generator");
  if (max_depth < 0) throw DomainError("depth must be non-negative");
  const std::size_t n = x0.size();
  auto fields = compile_all(gens, n);
  LeafCloud out;
  auto seen = [&](const RealPoint& p) {
    for (const auto& q : out.points) {
      double d = 0;
      for (std::size_t i = 0; i < n; ++i) d = std::max(d, std::abs(p[i] - q[i]));
      if (d <= dedup) return true;
    }
    return false;
  };
  out.points.push_back(x0);
  std::vector<RealPoint> frontier{x0};
  const std::size_t moves = 2 * gens.size();
  for (int depth = 0; depth < max_depth && !frontier.empty(); ++depth) {
    std::vector<RealPoint> next(frontier.size() * moves);
    detail::parallel_for(next.size(), [&](std::size_t k) {
      const auto& f = fields[(k % moves) / 2];
      double t = k % 2 ? -step_time : step_time;
      State y = frontier[k / moves];
      rk4(y, [&](const State& s) { return f.value(s); }, t, n, opts);
      next[k] = std::move(y);
    });
    frontier.clear();
    for (auto& p : next)
      if (!seen(p)) {
        out.points.push_back(p);
        frontier.push_back(std::move(p));
      }
  }
  for (const auto& p : out.points)
    out.ranks.push_back(span_basis(span_matrix(fields, n, p), opts.rank_tol).cols());
  for (auto r : out.ranks) out.constant_rank = out.constant_rank && r == out.ranks.front();
  return out;
}

double FPath::duration() const {
  double t = 0;
  for (const auto& s : segments) t += s.t;
  return t;
}

RankTrace rank_constancy_along(const FPath& path, const std::vector<VectorField>& gens, std::size_t nodes,
                               const FlowOptions& opts) {
  if (nodes < 2) throw DomainError("need at least two nodes");
  const std::size_t n = path.start.size();
  Driver drv(path, gens);
  auto fields = compile_all(gens, n);
  RankTrace out;
  const double total = path.duration();
  State y = path.start;
  double t = 0;
  for (std::size_t i = 0; i < nodes; ++i) {
    double ti = total * static_cast<double>(i) / static_cast<double>(nodes - 1);
    drv.advance(y, t, ti, 0, opts);
    t = ti;
    Eigen::MatrixXd g = span_matrix(fields, n, y);
    std::size_t r = span_basis(g, opts.rank_tol).cols();
    out.times.push_back(ti);
    out.points.push_back(y);
    out.ranks.push_back(r);
    // The driving field of the segment containing ti must lie in the span.
    if (!path.segments.empty()) {
      std::size_t seg = 0;
      double end = path.segments[0].t;
      while (seg + 1 < path.segments.size() && ti >= end) end += path.segments[++seg].t;
      State x = drv.value(seg, y);
      Eigen::MatrixXd gx(n, g.cols() + 1);
      gx << g, Eigen::Map<Eigen::VectorXd>(x.data(), n);
      if (static_cast<std::size_t>(span_basis(gx, opts.rank_tol).cols()) != r) out.f_path = false;
    }
  }
  for (auto r : out.ranks) out.constant = out.constant && r == out.ranks.front();
  return out;
}

TransportResult bott_transport(const std::vector<VectorField>& gens, const FPath& path, const std::vector<double>& w0,
                               const FlowOptions& opts) {
  const std::size_t n = path.start.size();
  if (w0.size() != n) throw DimensionError("w0 length does not match the point dimension");
  auto trace = rank_constancy_along(path, gens, 100, opts);
  if (!trace.constant) throw DomainError("fiber rank is not constant along the path");
  auto fields = compile_all(gens, n);
  Driver drv(path, gens);

  Eigen::MatrixXd q0 = span_basis(span_matrix(fields, n, path.start), opts.rank_tol);
  const bool control = q0.cols() > 0;
  State y = path.start;
  y.insert(y.end(), w0.begin(), w0.end());
  if (control)
    for (Eigen::Index i = 0; i < q0.rows(); ++i) y.push_back(q0(i, 0));
  drv.advance(y, 0, path.duration(), control ? 2 : 1, opts);

  TransportResult out;
  out.point.assign(y.begin(), y.begin() + n);
  out.w.assign(y.begin() + n, y.begin() + 2 * n);
  Eigen::MatrixXd q = span_basis(span_matrix(fields, n, out.point), opts.rank_tol);
  out.fiber_rank = q.cols();
  out.representative = project_out(q, out.w);
  if (control) {
    std::vector<double> c(y.begin() + 2 * n, y.end());
    auto r = project_out(q, c);
    double s = 0;
    for (double v : r) s += v * v;
    out.residual = std::sqrt(s);
  }
  return out;
}

}  // namespace tepui
