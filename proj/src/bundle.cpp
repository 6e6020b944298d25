#include "tepui/bundle.hpp"

#include <cstdlib>
#include <map>
#include <random>
#include <sstream>
#include <thread>

#include "parallel.hpp"
#include "tepui/errors.hpp"

namespace tepui {

Relation parse_relation(std::string_view t) {
  if (t == ">") return Relation::Gt;
  if (t == ">=") return Relation::Ge;
  if (t == "=" || t == "==") return Relation::Eq;
  if (t == "<") return Relation::Lt;
  if (t == "<=") return Relation::Le;
  throw ParseError("unknown relation '" + std::string(t) + "'");
}

std::string to_string(Relation r) {
  switch (r) {
    case Relation::Gt: return ">";
    case Relation::Ge: return ">=";
    case Relation::Eq: return "=";
    case Relation::Lt: return "<";
    case Relation::Le: return "<=";
  }
  return "?";
}

namespace {

template <class T>
bool compare_zero(const T& v, Relation r) {
  switch (r) {
    case Relation::Gt: return v > 0;
    case Relation::Ge: return v >= 0;
    case Relation::Eq: return v == 0;
    case Relation::Lt: return v < 0;
    case Relation::Le: return v <= 0;
  }
  return false;
}

}  // namespace

bool SignCondition::holds(const RationalPoint& m) const { return compare_zero(poly.evaluate(m), rel); }
bool SignCondition::holds(const RealPoint& m) const {
  return compare_zero(poly.evaluate(std::span<const double>(m)), rel);
}

bool Cell::contains(const RationalPoint& m) const {
  for (const auto& c : conditions)
    if (!c.holds(m)) return false;
  return true;
}

bool Cell::contains(const RealPoint& m) const {
  for (const auto& c : conditions)
    if (!c.holds(m)) return false;
  return true;
}

bool Box::contains(const RationalPoint& m) const {
  if (m.size() != sides.size()) throw DimensionError("point dimension does not match the domain");
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (sides[i].lo && m[i] < *sides[i].lo) return false;
    if (sides[i].hi && m[i] > *sides[i].hi) return false;
  }
  return true;
}

bool Box::contains(const RealPoint& m) const {
  if (m.size() != sides.size()) throw DimensionError("point dimension does not match the domain");
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (sides[i].lo && m[i] < sides[i].lo->get_d()) return false;
    if (sides[i].hi && m[i] > sides[i].hi->get_d()) return false;
  }
  return true;
}

bool Box::operator==(const Box& other) const {
  if (sides.size() != other.sides.size()) return false;
  for (std::size_t i = 0; i < sides.size(); ++i)
    if (sides[i].lo != other.sides[i].lo || sides[i].hi != other.sides[i].hi) return false;
  return true;
}

bool Box::is_unbounded() const {
  for (const auto& s : sides)
    if (s.lo || s.hi) return false;
  return true;
}

RationalPoint Box::sample(std::mt19937_64& rng) const {
  std::uniform_int_distribution<int> den(1, 4);
  RationalPoint m(sides.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    const auto& s = sides[i];
    Rational lo = s.lo ? *s.lo : (s.hi ? *s.hi - 20 : Rational(-10));
    Rational hi = s.hi ? *s.hi : lo + 20;
    int d = den(rng);
    Rational span = (hi - lo) * d;
    long top = mpz_class(span.get_num() / span.get_den()).get_si();
    long pick = std::uniform_int_distribution<long>(0, std::max(top, 0L))(rng);
    Rational step(pick, d);
    step.canonicalize();
    m[i] = lo + step;
    if (m[i] > hi) m[i] = hi;
  }
  return m;
}

Bundle Bundle::polynomial(const PolyMatrix& g, std::optional<Box> domain) {
  Bundle e;
  e.ring = g.ring();
  e.ambient_rank = g.rows();
  e.domain = domain ? *domain : Box::unbounded(g.ring()->size());
  e.pieces.push_back(Piece{Cell{}, g});
  return e;
}

Bundle Bundle::trivial(const RingPtr& ring, std::size_t n, std::optional<Box> domain) {
  return polynomial(PolyMatrix(ring, n, 0), std::move(domain));
}

const PolyMatrix& Bundle::generators() const {
  if (!is_polynomial()) throw UnsupportedError("cellwise bundle has no global generator matrix; query its pieces");
  return pieces[0].generators;
}

namespace {

std::string point_text(const RationalPoint& m) {
  std::string s = "(";
  for (std::size_t i = 0; i < m.size(); ++i) s += (i ? ", " : "") + to_string(m[i]);
  return s + ")";
}

std::string point_text(const RealPoint& m) {
  std::string s = "(";
  for (std::size_t i = 0; i < m.size(); ++i) s += (i ? ", " : "") + format_double(m[i]);
  return s + ")";
}

template <class Point>
const Piece& locate(const Bundle& e, const Point& m) {
  if (m.size() != e.ring->size())
    throw DimensionError("point has " + std::to_string(m.size()) + " coordinates, bundle has " +
                         std::to_string(e.ring->size()) + " variables");
  if (!e.domain.contains(m)) throw DomainError("point " + point_text(m) + " lies outside the domain");
  const Piece* found = nullptr;
  for (const auto& p : e.pieces)
    if (p.cell.contains(m)) {
      if (found) throw DomainError("point " + point_text(m) + " lies in more than one cell");
      found = &p;
    }
  if (!found) throw DomainError("point " + point_text(m) + " lies in no cell");
  return *found;
}

}  // namespace

const Piece& Bundle::piece_at(const RationalPoint& m) const { return locate(*this, m); }
const Piece& Bundle::piece_at(const RealPoint& m) const { return locate(*this, m); }

void Bundle::validate(std::uint64_t seed, std::size_t samples) const {
  if (domain.sides.size() != ring->size()) throw DimensionError("domain dimension does not match variable count");
  if (pieces.empty()) throw DomainError("bundle has no pieces");
  for (const auto& p : pieces) {
    if (p.generators.rows() != ambient_rank)
      throw DimensionError("generator matrix has " + std::to_string(p.generators.rows()) + " rows, expected " +
                           std::to_string(ambient_rank));
    for (const auto& c : p.cell.conditions)
      if (c.poly.nvars() != 0 && !(*c.poly.ring() == *ring)) throw DimensionError("cell polynomial in a foreign ring");
  }
  for (std::size_t i = 0; i < domain.sides.size(); ++i) {
    const auto& s = domain.sides[i];
    if (s.lo && s.hi && *s.lo > *s.hi) throw DomainError("empty domain interval");
  }
  if (is_polynomial()) return;

  std::mt19937_64 rng(seed);
  for (std::size_t k = 0; k < samples; ++k) locate(*this, domain.sample(rng));
}

// ---------------------------------------------------------------- fibers

std::size_t fiber_dim(const Bundle& e, const RationalPoint& m) {
  const Piece& p = e.piece_at(m);
  return e.ambient_rank - matrix_rank_at(p.generators, m);
}

std::size_t fiber_dim(const Bundle& e, const RealPoint& m, double tol) {
  const Piece& p = e.piece_at(m);
  return e.ambient_rank - matrix_rank_at(p.generators, m, tol);
}

std::size_t generic_rank(const Bundle& e) {
  if (!e.is_polynomial()) throw UnsupportedError("generic_rank needs a polynomial presentation; query pieces instead");
  const PolyMatrix& g = e.generators();
  const std::size_t top = std::min(g.rows(), g.cols());
  // Rank at a few rational points is a lower bound; minors settle the rest.
  std::size_t r = 0;
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> num(-97, 97), den(1, 13);
  for (int t = 0; t < 3 && r < top; ++t) {
    RationalPoint m(g.ring()->size());
    for (auto& c : m) c = Rational(num(rng), den(rng));
    for (auto& c : m) c.canonicalize();
    r = std::max(r, matrix_rank_at(g, m));
  }
  for (std::size_t k = r + 1; k <= top; ++k) {
    auto ms = minors(g, k);
    bool nonzero = std::any_of(ms.begin(), ms.end(), [](const Polynomial& p) { return !p.is_zero(); });
    if (!nonzero) break;
    r = k;
  }
  return r;
}

std::size_t generic_fiber_dim(const Bundle& e) { return e.ambient_rank - generic_rank(e); }

std::vector<RankStratum> rank_strata(const Bundle& e) {
  if (!e.is_polynomial()) throw UnsupportedError("rank_strata needs a polynomial presentation");
  const PolyMatrix& g = e.generators();
  std::vector<RankStratum> out;
  for (std::size_t k = 1; k <= std::min(g.rows(), g.cols()); ++k) {
    std::vector<Polynomial> gens;
    for (auto& p : minors(g, k))
      if (!p.is_zero()) gens.push_back(std::move(p));
    out.push_back({k, groebner_basis(ModuleBasis::ideal(g.ring(), gens))});
  }
  return out;
}

// ---------------------------------------------------------------- grid

unsigned worker_count() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("TEPUI_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(std::min<long>(v, 1024));
  }
  return hw;
}

namespace {

struct PivotRank {
  std::size_t rank = 0;
  std::vector<std::size_t> rows, cols;
};

/// Exact rank with the original row/column indices of a nonsingular r x r submatrix.
PivotRank pivot_rank(std::vector<std::vector<Rational>> a) {
  PivotRank out;
  if (a.empty()) return out;
  const std::size_t rows = a.size(), cols = a[0].size();
  std::vector<std::size_t> perm(rows);
  for (std::size_t i = 0; i < rows; ++i) perm[i] = i;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[r]);
    std::swap(perm[p], perm[r]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      if (a[i][c] == 0) continue;
      Rational f = a[i][c] / a[r][c];
      for (std::size_t k = c; k < cols; ++k) a[i][k] -= f * a[r][k];
    }
    out.rows.push_back(perm[r]);
    out.cols.push_back(c);
    ++r;
  }
  out.rank = r;
  std::sort(out.rows.begin(), out.rows.end());
  return out;
}

Polynomial sub_determinant(const PolyMatrix& g, const std::vector<std::size_t>& rows,
                           const std::vector<std::size_t>& cols) {
  PolyMatrix s(g.ring(), rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) s.at(i, j) = g.at(rows[i], cols[j]);
  return determinant(s);
}

}  // namespace

GridResult mrank_grid(const Bundle& e, const GridSpec& grid) {
  const std::size_t n = e.ring->size();
  if (grid.lo.size() != n || grid.hi.size() != n)
    throw DimensionError("grid bounds need " + std::to_string(n) + " coordinates");
  if (grid.step <= 0) throw DomainError("grid step must be positive");
  std::vector<std::size_t> counts(n);
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (grid.lo[i] > grid.hi[i]) throw DomainError("grid lower bound exceeds upper bound");
    Rational q = (grid.hi[i] - grid.lo[i]) / grid.step;
    counts[i] = static_cast<std::size_t>(mpz_class(q.get_num() / q.get_den()).get_ui()) + 1;
    total *= counts[i];
    if (total > 10000000) throw DomainError("grid has more than 10^7 nodes");
  }

  GridResult out;
  out.nodes.resize(total);
  out.dims.resize(total);
  std::vector<const Piece*> piece(total);
  std::vector<PivotRank> piv(total);

  auto index_to_multi = [&](std::size_t idx) {
    std::vector<std::size_t> mi(n);
    for (std::size_t i = n; i-- > 0;) {
      mi[i] = idx % counts[i];
      idx /= counts[i];
    }
    return mi;
  };

  detail::parallel_for(total, [&](std::size_t idx) {
    auto mi = index_to_multi(idx);
    RationalPoint m(n);
    for (std::size_t i = 0; i < n; ++i) m[i] = grid.lo[i] + grid.step * static_cast<long>(mi[i]);
    const Piece& p = e.piece_at(m);
    piece[idx] = &p;
    piv[idx] = pivot_rank(p.generators.evaluate(m));
    out.dims[idx] = e.ambient_rank - piv[idx].rank;
    out.nodes[idx] = std::move(m);
  });

  // Certificate minors, one per distinct (piece, rows, cols).
  std::map<std::tuple<const Piece*, std::vector<std::size_t>, std::vector<std::size_t>>, Polynomial> cache;
  std::vector<const Polynomial*> witness(total, nullptr);
  for (std::size_t idx = 0; idx < total; ++idx) {
    if (piv[idx].rank == 0) continue;
    auto key = std::make_tuple(piece[idx], piv[idx].rows, piv[idx].cols);
    auto it = cache.find(key);
    if (it == cache.end())
      it = cache.emplace(key, sub_determinant(piece[idx]->generators, piv[idx].rows, piv[idx].cols)).first;
    witness[idx] = &it->second;
  }

  std::vector<char> bad(total, 0);
  detail::parallel_for(total, [&](std::size_t idx) {
    if (!witness[idx]) return;
    auto mi = index_to_multi(idx);
    std::size_t offsets = 1;
    for (std::size_t i = 0; i < n; ++i) offsets *= 3;
    for (std::size_t o = 0; o < offsets; ++o) {
      std::size_t code = o, nb = 0;
      bool inside = true, self = true;
      for (std::size_t i = 0; i < n; ++i) {
        int d = static_cast<int>(code % 3) - 1;
        code /= 3;
        if (d != 0) self = false;
        long c = static_cast<long>(mi[i]) + d;
        if (c < 0 || c >= static_cast<long>(counts[i])) inside = false;
        nb = nb * counts[i] + static_cast<std::size_t>(std::max(c, 0L));
      }
      if (self || !inside || piece[nb] != piece[idx]) continue;
      if (witness[idx]->evaluate(out.nodes[nb]) == 0) continue;
      if (piv[nb].rank < piv[idx].rank) bad[idx] = 1;
    }
  });
  for (std::size_t idx = 0; idx < total; ++idx)
    if (bad[idx]) out.violations.push_back(idx);
  out.semicontinuous = out.violations.empty();
  return out;
}

std::string grid_csv(const Bundle& e, const GridResult& g) {
  std::ostringstream os;
  for (const auto& v : e.ring->vars()) os << v << ',';
  os << "dim\n";
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    for (const auto& c : g.nodes[i]) os << format_double(c.get_d()) << ',';
    os << g.dims[i] << '\n';
  }
  return os.str();
}

}  // namespace tepui
