#include "tepui/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "tepui/errors.hpp"

namespace tepui::io {

namespace {

[[noreturn]] void schema(const std::string& what) { throw ParseError("schema: " + what); }

const Json& need(const Json& j, const char* key) {
  if (!j.is_object()) schema("expected an object");
  auto it = j.find(key);
  if (it == j.end()) schema(std::string("missing key '") + key + "'");
  return *it;
}

const Json& need_array(const Json& j, const char* key) {
  const Json& v = need(j, key);
  if (!v.is_array()) schema(std::string("'") + key + "' must be an array");
  return v;
}

std::size_t need_size(const Json& j, const char* key) {
  const Json& v = need(j, key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
    schema(std::string("'") + key + "' must be a non-negative integer");
  return v.get<std::size_t>();
}

double need_double(const Json& v, const std::string& what) {
  if (!v.is_number()) schema(what + " must be a number");
  return v.get<double>();
}

Rational rational_of(const Json& v, const std::string& what) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return parse_rational(v.dump());
  if (v.is_number_float()) return from_double(v.get<double>());
  schema(what + " must be a number or a rational string");
}

Polynomial poly_of(const Json& v, const RingPtr& r) {
  if (v.is_string()) return parse_polynomial(v.get<std::string>(), r);
  if (v.is_number()) return Polynomial::constant(r, rational_of(v, "polynomial entry"));
  schema("polynomial entries must be strings or numbers");
}

std::vector<std::string> names_of(const Json& v, const char* key) {
  if (!v.is_array()) schema(std::string("'") + key + "' must be an array of names");
  std::vector<std::string> out;
  for (const auto& n : v) {
    if (!n.is_string()) schema(std::string("'") + key + "' must contain strings");
    out.push_back(n.get<std::string>());
  }
  return out;
}

/// Rows x cols matrix from a list of rows; cols may be 0 ([] or rows of []).
PolyMatrix matrix_of(const Json& rows, const RingPtr& r, std::size_t nrows, const std::string& what) {
  if (!rows.is_array()) schema(what + " must be a list of rows");
  if (rows.empty()) return PolyMatrix(r, nrows, 0);
  if (rows.size() != nrows) schema(what + " must have " + std::to_string(nrows) + " rows");
  std::size_t ncols = rows[0].is_array() ? rows[0].size() : 0;
  PolyMatrix m(r, nrows, ncols);
  for (std::size_t i = 0; i < nrows; ++i) {
    if (!rows[i].is_array() || rows[i].size() != ncols) schema(what + " rows must all have " + std::to_string(ncols) + " entries");
    for (std::size_t j = 0; j < ncols; ++j) m.at(i, j) = poly_of(rows[i][j], r);
  }
  return m;
}

PolyVector vector_of(const Json& v, const RingPtr& r, std::size_t n, const std::string& what) {
  if (!v.is_array() || v.size() != n) schema(what + " must be a list of " + std::to_string(n) + " entries");
  PolyVector out;
  for (const auto& e : v) out.push_back(poly_of(e, r));
  return out;
}

Json bound_json(const std::optional<Rational>& b) { return b ? to_json(*b) : Json(nullptr); }

void write_json(std::ostringstream& os, const Json& j, int indent, int depth) {
  auto newline = [&](int d) {
    if (indent < 0) return;
    os << '\n' << std::string(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ',';
        first = false;
        newline(depth + 1);
        os << Json(it.key()).dump() << (indent < 0 ? ":" : ": ");
        write_json(os, it.value(), indent, depth + 1);
      }
      newline(depth);
      os << '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      bool flat = std::none_of(j.begin(), j.end(), [](const Json& e) { return e.is_structured(); });
      if (flat && indent >= 0) {
        os << '[';
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) os << ", ";
          write_json(os, j[i], indent, depth + 1);
        }
        os << ']';
        return;
      }
      os << '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ',';
        newline(depth + 1);
        write_json(os, j[i], indent, depth + 1);
      }
      newline(depth);
      os << ']';
      return;
    }
    case Json::value_t::number_float:
      os << format_double(j.get<double>());
      return;
    default:
      os << j.dump();
  }
}

}  // namespace

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str(), path);
}

Json parse_json(std::string_view text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(origin + ": " + e.what());
  }
}

std::string dump(const Json& j, int indent) {
  std::ostringstream os;
  write_json(os, j, indent, 0);
  return os.str();
}

RationalPoint parse_point(std::string_view text) {
  RationalPoint out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto comma = text.find(',', start);
    auto piece = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    out.push_back(parse_rational(piece));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

RealPoint parse_real_point(std::string_view text) { return to_real(parse_point(text)); }

Json to_json(const Rational& q) { return to_string(q); }

Json to_json(const RationalPoint& p) {
  Json a = Json::array();
  for (const auto& q : p) a.push_back(to_json(q));
  return a;
}

Json to_json(const RealPoint& p) {
  Json a = Json::array();
  for (double v : p) a.push_back(v);
  return a;
}

Json to_json(const Polynomial& p) { return p.to_string(); }

Json to_json(const PolyVector& v) {
  Json a = Json::array();
  for (const auto& p : v) a.push_back(to_json(p));
  return a;
}

Json to_json(const PolyMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_json(m.at(i, j)));
    rows.push_back(row);
  }
  return rows;
}

RingPtr ring_from_json(const Json& j) { return make_ring(names_of(need(j, "vars"), "vars")); }

Bundle bundle_from_json(const Json& j) {
  Bundle e;
  e.ring = ring_from_json(j);
  e.ambient_rank = need_size(j, "ambient_rank");
  const std::size_t n = e.ring->size();
  e.domain = Box::unbounded(n);
  if (auto it = j.find("domain"); it != j.end() && !it->is_null()) {
    if (!it->is_array() || it->size() != n) schema("'domain' must have one [lo, hi] pair per variable");
    for (std::size_t i = 0; i < n; ++i) {
      const Json& side = (*it)[i];
      if (!side.is_array() || side.size() != 2) schema("'domain' entries must be [lo, hi]");
      if (!side[0].is_null()) e.domain.sides[i].lo = rational_of(side[0], "domain bound");
      if (!side[1].is_null()) e.domain.sides[i].hi = rational_of(side[1], "domain bound");
      if (e.domain.sides[i].lo && e.domain.sides[i].hi && *e.domain.sides[i].lo > *e.domain.sides[i].hi)
        schema("'domain' has lo > hi");
    }
  }
  for (const auto& p : need_array(j, "pieces")) {
    Piece piece;
    if (auto c = p.find("cell"); c != p.end()) {
      if (!c->is_array()) schema("'cell' must be a list of [lhs, rel, rhs]");
      for (const auto& cond : *c) {
        if (!cond.is_array() || cond.size() != 3 || !cond[1].is_string())
          schema("cell conditions must be [lhs, rel, rhs]");
        Polynomial lhs = poly_of(cond[0], e.ring), rhs = poly_of(cond[2], e.ring);
        piece.cell.conditions.push_back({lhs - rhs, parse_relation(cond[1].get<std::string>())});
      }
    }
    piece.generators = matrix_of(need(p, "generators"), e.ring, e.ambient_rank, "'generators'");
    e.pieces.push_back(std::move(piece));
  }
  if (e.pieces.empty()) schema("'pieces' must not be empty");
  return e;
}

Json to_json(const Bundle& e) {
  Json j;
  j["vars"] = e.ring->vars();
  j["ambient_rank"] = e.ambient_rank;
  Json dom = Json::array();
  for (const auto& s : e.domain.sides) dom.push_back(Json::array({bound_json(s.lo), bound_json(s.hi)}));
  j["domain"] = dom;
  Json pieces = Json::array();
  for (const auto& p : e.pieces) {
    Json cell = Json::array();
    for (const auto& c : p.cell.conditions) cell.push_back(Json::array({c.poly.to_string(), to_string(c.rel), "0"}));
    Json gens = p.generators.cols() == 0 ? Json::array() : to_json(p.generators);
    pieces.push_back(Json{{"cell", cell}, {"generators", gens}});
  }
  j["pieces"] = pieces;
  return j;
}

FPModule module_from_json(const Json& j) {
  RingPtr r = ring_from_json(j);
  std::size_t p = need_size(j, "free_rank");
  return FPModule{matrix_of(need(j, "presentation"), r, p, "'presentation'")};
}

Json to_json(const FPModule& q) {
  Json j;
  j["vars"] = q.ring()->vars();
  j["free_rank"] = q.free_rank();
  j["presentation"] = q.presentation.cols() == 0 ? Json::array() : to_json(q.presentation);
  return j;
}

ModuleBasis submodule_from_json(const Json& j) {
  RingPtr r = ring_from_json(j);
  std::size_t n = need_size(j, "rank");
  PolyMatrix m = matrix_of(need(j, "generators"), r, n, "'generators'");
  return ModuleBasis(r, n, m.columns());
}

Json to_json(const ModuleBasis& d) {
  Json j;
  j["vars"] = d.ring->vars();
  j["rank"] = d.rank;
  PolyMatrix m = PolyMatrix::from_columns(d.ring, d.rank, d.columns);
  j["generators"] = d.columns.empty() ? Json::array() : to_json(m);
  return j;
}

AnchoredBracket algebroid_from_json(const Json& j) {
  RingPtr r = ring_from_json(j);
  std::size_t big_n = need_size(j, "rank");
  const Json& rows = need(j, "anchor");
  PolyMatrix anchor(r, r->size(), big_n);
  if (r->size() > 0) {
    if (!rows.is_array() || rows.size() != r->size()) schema("'anchor' must have one row per variable");
    for (std::size_t i = 0; i < r->size(); ++i) {
      PolyVector row = vector_of(rows[i], r, big_n, "'anchor' rows");
      for (std::size_t k = 0; k < big_n; ++k) anchor.at(i, k) = row[k];
    }
  }
  AnchoredBracket l(anchor);
  std::vector<std::vector<PolyVector>> c(big_n, std::vector<PolyVector>(big_n, PolyVector(big_n, Polynomial(r))));
  std::vector<std::vector<bool>> set(big_n, std::vector<bool>(big_n, false));
  if (auto it = j.find("c"); it != j.end()) {
    if (!it->is_array()) schema("'c' must be a list of [i, j, k, poly]");
    for (const auto& e : *it) {
      if (!e.is_array() || e.size() != 4 || !e[0].is_number_integer() || !e[1].is_number_integer() ||
          !e[2].is_number_integer())
        schema("'c' entries must be [i, j, k, poly]");
      long long i = e[0], jj = e[1], k = e[2];
      auto n = static_cast<long long>(big_n);
      if (i < 0 || jj < 0 || k < 0 || i >= n || jj >= n || k >= n) schema("'c' index out of range");
      if (i >= jj) schema("'c' entries need i < j");
      c[i][jj][k] += poly_of(e[3], r);
      set[i][jj] = true;
    }
  }
  for (std::size_t i = 0; i < big_n; ++i)
    for (std::size_t k = i + 1; k < big_n; ++k)
      if (set[i][k]) l.set_structure(i, k, c[i][k]);
  return l;
}

Json to_json(const AnchoredBracket& l) {
  Json j;
  j["vars"] = l.ring()->vars();
  j["rank"] = l.rank();
  j["anchor"] = to_json(l.anchor());
  Json c = Json::array();
  for (std::size_t i = 0; i < l.rank(); ++i)
    for (std::size_t k = i + 1; k < l.rank(); ++k)
      for (std::size_t t = 0; t < l.rank(); ++t)
        if (!l.structure(i, k)[t].is_zero()) c.push_back(Json::array({i, k, t, l.structure(i, k)[t].to_string()}));
  j["c"] = c;
  return j;
}

PolyMap map_from_json(const Json& j) {
  PolyMap f;
  f.source = make_ring(names_of(need(j, "source_vars"), "source_vars"));
  f.target = make_ring(names_of(need(j, "target_vars"), "target_vars"));
  f.components = vector_of(need(j, "components"), f.source, f.target->size(), "'components'");
  return f;
}

std::vector<VectorField> fields_from_json(const Json& j) {
  if (j.is_object() && j.contains("anchor")) return algebroid_from_json(j).anchor().columns();
  RingPtr r = ring_from_json(j);
  std::vector<VectorField> out;
  for (const auto& f : need_array(j, "fields")) out.push_back(vector_of(f, r, r->size(), "fields"));
  if (out.empty()) schema("'fields' must not be empty");
  return out;
}

FPath path_from_json(const Json& j, const RingPtr& ring) {
  FPath p;
  for (const auto& v : need_array(j, "start")) p.start.push_back(need_double(v, "'start' entries"));
  if (p.start.size() != ring->size()) schema("'start' must have one coordinate per variable");
  for (const auto& s : need_array(j, "segments")) {
    FPath::Segment seg;
    for (const auto& v : need_array(s, "lambda")) seg.lambda.push_back(need_double(v, "'lambda' entries"));
    seg.t = need_double(need(s, "t"), "'t'");
    if (!(seg.t > 0)) schema("segment durations must be positive");
    p.segments.push_back(std::move(seg));
  }
  if (auto it = j.find("drivers"); it != j.end()) {
    if (!it->is_array()) schema("'drivers' must be a list of fields");
    for (const auto& f : *it) p.drivers.push_back(vector_of(f, ring, ring->size(), "drivers"));
  }
  return p;
}

JetFactor jet_factor_from_json(const Json& j) {
  if (j.is_object() && j.contains("flat")) {
    const Json& on = need_array(need(j, "flat"), "vanish_on");
    if (on.size() != 2) schema("'vanish_on' must be [lo, hi]");
    FlatSpec s;
    if (!on[0].is_null()) s.lo = rational_of(on[0], "'vanish_on' bound");
    if (!on[1].is_null()) s.hi = rational_of(on[1], "'vanish_on' bound");
    if (s.lo && s.hi && !(*s.lo < *s.hi)) schema("'vanish_on' needs lo < hi");
    return s;
  }
  return module_from_json(j);
}

}  // namespace tepui::io
