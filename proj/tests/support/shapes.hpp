#pragma once

// Small bundles and modules shared by several test files.

#include "tepui/bundle.hpp"
#include "tepui/modules.hpp"

namespace shapes {

using namespace tepui;

inline RingPtr line(const char* var = "x") { return make_ring({var}); }

inline PolyMatrix column(const RingPtr& r, std::initializer_list<const char*> entries) {
  PolyMatrix m(r, entries.size(), 1);
  std::size_t i = 0;
  for (auto e : entries) m.at(i++, 0) = parse_polynomial(e, r);
  return m;
}

/// V = R, D = <x e>.
inline Bundle cross() { return Bundle::polynomial(column(line(), {"x"})); }

/// Fiber R where D vanishes (`rel_zero` side), 0 on the other side.
inline Bundle half_line(Relation rel_zero, Relation rel_full) {
  auto r = line();
  Bundle e;
  e.ring = r;
  e.ambient_rank = 1;
  e.domain = Box::unbounded(1);
  e.pieces.push_back({Cell{{{parse_polynomial("x", r), rel_zero}}}, PolyMatrix(r, 1, 0)});
  e.pieces.push_back({Cell{{{parse_polynomial("x", r), rel_full}}}, column(r, {"1"})});
  return e;
}

inline Bundle e_geq() { return half_line(Relation::Ge, Relation::Lt); }
inline Bundle e_leq() { return half_line(Relation::Le, Relation::Gt); }

inline FPModule cyclic(const char* rel, const char* var = "x") {
  return FPModule{column(line(var), {rel})};
}

}  // namespace shapes
