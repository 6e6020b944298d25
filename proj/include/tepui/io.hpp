#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "tepui/algebroid.hpp"
#include "tepui/bundle.hpp"
#include "tepui/constructions.hpp"
#include "tepui/dynamics.hpp"
#include "tepui/modules.hpp"

namespace tepui::io {

/// Key order is preserved so output is byte-stable.
using Json = nlohmann::ordered_json;

Json read_json_file(const std::string& path);
Json parse_json(std::string_view text, const std::string& origin);
/// Like Json::dump, but floats are printed with 17 significant digits.
std::string dump(const Json& j, int indent = 2);

/// Comma-separated rationals ("0,1/2,-3.25").
RationalPoint parse_point(std::string_view text);
RealPoint parse_real_point(std::string_view text);

Json to_json(const Rational& q);
Json to_json(const RationalPoint& p);
Json to_json(const RealPoint& p);
Json to_json(const Polynomial& p);
Json to_json(const PolyVector& v);
/// Row-major list of rows.
Json to_json(const PolyMatrix& m);

RingPtr ring_from_json(const Json& j);

/// {"vars", "ambient_rank", "domain": [[lo, hi], ...] (null = infinite),
///  "pieces": [{"cell": [["lhs", rel, "rhs"], ...], "generators": N rows}]}
Bundle bundle_from_json(const Json& j);
Json to_json(const Bundle& e);

/// {"vars", "free_rank", "presentation": rows}
FPModule module_from_json(const Json& j);
Json to_json(const FPModule& q);

/// {"vars", "rank", "generators": N rows}; columns are the generators.
ModuleBasis submodule_from_json(const Json& j);
Json to_json(const ModuleBasis& d);

/// {"vars", "rank", "anchor": n rows of N entries, "c": [[i, j, k, "poly"], ...]}, 0-based, i < j.
AnchoredBracket algebroid_from_json(const Json& j);
Json to_json(const AnchoredBracket& l);

/// {"source_vars", "target_vars", "components"}
PolyMap map_from_json(const Json& j);

/// {"vars", "fields": [[X_1, ..., X_n], ...]}, or an algebroid file (anchor columns).
std::vector<VectorField> fields_from_json(const Json& j);

/// {"start", "segments": [{"lambda", "t"}], "drivers"?}; drivers are fields over `ring`.
FPath path_from_json(const Json& j, const RingPtr& ring);

/// An FPModule file or {"flat": {"vanish_on": [lo, hi]}}.
JetFactor jet_factor_from_json(const Json& j);

}  // namespace tepui::io
