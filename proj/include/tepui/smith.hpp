#pragma once

#include <vector>

#include "tepui/poly_matrix.hpp"

namespace tepui {

/// U * P * V = D with U, V invertible over Q[x], D diagonal with monic
/// entries d_0 | d_1 | ... (zero entries last). U_inv is the inverse of U.
struct SmithForm {
  PolyMatrix U, D, V, U_inv;
  /// d_i for i < min(rows, cols).
  std::vector<Polynomial> diagonal;
};

/// Smith normal form over Q[x]; the ring must have at most one variable.
/// The result is verified by multiplication before returning.
SmithForm smith_normal_form(const PolyMatrix& p);

}  // namespace tepui
