#pragma once

#include "epsforms/arith.hpp"

#include <cstddef>
#include <vector>

namespace epsforms {

using RMatrix = std::vector<std::vector<Rational>>;

/// Reduced row echelon form in place (zero rows removed); returns the pivot
/// column of each remaining row.
std::vector<std::size_t> rref(RMatrix& rows);

/// Basis of {x : A x = 0} for an r x c matrix A.
RMatrix nullspace(RMatrix a, std::size_t cols);

} // namespace epsforms
