#pragma once

// Exact rational feasibility of {A x = 0, x >= 1}.  By scale invariance of
// the kernel cone this decides whether {x > 0 : A x = 0} is nonempty, which
// is the stratum non-emptiness question.  Floating-point LP could misclassify
// degenerate cones, which are exactly the singular configurations the engine
// cares about, hence the exact simplex.

#include <optional>
#include <vector>

#include "stratforge/intlin.hpp"

namespace stratforge::lp {

using intlin::IntMatrix;
using intlin::Rat;

// Phase-1 simplex with Bland's rule over exact rationals.
// Returns a point with A x = 0 and x >= 1 componentwise, or nullopt if the
// system is infeasible.  A with zero columns is feasible (the empty product).
std::optional<std::vector<Rat>> positive_kernel_point(const IntMatrix& A);

// Same, with per-coordinate lower bounds (each 0 or 1): A x = 0, x_j >= lb_j.
std::optional<std::vector<Rat>> kernel_point_with_lower_bounds(
    const IntMatrix& A, const std::vector<int>& lb);

bool feasible_positive_kernel(const IntMatrix& A);

}  // namespace stratforge::lp
