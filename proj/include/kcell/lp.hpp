// Dense simplex solver for support and redundancy queries over halfspace systems.
#pragma once

#include <vector>

#include "kcell/vec.hpp"

namespace kcell {

enum class LpStatus { Optimal, Unbounded };

struct LpResult {
    LpStatus status;
    double value; // optimal objective when status == Optimal
};

// maximize <dir, x> subject to <normal_i, x> <= offset_i.
// The system is assumed feasible (all offsets positive makes the origin feasible).
// skip, when >= 0, excludes that halfspace from the constraint set.
LpResult lp_support(const std::vector<Hyperplane>& halfspaces, const Vec& dir, int skip = -1,
                    double tol = 1e-9);

// halfspace i bounds a facet iff maximizing <normal_i, x> over the others
// exceeds offset_i (or is unbounded)
bool lp_facet(const std::vector<Hyperplane>& halfspaces, int i, double tol = 1e-9);

} // namespace kcell
