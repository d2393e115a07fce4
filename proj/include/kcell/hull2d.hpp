// Planar convex hull (monotone chain).
#pragma once

#include <vector>

#include "kcell/vec.hpp"

namespace kcell {

struct Hull2D {
    std::vector<int> order; // indices of hull vertices, counterclockwise
    bool degenerate = false; // fewer than 3 hull vertices (empty/point/segment)
};

// Strictly convex hull: collinear middle points are dropped. eps is an absolute
// tolerance on cross products at the data's coordinate scale.
Hull2D convex_hull_2d(const std::vector<Vec>& pts, double eps = 1e-12);

} // namespace kcell
