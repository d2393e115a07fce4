// K-cell construction: adaptive-window sampling loop, polar-duality vertex
// enumeration in d <= 3, LP oracles in general dimension.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "kcell/process.hpp"
#include "kcell/vec.hpp"

namespace kcell {

struct Cell {
    int dim = 2;
    std::vector<Hyperplane> halfspaces;       // generating set, canonical offsets
    std::vector<std::uint8_t> facet_flags;    // aligned with halfspaces
    std::vector<Vec> vertices;                // d <= 3; d = 2 in CCW order

    // d = 3 surface structure (empty otherwise / when truncated)
    struct Edge {
        double length;
        double exterior_angle;
    };
    std::vector<Edge> edges;
    std::vector<std::vector<int>> facet_cycles; // per halfspace: vertex ids, CCW from outside

    double window_used = 0;
    bool truncated = false;
    bool heuristic_window = false; // d >= 4 certificate is grid-based
};

struct DualReconstruction {
    bool bounded = false;
    std::vector<Vec> vertices;             // d = 2: CCW order
    std::vector<std::uint8_t> facet_flags; // halfspace i bounds a facet
};

class UnboundedCellError : public std::runtime_error {
public:
    UnboundedCellError() : std::runtime_error("halfspace intersection is unbounded") {}
};

// Polar-duality reconstruction (d in {2,3}); all offsets must be positive.
// bounded == false when the origin is not interior to the dual hull.
DualReconstruction dual_hull_reconstruct(const std::vector<Hyperplane>& halfspaces, int d);

// Cell from an explicit halfspace list (kept verbatim, redundant ones flagged false).
// Throws UnboundedCellError for unbounded intersections in d <= 3.
Cell cell_from_halfspaces(int d, std::vector<Hyperplane> halfspaces);

// Exact sample of the K-cell. The adaptive window grows on a fixed radius
// ladder anchored at 2*R_o(K)+1 so that runs with nested initial windows see
// identical hyperplanes; cells still inside the final window equal the cell
// of the infinite process. cfg must be finalized.
Cell build_cell(const ProcessConfig& cfg, Rng& rng);

double cell_support(const Cell& cell, const Vec& u);
int facet_count(const Cell& cell);
double cell_circumradius(const Cell& cell); // max vertex norm, d <= 3

} // namespace kcell
