// Functionals on cells and bodies: mean width, hitting-functional difference,
// volume, and the per-replicate sample record.
#pragma once

#include "kcell/body.hpp"
#include "kcell/cell.hpp"
#include "kcell/directional.hpp"

namespace kcell {

// mean width 2*integral of h d(sigma); polytope families use the exact
// perimeter (d=2) / edge-angle (d=3) formulas, smooth bodies use quadrature
double mean_width(const ConvexBody& body, int sphere_nodes = 0);
double mean_width(const Cell& cell);

// Phi(Z) - Phi(K); atomic distributions sum exactly, the isotropic case is
// half the mean width difference, densities integrate over the sphere
double hitting_diff(const Cell& cell, const ConvexBody& body, const DirectionalDist& dist,
                    int sphere_nodes = 0);

double volume(const Cell& cell);            // d=2 shoelace, d=3 tetra fan from o
double volume_divergence(const Cell& cell); // d=3 cross-check: sum of offset*area/3

struct FunctionalSample {
    double delta_w = 0;
    double delta_phi = 0;
    int facets = 0;
    double circumradius = 0;
    double volume = 0;
    bool has_volume = false;
    bool truncated = false;
};

// Precomputed per-experiment context so replicate evaluation stays cheap.
struct EvalContext {
    const ConvexBody* body;
    const DirectionalDist* dist;
    double mean_width_k;
    double phi_k;
    int sphere_nodes = 0; // 0 = dimension default
};

FunctionalSample evaluate_sample(const Cell& cell, const EvalContext& ctx);

} // namespace kcell
