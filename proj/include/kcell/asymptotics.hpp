// Limit constants: c_d, the boundary functionals F and G, and the four
// theorem targets they feed.
#pragma once

#include <optional>

#include "kcell/body.hpp"
#include "kcell/directional.hpp"

namespace kcell {

// c_d = (d^2+d+2)(d^2+1) / (2(d+3)(d+1)!) * Gamma((d^2+1)/(d+1)) * ((d+1)/kappa_{d-1})^{2/(d+1)}
double c_d(int d);

// F(K,q) = 2 c_d omega_d^{-(d-1)/(d+1)} * integral over the boundary of
//          q_sigma(normal)^{-2/(d+1)} curvature^{d/(d+1)};
// q_sigma is the direction density w.r.t. the normalized spherical measure
// (the convention under which F = 2G holds in the isotropic case, as the
// facet-count identity requires). Polytopes give exactly 0.
double F_functional(const ConvexBody& body, const DirectionalDist& dist, int resolution = 4096);

// G(K,q) = c_d omega_d^{-(d-1)/(d+1)} * integral of q_sigma^{(d-1)/(d+1)} curvature^{d/(d+1)}
double G_functional(const ConvexBody& body, const DirectionalDist& dist, int resolution = 4096);

struct LimitTargets {
    int d = 2;
    double cd = 0;
    std::optional<double> f;     // F(K,q), needs a density
    std::optional<double> g;     // G(K,q)
    std::optional<double> thm31; // 2^{-2/(d+1)} F : limit of n^{2/(d+1)} E[dW]
    std::optional<double> thm32; // r d (log2/(d+1))^{d-1} : limit of (n/log^{d-1}n) E[dW]
    std::optional<double> thm42; // 2^{(d-1)/(d+1)} G : limit of n^{-(d-1)/(d+1)} E[f]
    std::optional<double> thm43; // same constant as thm32 : limit of log^{1-d}n E[f]
};

// Fills every target whose hypotheses hold: thm31/thm42 need a direction
// density, thm32/thm43 need an isotropic process and a simplicial polytope
// (facet count r can be overridden). Returns absent fields otherwise.
LimitTargets theorem_targets(const ConvexBody& body, const DirectionalDist& dist,
                             std::optional<int> facet_override = std::nullopt,
                             int resolution = 4096);

} // namespace kcell
