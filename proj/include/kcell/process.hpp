// Stationary Poisson hyperplane process restricted to planes missing K:
// window and annulus sampling plus the per-replicate stream contract.
#pragma once

#include <cstdint>
#include <vector>

#include "kcell/body.hpp"
#include "kcell/directional.hpp"
#include "kcell/rng.hpp"
#include "kcell/vec.hpp"

namespace kcell {

struct ProcessConfig {
    double intensity = 0; // n >= 1 at the CLI; any positive real internally
    ConvexBody body = ConvexBody::ball(2, 1.0);
    DirectionalDist dist = DirectionalDist::isotropic(2);
    double initial_window = 0; // 0 = default 2*R_o(K)+1
    double growth_factor = 2.0;
    int max_doublings = 64;
    std::uint64_t master_seed = 0;

    // cached by finalize()
    double phi_k = 0;
    double circum = 0;
    double base_window = 0; // 2*R_o(K)+1, anchor of the window ladder

    void finalize(); // validates and fills the cached fields
};

struct HyperplaneBatch {
    std::vector<Hyperplane> planes; // canonical: offset > h(K, normal)
    double r_in = 0;                // 0 for a full window
    double r_out = 0;
};

// Exact draw of the process restricted to planes hitting B_R and missing K:
// count ~ Poisson(2n(R - Phi(K))), directions weighted by (R - h(K,u)),
// offsets uniform on (h(K,u), R].
HyperplaneBatch sample_window(const ProcessConfig& cfg, double R, Rng& rng);

// Annulus (r_in, r_out] with r_in >= circumradius(K): directions are plain phi,
// offsets uniform, count ~ Poisson(2n(r_out - r_in)).
HyperplaneBatch sample_annulus(const ProcessConfig& cfg, double r_in, double r_out, Rng& rng);

} // namespace kcell
