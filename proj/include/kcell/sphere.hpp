// Unit-sphere quadrature rules and Gauss-Legendre nodes.
#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "kcell/rng.hpp"
#include "kcell/vec.hpp"

namespace kcell {

// Equal-weight node set integrating against the NORMALIZED spherical measure:
// mean of f over nodes ~ integral of f d(sigma).
// d=2: midpoint rule on the angle (spectrally accurate for smooth integrands)
// d=3: Fibonacci spiral
// d>=4: plain Monte Carlo, seeded deterministically
inline std::vector<Vec> sphere_nodes(int d, int n, std::uint64_t mc_seed = 0x5eedULL) {
    if (n < 1) throw std::invalid_argument("sphere_nodes: need n >= 1");
    std::vector<Vec> nodes;
    nodes.reserve(n);
    if (d == 2) {
        for (int k = 0; k < n; ++k) {
            double th = 2.0 * std::numbers::pi * (k + 0.5) / n;
            Vec u(2);
            u[0] = std::cos(th);
            u[1] = std::sin(th);
            nodes.push_back(u);
        }
    } else if (d == 3) {
        const double ga = std::numbers::pi * (3.0 - std::sqrt(5.0)); // golden angle
        for (int k = 0; k < n; ++k) {
            double z = 1.0 - (2.0 * k + 1.0) / n;
            double r = std::sqrt(std::max(0.0, 1.0 - z * z));
            double th = ga * k;
            Vec u(3);
            u[0] = r * std::cos(th);
            u[1] = r * std::sin(th);
            u[2] = z;
            nodes.push_back(u);
        }
    } else {
        Rng rng(mc_seed);
        for (int k = 0; k < n; ++k) {
            Vec u(d);
            double s2;
            do {
                for (int i = 0; i < d; ++i) u[i] = rng.normal();
                s2 = u.norm2();
            } while (s2 == 0.0);
            nodes.push_back(u / std::sqrt(s2));
        }
    }
    return nodes;
}

// Gauss-Legendre nodes/weights on [-1,1] via Newton iteration on P_n.
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            double dz = p0 / pp;
            z -= dz;
            if (std::fabs(dz) < 1e-15) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
}

} // namespace kcell
