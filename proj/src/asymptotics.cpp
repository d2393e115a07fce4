#include "kcell/asymptotics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "kcell/special.hpp"

namespace kcell {

double c_d(int d) {
    if (d < 2) throw std::invalid_argument("c_d needs d >= 2");
    const double dd = d;
    const double lead = (dd * dd + dd + 2.0) * (dd * dd + 1.0) / (2.0 * (dd + 3.0) * gamma_fn(dd + 2.0));
    const double g = gamma_fn((dd * dd + 1.0) / (dd + 1.0));
    const double pw = std::pow((dd + 1.0) / ball_volume(d - 1), 2.0 / (dd + 1.0));
    return lead * g * pw;
}

namespace {

double boundary_integral(const ConvexBody& body, const DirectionalDist& dist, int resolution,
                         double q_exponent) {
    if (!dist.has_density())
        throw std::invalid_argument("F/G need a directional density (hypothesis-violation)");
    if (body.is_polytope()) return 0.0; // curvature vanishes on facets
    const int d = body.dim();
    const double omega = sphere_area(d);
    const double kappa_exp = static_cast<double>(d) / (d + 1);
    BoundaryQuadrature bq = body.boundary_quadrature(resolution);
    double acc = 0;
    for (const auto& node : bq.nodes) {
        double q_sigma = omega * dist.density_leb(node.normal);
        acc += std::pow(q_sigma, q_exponent) * std::pow(node.curvature, kappa_exp) * node.weight;
    }
    return acc;
}

} // namespace

double F_functional(const ConvexBody& body, const DirectionalDist& dist, int resolution) {
    const int d = body.dim();
    double integral = boundary_integral(body, dist, resolution, -2.0 / (d + 1));
    return 2.0 * c_d(d) * std::pow(sphere_area(d), -(d - 1.0) / (d + 1.0)) * integral;
}

double G_functional(const ConvexBody& body, const DirectionalDist& dist, int resolution) {
    const int d = body.dim();
    double integral = boundary_integral(body, dist, resolution, (d - 1.0) / (d + 1.0));
    return c_d(d) * std::pow(sphere_area(d), -(d - 1.0) / (d + 1.0)) * integral;
}

LimitTargets theorem_targets(const ConvexBody& body, const DirectionalDist& dist,
                             std::optional<int> facet_override, int resolution) {
    const int d = body.dim();
    LimitTargets t;
    t.d = d;
    t.cd = c_d(d);

    if (dist.has_density() && d <= 3) {
        t.f = F_functional(body, dist, resolution);
        t.g = G_functional(body, dist, resolution);
        t.thm31 = std::pow(2.0, -2.0 / (d + 1)) * *t.f;
        t.thm42 = std::pow(2.0, (d - 1.0) / (d + 1.0)) * *t.g;
    }

    bool simplicial = facet_override.has_value() ||
                      (body.is_polytope() && d <= 3 && body.is_simplicial());
    if (dist.is_isotropic() && simplicial) {
        int r = facet_override ? *facet_override : body.facet_count();
        double v = r * d * std::pow(std::numbers::ln2 / (d + 1), d - 1.0);
        t.thm32 = v;
        t.thm43 = v;
    }
    return t;
}

} // namespace kcell
