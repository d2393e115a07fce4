#include "kcell/functionals.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "kcell/sphere.hpp"
#include "kcell/special.hpp"

namespace kcell {

namespace {

int default_nodes(int d) {
    if (d == 2) return 4096;
    if (d == 3) return 8192;
    return 16384;
}

double polygon_perimeter(const std::vector<Vec>& v) {
    double p = 0;
    const int n = static_cast<int>(v.size());
    for (int i = 0; i < n; ++i) p += (v[(i + 1) % n] - v[i]).norm();
    return p;
}

// exact polytope mean width in d=3: sum of length * exterior angle / (4 pi)
double edge_formula(const std::vector<Vec>& verts, const std::vector<std::array<int, 3>>& tris) {
    std::map<std::pair<int, int>, Vec> edge_normal;
    double acc = 0;
    for (const auto& t : tris) {
        Vec n = cross3(verts[t[1]] - verts[t[0]], verts[t[2]] - verts[t[0]]).normalized();
        for (int k = 0; k < 3; ++k) {
            int a = t[k], b = t[(k + 1) % 3];
            std::pair<int, int> key = std::minmax(a, b);
            auto it = edge_normal.find(key);
            if (it == edge_normal.end()) {
                edge_normal.emplace(key, n);
            } else {
                double dp = std::clamp(n.dot(it->second), -1.0, 1.0);
                acc += (verts[key.first] - verts[key.second]).norm() * std::acos(dp);
            }
        }
    }
    return acc / (4.0 * std::numbers::pi);
}

double quadrature_mean_width(const ConvexBody& body, int nodes) {
    auto us = sphere_nodes(body.dim(), nodes);
    double s = 0;
    for (const auto& u : us) s += body.support(u);
    return 2.0 * s / static_cast<double>(us.size());
}

} // namespace

double mean_width(const ConvexBody& body, int nodes) {
    const int d = body.dim();
    if (body.is_polytope() && d == 2) return polygon_perimeter(body.vertices()) / std::numbers::pi;
    if (body.is_polytope() && d == 3) return edge_formula(body.vertices(), body.surface_triangles());
    return quadrature_mean_width(body, nodes > 0 ? nodes : default_nodes(d));
}

double mean_width(const Cell& cell) {
    if (cell.truncated) throw std::invalid_argument("mean width undefined for truncated cells");
    if (cell.dim == 2) return polygon_perimeter(cell.vertices) / std::numbers::pi;
    if (cell.dim == 3) {
        double acc = 0;
        for (const auto& e : cell.edges) acc += e.length * e.exterior_angle;
        return acc / (4.0 * std::numbers::pi);
    }
    throw std::invalid_argument("cell mean width implemented for d <= 3");
}

double hitting_diff(const Cell& cell, const ConvexBody& body, const DirectionalDist& dist, int nodes) {
    if (cell.truncated) throw std::invalid_argument("hitting difference undefined for truncated cells");
    switch (dist.kind()) {
    case DistKind::Atomic: {
        double s = 0;
        for (const auto& [u, w] : dist.atoms()) s += w * (cell_support(cell, u) - body.support(u));
        return s;
    }
    case DistKind::Isotropic:
        return 0.5 * (mean_width(cell) - mean_width(body, nodes));
    case DistKind::Density: {
        const int d = body.dim();
        const int n = nodes > 0 ? nodes : default_nodes(d);
        auto us = sphere_nodes(d, n);
        const double omega = sphere_area(d);
        double s = 0;
        for (const auto& u : us)
            s += (cell_support(cell, u) - body.support(u)) * dist.density_leb(u);
        return omega * s / static_cast<double>(us.size());
    }
    }
    return 0;
}

double volume(const Cell& cell) {
    if (cell.truncated) throw std::invalid_argument("volume undefined for truncated cells");
    if (cell.dim == 2) {
        double a2 = 0;
        const int n = static_cast<int>(cell.vertices.size());
        for (int i = 0; i < n; ++i) a2 += cross2(cell.vertices[i], cell.vertices[(i + 1) % n]);
        return 0.5 * std::fabs(a2);
    }
    if (cell.dim == 3) {
        double v6 = 0;
        for (const auto& cyc : cell.facet_cycles) {
            for (size_t j = 1; j + 1 < cyc.size(); ++j)
                v6 += cross3(cell.vertices[cyc[0]], cell.vertices[cyc[j]]).dot(cell.vertices[cyc[j + 1]]);
        }
        return v6 / 6.0;
    }
    throw std::invalid_argument("volume implemented for d <= 3");
}

double volume_divergence(const Cell& cell) {
    if (cell.dim != 3) throw std::invalid_argument("divergence volume is the d=3 cross-check");
    double v = 0;
    for (size_t i = 0; i < cell.halfspaces.size(); ++i) {
        const auto& cyc = cell.facet_cycles[i];
        if (cyc.size() < 3) continue;
        Vec ns(3);
        for (size_t j = 0; j < cyc.size(); ++j)
            ns += cross3(cell.vertices[cyc[j]], cell.vertices[cyc[(j + 1) % cyc.size()]]);
        double area = 0.5 * ns.dot(cell.halfspaces[i].normal);
        v += cell.halfspaces[i].offset * area / 3.0;
    }
    return v;
}

FunctionalSample evaluate_sample(const Cell& cell, const EvalContext& ctx) {
    FunctionalSample s;
    s.truncated = cell.truncated;
    if (cell.truncated) return s;
    s.delta_w = mean_width(cell) - ctx.mean_width_k;
    if (ctx.dist->is_isotropic()) {
        s.delta_phi = 0.5 * s.delta_w;
    } else {
        s.delta_phi = hitting_diff(cell, *ctx.body, *ctx.dist, ctx.sphere_nodes);
    }
    s.facets = facet_count(cell);
    s.circumradius = cell_circumradius(cell);
    if (cell.dim <= 3) {
        s.volume = volume(cell);
        s.has_volume = true;
    }
    return s;
}

} // namespace kcell
