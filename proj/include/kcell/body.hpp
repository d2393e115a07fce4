// The fixed convex body K: support function, containment, boundary quadrature.
#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "kcell/vec.hpp"

namespace kcell {

enum class BodyKind { Ball, Ellipsoid, Cube, Simplex, Polytope };

struct QuadNode {
    Vec point;        // on the boundary
    Vec normal;       // outer unit normal
    double curvature; // Gauss-Kronecker curvature at the node
    double weight;    // H^{d-1} weight
};

struct BoundaryQuadrature {
    std::vector<QuadNode> nodes;
    double total_weight() const;
};

// Bodies are immutable once constructed and always centered so that the
// origin is the (volume) centroid.
class ConvexBody {
public:
    static ConvexBody ball(int d, double radius);
    static ConvexBody cube(int d, double half_side);
    static ConvexBody ellipsoid(const std::vector<double>& semiaxes); // d = 2 or 3
    static ConvexBody simplex(int d, double scale = 1.0); // regular, circumradius = scale
    static ConvexBody polytope(int d, std::vector<Vec> vertices);

    // grammar: ball:R | cube:A | ellipse:A,B | ellipsoid:A,B,C |
    //          simplex:D[,SCALE] | polygon:x1,y1;x2,y2;...
    static ConvexBody parse(int d, std::string_view text);

    int dim() const { return d_; }
    BodyKind kind() const { return kind_; }
    bool is_polytope() const {
        return kind_ == BodyKind::Cube || kind_ == BodyKind::Simplex || kind_ == BodyKind::Polytope;
    }

    double support(const Vec& u) const;
    double circumradius() const;
    // minimum of the support function over the sphere (inradius about the origin)
    double support_min() const;
    // upper bound on dist(x, K): exact for balls, cubes, and d=2 polytopes
    double distance_upper_bound(const Vec& x) const;
    bool contains(const Vec& x, double tol = 1e-9) const;
    BoundaryQuadrature boundary_quadrature(int resolution) const;

    // polytope geometry (materialized for d <= 3)
    const std::vector<Vec>& vertices() const { return verts_; }            // d=2: CCW order
    const std::vector<Hyperplane>& facet_planes() const { return facets_; } // one per facet
    const std::vector<std::array<int, 3>>& surface_triangles() const { return tris_; } // d=3
    int facet_count() const; // r, number of (d-1)-faces; polytopes only
    bool is_simplicial() const;

    double ball_radius() const { return radius_; }
    double cube_half_side() const { return half_side_; }
    const std::vector<double>& semiaxes() const { return axes_; }

    std::string describe() const;

private:
    ConvexBody() = default;
    void build_polytope_geometry();
    void finish_construction();

    int d_ = 2;
    BodyKind kind_ = BodyKind::Ball;
    double radius_ = 0;
    double half_side_ = 0;
    double circum_ = 0;
    std::vector<double> axes_;
    std::vector<Vec> verts_;
    std::vector<Hyperplane> facets_;
    std::vector<std::array<int, 3>> tris_;
    int facet_count_ = 0;
    bool simplicial_ = false;
};

} // namespace kcell
