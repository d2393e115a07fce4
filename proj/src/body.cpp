#include "kcell/body.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <stdexcept>

#include "kcell/hull2d.hpp"
#include "kcell/hull3d.hpp"
#include "kcell/sphere.hpp"

namespace kcell {

namespace {

constexpr double kScaleMin = 1e-3;
constexpr double kScaleMax = 1e3;

std::vector<double> parse_numbers(std::string_view s, char sep) {
    std::vector<double> out;
    size_t pos = 0;
    while (pos <= s.size()) {
        size_t next = s.find(sep, pos);
        std::string tok(s.substr(pos, next == std::string_view::npos ? next : next - pos));
        if (tok.empty()) throw std::invalid_argument("empty numeric field in body/distribution spec");
        size_t used = 0;
        double v = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument("bad number '" + tok + "'");
        out.push_back(v);
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return out;
}

} // namespace

double BoundaryQuadrature::total_weight() const {
    double s = 0;
    for (const auto& n : nodes) s += n.weight;
    return s;
}

ConvexBody ConvexBody::ball(int d, double radius) {
    if (radius <= 0) throw std::invalid_argument("ball radius must be positive");
    ConvexBody b;
    b.d_ = d;
    b.kind_ = BodyKind::Ball;
    b.radius_ = radius;
    b.finish_construction();
    return b;
}

ConvexBody ConvexBody::cube(int d, double half_side) {
    if (half_side <= 0) throw std::invalid_argument("cube half-side must be positive");
    ConvexBody b;
    b.d_ = d;
    b.kind_ = BodyKind::Cube;
    b.half_side_ = half_side;
    if (d <= 3) {
        const int corners = 1 << d;
        for (int m = 0; m < corners; ++m) {
            Vec v(d);
            for (int i = 0; i < d; ++i) v[i] = (m >> i & 1) ? half_side : -half_side;
            b.verts_.push_back(v);
        }
        b.build_polytope_geometry();
    }
    b.finish_construction();
    return b;
}

ConvexBody ConvexBody::ellipsoid(const std::vector<double>& semiaxes) {
    const int d = static_cast<int>(semiaxes.size());
    if (d != 2 && d != 3) throw std::invalid_argument("ellipsoid needs 2 or 3 semiaxes");
    for (double a : semiaxes)
        if (a <= 0) throw std::invalid_argument("semiaxes must be positive");
    ConvexBody b;
    b.d_ = d;
    b.kind_ = BodyKind::Ellipsoid;
    b.axes_ = semiaxes;
    b.finish_construction();
    return b;
}

ConvexBody ConvexBody::simplex(int d, double scale) {
    if (scale <= 0) throw std::invalid_argument("simplex scale must be positive");
    ConvexBody b;
    b.d_ = d;
    b.kind_ = BodyKind::Simplex;
    b.radius_ = scale;

    // regular simplex: project the centered standard simplex of R^{d+1}
    // onto the sum-zero subspace, then scale vertices to the given circumradius
    const int m = d + 1;
    std::vector<std::array<double, kMaxDim + 1>> basis(d);
    for (int i = 0; i < d; ++i) {
        std::array<double, kMaxDim + 1> v{};
        v[i] = 1.0;
        v[m - 1] = -1.0;
        // Gram-Schmidt against previous rows
        for (int j = 0; j < i; ++j) {
            double dp = 0;
            for (int k = 0; k < m; ++k) dp += v[k] * basis[j][k];
            for (int k = 0; k < m; ++k) v[k] -= dp * basis[j][k];
        }
        double nn = 0;
        for (int k = 0; k < m; ++k) nn += v[k] * v[k];
        nn = std::sqrt(nn);
        for (int k = 0; k < m; ++k) v[k] /= nn;
        basis[i] = v;
    }
    for (int i = 0; i < m; ++i) {
        std::array<double, kMaxDim + 1> q{};
        for (int k = 0; k < m; ++k) q[k] = (k == i ? 1.0 : 0.0) - 1.0 / m;
        Vec v(d);
        for (int j = 0; j < d; ++j) {
            double dp = 0;
            for (int k = 0; k < m; ++k) dp += q[k] * basis[j][k];
            v[j] = dp;
        }
        b.verts_.push_back(v * (scale / v.norm()));
    }
    if (d <= 3) {
        b.build_polytope_geometry();
    } else {
        // facets by symmetry: the facet opposite vertex v has outer normal -v/|v|
        for (const auto& v : b.verts_) {
            Vec n = v.normalized() * -1.0;
            double off = b.verts_[0].dot(n);
            for (const auto& w : b.verts_) off = std::max(off, w.dot(n));
            b.facets_.push_back({n, off});
        }
        b.facet_count_ = m;
        b.simplicial_ = true;
    }
    b.finish_construction();
    return b;
}

ConvexBody ConvexBody::polytope(int d, std::vector<Vec> vertices) {
    if (d > 3) throw std::invalid_argument("explicit polytopes are supported for d <= 3");
    ConvexBody b;
    b.d_ = d;
    b.kind_ = BodyKind::Polytope;
    b.verts_ = std::move(vertices);
    b.build_polytope_geometry();
    b.finish_construction();
    return b;
}

void ConvexBody::finish_construction() {
    switch (kind_) {
    case BodyKind::Ball:
        circum_ = radius_;
        break;
    case BodyKind::Ellipsoid:
        circum_ = *std::max_element(axes_.begin(), axes_.end());
        break;
    case BodyKind::Cube:
        circum_ = half_side_ * std::sqrt(static_cast<double>(d_));
        break;
    case BodyKind::Simplex:
        circum_ = radius_;
        break;
    case BodyKind::Polytope: {
        double best = 0;
        for (const auto& v : verts_) best = std::max(best, v.norm());
        circum_ = best;
        break;
    }
    }
    if (!(circum_ >= kScaleMin && circum_ <= kScaleMax))
        throw std::invalid_argument("body circumradius must lie in [1e-3, 1e3]");
}

void ConvexBody::build_polytope_geometry() {
    if (d_ == 2) {
        Hull2D h = convex_hull_2d(verts_);
        if (h.degenerate) throw std::invalid_argument("polygon is not full-dimensional");
        std::vector<Vec> ordered;
        for (int i : h.order) ordered.push_back(verts_[i]);
        // area centroid, then recenter
        double area2 = 0;
        Vec cen(2);
        const int n = static_cast<int>(ordered.size());
        for (int i = 0; i < n; ++i) {
            const Vec& a = ordered[i];
            const Vec& b = ordered[(i + 1) % n];
            double c = cross2(a, b);
            area2 += c;
            cen += (a + b) * c;
        }
        if (area2 <= 0) throw std::invalid_argument("degenerate polygon");
        cen *= 1.0 / (3.0 * area2);
        for (auto& v : ordered) v -= cen;
        verts_ = std::move(ordered);
        facets_.clear();
        for (int i = 0; i < n; ++i) {
            Vec e = verts_[(i + 1) % n] - verts_[i];
            Vec nrm{e[1], -e[0]};
            nrm = nrm.normalized();
            facets_.push_back({nrm, nrm.dot(verts_[i])});
        }
        facet_count_ = n;
        simplicial_ = true; // every polygon
        return;
    }

    // d == 3
    Hull3D hull(1e-12);
    for (const auto& v : verts_) hull.add_point(v);
    if (!hull.full_dimensional()) throw std::invalid_argument("polytope is not full-dimensional");

    // volume centroid from the triangulated surface (fan from the vertex mean)
    Vec q0(3);
    for (const auto& v : verts_) q0 += v;
    q0 *= 1.0 / static_cast<double>(verts_.size());
    double vol6 = 0;
    Vec cen(3);
    for (const auto& f : hull.faces()) {
        if (!f.alive) continue;
        Vec a = hull.point(f.v[0]) - q0, b = hull.point(f.v[1]) - q0, c = hull.point(f.v[2]) - q0;
        double det = cross3(a, b).dot(c);
        vol6 += det;
        cen += (a + b + c) * (det * 0.25);
    }
    if (vol6 <= 0) throw std::invalid_argument("degenerate polytope");
    cen = q0 + cen * (1.0 / vol6);

    // keep only hull vertices, recentered
    std::vector<char> on = hull.hull_membership();
    std::vector<int> remap(verts_.size(), -1);
    std::vector<Vec> kept;
    for (size_t i = 0; i < verts_.size(); ++i) {
        if (on[i]) {
            remap[i] = static_cast<int>(kept.size());
            kept.push_back(hull.point(static_cast<int>(i)) - cen);
        }
    }
    tris_.clear();
    for (const auto& f : hull.faces()) {
        if (!f.alive) continue;
        tris_.push_back({remap[f.v[0]], remap[f.v[1]], remap[f.v[2]]});
    }
    verts_ = std::move(kept);

    // group triangles into planar facets
    facets_.clear();
    std::vector<int> tri_facet(tris_.size(), -1);
    for (size_t t = 0; t < tris_.size(); ++t) {
        const auto& tr = tris_[t];
        Vec n = cross3(verts_[tr[1]] - verts_[tr[0]], verts_[tr[2]] - verts_[tr[0]]).normalized();
        double off = n.dot(verts_[tr[0]]);
        int fi = -1;
        for (size_t j = 0; j < facets_.size(); ++j) {
            if ((facets_[j].normal - n).norm() < 1e-9 && std::fabs(facets_[j].offset - off) < 1e-9 * std::max(1.0, std::fabs(off))) {
                fi = static_cast<int>(j);
                break;
            }
        }
        if (fi < 0) {
            fi = static_cast<int>(facets_.size());
            facets_.push_back({n, off});
        }
        tri_facet[t] = fi;
    }
    facet_count_ = static_cast<int>(facets_.size());
    std::vector<int> tris_per_facet(facets_.size(), 0);
    for (int fi : tri_facet) ++tris_per_facet[fi];
    simplicial_ = std::all_of(tris_per_facet.begin(), tris_per_facet.end(), [](int c) { return c == 1; });
}

double ConvexBody::support(const Vec& u) const {
    switch (kind_) {
    case BodyKind::Ball:
        return radius_;
    case BodyKind::Ellipsoid: {
        double s = 0;
        for (int i = 0; i < d_; ++i) s += axes_[i] * axes_[i] * u[i] * u[i];
        return std::sqrt(s);
    }
    case BodyKind::Cube: {
        double s = 0;
        for (int i = 0; i < d_; ++i) s += std::fabs(u[i]);
        return half_side_ * s;
    }
    case BodyKind::Simplex:
    case BodyKind::Polytope: {
        double best = verts_[0].dot(u);
        for (size_t i = 1; i < verts_.size(); ++i) best = std::max(best, verts_[i].dot(u));
        return best;
    }
    }
    return 0;
}

double ConvexBody::circumradius() const { return circum_; }

double ConvexBody::support_min() const {
    switch (kind_) {
    case BodyKind::Ball:
        return radius_;
    case BodyKind::Ellipsoid:
        return *std::min_element(axes_.begin(), axes_.end());
    case BodyKind::Cube:
        return half_side_;
    case BodyKind::Simplex:
    case BodyKind::Polytope: {
        double best = facets_.empty() ? 0.0 : facets_[0].offset;
        for (const auto& f : facets_) best = std::min(best, f.offset);
        return std::max(0.0, best);
    }
    }
    return 0;
}

double ConvexBody::distance_upper_bound(const Vec& x) const {
    switch (kind_) {
    case BodyKind::Ball:
        return std::max(0.0, x.norm() - radius_);
    case BodyKind::Ellipsoid: {
        double rho2 = 0;
        for (int i = 0; i < d_; ++i) rho2 += x[i] * x[i] / (axes_[i] * axes_[i]);
        if (rho2 <= 1.0) return 0.0;
        return x.norm() * (1.0 - 1.0 / std::sqrt(rho2));
    }
    case BodyKind::Cube: {
        double s = 0;
        for (int i = 0; i < d_; ++i) {
            double e = std::fabs(x[i]) - half_side_;
            if (e > 0) s += e * e;
        }
        return std::sqrt(s);
    }
    case BodyKind::Simplex:
    case BodyKind::Polytope: {
        if (d_ == 2) {
            // exact point-to-polygon distance
            if (contains(x, 0.0)) return 0.0;
            const int n = static_cast<int>(verts_.size());
            double best = (x - verts_[0]).norm();
            for (int i = 0; i < n; ++i) {
                const Vec& a = verts_[i];
                const Vec& b = verts_[(i + 1) % n];
                Vec ab = b - a;
                double t = std::clamp((x - a).dot(ab) / ab.norm2(), 0.0, 1.0);
                best = std::min(best, (x - (a + ab * t)).norm());
            }
            return best;
        }
        double best = (x - verts_[0]).norm(); // vertex distance is a valid bound
        for (const auto& v : verts_) best = std::min(best, (x - v).norm());
        return best;
    }
    }
    return 0;
}

bool ConvexBody::contains(const Vec& x, double tol) const {
    switch (kind_) {
    case BodyKind::Ball:
        return x.norm() <= radius_ + tol;
    case BodyKind::Ellipsoid: {
        double s = 0;
        for (int i = 0; i < d_; ++i) s += x[i] * x[i] / (axes_[i] * axes_[i]);
        return s <= 1.0 + tol;
    }
    case BodyKind::Cube: {
        for (int i = 0; i < d_; ++i)
            if (std::fabs(x[i]) > half_side_ + tol) return false;
        return true;
    }
    case BodyKind::Simplex:
    case BodyKind::Polytope: {
        if (facets_.empty()) throw std::invalid_argument("containment unavailable for this body");
        for (const auto& f : facets_)
            if (x.dot(f.normal) > f.offset + tol) return false;
        return true;
    }
    }
    return false;
}

int ConvexBody::facet_count() const {
    if (!is_polytope()) throw std::invalid_argument("facet count defined for polytopes only");
    if (facet_count_ == 0) throw std::invalid_argument("facet structure unavailable in this dimension");
    return facet_count_;
}

bool ConvexBody::is_simplicial() const {
    return is_polytope() && facet_count_ > 0 && simplicial_;
}

BoundaryQuadrature ConvexBody::boundary_quadrature(int resolution) const {
    if (resolution < 8) throw std::invalid_argument("boundary quadrature needs resolution >= 8");
    if (d_ > 3) throw std::invalid_argument("boundary quadrature unsupported for d > 3");
    BoundaryQuadrature q;

    if (kind_ == BodyKind::Ball) {
        if (d_ == 2) {
            for (int k = 0; k < resolution; ++k) {
                double th = 2.0 * std::numbers::pi * (k + 0.5) / resolution;
                Vec u{std::cos(th), std::sin(th)};
                q.nodes.push_back({u * radius_, u, 1.0 / radius_,
                                   2.0 * std::numbers::pi * radius_ / resolution});
            }
        } else {
            auto nodes = sphere_nodes(3, resolution);
            double w = 4.0 * std::numbers::pi * radius_ * radius_ / resolution;
            for (const auto& u : nodes)
                q.nodes.push_back({u * radius_, u, 1.0 / (radius_ * radius_), w});
        }
        return q;
    }

    if (kind_ == BodyKind::Ellipsoid) {
        if (d_ == 2) {
            const double a = axes_[0], b = axes_[1];
            for (int k = 0; k < resolution; ++k) {
                double t = 2.0 * std::numbers::pi * (k + 0.5) / resolution;
                double ct = std::cos(t), st = std::sin(t);
                Vec p{a * ct, b * st};
                double speed = std::sqrt(a * a * st * st + b * b * ct * ct);
                Vec n{b * ct, a * st};
                n = n.normalized();
                double kappa = a * b / (speed * speed * speed);
                q.nodes.push_back({p, n, kappa, speed * 2.0 * std::numbers::pi / resolution});
            }
        } else {
            const double a = axes_[0], b = axes_[1], c = axes_[2];
            int mth = std::max(8, static_cast<int>(std::lround(std::sqrt(resolution / 2.0))));
            int mph = 2 * mth;
            std::vector<double> gx, gw;
            gauss_legendre(mth, gx, gw);
            for (int i = 0; i < mth; ++i) {
                double u = gx[i];
                double s = std::sqrt(std::max(0.0, 1.0 - u * u));
                for (int j = 0; j < mph; ++j) {
                    double ph = 2.0 * std::numbers::pi * (j + 0.5) / mph;
                    double cp = std::cos(ph), sp = std::sin(ph);
                    Vec p{a * s * cp, b * s * sp, c * u};
                    double jac = std::sqrt(b * b * c * c * s * s * cp * cp +
                                           a * a * c * c * s * s * sp * sp + a * a * b * b * u * u);
                    Vec n{p[0] / (a * a), p[1] / (b * b), p[2] / (c * c)};
                    n = n.normalized();
                    double g = p[0] * p[0] / (a * a * a * a) + p[1] * p[1] / (b * b * b * b) +
                               p[2] * p[2] / (c * c * c * c);
                    double kappa = 1.0 / (a * a * b * b * c * c * g * g);
                    q.nodes.push_back({p, n, kappa, jac * gw[i] * 2.0 * std::numbers::pi / mph});
                }
            }
        }
        return q;
    }

    // polytope variants: facet-interior nodes, curvature 0
    if (facets_.empty()) throw std::invalid_argument("boundary quadrature unsupported for this body");
    if (d_ == 2) {
        const int n = static_cast<int>(verts_.size());
        double perimeter = 0;
        for (int i = 0; i < n; ++i) perimeter += (verts_[(i + 1) % n] - verts_[i]).norm();
        for (int i = 0; i < n; ++i) {
            Vec a = verts_[i], b = verts_[(i + 1) % n];
            double len = (b - a).norm();
            int k = std::max(1, static_cast<int>(std::lround(resolution * len / perimeter)));
            for (int j = 0; j < k; ++j) {
                double t = (j + 0.5) / k;
                q.nodes.push_back({a + (b - a) * t, facets_[i].normal, 0.0, len / k});
            }
        }
    } else {
        for (const auto& tr : tris_) {
            Vec a = verts_[tr[0]], b = verts_[tr[1]], c = verts_[tr[2]];
            Vec n = cross3(b - a, c - a);
            double area2 = n.norm();
            if (area2 <= 0) continue;
            q.nodes.push_back({(a + b + c) * (1.0 / 3.0), n / area2, 0.0, 0.5 * area2});
        }
    }
    return q;
}

ConvexBody ConvexBody::parse(int d, std::string_view text) {
    size_t colon = text.find(':');
    if (colon == std::string_view::npos) throw std::invalid_argument("body spec needs the form kind:params");
    std::string kind(text.substr(0, colon));
    std::string_view rest = text.substr(colon + 1);
    if (kind == "ball") {
        auto v = parse_numbers(rest, ',');
        if (v.size() != 1) throw std::invalid_argument("ball:R");
        return ball(d, v[0]);
    }
    if (kind == "cube") {
        auto v = parse_numbers(rest, ',');
        if (v.size() != 1) throw std::invalid_argument("cube:A");
        return cube(d, v[0]);
    }
    if (kind == "ellipse") {
        auto v = parse_numbers(rest, ',');
        if (v.size() != 2 || d != 2) throw std::invalid_argument("ellipse:A,B requires d=2");
        return ellipsoid(v);
    }
    if (kind == "ellipsoid") {
        auto v = parse_numbers(rest, ',');
        if (v.size() != 3 || d != 3) throw std::invalid_argument("ellipsoid:A,B,C requires d=3");
        return ellipsoid(v);
    }
    if (kind == "simplex") {
        auto v = parse_numbers(rest, ',');
        if (v.empty() || v.size() > 2) throw std::invalid_argument("simplex:D[,SCALE]");
        if (static_cast<int>(v[0]) != d) throw std::invalid_argument("simplex dimension must match --d");
        return simplex(d, v.size() == 2 ? v[1] : 1.0);
    }
    if (kind == "polygon") {
        if (d != 2) throw std::invalid_argument("polygon bodies require d=2");
        std::vector<Vec> verts;
        size_t pos = 0;
        std::string s(rest);
        while (pos < s.size()) {
            size_t next = s.find(';', pos);
            std::string tok = s.substr(pos, next == std::string::npos ? next : next - pos);
            auto xy = parse_numbers(tok, ',');
            if (xy.size() != 2) throw std::invalid_argument("polygon vertices are x,y pairs");
            verts.push_back(Vec{xy[0], xy[1]});
            if (next == std::string::npos) break;
            pos = next + 1;
        }
        if (verts.size() < 3) throw std::invalid_argument("polygon needs at least 3 vertices");
        return polytope(2, std::move(verts));
    }
    throw std::invalid_argument("unknown body kind '" + kind + "'");
}

std::string ConvexBody::describe() const {
    char buf[128];
    switch (kind_) {
    case BodyKind::Ball:
        std::snprintf(buf, sizeof buf, "ball r=%g (d=%d)", radius_, d_);
        break;
    case BodyKind::Ellipsoid:
        if (d_ == 2)
            std::snprintf(buf, sizeof buf, "ellipse %g,%g", axes_[0], axes_[1]);
        else
            std::snprintf(buf, sizeof buf, "ellipsoid %g,%g,%g", axes_[0], axes_[1], axes_[2]);
        break;
    case BodyKind::Cube:
        std::snprintf(buf, sizeof buf, "cube a=%g (d=%d)", half_side_, d_);
        break;
    case BodyKind::Simplex:
        std::snprintf(buf, sizeof buf, "regular simplex (d=%d, scale=%g)", d_, radius_);
        break;
    case BodyKind::Polytope:
        std::snprintf(buf, sizeof buf, "polytope with %zu vertices (d=%d)", verts_.size(), d_);
        break;
    }
    return buf;
}

} // namespace kcell
