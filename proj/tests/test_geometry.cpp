#include <doctest.h>

#include <cmath>
#include <numbers>

#include "kcell/body.hpp"
#include "kcell/directional.hpp"
#include "kcell/rng.hpp"

using namespace kcell;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("support closed forms") {
    auto ball = ConvexBody::ball(2, 1.0);
    Rng rng(1);
    auto iso = DirectionalDist::isotropic(2);
    for (int i = 0; i < 50; ++i) {
        Vec u = iso.sample(rng);
        CHECK(ball.support(u) == doctest::Approx(1.0).epsilon(1e-12));
    }

    auto cube = ConvexBody::cube(2, 1.0);
    CHECK(cube.support(Vec{1, 0}) == doctest::Approx(1.0));
    CHECK(cube.support(Vec{0, -1}) == doctest::Approx(1.0));

    auto poly = ConvexBody::polytope(2, {Vec{2, 0}, Vec{0, 1}, Vec{-1, -1}});
    CHECK(poly.support(Vec{0, 1}) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("circumradius closed forms") {
    CHECK(ConvexBody::ball(2, 2.0).circumradius() == doctest::Approx(2.0));
    CHECK(ConvexBody::cube(2, 1.0).circumradius() == doctest::Approx(std::sqrt(2.0)));
    CHECK(ConvexBody::simplex(2, 1.0).circumradius() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ConvexBody::ellipsoid({2.0, 1.0}).circumradius() == doctest::Approx(2.0));
}

TEST_CASE("boundary quadrature: ball d=2") {
    auto q = ConvexBody::ball(2, 1.0).boundary_quadrature(360);
    CHECK(q.total_weight() == doctest::Approx(2 * kPi).epsilon(1e-6));
    for (const auto& node : q.nodes) {
        CHECK(node.curvature == doctest::Approx(1.0));
        CHECK(node.normal.norm() == doctest::Approx(1.0));
        CHECK(node.weight > 0);
    }
}

TEST_CASE("boundary quadrature: polytope curvature vanishes") {
    auto tri = ConvexBody::simplex(2, 1.0);
    auto q = tri.boundary_quadrature(64);
    double perimeter = 3.0 * std::sqrt(3.0);
    CHECK(q.total_weight() == doctest::Approx(perimeter).epsilon(1e-12));
    for (const auto& node : q.nodes) CHECK(node.curvature == 0.0);
}

TEST_CASE("boundary quadrature: ellipse total curvature is 2pi") {
    // oracle: turning number of a convex curve, cross-checked at 10x resolution
    auto ell = ConvexBody::ellipsoid({2.0, 1.0});
    auto q = ell.boundary_quadrature(2048);
    double total = 0;
    for (const auto& node : q.nodes) total += node.weight * node.curvature;
    CHECK(total == doctest::Approx(2 * kPi).epsilon(1e-6));
    auto q10 = ell.boundary_quadrature(20480);
    double total10 = 0;
    for (const auto& node : q10.nodes) total10 += node.weight * node.curvature;
    CHECK(total10 == doctest::Approx(2 * kPi).epsilon(1e-9));
}

TEST_CASE("boundary quadrature: ball d=3 weight and ellipsoid consistency") {
    auto q = ConvexBody::ball(3, 1.5).boundary_quadrature(8192);
    CHECK(q.total_weight() == doctest::Approx(4 * kPi * 1.5 * 1.5).epsilon(1e-6));
    for (const auto& node : q.nodes) CHECK(node.curvature == doctest::Approx(1.0 / 2.25).epsilon(1e-12));

    // sphere written as an ellipsoid must agree with the ball formulas
    auto qe = ConvexBody::ellipsoid({1.5, 1.5, 1.5}).boundary_quadrature(8192);
    CHECK(qe.total_weight() == doctest::Approx(4 * kPi * 1.5 * 1.5).epsilon(1e-9));
    double tc = 0;
    for (const auto& node : qe.nodes) tc += node.weight * node.curvature;
    CHECK(tc == doctest::Approx(4 * kPi).epsilon(1e-9));
}

TEST_CASE("support is sublinear") {
    Rng rng(7);
    auto iso = DirectionalDist::isotropic(2);
    for (const auto& body : {ConvexBody::cube(2, 1.0), ConvexBody::simplex(2, 1.0),
                             ConvexBody::ellipsoid({2.0, 0.5})}) {
        for (int i = 0; i < 2000; ++i) {
            Vec u = iso.sample(rng);
            Vec v = iso.sample(rng);
            Vec w = u + v;
            double wn = w.norm();
            if (wn < 1e-9) continue;
            CHECK(body.support(w / wn) * wn <= body.support(u) + body.support(v) + 1e-9);
        }
    }
}

TEST_CASE("support bounded by circumradius with attainment") {
    Rng rng(11);
    for (int d : {2, 3}) {
        auto iso = DirectionalDist::isotropic(d);
        for (const auto& body :
             {ConvexBody::ball(d, 1.0), ConvexBody::cube(d, 0.7), ConvexBody::simplex(d, 1.0)}) {
            double best = 0;
            for (int i = 0; i < 10000; ++i) {
                Vec u = iso.sample(rng);
                double h = body.support(u);
                CHECK(h <= body.circumradius() + 1e-12);
                best = std::max(best, h);
            }
            CHECK(best >= body.circumradius() - 1e-2); // attained up to direction-grid gaps
            if (body.kind() == BodyKind::Ball) CHECK(best == doctest::Approx(body.circumradius()));
        }
    }
}

TEST_CASE("containment consistency with support") {
    Rng rng(13);
    auto iso = DirectionalDist::isotropic(2);
    auto body = ConvexBody::simplex(2, 1.0);
    // rejection-sample interior points from the bounding box
    int found = 0;
    while (found < 50) {
        Vec x{rng.uniform(-1, 1), rng.uniform(-1, 1)};
        if (!body.contains(x)) continue;
        ++found;
        for (int i = 0; i < 1000; ++i) {
            Vec u = iso.sample(rng);
            CHECK(x.dot(u) <= body.support(u) + 1e-9);
        }
    }
}

TEST_CASE("quadrature weight converges to surface area") {
    auto ell = ConvexBody::ellipsoid({1.5, 1.0});
    double ref = ell.boundary_quadrature(1 << 15).total_weight();
    double err_lo = std::fabs(ell.boundary_quadrature(128).total_weight() - ref);
    double err_hi = std::fabs(ell.boundary_quadrature(256).total_weight() - ref);
    CHECK(err_hi <= err_lo);
    CHECK(err_hi < 1e-6 * ref);
}

TEST_CASE("distance upper bound") {
    auto ball = ConvexBody::ball(2, 1.0);
    CHECK(ball.distance_upper_bound(Vec{2, 0}) == doctest::Approx(1.0));
    CHECK(ball.distance_upper_bound(Vec{0.5, 0}) == 0.0);
    auto tri = ConvexBody::simplex(2, 1.0);
    Rng rng(3);
    auto iso = DirectionalDist::isotropic(2);
    for (int i = 0; i < 500; ++i) {
        Vec u = iso.sample(rng);
        Vec x = u * rng.uniform(0.0, 3.0);
        double bound = tri.distance_upper_bound(x);
        // the bound dominates every support-excess certificate
        Vec v = iso.sample(rng);
        CHECK(x.dot(v) - tri.support(v) <= bound + 1e-12);
    }
}

TEST_CASE("body grammar") {
    CHECK(ConvexBody::parse(2, "ball:1").kind() == BodyKind::Ball);
    CHECK(ConvexBody::parse(3, "ellipsoid:1,2,3").circumradius() == doctest::Approx(3.0));
    CHECK(ConvexBody::parse(2, "ellipse:2,1").kind() == BodyKind::Ellipsoid);
    CHECK(ConvexBody::parse(2, "simplex:2,0.5").circumradius() == doctest::Approx(0.5));
    auto poly = ConvexBody::parse(2, "polygon:0,0;2,0;2,1;0,1");
    CHECK(poly.facet_count() == 4);
    CHECK_THROWS_AS(ConvexBody::parse(2, "ball:0"), std::invalid_argument);
    CHECK_THROWS_AS(ConvexBody::parse(2, "ball:1e-5"), std::invalid_argument); // scale guard
    CHECK_THROWS_AS(ConvexBody::parse(2, "ball:5e3"), std::invalid_argument);
    CHECK_THROWS_AS(ConvexBody::parse(3, "ellipse:2,1"), std::invalid_argument);
    CHECK_THROWS_AS(ConvexBody::parse(2, "simplex:3"), std::invalid_argument);
    CHECK_THROWS_AS(ConvexBody::parse(2, "frustum:1"), std::invalid_argument);
}

TEST_CASE("polytope centering puts the centroid at the origin") {
    auto poly = ConvexBody::polytope(2, {Vec{2, 0}, Vec{0, 1}, Vec{-1, -1}});
    Vec c(2);
    for (const auto& v : poly.vertices()) c += v;
    CHECK(c.norm() / 3 < 1e-12); // triangle centroid equals the vertex mean
    // d=3: tetrahedron shifted away from the origin comes back centered
    auto tet = ConvexBody::polytope(3, {Vec{5, 5, 5}, Vec{6, 5, 5}, Vec{5, 6, 5}, Vec{5, 5, 6}});
    Vec c3(3);
    for (const auto& v : tet.vertices()) c3 += v;
    CHECK(c3.norm() / 4 < 1e-9);
    CHECK(tet.is_simplicial());
    CHECK(tet.facet_count() == 4);
}

TEST_CASE("cube d=3 geometry") {
    auto cube = ConvexBody::cube(3, 0.5);
    CHECK(cube.facet_count() == 6);
    CHECK(!cube.is_simplicial());
    CHECK(cube.support(Vec{0, 0, 1}) == doctest::Approx(0.5));
    CHECK(cube.contains(Vec{0.49, 0.49, 0.49}));
    CHECK(!cube.contains(Vec{0.51, 0, 0}));
}
