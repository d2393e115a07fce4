#include <doctest.h>

#include <cmath>
#include <numbers>

#include "kcell/functionals.hpp"
#include "kcell/process.hpp"
#include "kcell/sphere.hpp"

using namespace kcell;

namespace {

constexpr double kPi = std::numbers::pi;

Cell square_cell(double half_side) {
    return cell_from_halfspaces(2, {{Vec{1, 0}, half_side},
                                    {Vec{-1, 0}, half_side},
                                    {Vec{0, 1}, half_side},
                                    {Vec{0, -1}, half_side}});
}

double quadrature_width_cell(const Cell& cell, int nodes) {
    auto us = sphere_nodes(cell.dim, nodes);
    double s = 0;
    for (const auto& u : us) s += cell_support(cell, u);
    return 2.0 * s / static_cast<double>(us.size());
}

ProcessConfig config_of(double n, ConvexBody body, DirectionalDist dist, std::uint64_t seed) {
    ProcessConfig pc;
    pc.intensity = n;
    pc.body = std::move(body);
    pc.dist = std::move(dist);
    pc.master_seed = seed;
    pc.finalize();
    return pc;
}

} // namespace

TEST_CASE("mean width of balls is the diameter in every dimension") {
    for (int d : {2, 3, 4}) {
        CHECK(mean_width(ConvexBody::ball(d, 0.8)) == doctest::Approx(1.6).epsilon(1e-9));
    }
}

TEST_CASE("mean width of the unit square is 4/pi") {
    auto sq = ConvexBody::polytope(2, {Vec{0, 0}, Vec{1, 0}, Vec{1, 1}, Vec{0, 1}});
    CHECK(mean_width(sq) == doctest::Approx(4.0 / kPi).epsilon(1e-12));
    // oracle: direct quadrature of 2*integral h dsigma
    auto us = sphere_nodes(2, 4096);
    double q = 0;
    for (const auto& u : us) q += sq.support(u);
    q = 2.0 * q / 4096.0;
    CHECK(mean_width(sq) == doctest::Approx(q).epsilon(1e-6));
}

TEST_CASE("mean width of the unit cube is 3/2") {
    auto cube = ConvexBody::cube(3, 0.5);
    CHECK(mean_width(cube) == doctest::Approx(1.5).epsilon(1e-9));
    // oracle: sphere quadrature
    auto us = sphere_nodes(3, 1 << 15);
    double q = 0;
    for (const auto& u : us) q += cube.support(u);
    q = 2.0 * q / static_cast<double>(us.size());
    CHECK(mean_width(cube) == doctest::Approx(q).epsilon(2e-3));
}

TEST_CASE("cell mean width formulas match sphere quadrature") {
    auto pc2 = config_of(150, ConvexBody::ball(2, 1.0), DirectionalDist::isotropic(2), 77);
    for (int rep = 0; rep < 25; ++rep) {
        Rng rng = rng_stream(77, 0, rep);
        Cell cell = build_cell(pc2, rng);
        REQUIRE(!cell.truncated);
        CHECK(mean_width(cell) ==
              doctest::Approx(quadrature_width_cell(cell, 4096)).epsilon(1e-4));
    }
    auto pc3 = config_of(120, ConvexBody::ball(3, 1.0), DirectionalDist::isotropic(3), 78);
    for (int rep = 0; rep < 10; ++rep) {
        Rng rng = rng_stream(78, 0, rep);
        Cell cell = build_cell(pc3, rng);
        REQUIRE(!cell.truncated);
        CHECK(mean_width(cell) ==
              doctest::Approx(quadrature_width_cell(cell, 1 << 15)).epsilon(5e-3));
    }
}

TEST_CASE("hitting difference vanishes when the cell equals the body") {
    Cell cell = square_cell(1.0);
    auto cube = ConvexBody::cube(2, 1.0);
    auto axes = DirectionalDist::atomic(
        2, {{Vec{1, 0}, 0.25}, {Vec{-1, 0}, 0.25}, {Vec{0, 1}, 0.25}, {Vec{0, -1}, 0.25}});
    CHECK(hitting_diff(cell, cube, axes) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("isotropic hitting difference is half the width difference by construction") {
    auto pc = config_of(100, ConvexBody::ball(2, 1.0), DirectionalDist::isotropic(2), 5);
    Rng rng = rng_stream(5, 0, 0);
    Cell cell = build_cell(pc, rng);
    double lhs = hitting_diff(cell, pc.body, pc.dist);
    double rhs = 0.5 * (mean_width(cell) - mean_width(pc.body));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("atomic hitting difference of a dilated square is epsilon") {
    const double eps = 0.125;
    Cell cell = square_cell(1.0 + eps);
    auto cube = ConvexBody::cube(2, 1.0);
    auto axes = DirectionalDist::atomic(
        2, {{Vec{1, 0}, 0.25}, {Vec{-1, 0}, 0.25}, {Vec{0, 1}, 0.25}, {Vec{0, -1}, 0.25}});
    CHECK(hitting_diff(cell, cube, axes) == doctest::Approx(eps).epsilon(1e-12));
}

TEST_CASE("volume closed forms") {
    CHECK(volume(square_cell(1.0)) == doctest::Approx(4.0).epsilon(1e-12));
    // triangle with area 1/2, translated so the origin is interior
    Cell tri = cell_from_halfspaces(2, {{Vec{0, -1}, 1.0 / 3.0},
                                        {Vec{-1, 0}, 1.0 / 3.0},
                                        {Vec{std::sqrt(0.5), std::sqrt(0.5)}, std::sqrt(2.0) / 3.0}});
    CHECK(volume(tri) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("d=3 volume: tetra fan agrees with the divergence form") {
    auto pc = config_of(100, ConvexBody::ball(3, 1.0), DirectionalDist::isotropic(3), 13);
    for (int rep = 0; rep < 20; ++rep) {
        Rng rng = rng_stream(13, 0, rep);
        Cell cell = build_cell(pc, rng);
        REQUIRE(!cell.truncated);
        double vf = volume(cell);
        double vd = volume_divergence(cell);
        CHECK(vf == doctest::Approx(vd).epsilon(1e-8));
        CHECK(vf > 4.0 / 3.0 * kPi - 1e-9); // contains the unit ball
    }
}

TEST_CASE("functional samples are nonnegative and censor truncation") {
    for (int d : {2, 3}) {
        auto pc = config_of(60, ConvexBody::ball(d, 1.0), DirectionalDist::isotropic(d), 17);
        EvalContext ctx{&pc.body, &pc.dist, mean_width(pc.body), pc.phi_k, 0};
        for (int rep = 0; rep < 200; ++rep) {
            Rng rng = rng_stream(17, 0, rep);
            Cell cell = build_cell(pc, rng);
            FunctionalSample s = evaluate_sample(cell, ctx);
            if (s.truncated) continue;
            CHECK(s.delta_w >= 0);
            CHECK(s.delta_phi >= 0);
            CHECK(s.facets >= d + 1);
            CHECK(s.circumradius >= 1.0 - 1e-12);
            CHECK(s.has_volume);
        }
    }
}
