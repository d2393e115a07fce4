#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "kcell/cell.hpp"
#include "kcell/lp.hpp"
#include "kcell/process.hpp"

using namespace kcell;

namespace {

std::vector<Hyperplane> square_halfspaces() {
    return {{Vec{1, 0}, 1.0}, {Vec{-1, 0}, 1.0}, {Vec{0, 1}, 1.0}, {Vec{0, -1}, 1.0}};
}

// brute-force d=2 oracle: vertices from all line pairs filtered by all
// constraints; boundedness from the angular gaps of the normals
struct Brute2 {
    bool bounded = false;
    std::vector<Vec> vertices;
};

Brute2 brute_force_2d(const std::vector<Hyperplane>& hs) {
    Brute2 out;
    std::vector<double> angles;
    for (const auto& h : hs) angles.push_back(std::atan2(h.normal[1], h.normal[0]));
    std::sort(angles.begin(), angles.end());
    double gap = 0;
    for (size_t i = 0; i < angles.size(); ++i) {
        double next = i + 1 < angles.size() ? angles[i + 1] : angles[0] + 2 * M_PI;
        gap = std::max(gap, next - angles[i]);
    }
    out.bounded = gap < M_PI - 1e-12;
    if (!out.bounded) return out;
    const int m = static_cast<int>(hs.size());
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            double det = cross2(hs[i].normal, hs[j].normal);
            if (std::fabs(det) < 1e-12) continue;
            Vec v(2);
            v[0] = (hs[i].offset * hs[j].normal[1] - hs[j].offset * hs[i].normal[1]) / det;
            v[1] = (hs[j].offset * hs[i].normal[0] - hs[i].offset * hs[j].normal[0]) / det;
            bool feasible = true;
            for (int k = 0; k < m; ++k)
                if (v.dot(hs[k].normal) > hs[k].offset + 1e-9) feasible = false;
            if (feasible) out.vertices.push_back(v);
        }
    }
    return out;
}

bool vertex_sets_match(std::vector<Vec> a, std::vector<Vec> b, double tol) {
    // b may contain duplicates from coincident pairs
    for (const auto& v : a) {
        bool hit = false;
        for (const auto& w : b)
            if ((v - w).norm() < tol) hit = true;
        if (!hit) return false;
    }
    for (const auto& w : b) {
        bool hit = false;
        for (const auto& v : a)
            if ((v - w).norm() < tol) hit = true;
        if (!hit) return false;
    }
    return true;
}

std::vector<Hyperplane> random_instance(Rng& rng, int d, int m, bool ensure_bounded) {
    auto iso = DirectionalDist::isotropic(d);
    std::vector<Hyperplane> hs;
    if (ensure_bounded) {
        for (int i = 0; i < d; ++i) {
            hs.push_back({Vec::axis(d, i, 1.0), rng.uniform(0.5, 2.0)});
            hs.push_back({Vec::axis(d, i, -1.0), rng.uniform(0.5, 2.0)});
        }
    }
    while (static_cast<int>(hs.size()) < m)
        hs.push_back({iso.sample(rng), rng.uniform(0.2, 2.0)});
    return hs;
}

ProcessConfig ball_config(int d, double n, std::uint64_t seed) {
    ProcessConfig pc;
    pc.intensity = n;
    pc.body = ConvexBody::ball(d, 1.0);
    pc.dist = DirectionalDist::isotropic(d);
    pc.master_seed = seed;
    pc.finalize();
    return pc;
}

} // namespace

TEST_CASE("square injection") {
    Cell cell = cell_from_halfspaces(2, square_halfspaces());
    CHECK(facet_count(cell) == 4);
    REQUIRE(cell.vertices.size() == 4);
    std::vector<Vec> expect = {Vec{1, 1}, Vec{-1, 1}, Vec{-1, -1}, Vec{1, -1}};
    CHECK(vertex_sets_match(cell.vertices, expect, 1e-12));
    CHECK(cell_support(cell, Vec{1, 0}) == doctest::Approx(1.0));
    double s = std::sqrt(0.5);
    CHECK(cell_support(cell, Vec{s, s}) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("redundant halfspace flagged, facet count unchanged") {
    auto hs = square_halfspaces();
    hs.push_back({Vec{1, 0}, 2.0}); // dual point (0.5, 0) falls inside the hull
    Cell cell = cell_from_halfspaces(2, hs);
    CHECK(facet_count(cell) == 4);
    CHECK(cell.facet_flags[4] == 0);
    CHECK(cell.vertices.size() == 4);
}

TEST_CASE("unbounded intersections are signalled") {
    std::vector<Hyperplane> half = {{Vec{1, 0}, 1.0}, {Vec{0, 1}, 1.0}};
    CHECK_THROWS_AS(cell_from_halfspaces(2, half), UnboundedCellError);
    auto rec = dual_hull_reconstruct(half, 2);
    CHECK(!rec.bounded);
    // slab: origin on the boundary of the dual hull
    std::vector<Hyperplane> slab = {{Vec{1, 0}, 1.0}, {Vec{-1, 0}, 1.0}};
    CHECK(!dual_hull_reconstruct(slab, 2).bounded);
}

TEST_CASE("random d=2 instances match the brute-force oracle") {
    Rng rng(2024);
    int bounded_seen = 0;
    for (int trial = 0; trial < 200; ++trial) {
        int m = 3 + static_cast<int>(rng.next_double() * 47);
        auto hs = random_instance(rng, 2, m, trial % 2 == 0);
        Brute2 oracle = brute_force_2d(hs);
        DualReconstruction rec = dual_hull_reconstruct(hs, 2);
        REQUIRE(rec.bounded == oracle.bounded);
        if (!oracle.bounded) continue;
        ++bounded_seen;
        CHECK(vertex_sets_match(rec.vertices, oracle.vertices, 1e-7));
        // facet flags against the per-halfspace LP redundancy oracle
        for (size_t i = 0; i < hs.size(); ++i) {
            bool lp = lp_facet(hs, static_cast<int>(i));
            if (static_cast<bool>(rec.facet_flags[i]) != lp) {
                // coincident duplicate halfspaces: exactly one copy is flagged
                int twins = 0;
                for (size_t j = 0; j < hs.size(); ++j)
                    if ((hs[j].normal - hs[i].normal).norm() < 1e-12 &&
                        std::fabs(hs[j].offset - hs[i].offset) < 1e-12)
                        ++twins;
                CHECK(twins > 1);
            }
        }
    }
    CHECK(bounded_seen >= 80);
}

TEST_CASE("random d=3 instances: hull flags equal LP flags, supports agree") {
    Rng rng(99);
    auto iso = DirectionalDist::isotropic(3);
    for (int trial = 0; trial < 30; ++trial) {
        int m = 8 + static_cast<int>(rng.next_double() * 20);
        auto hs = random_instance(rng, 3, m, true);
        DualReconstruction rec = dual_hull_reconstruct(hs, 3);
        REQUIRE(rec.bounded);
        Cell cell = cell_from_halfspaces(3, hs);
        for (size_t i = 0; i < hs.size(); ++i)
            CHECK(static_cast<bool>(rec.facet_flags[i]) == lp_facet(hs, static_cast<int>(i)));
        for (int k = 0; k < 100; ++k) {
            Vec u = iso.sample(rng);
            LpResult lp = lp_support(hs, u);
            REQUIRE(lp.status == LpStatus::Optimal);
            CHECK(cell_support(cell, u) == doctest::Approx(lp.value).epsilon(1e-7));
        }
    }
}

TEST_CASE("built cells contain the body") {
    for (int d : {2, 3}) {
        auto pc = ball_config(d, 200, 31);
        auto iso = DirectionalDist::isotropic(d);
        for (int rep = 0; rep < (d == 2 ? 50 : 20); ++rep) {
            Rng rng = rng_stream(31, 0, rep);
            Cell cell = build_cell(pc, rng);
            REQUIRE(!cell.truncated);
            Rng dir_rng(rep);
            for (int k = 0; k < (d == 2 ? 360 : 100); ++k) {
                Vec u = iso.sample(dir_rng);
                CHECK(cell_support(cell, u) >= pc.body.support(u) - 1e-9);
            }
            CHECK(facet_count(cell) <= static_cast<int>(cell.halfspaces.size()));
        }
    }
}

TEST_CASE("adding halfspaces never increases the support") {
    Rng rng(55);
    auto iso = DirectionalDist::isotropic(2);
    for (int trial = 0; trial < 100; ++trial) {
        auto hs = random_instance(rng, 2, 12, true);
        Vec u = iso.sample(rng);
        double prev = std::numeric_limits<double>::infinity();
        for (size_t m = 4; m <= hs.size(); ++m) {
            std::vector<Hyperplane> prefix(hs.begin(), hs.begin() + m);
            auto rec = dual_hull_reconstruct(prefix, 2);
            if (!rec.bounded) continue;
            double s = -1e300;
            for (const auto& v : rec.vertices) s = std::max(s, v.dot(u));
            CHECK(s <= prev + 1e-9);
            prev = std::min(prev, s);
        }
    }
}

TEST_CASE("window coupling: nested initial windows give identical cells") {
    for (int d : {2, 3}) {
        for (std::uint64_t seed : {1ULL, 2ULL, 77ULL}) {
            ProcessConfig small = ball_config(d, 50, seed);
            ProcessConfig big = small;
            big.initial_window = 4 * small.initial_window;
            Rng r1 = rng_stream(seed, 0, 0);
            Rng r2 = rng_stream(seed, 0, 0);
            Cell a = build_cell(small, r1);
            Cell b = build_cell(big, r2);
            REQUIRE(!a.truncated);
            REQUIRE(!b.truncated);
            REQUIRE(a.vertices.size() == b.vertices.size());
            CHECK(vertex_sets_match(a.vertices, b.vertices, 1e-9));
        }
    }
}

TEST_CASE("tiny intensities extend the window instead of failing") {
    auto pc = ball_config(2, 1, 5);
    int trunc = 0;
    for (int rep = 0; rep < 50; ++rep) {
        Rng rng = rng_stream(5, 0, rep);
        Cell cell = build_cell(pc, rng);
        if (cell.truncated) {
            ++trunc;
            continue;
        }
        CHECK(cell.window_used >= pc.initial_window);
        CHECK(cell_circumradius(cell) < cell.window_used);
    }
    CHECK(trunc == 0);
}

TEST_CASE("truncation is rare at default settings") {
    auto pc = ball_config(2, 20, 8);
    int trunc = 0;
    for (int rep = 0; rep < 2000; ++rep) {
        Rng rng = rng_stream(8, 0, rep);
        trunc += build_cell(pc, rng).truncated ? 1 : 0;
    }
    CHECK(trunc == 0); // empirical rate well below 1e-3
}

TEST_CASE("atomic axes on the square cap the facet count at 4") {
    ProcessConfig pc;
    pc.intensity = 100;
    pc.body = ConvexBody::cube(2, 1.0);
    pc.dist = DirectionalDist::atomic(
        2, {{Vec{1, 0}, 0.25}, {Vec{-1, 0}, 0.25}, {Vec{0, 1}, 0.25}, {Vec{0, -1}, 0.25}});
    pc.master_seed = 12;
    pc.finalize();
    for (int rep = 0; rep < 100; ++rep) {
        Rng rng = rng_stream(12, 0, rep);
        Cell cell = build_cell(pc, rng);
        if (!cell.truncated) CHECK(facet_count(cell) <= 4);
    }
}

TEST_CASE("general-d path: LP cell with heuristic window flag") {
    ProcessConfig pc;
    pc.intensity = 40;
    pc.body = ConvexBody::ball(4, 1.0);
    pc.dist = DirectionalDist::isotropic(4);
    pc.master_seed = 21;
    pc.finalize();
    Rng rng = rng_stream(21, 0, 0);
    Cell cell = build_cell(pc, rng);
    REQUIRE(!cell.truncated);
    CHECK(cell.heuristic_window);
    CHECK(facet_count(cell) >= 5); // bounded full-dimensional cell needs d+1 facets
    auto iso = DirectionalDist::isotropic(4);
    Rng dir_rng(1);
    for (int k = 0; k < 50; ++k) {
        Vec u = iso.sample(dir_rng);
        CHECK(cell_support(cell, u) >= pc.body.support(u) - 1e-9);
        CHECK(cell_support(cell, u) <= cell.window_used * (1.0 + 1e-9));
    }
}
