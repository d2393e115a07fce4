#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "kcell/cell.hpp"
#include "kcell/process.hpp"

using namespace kcell;

namespace {

ProcessConfig make_config(double n, ConvexBody body, DirectionalDist dist, std::uint64_t seed = 1) {
    ProcessConfig pc;
    pc.intensity = n;
    pc.body = std::move(body);
    pc.dist = std::move(dist);
    pc.master_seed = seed;
    pc.finalize();
    return pc;
}

// two-sample Kolmogorov-Smirnov distance
double ks_distance(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double d = 0;
    size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j])
            ++i;
        else
            ++j;
        d = std::max(d, std::fabs(double(i) / a.size() - double(j) / b.size()));
    }
    return d;
}

} // namespace

TEST_CASE("window count matches the closed-form mean") {
    auto pc = make_config(100, ConvexBody::ball(2, 1.0), DirectionalDist::isotropic(2));
    Rng rng = rng_stream(42, 0, 0);
    const int reps = 10000;
    double acc = 0, acc2 = 0;
    for (int r = 0; r < reps; ++r) {
        double c = static_cast<double>(sample_window(pc, 3.0, rng).planes.size());
        acc += c;
        acc2 += c * c;
    }
    double mean = acc / reps; // oracle: 2 n (R - Phi) = 400
    double sigma = std::sqrt(400.0 / reps);
    CHECK(std::fabs(mean - 400.0) <= 3 * sigma);

    // index of dispersion stays near 1 (Poisson property)
    double var = acc2 / reps - mean * mean;
    CHECK(var / mean >= 0.95);
    CHECK(var / mean <= 1.05);
}

TEST_CASE("nonpositive intensity is rejected") {
    ProcessConfig pc;
    pc.intensity = 0;
    pc.body = ConvexBody::ball(2, 1.0);
    pc.dist = DirectionalDist::isotropic(2);
    CHECK_THROWS_AS(pc.finalize(), std::invalid_argument);
}

TEST_CASE("atomic window offsets stay in (h, R]") {
    auto dist = DirectionalDist::atomic(
        2, {{Vec{1, 0}, 0.25}, {Vec{-1, 0}, 0.25}, {Vec{0, 1}, 0.25}, {Vec{0, -1}, 0.25}});
    auto pc = make_config(200, ConvexBody::cube(2, 1.0), dist);
    Rng rng = rng_stream(7, 0, 0);
    for (int r = 0; r < 50; ++r) {
        auto batch = sample_window(pc, 3.0, rng);
        for (const auto& h : batch.planes) {
            CHECK(h.offset > 1.0); // support is 1 at every atom
            CHECK(h.offset <= 3.0);
        }
    }
}

TEST_CASE("annulus counts and disjointness") {
    auto pc = make_config(50, ConvexBody::ball(2, 1.0), DirectionalDist::isotropic(2));
    Rng rng = rng_stream(11, 0, 0);
    const int reps = 10000;
    double acc = 0;
    for (int r = 0; r < reps; ++r) {
        auto batch = sample_annulus(pc, 2.0, 5.0, rng);
        acc += static_cast<double>(batch.planes.size());
        for (const auto& h : batch.planes) {
            CHECK(h.offset > 2.0);
            CHECK(h.offset <= 5.0);
        }
    }
    double mean = acc / reps; // oracle: 2 n (r_out - r_in) = 300
    CHECK(std::fabs(mean - 300.0) <= 3 * std::sqrt(300.0 / reps));
}

TEST_CASE("window union property (two-sample KS)") {
    auto pc = make_config(100, ConvexBody::ball(2, 1.0), DirectionalDist::isotropic(2));
    const int reps = 10000;
    std::vector<double> count_a, count_b, facets_a, facets_b;
    Rng ra = rng_stream(1001, 0, 0);
    Rng rb = rng_stream(2002, 0, 0);
    for (int r = 0; r < reps; ++r) {
        auto full = sample_window(pc, 6.0, ra);
        count_a.push_back(static_cast<double>(full.planes.size()));
        auto win = sample_window(pc, 3.0, rb);
        auto ann = sample_annulus(pc, 3.0, 6.0, rb);
        count_b.push_back(static_cast<double>(win.planes.size() + ann.planes.size()));
        if (r < 2000) {
            Cell ca = cell_from_halfspaces(2, full.planes);
            std::vector<Hyperplane> merged = win.planes;
            merged.insert(merged.end(), ann.planes.begin(), ann.planes.end());
            Cell cb = cell_from_halfspaces(2, merged);
            facets_a.push_back(facet_count(ca));
            facets_b.push_back(facet_count(cb));
        }
    }
    // critical value at alpha = 0.001
    auto crit = [](size_t n, size_t m) {
        return 1.94947 * std::sqrt(double(n + m) / (double(n) * double(m)));
    };
    CHECK(ks_distance(count_a, count_b) < crit(count_a.size(), count_b.size()));
    CHECK(ks_distance(facets_a, facets_b) < crit(facets_a.size(), facets_b.size()));
}

TEST_CASE("stream contract: reproducible and distinct") {
    Rng a = rng_stream(5, 0, 0);
    Rng b = rng_stream(5, 0, 0);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

    Rng c = rng_stream(5, 0, 0);
    Rng d = rng_stream(5, 0, 1);
    Rng e = rng_stream(5, 1, 0);
    int diff_cd = 0, diff_ce = 0;
    for (int i = 0; i < 100; ++i) {
        std::uint64_t x = c.next_u64();
        diff_cd += x != d.next_u64();
        diff_ce += x != e.next_u64();
    }
    CHECK(diff_cd > 90);
    CHECK(diff_ce > 90);
}

TEST_CASE("poisson sampler moments across both regimes") {
    Rng rng(77);
    for (double lambda : {5.0, 50.0, 500.0}) {
        const int n = 200000;
        double acc = 0, acc2 = 0;
        for (int i = 0; i < n; ++i) {
            double k = static_cast<double>(poisson(rng, lambda));
            acc += k;
            acc2 += k * k;
        }
        double mean = acc / n;
        double var = acc2 / n - mean * mean;
        double se_mean = std::sqrt(lambda / n);
        CHECK(std::fabs(mean - lambda) <= 4 * se_mean);
        // Poisson variance has se ~ lambda sqrt(2/n + 1/(n lambda))
        double se_var = lambda * std::sqrt(2.0 / n + 1.0 / (n * lambda));
        CHECK(std::fabs(var - lambda) <= 5 * se_var);
    }
}

TEST_CASE("canonical form: offsets strictly beyond the body") {
    auto pc = make_config(50, ConvexBody::simplex(2, 1.0), DirectionalDist::isotropic(2));
    Rng rng = rng_stream(3, 0, 0);
    for (int r = 0; r < 200; ++r) {
        auto batch = sample_window(pc, 3.0, rng);
        for (const auto& h : batch.planes) {
            CHECK(h.offset > pc.body.support(h.normal));
            CHECK(h.offset > 0);
        }
    }
}
