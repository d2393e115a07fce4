#include "kcell/hull2d.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace kcell {

Hull2D convex_hull_2d(const std::vector<Vec>& pts, double eps) {
    Hull2D out;
    const int n = static_cast<int>(pts.size());
    if (n < 3) {
        out.order.resize(n);
        std::iota(out.order.begin(), out.order.end(), 0);
        out.degenerate = true;
        return out;
    }

    double scale = 0.0;
    for (const auto& p : pts) scale = std::max({scale, std::fabs(p[0]), std::fabs(p[1])});
    const double tol = eps * std::max(1.0, scale * scale);

    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
        if (pts[a][0] != pts[b][0]) return pts[a][0] < pts[b][0];
        return pts[a][1] < pts[b][1];
    });

    auto cross = [&](int o, int a, int b) {
        return (pts[a][0] - pts[o][0]) * (pts[b][1] - pts[o][1]) -
               (pts[a][1] - pts[o][1]) * (pts[b][0] - pts[o][0]);
    };

    std::vector<int> h(2 * n);
    int k = 0;
    for (int ii = 0; ii < n; ++ii) { // lower
        int i = idx[ii];
        while (k >= 2 && cross(h[k - 2], h[k - 1], i) <= tol) --k;
        h[k++] = i;
    }
    for (int ii = n - 2, lower = k + 1; ii >= 0; --ii) { // upper
        int i = idx[ii];
        while (k >= lower && cross(h[k - 2], h[k - 1], i) <= tol) --k;
        h[k++] = i;
    }
    h.resize(k - 1); // last point equals first

    out.order = std::move(h);
    out.degenerate = out.order.size() < 3;
    return out;
}

} // namespace kcell
