#include "kcell/lp.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace kcell {

namespace {

// Two-phase dense simplex with Bland's rule, minimizing cost^T y subject to
// D y = rhs, y >= 0. Columns m.. m+d-1 are artificials.
class DualSimplex {
public:
    DualSimplex(int d, int m) : d_(d), m_(m), cols_(m + d + 1), t_(d, std::vector<double>(m + d + 1, 0.0)), basis_(d, -1) {}

    std::vector<std::vector<double>>& rows() { return t_; }

    // returns false when phase-1 cannot reach zero (system infeasible)
    bool solve(const std::vector<double>& cost, double tol, double* value) {
        // phase 1: artificial basis, minimize artificial sum
        for (int r = 0; r < d_; ++r) {
            if (t_[r][cols_ - 1] < 0.0)
                for (int j = 0; j < cols_; ++j) t_[r][j] = -t_[r][j];
            t_[r][m_ + r] = 1.0;
            basis_[r] = m_ + r;
        }
        std::vector<double> red(cols_, 0.0);
        for (int j = m_; j < m_ + d_; ++j) red[j] = 1.0;
        reduce(red);
        run(red, tol, /*allow_artificial=*/false);
        double art = 0;
        for (int r = 0; r < d_; ++r)
            if (basis_[r] >= m_) art += t_[r][cols_ - 1];
        if (art > tol) return false;

        // drive basic artificials out where possible
        for (int r = 0; r < d_; ++r) {
            if (basis_[r] < m_) continue;
            int piv = -1;
            for (int j = 0; j < m_; ++j)
                if (std::fabs(t_[r][j]) > tol) {
                    piv = j;
                    break;
                }
            if (piv >= 0) pivot(r, piv);
            // otherwise the row is inert (zero over the real columns)
        }

        // phase 2
        red.assign(cost.begin(), cost.end());
        red.resize(cols_, 0.0);
        for (int j = m_; j < m_ + d_; ++j) red[j] = 0.0;
        reduce(red);
        run(red, tol, false);
        double v = 0;
        for (int r = 0; r < d_; ++r)
            if (basis_[r] < m_) v += cost[basis_[r]] * t_[r][cols_ - 1];
        *value = v;
        return true;
    }

private:
    void reduce(std::vector<double>& red) {
        for (int r = 0; r < d_; ++r) {
            double c = red[basis_[r]];
            if (c != 0.0)
                for (int j = 0; j < cols_; ++j) red[j] -= c * t_[r][j];
        }
    }

    void pivot(int r, int c) {
        double p = t_[r][c];
        for (int j = 0; j < cols_; ++j) t_[r][j] /= p;
        for (int rr = 0; rr < d_; ++rr) {
            if (rr == r) continue;
            double f = t_[rr][c];
            if (f != 0.0)
                for (int j = 0; j < cols_; ++j) t_[rr][j] -= f * t_[r][j];
        }
        basis_[r] = c;
    }

    void run(std::vector<double>& red, double tol, bool allow_artificial) {
        const int limit = 2000 * (m_ + d_ + 10);
        const int enter_end = allow_artificial ? m_ + d_ : m_;
        for (int it = 0; it < limit; ++it) {
            int enter = -1;
            for (int j = 0; j < enter_end; ++j)
                if (red[j] < -tol) {
                    enter = j;
                    break;
                }
            if (enter < 0) return;
            int leave = -1;
            double best = 0;
            for (int r = 0; r < d_; ++r) {
                if (t_[r][enter] > tol) {
                    double ratio = t_[r][cols_ - 1] / t_[r][enter];
                    if (leave < 0 || ratio < best - tol ||
                        (ratio < best + tol && basis_[r] < basis_[leave])) {
                        leave = r;
                        best = ratio;
                    }
                }
            }
            if (leave < 0) throw std::runtime_error("LP: dual unbounded (infeasible primal system)");
            double c = red[enter];
            pivot(leave, enter);
            for (int j = 0; j < cols_; ++j) red[j] -= c * t_[leave][j];
        }
        throw std::runtime_error("LP failed to converge");
    }

    int d_, m_, cols_;
    std::vector<std::vector<double>> t_;
    std::vector<int> basis_;
};

} // namespace

LpResult lp_support(const std::vector<Hyperplane>& halfspaces, const Vec& dir, int skip, double tol) {
    const int d = dir.dim();
    std::vector<int> active;
    active.reserve(halfspaces.size());
    for (int i = 0; i < static_cast<int>(halfspaces.size()); ++i)
        if (i != skip) active.push_back(i);
    const int m = static_cast<int>(active.size());

    // dual: min tau^T y  s.t.  sum_i y_i u_i = dir, y >= 0;
    // infeasible dual (dir outside the normal cone) means unbounded support
    DualSimplex sx(d, m);
    auto& t = sx.rows();
    for (int r = 0; r < d; ++r) {
        for (int j = 0; j < m; ++j) t[r][j] = halfspaces[active[j]].normal[r];
        t[r][m + d] = dir[r];
    }
    std::vector<double> cost(m);
    for (int j = 0; j < m; ++j) cost[j] = halfspaces[active[j]].offset;

    double value = 0;
    if (!sx.solve(cost, tol, &value)) return {LpStatus::Unbounded, 0.0};
    return {LpStatus::Optimal, value};
}

bool lp_facet(const std::vector<Hyperplane>& halfspaces, int i, double tol) {
    LpResult r = lp_support(halfspaces, halfspaces[i].normal, i, tol);
    if (r.status == LpStatus::Unbounded) return true;
    return r.value > halfspaces[i].offset + tol;
}

} // namespace kcell
