#include "kcell/cell.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "kcell/hull2d.hpp"
#include "kcell/hull3d.hpp"
#include "kcell/lp.hpp"

namespace kcell {

namespace {

constexpr std::uint64_t kLayerSalt = 0x6c617965726b6579ULL;
constexpr std::uint64_t kCertSalt = 0x636572746b657973ULL;
constexpr std::uint64_t kSliceSalt = 0x736c6963656b6579ULL;
constexpr double kInf = std::numeric_limits<double>::infinity();

Vec dual_point(const Hyperplane& h) {
    if (h.offset <= 0) throw std::invalid_argument("dual reconstruction needs positive offsets");
    return h.normal / h.offset;
}

// primal vertex where facet planes i and j meet (d = 2)
Vec solve_vertex_2d(const Hyperplane& a, const Hyperplane& b) {
    double det = cross2(a.normal, b.normal);
    Vec v(2);
    v[0] = (a.offset * b.normal[1] - b.offset * a.normal[1]) / det;
    v[1] = (b.offset * a.normal[0] - a.offset * b.normal[0]) / det;
    return v;
}

bool origin_strictly_inside_2d(const std::vector<Vec>& duals, const std::vector<int>& hull) {
    const int m = static_cast<int>(hull.size());
    if (m < 3) return false;
    double scale = 0;
    for (int i : hull) scale = std::max(scale, duals[i].norm2());
    const double tol = 1e-12 * std::max(1.0, scale);
    for (int k = 0; k < m; ++k) {
        const Vec& a = duals[hull[k]];
        const Vec& b = duals[hull[(k + 1) % m]];
        if (cross2(b - a, a * -1.0) <= tol) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// incremental intersection, d = 2

class IncCell2 {
public:
    explicit IncCell2(const ConvexBody* body) : body_(body) {}

    // s is the support excess offset - h(K, normal); planes that provably
    // cannot cut the current cell are dropped without touching the hull
    void insert(const Hyperplane& h, double s) {
        if (bounded_) {
            if (s >= excess_ub_) return;
            double sup = verts_[0].dot(h.normal);
            for (size_t i = 1; i < verts_.size(); ++i) sup = std::max(sup, verts_[i].dot(h.normal));
            if (h.offset >= sup) return; // cannot cut the current cell
        }
        hs_.push_back(h);
        rebuild();
    }

    bool bounded() const { return bounded_; }
    double max_norm() const { return max_norm_; }
    double excess_bound() const { return excess_ub_; }
    const std::vector<Hyperplane>& halfspaces() const { return hs_; }
    const std::vector<Vec>& vertices() const { return verts_; }

private:
    void rebuild() {
        std::vector<Vec> duals;
        duals.reserve(hs_.size());
        for (const auto& h : hs_) duals.push_back(dual_point(h));
        Hull2D hull = convex_hull_2d(duals);
        if (hull.degenerate || !origin_strictly_inside_2d(duals, hull.order)) {
            bounded_ = false;
            max_norm_ = kInf;
            excess_ub_ = kInf;
            verts_.clear();
            return;
        }
        // keep only the facet halfspaces, in CCW order
        std::vector<Hyperplane> kept;
        kept.reserve(hull.order.size());
        for (int i : hull.order) kept.push_back(hs_[i]);
        hs_ = std::move(kept);
        const int m = static_cast<int>(hs_.size());
        verts_.clear();
        verts_.reserve(m);
        max_norm_ = 0;
        excess_ub_ = 0;
        for (int k = 0; k < m; ++k) {
            verts_.push_back(solve_vertex_2d(hs_[k], hs_[(k + 1) % m]));
            max_norm_ = std::max(max_norm_, verts_.back().norm());
            excess_ub_ = std::max(excess_ub_, body_->distance_upper_bound(verts_.back()));
        }
        bounded_ = true;
    }

    const ConvexBody* body_;
    std::vector<Hyperplane> hs_;
    std::vector<Vec> verts_;
    bool bounded_ = false;
    double max_norm_ = kInf;
    double excess_ub_ = kInf;
};

// ---------------------------------------------------------------------------
// incremental intersection, d = 3

class IncCell3 {
public:
    explicit IncCell3(const ConvexBody* body) : body_(body), hull_(1e-9) {}

    void insert(const Hyperplane& h, double s) {
        if (bounded_) {
            if (s >= excess_ub_) return;
            double sup = -kInf;
            for (size_t f = 0; f < hull_.faces().size(); ++f) {
                if (!hull_.faces()[f].alive) continue;
                sup = std::max(sup, face_vert_[f].dot(h.normal));
            }
            if (h.offset >= sup) return;
        }
        hs_.push_back(h);
        hull_.add_point(dual_point(h));
        refresh();
    }

    bool bounded() const { return bounded_; }
    double max_norm() const { return max_norm_; }
    double excess_bound() const { return excess_ub_; }
    const std::vector<Hyperplane>& halfspaces() const { return hs_; }
    const Hull3D& hull() const { return hull_; }
    const std::vector<Vec>& face_vertices() const { return face_vert_; }

private:
    void refresh() {
        const auto& faces = hull_.faces();
        face_vert_.resize(faces.size(), Vec(3));
        if (!hull_.full_dimensional() || !hull_.origin_interior(1e-12)) {
            bounded_ = false;
            max_norm_ = kInf;
            excess_ub_ = kInf;
            return;
        }
        max_norm_ = 0;
        excess_ub_ = 0;
        for (size_t f = 0; f < faces.size(); ++f) {
            if (!faces[f].alive) continue;
            face_vert_[f] = faces[f].normal / faces[f].offset;
            max_norm_ = std::max(max_norm_, face_vert_[f].norm());
            excess_ub_ = std::max(excess_ub_, body_->distance_upper_bound(face_vert_[f]));
        }
        bounded_ = true;
    }

    const ConvexBody* body_;
    std::vector<Hyperplane> hs_;
    Hull3D hull_;
    std::vector<Vec> face_vert_;
    bool bounded_ = false;
    double max_norm_ = kInf;
    double excess_ub_ = kInf;
};

// merge primal face vertices that coincide within tolerance
std::vector<int> dedup_vertices(const std::vector<Vec>& raw, std::vector<Vec>& unique_out, double tol) {
    std::vector<int> id(raw.size(), -1);
    for (size_t i = 0; i < raw.size(); ++i) {
        int found = -1;
        for (size_t j = 0; j < unique_out.size(); ++j) {
            if ((raw[i] - unique_out[j]).norm() < tol) {
                found = static_cast<int>(j);
                break;
            }
        }
        if (found < 0) {
            found = static_cast<int>(unique_out.size());
            unique_out.push_back(raw[i]);
        }
        id[i] = found;
    }
    return id;
}

// fill vertices/cycles/edges of a bounded d=3 cell from its dual hull.
// hs_index maps hull point ids to positions in cell.halfspaces.
void finalize_cell_3d(const Hull3D& hull, const std::vector<int>& hs_index, Cell& cell) {
    const auto& faces = hull.faces();
    std::vector<Vec> raw;
    std::vector<int> face_raw(faces.size(), -1);
    double scale = 0;
    for (size_t f = 0; f < faces.size(); ++f) {
        if (!faces[f].alive) continue;
        face_raw[f] = static_cast<int>(raw.size());
        raw.push_back(faces[f].normal / faces[f].offset);
        scale = std::max(scale, raw.back().norm());
    }
    std::vector<Vec> uniq;
    std::vector<int> vid = dedup_vertices(raw, uniq, 1e-9 * std::max(1.0, scale));
    cell.vertices = uniq;

    cell.facet_cycles.assign(cell.halfspaces.size(), {});
    // group alive faces around each hull point
    std::vector<std::vector<int>> around(cell.halfspaces.size());
    for (size_t f = 0; f < faces.size(); ++f) {
        if (!faces[f].alive) continue;
        for (int k = 0; k < 3; ++k) around[hs_index[faces[f].v[k]]].push_back(static_cast<int>(f));
    }
    for (size_t i = 0; i < cell.halfspaces.size(); ++i) {
        if (!cell.facet_flags[i] || around[i].empty()) continue;
        const Vec u = cell.halfspaces[i].normal;
        // right-handed tangent frame (t1, t2, u)
        Vec t1 = std::fabs(u[0]) < 0.9 ? cross3(u, Vec::axis(3, 0)) : cross3(u, Vec::axis(3, 1));
        t1 = t1.normalized();
        Vec t2 = cross3(u, t1);
        Vec cen(3);
        for (int f : around[i]) cen += raw[face_raw[f]];
        cen *= 1.0 / static_cast<double>(around[i].size());
        std::vector<std::pair<double, int>> ang;
        for (int f : around[i]) {
            Vec r = raw[face_raw[f]] - cen;
            ang.push_back({std::atan2(r.dot(t2), r.dot(t1)), vid[face_raw[f]]});
        }
        std::sort(ang.begin(), ang.end());
        std::vector<int> cycle;
        for (auto& [a, v] : ang)
            if (cycle.empty() || (cycle.back() != v && cycle.front() != v)) cycle.push_back(v);
        if (cycle.size() >= 3) cell.facet_cycles[i] = std::move(cycle);
    }

    cell.edges.clear();
    for (size_t f = 0; f < faces.size(); ++f) {
        if (!faces[f].alive) continue;
        for (int k = 0; k < 3; ++k) {
            int g = faces[f].nbr[k];
            if (g < 0 || g <= static_cast<int>(f) || !faces[g].alive) continue;
            int a = hs_index[faces[f].v[k]];
            int b = hs_index[faces[f].v[(k + 1) % 3]];
            double len = (raw[face_raw[f]] - raw[face_raw[g]]).norm();
            double dp = std::clamp(cell.halfspaces[a].normal.dot(cell.halfspaces[b].normal), -1.0, 1.0);
            cell.edges.push_back({len, std::acos(dp)});
        }
    }
}

} // namespace

DualReconstruction dual_hull_reconstruct(const std::vector<Hyperplane>& halfspaces, int d) {
    if (d != 2 && d != 3) throw std::invalid_argument("dual reconstruction supports d in {2,3}");
    DualReconstruction out;
    out.facet_flags.assign(halfspaces.size(), 0);
    if (d == 2) {
        std::vector<Vec> duals;
        duals.reserve(halfspaces.size());
        for (const auto& h : halfspaces) duals.push_back(dual_point(h));
        Hull2D hull = convex_hull_2d(duals);
        if (hull.degenerate || !origin_strictly_inside_2d(duals, hull.order)) return out;
        out.bounded = true;
        const int m = static_cast<int>(hull.order.size());
        for (int k = 0; k < m; ++k) {
            out.facet_flags[hull.order[k]] = 1;
            out.vertices.push_back(
                solve_vertex_2d(halfspaces[hull.order[k]], halfspaces[hull.order[(k + 1) % m]]));
        }
        return out;
    }
    Hull3D hull(1e-9);
    for (const auto& h : halfspaces) hull.add_point(dual_point(h));
    if (!hull.full_dimensional() || !hull.origin_interior(1e-12)) return out;
    out.bounded = true;
    auto on = hull.hull_membership();
    for (size_t i = 0; i < halfspaces.size(); ++i) out.facet_flags[i] = on[i];
    std::vector<Vec> raw;
    double scale = 0;
    for (const auto& f : hull.faces()) {
        if (!f.alive) continue;
        raw.push_back(f.normal / f.offset);
        scale = std::max(scale, raw.back().norm());
    }
    dedup_vertices(raw, out.vertices, 1e-9 * std::max(1.0, scale));
    return out;
}

Cell cell_from_halfspaces(int d, std::vector<Hyperplane> halfspaces) {
    Cell cell;
    cell.dim = d;
    cell.halfspaces = std::move(halfspaces);
    if (d <= 3) {
        DualReconstruction rec = dual_hull_reconstruct(cell.halfspaces, d);
        if (!rec.bounded) throw UnboundedCellError();
        cell.facet_flags = rec.facet_flags;
        cell.vertices = rec.vertices;
        if (d == 3) {
            // rebuild the hull to extract the surface structure
            Hull3D hull(1e-9);
            std::vector<int> ids;
            for (size_t i = 0; i < cell.halfspaces.size(); ++i) {
                hull.add_point(dual_point(cell.halfspaces[i]));
                ids.push_back(static_cast<int>(i));
            }
            finalize_cell_3d(hull, ids, cell);
        }
        return cell;
    }
    cell.heuristic_window = true;
    cell.facet_flags.assign(cell.halfspaces.size(), 0);
    for (size_t i = 0; i < cell.halfspaces.size(); ++i)
        cell.facet_flags[i] = lp_facet(cell.halfspaces, static_cast<int>(i)) ? 1 : 0;
    return cell;
}

namespace {

// Layer 0 (the initial window) is generated in the excess parametrization
// s = tau - h(K,u), under which the restriction to planes missing K has
// intensity 2n phi(du) ds: directions are plain phi draws and s is uniform
// per slice, with thinning where a slice exceeds R - h(u). Slices are
// processed in increasing s from independent substreams; once the cell's
// support excess is certified below the next slice, the remaining planes
// cannot cut and are skipped without being drawn. The smallest slice is
// sized so its expected count is O(1) at the run's intensity.
inline int slice_count(double intensity, double s_top) {
    double lg = std::log2(std::max(4.0, 2.0 * intensity * s_top));
    return std::max(8, static_cast<int>(std::ceil(lg)) + 1);
}

// consumer receives (plane, excess)
template <typename Consumer>
void stream_window_slice(const ProcessConfig& cfg, double R, double s_lo, double s_hi, Rng& sr,
                         Consumer&& eat) {
    const double cutoff = R - cfg.circum; // below this every direction admits the slice
    const bool thin = s_hi > cutoff;
    const double mean = 2.0 * cfg.intensity * (s_hi - s_lo);
    const std::uint64_t n = poisson(sr, mean);
    for (std::uint64_t i = 0; i < n; ++i) {
        Vec u = cfg.dist.sample(sr);
        double s = s_lo + (s_hi - s_lo) * (1.0 - sr.next_double()); // in (s_lo, s_hi]
        double h = cfg.body.support(u);
        if (thin && s > R - h) continue;
        eat(Hyperplane{u, h + s}, s);
    }
}

template <typename Consumer>
void stream_annulus_layer(const ProcessConfig& cfg, double r_lo, double r_hi, Rng& lr, Consumer&& eat) {
    const double mean = 2.0 * cfg.intensity * (r_hi - r_lo);
    const std::uint64_t n = poisson(lr, mean);
    for (std::uint64_t i = 0; i < n; ++i) {
        Vec u = cfg.dist.sample(lr);
        double tau = r_lo + (r_hi - r_lo) * (1.0 - lr.next_double()); // in (r_lo, r_hi]
        eat(Hyperplane{u, tau}, tau - cfg.body.support(u));
    }
}

// full-window streaming for the general-d path (kept in the tau parametrization)
template <typename Consumer>
void stream_layer_general(const ProcessConfig& cfg, int layer, double r_lo, double r_hi, Rng& lr,
                          Consumer&& eat) {
    if (layer == 0) {
        const double mean = 2.0 * cfg.intensity * (r_hi - cfg.phi_k);
        const std::uint64_t n = poisson(lr, mean);
        for (std::uint64_t i = 0; i < n; ++i) {
            double h = 0;
            Vec u = cfg.dist.sample_weighted(cfg.body, r_hi, lr, &h);
            eat(Hyperplane{u, h + (r_hi - h) * (1.0 - lr.next_double())});
        }
    } else {
        const double mean = 2.0 * cfg.intensity * (r_hi - r_lo);
        const std::uint64_t n = poisson(lr, mean);
        for (std::uint64_t i = 0; i < n; ++i) {
            Vec u = cfg.dist.sample(lr);
            eat(Hyperplane{u, r_lo + (r_hi - r_lo) * (1.0 - lr.next_double())});
        }
    }
}

template <typename Inc>
Cell build_cell_low_dim(const ProcessConfig& cfg, Rng& rng, Inc inc) {
    const std::uint64_t build_key = rng.next_u64();
    const double b1 = cfg.base_window;
    const double g = cfg.growth_factor;
    int m0 = 0;
    while (b1 * std::pow(g, m0) < cfg.initial_window * (1.0 - 1e-12)) ++m0;

    Cell cell;
    cell.dim = cfg.body.dim();
    auto eat = [&](const Hyperplane& h, double s) { inc.insert(h, s); };
    double r_hi = b1;
    double r_lo = 0;
    for (int layer = 0;; ++layer) {
        if (layer == 0) {
            const double s_top = b1 - cfg.body.support_min();
            const int slices = slice_count(cfg.intensity, s_top);
            double s_lo = 0;
            for (int j = 0; j < slices; ++j) {
                double s_hi = s_top * std::pow(2.0, j - (slices - 1));
                Rng sr = rng_stream(build_key, kSliceSalt, j);
                stream_window_slice(cfg, b1, s_lo, s_hi, sr, eat);
                s_lo = s_hi;
                if (inc.bounded() && inc.excess_bound() <= s_hi) break;
            }
        } else {
            Rng lr = rng_stream(build_key, kLayerSalt, layer);
            stream_annulus_layer(cfg, r_lo, r_hi, lr, eat);
        }
        if (layer >= m0) {
            if (inc.bounded() && inc.max_norm() < r_hi) {
                cell.window_used = r_hi;
                break;
            }
            if (layer - m0 >= cfg.max_doublings) {
                cell.window_used = r_hi;
                cell.truncated = true;
                break;
            }
        }
        r_lo = r_hi;
        r_hi *= g;
    }

    if constexpr (std::is_same_v<Inc, IncCell2>) {
        cell.halfspaces = inc.halfspaces();
        cell.facet_flags.assign(cell.halfspaces.size(), 1);
        if (!cell.truncated) cell.vertices = inc.vertices();
    } else {
        cell.halfspaces = inc.halfspaces();
        auto on = inc.hull().hull_membership();
        cell.facet_flags.assign(cell.halfspaces.size(), 0);
        for (size_t i = 0; i < cell.halfspaces.size(); ++i) cell.facet_flags[i] = i < on.size() && on[i];
        if (!cell.truncated) {
            std::vector<int> ids(cell.halfspaces.size());
            for (size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<int>(i);
            finalize_cell_3d(inc.hull(), ids, cell);
        }
    }
    return cell;
}

Cell build_cell_general(const ProcessConfig& cfg, Rng& rng) {
    const std::uint64_t build_key = rng.next_u64();
    const int d = cfg.body.dim();
    const double b1 = cfg.base_window;
    const double g = cfg.growth_factor;
    int m0 = 0;
    while (b1 * std::pow(g, m0) < cfg.initial_window * (1.0 - 1e-12)) ++m0;

    // certificate directions: fixed axes plus a deterministic random grid
    std::vector<Vec> cert;
    for (int i = 0; i < d; ++i) {
        cert.push_back(Vec::axis(d, i, 1.0));
        cert.push_back(Vec::axis(d, i, -1.0));
    }
    Rng cr = rng_stream(build_key, kCertSalt, 0);
    DirectionalDist iso = DirectionalDist::isotropic(d);
    for (int i = 0; i < 1000; ++i) cert.push_back(iso.sample(cr));

    Cell cell;
    cell.dim = d;
    cell.heuristic_window = true;
    std::vector<Hyperplane> hs;
    double r_hi = b1, r_lo = 0;
    for (int layer = 0;; ++layer) {
        Rng lr = rng_stream(build_key, kLayerSalt, layer);
        stream_layer_general(cfg, layer, r_lo, r_hi, lr,
                             [&](const Hyperplane& h) { hs.push_back(h); });
        if (layer >= m0) {
            bool ok = true;
            for (const auto& u : cert) {
                LpResult res = lp_support(hs, u);
                if (res.status != LpStatus::Optimal || res.value >= r_hi * (1.0 - 1e-6)) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                cell.window_used = r_hi;
                break;
            }
            if (layer - m0 >= cfg.max_doublings) {
                cell.window_used = r_hi;
                cell.truncated = true;
                break;
            }
        }
        r_lo = r_hi;
        r_hi *= g;
    }
    cell.halfspaces = std::move(hs);
    cell.facet_flags.assign(cell.halfspaces.size(), 0);
    if (!cell.truncated)
        for (size_t i = 0; i < cell.halfspaces.size(); ++i)
            cell.facet_flags[i] = lp_facet(cell.halfspaces, static_cast<int>(i)) ? 1 : 0;
    return cell;
}

} // namespace

Cell build_cell(const ProcessConfig& cfg, Rng& rng) {
    if (cfg.base_window <= 0) throw std::invalid_argument("process config not finalized");
    const int d = cfg.body.dim();
    if (d == 2) return build_cell_low_dim(cfg, rng, IncCell2{&cfg.body});
    if (d == 3) return build_cell_low_dim(cfg, rng, IncCell3{&cfg.body});
    return build_cell_general(cfg, rng);
}

double cell_support(const Cell& cell, const Vec& u) {
    if (cell.truncated) throw std::invalid_argument("support undefined for truncated cells");
    if (cell.dim <= 3) {
        double s = -kInf;
        for (const auto& v : cell.vertices) s = std::max(s, v.dot(u));
        return s;
    }
    LpResult res = lp_support(cell.halfspaces, u);
    if (res.status != LpStatus::Optimal) throw std::runtime_error("unbounded-direction in cell support");
    return res.value;
}

int facet_count(const Cell& cell) {
    if (cell.truncated) throw std::invalid_argument("facet count undefined for truncated cells");
    int n = 0;
    for (auto f : cell.facet_flags) n += f != 0;
    return n;
}

double cell_circumradius(const Cell& cell) {
    double s = 0;
    for (const auto& v : cell.vertices) s = std::max(s, v.norm());
    return s;
}

} // namespace kcell
