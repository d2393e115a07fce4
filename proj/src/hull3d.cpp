#include "kcell/hull3d.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

namespace kcell {

namespace {

double orient(const Vec& a, const Vec& b, const Vec& c, const Vec& d) {
    // 6 * signed volume of tetra (a,b,c,d); positive when d is on the
    // positive side of the CCW triangle (a,b,c)
    return cross3(b - a, c - a).dot(d - a);
}

} // namespace

void Hull3D::make_face(int a, int b, int c) {
    Face f;
    f.v[0] = a;
    f.v[1] = b;
    f.v[2] = c;
    f.nbr[0] = f.nbr[1] = f.nbr[2] = -1;
    Vec n = cross3(pts_[b] - pts_[a], pts_[c] - pts_[a]);
    double nn = n.norm();
    f.normal = (nn > 0) ? n / nn : Vec::axis(3, 0);
    f.offset = f.normal.dot(pts_[a]);
    f.alive = true;
    faces_.push_back(f);
    ++alive_count_;
}

void Hull3D::link_neighbors_bruteforce() {
    std::map<std::pair<int, int>, std::pair<int, int>> half; // directed edge -> (face, slot)
    for (int fi = 0; fi < static_cast<int>(faces_.size()); ++fi) {
        if (!faces_[fi].alive) continue;
        for (int k = 0; k < 3; ++k) {
            int a = faces_[fi].v[k], b = faces_[fi].v[(k + 1) % 3];
            half[{a, b}] = {fi, k};
        }
    }
    for (auto& [edge, fk] : half) {
        auto it = half.find({edge.second, edge.first});
        if (it != half.end()) faces_[fk.first].nbr[fk.second] = it->second.first;
    }
}

bool Hull3D::try_initialize() {
    const int n = static_cast<int>(pts_.size());
    if (n < 4) return false;
    const double tol1 = eps_ * scale_;
    int i0 = 0, i1 = -1, i2 = -1, i3 = -1;
    for (int i = 1; i < n && i1 < 0; ++i)
        if ((pts_[i] - pts_[i0]).norm() > tol1) i1 = i;
    if (i1 < 0) return false;
    for (int i = 1; i < n && i2 < 0; ++i) {
        if (i == i1) continue;
        if (cross3(pts_[i1] - pts_[i0], pts_[i] - pts_[i0]).norm() > tol1 * tol1) i2 = i;
    }
    if (i2 < 0) return false;
    for (int i = 1; i < n && i3 < 0; ++i) {
        if (i == i1 || i == i2) continue;
        if (std::fabs(orient(pts_[i0], pts_[i1], pts_[i2], pts_[i])) > tol1 * tol1 * tol1) i3 = i;
    }
    if (i3 < 0) return false;

    if (orient(pts_[i0], pts_[i1], pts_[i2], pts_[i3]) > 0) std::swap(i1, i2);
    make_face(i0, i1, i2);
    make_face(i0, i2, i3);
    make_face(i0, i3, i1);
    make_face(i1, i3, i2);
    link_neighbors_bruteforce();
    interior_ref_ = (pts_[i0] + pts_[i1] + pts_[i2] + pts_[i3]) * 0.25;
    initialized_ = true;

    // feed the remaining buffered points
    for (int i = 1; i < n; ++i) {
        if (i == i1 || i == i2 || i == i3) continue;
        insert_initialized(i);
    }
    return true;
}

Hull3D::Insert Hull3D::add_point(const Vec& p) {
    scale_ = std::max({scale_, std::fabs(p[0]), std::fabs(p[1]), std::fabs(p[2])});
    pts_.push_back(p);
    if (!initialized_) {
        if (!try_initialize()) return Insert::Pending;
        return Insert::Inserted;
    }
    return insert_initialized(static_cast<int>(pts_.size()) - 1);
}

Hull3D::Insert Hull3D::insert_initialized(int pi) {
    const Vec& p = pts_[pi];
    const double tol = eps_ * std::max(1.0, scale_);
    const int nf = static_cast<int>(faces_.size());

    // seed with the most violated face
    int seed = -1;
    double best = tol;
    for (int fi = 0; fi < nf; ++fi) {
        if (!faces_[fi].alive) continue;
        double s = faces_[fi].normal.dot(p) - faces_[fi].offset;
        if (s > best) {
            best = s;
            seed = fi;
        }
    }
    if (seed < 0) return Insert::Interior;

    // BFS over visible faces
    if (visit_mark_.size() < faces_.size()) visit_mark_.resize(faces_.size(), 0);
    ++visit_stamp_;
    std::vector<int> visible;
    std::vector<int> stack{seed};
    visit_mark_[seed] = visit_stamp_;
    while (!stack.empty()) {
        int fi = stack.back();
        stack.pop_back();
        visible.push_back(fi);
        for (int k = 0; k < 3; ++k) {
            int g = faces_[fi].nbr[k];
            if (g < 0 || visit_mark_[g] == visit_stamp_ || !faces_[g].alive) continue;
            if (faces_[g].normal.dot(p) - faces_[g].offset > tol) {
                visit_mark_[g] = visit_stamp_;
                stack.push_back(g);
            }
        }
    }

    auto is_visible = [&](int fi) { return visit_mark_[fi] == visit_stamp_; };

    // horizon: directed edges of visible faces whose across-face is hidden
    struct HorizonEdge {
        int a, b, hidden, hidden_slot;
    };
    std::vector<HorizonEdge> horizon;
    for (int fi : visible) {
        for (int k = 0; k < 3; ++k) {
            int g = faces_[fi].nbr[k];
            if (g >= 0 && faces_[g].alive && !is_visible(g)) {
                int a = faces_[fi].v[k], b = faces_[fi].v[(k + 1) % 3];
                int slot = -1;
                for (int m = 0; m < 3; ++m)
                    if (faces_[g].v[m] == b && faces_[g].v[(m + 1) % 3] == a) slot = m;
                horizon.push_back({a, b, g, slot});
            }
        }
    }
    if (horizon.empty()) return Insert::Interior; // numerically everything visible: degenerate, drop

    for (int fi : visible) {
        faces_[fi].alive = false;
        --alive_count_;
    }

    // extrude: new face (a, b, p) per horizon edge
    std::map<int, int> face_of_start; // horizon start vertex -> new face id
    bool start_collision = false;
    std::vector<int> new_faces;
    new_faces.reserve(horizon.size());
    for (const auto& e : horizon) {
        int id = static_cast<int>(faces_.size());
        make_face(e.a, e.b, pi);
        Face& f = faces_[id];
        // a numeric flip changes which undirected edges the slots denote,
        // so adjacency must be relinked from scratch in that case
        if (f.normal.dot(interior_ref_) - f.offset > 0) {
            std::swap(f.v[0], f.v[1]);
            f.normal *= -1.0;
            f.offset = f.normal.dot(pts_[f.v[0]]);
            start_collision = true;
        }
        f.nbr[0] = e.hidden;
        if (e.hidden_slot >= 0) faces_[e.hidden].nbr[e.hidden_slot] = id;
        if (!face_of_start.emplace(e.a, id).second) start_collision = true;
        new_faces.push_back(id);
    }
    if (visit_mark_.size() < faces_.size()) visit_mark_.resize(faces_.size(), 0);

    if (start_collision) {
        link_neighbors_bruteforce();
    } else {
        // ring adjacency: the face across edge (b,p) starts at b; across (p,a) ends at a
        for (size_t h = 0; h < horizon.size(); ++h) {
            int id = new_faces[h];
            auto itn = face_of_start.find(horizon[h].b);
            if (itn == face_of_start.end()) {
                link_neighbors_bruteforce();
                break;
            }
            faces_[id].nbr[1] = itn->second;
            faces_[itn->second].nbr[2] = id;
        }
    }
    return Insert::Inserted;
}

bool Hull3D::origin_interior(double margin) const {
    if (!initialized_) return false;
    for (const auto& f : faces_)
        if (f.alive && f.offset <= margin) return false;
    return true;
}

std::vector<char> Hull3D::hull_membership() const {
    std::vector<char> on(pts_.size(), 0);
    for (const auto& f : faces_)
        if (f.alive)
            for (int k = 0; k < 3; ++k) on[f.v[k]] = 1;
    return on;
}

} // namespace kcell
