// Incremental convex hull in R^3 with tolerance-based visibility tests.
#pragma once

#include <vector>

#include "kcell/vec.hpp"

namespace kcell {

class Hull3D {
public:
    enum class Insert {
        Inserted, // hull surface grew
        Interior, // point inside (or on) the current hull, absorbed
        Pending,  // point set still degenerate, buffered
    };

    struct Face {
        int v[3];      // point indices, counterclockwise seen from outside
        int nbr[3];    // face across edge (v[i], v[(i+1)%3])
        Vec normal;    // unit outward
        double offset; // <normal,x> = offset on the face plane
        bool alive = true;
    };

    explicit Hull3D(double eps = 1e-9) : eps_(eps) {}

    Insert add_point(const Vec& p);

    bool full_dimensional() const { return initialized_; }
    int point_count() const { return static_cast<int>(pts_.size()); }
    const Vec& point(int i) const { return pts_[i]; }
    const std::vector<Face>& faces() const { return faces_; }
    int alive_face_count() const { return alive_count_; }

    // all alive faces have offset/|normal| above margin (origin strictly interior)
    bool origin_interior(double margin) const;
    // point i is referenced by some alive face
    std::vector<char> hull_membership() const;

private:
    bool try_initialize();
    Insert insert_initialized(int pi);
    void make_face(int a, int b, int c);
    void link_neighbors_bruteforce();

    double eps_;
    double scale_ = 1.0;
    bool initialized_ = false;
    int alive_count_ = 0;
    Vec interior_ref_ = Vec(3);
    std::vector<Vec> pts_;
    std::vector<Face> faces_;
    std::vector<int> visit_mark_;
    int visit_stamp_ = 0;
};

} // namespace kcell
