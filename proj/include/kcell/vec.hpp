// Small fixed-capacity vectors for dimensions 2..6.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>

namespace kcell {

inline constexpr int kMaxDim = 6;

class Vec {
public:
    Vec() = default;
    explicit Vec(int d) : d_(check_dim(d)) {}
    Vec(std::initializer_list<double> xs) : d_(check_dim(static_cast<int>(xs.size()))) {
        int i = 0;
        for (double x : xs) c_[i++] = x;
    }
    static Vec zero(int d) { return Vec(d); }
    static Vec axis(int d, int i, double v = 1.0) {
        Vec u(d);
        u.c_[i] = v;
        return u;
    }

    int dim() const { return d_; }
    double operator[](int i) const { return c_[i]; }
    double& operator[](int i) { return c_[i]; }

    double dot(const Vec& o) const {
        double s = 0;
        for (int i = 0; i < d_; ++i) s += c_[i] * o.c_[i];
        return s;
    }
    double norm2() const { return dot(*this); }
    double norm() const { return std::sqrt(norm2()); }

    Vec& operator+=(const Vec& o) {
        for (int i = 0; i < d_; ++i) c_[i] += o.c_[i];
        return *this;
    }
    Vec& operator-=(const Vec& o) {
        for (int i = 0; i < d_; ++i) c_[i] -= o.c_[i];
        return *this;
    }
    Vec& operator*=(double s) {
        for (int i = 0; i < d_; ++i) c_[i] *= s;
        return *this;
    }
    friend Vec operator+(Vec a, const Vec& b) { return a += b; }
    friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
    friend Vec operator*(Vec a, double s) { return a *= s; }
    friend Vec operator*(double s, Vec a) { return a *= s; }
    friend Vec operator/(Vec a, double s) { return a *= 1.0 / s; }

    Vec normalized() const {
        double n = norm();
        Vec r = *this;
        return r *= 1.0 / n;
    }

private:
    static int check_dim(int d) {
        if (d < 2 || d > kMaxDim) throw std::invalid_argument("vector dimension must be in [2,6]");
        return d;
    }
    std::array<double, kMaxDim> c_{};
    int d_ = 2;
};

inline double cross2(const Vec& a, const Vec& b) { return a[0] * b[1] - a[1] * b[0]; }

inline Vec cross3(const Vec& a, const Vec& b) {
    Vec r(3);
    r[0] = a[1] * b[2] - a[2] * b[1];
    r[1] = a[2] * b[0] - a[0] * b[2];
    r[2] = a[0] * b[1] - a[1] * b[0];
    return r;
}

// Oriented hyperplane {x : <x,normal> = offset}; canonical form keeps offset > 0
// for planes missing a body that contains the origin.
struct Hyperplane {
    Vec normal;    // unit
    double offset; // signed distance from the origin
};

} // namespace kcell
