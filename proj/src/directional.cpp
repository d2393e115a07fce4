#include "kcell/directional.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kcell/sphere.hpp"
#include "kcell/special.hpp"

namespace kcell {

namespace {

int default_quad_nodes(int d) {
    if (d == 2) return 4096;
    if (d == 3) return 8192;
    return 16384;
}

std::vector<double> split_numbers(std::string_view s, char sep) {
    std::vector<double> out;
    size_t pos = 0;
    while (pos <= s.size()) {
        size_t next = s.find(sep, pos);
        std::string tok(s.substr(pos, next == std::string_view::npos ? next : next - pos));
        if (tok.empty()) throw std::invalid_argument("empty numeric field in distribution spec");
        size_t used = 0;
        double v = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument("bad number '" + tok + "'");
        out.push_back(v);
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return out;
}

// rank of the set of directions (must be d for a usable distribution)
int direction_rank(const std::vector<std::pair<Vec, double>>& atoms, int d) {
    std::vector<Vec> rows;
    for (const auto& [u, w] : atoms) {
        Vec v = u;
        for (const auto& r : rows) v -= r * v.dot(r);
        if (v.norm() > 1e-9) {
            rows.push_back(v.normalized());
            if (static_cast<int>(rows.size()) == d) break;
        }
    }
    return static_cast<int>(rows.size());
}

} // namespace

DirectionalDist DirectionalDist::isotropic(int d) {
    DirectionalDist dd;
    dd.d_ = d;
    dd.kind_ = DistKind::Isotropic;
    return dd;
}

DirectionalDist DirectionalDist::cosine2(int d, double c, double sup_bound) {
    if (c < 0) throw std::invalid_argument("cosine2 parameter must be >= 0");
    DirectionalDist dd;
    dd.d_ = d;
    dd.kind_ = DistKind::Density;
    dd.c_ = c;
    // integral of <u,e1>^2 over sigma is 1/d, so the Lebesgue normalizer is
    dd.z_leb_ = 1.0 / (sphere_area(d) * (1.0 + c / d));
    dd.sup_sigma_ = sup_bound > 0 ? sup_bound : (1.0 + c) / (1.0 + c / d);
    return dd;
}

DirectionalDist DirectionalDist::atomic(int d, std::vector<std::pair<Vec, double>> atoms) {
    if (atoms.empty()) throw std::invalid_argument("atomic distribution needs atoms");
    DirectionalDist dd;
    dd.d_ = d;
    dd.kind_ = DistKind::Atomic;
    for (auto& [u, w] : atoms) {
        if (w <= 0) throw std::invalid_argument("atom weights must be positive");
        if (u.dim() != d) throw std::invalid_argument("atom dimension mismatch");
        double n = u.norm();
        if (n < 1e-12) throw std::invalid_argument("atom direction must be nonzero");
        Vec un = u / n;
        // merge with an existing atom or its antipode; otherwise add the pair
        bool merged = false;
        for (auto& [v, vw] : dd.atoms_) {
            if ((v - un).norm() < 1e-12 || (v + un).norm() < 1e-12) {
                vw += 0.5 * w;
                merged = true;
            }
        }
        if (!merged) {
            dd.atoms_.push_back({un, 0.5 * w});
            dd.atoms_.push_back({un * -1.0, 0.5 * w});
        }
    }
    double total = 0;
    for (auto& [u, w] : dd.atoms_) total += w;
    for (auto& [u, w] : dd.atoms_) w /= total;
    if (direction_rank(dd.atoms_, d) < d)
        throw std::invalid_argument("atomic directions are concentrated on a great subsphere");
    return dd;
}

DirectionalDist DirectionalDist::parse(int d, std::string_view text) {
    if (text == "isotropic") return isotropic(d);
    size_t colon = text.find(':');
    std::string kind(text.substr(0, colon == std::string_view::npos ? text.size() : colon));
    if (kind == "cosine2") {
        if (colon == std::string_view::npos) throw std::invalid_argument("cosine2:C");
        auto v = split_numbers(text.substr(colon + 1), ',');
        if (v.size() != 1) throw std::invalid_argument("cosine2:C");
        return cosine2(d, v[0]);
    }
    if (kind == "atomic") {
        if (colon == std::string_view::npos) throw std::invalid_argument("atomic:ux,uy[,uz]:w;...");
        std::string rest(text.substr(colon + 1));
        std::vector<std::pair<Vec, double>> atoms;
        size_t pos = 0;
        while (pos < rest.size()) {
            size_t next = rest.find(';', pos);
            std::string tok = rest.substr(pos, next == std::string::npos ? next : next - pos);
            size_t wc = tok.rfind(':');
            if (wc == std::string::npos) throw std::invalid_argument("atom needs coords:weight");
            auto coords = split_numbers(std::string_view(tok).substr(0, wc), ',');
            auto wv = split_numbers(std::string_view(tok).substr(wc + 1), ',');
            if (static_cast<int>(coords.size()) != d || wv.size() != 1)
                throw std::invalid_argument("atom coordinate count must match d");
            Vec u(d);
            for (int i = 0; i < d; ++i) u[i] = coords[i];
            atoms.push_back({u, wv[0]});
            if (next == std::string::npos) break;
            pos = next + 1;
        }
        return atomic(d, std::move(atoms));
    }
    throw std::invalid_argument("unknown distribution '" + std::string(text) + "'");
}

Vec DirectionalDist::sample_uniform(Rng& rng) const {
    if (d_ == 2) {
        for (;;) {
            double x = 2.0 * rng.next_double() - 1.0;
            double y = 2.0 * rng.next_double() - 1.0;
            double s = x * x + y * y;
            if (s > 0.0 && s <= 1.0) {
                double inv = 1.0 / std::sqrt(s);
                Vec u(2);
                u[0] = x * inv;
                u[1] = y * inv;
                return u;
            }
        }
    }
    if (d_ == 3) {
        for (;;) {
            double x = 2.0 * rng.next_double() - 1.0;
            double y = 2.0 * rng.next_double() - 1.0;
            double s = x * x + y * y;
            if (s < 1.0) {
                double f = 2.0 * std::sqrt(1.0 - s);
                Vec u(3);
                u[0] = x * f;
                u[1] = y * f;
                u[2] = 1.0 - 2.0 * s;
                return u;
            }
        }
    }
    Vec u(d_);
    double s2;
    do {
        for (int i = 0; i < d_; ++i) u[i] = rng.normal();
        s2 = u.norm2();
    } while (s2 == 0.0);
    return u / std::sqrt(s2);
}

Vec DirectionalDist::sample(Rng& rng) const {
    switch (kind_) {
    case DistKind::Isotropic:
        return sample_uniform(rng);
    case DistKind::Density:
        for (;;) {
            Vec u = sample_uniform(rng);
            double q_sigma = (1.0 + c_ * u[0] * u[0]) / (1.0 + c_ / d_);
            if (q_sigma > sup_sigma_ * (1.0 + 1e-12))
                throw std::runtime_error("envelope-violation: density exceeds the stated bound");
            if (rng.next_double() * sup_sigma_ < q_sigma) return u;
        }
    case DistKind::Atomic: {
        double t = rng.next_double();
        double acc = 0;
        for (const auto& [u, w] : atoms_) {
            acc += w;
            if (t < acc) return u;
        }
        return atoms_.back().first;
    }
    }
    return Vec(d_);
}

Vec DirectionalDist::sample_weighted(const ConvexBody& body, double R, Rng& rng,
                                     double* support_out) const {
    if (R < body.circumradius())
        throw std::invalid_argument("weighted direction sampling needs R >= circumradius");
    for (;;) {
        Vec u = sample(rng);
        double h = body.support(u);
        if (rng.next_double() * R < R - h) {
            if (support_out) *support_out = h;
            return u;
        }
    }
}

double DirectionalDist::density_leb(const Vec& u) const {
    switch (kind_) {
    case DistKind::Isotropic:
        return 1.0 / sphere_area(d_);
    case DistKind::Density:
        return z_leb_ * (1.0 + c_ * u[0] * u[0]);
    case DistKind::Atomic:
        throw std::invalid_argument("atomic distributions have no density");
    }
    return 0;
}

double DirectionalDist::phi_quadrature(const ConvexBody& body, int nodes) const {
    auto us = sphere_nodes(d_, nodes);
    const double omega = sphere_area(d_);
    double s = 0;
    for (const auto& u : us) s += body.support(u) * density_leb(u);
    return omega * s / nodes;
}

double DirectionalDist::phi(const ConvexBody& body) const { return phi_detailed(body).value; }

DirectionalDist::PhiEstimate DirectionalDist::phi_detailed(const ConvexBody& body) const {
    if (kind_ == DistKind::Atomic) {
        double s = 0;
        for (const auto& [u, w] : atoms_) s += w * body.support(u);
        return {s, 0.0};
    }
    if (kind_ == DistKind::Isotropic && body.kind() == BodyKind::Ball)
        return {body.ball_radius(), 0.0};
    int nodes = quad_nodes_ > 0 ? quad_nodes_ : default_quad_nodes(d_);
    double full = phi_quadrature(body, nodes);
    double half = phi_quadrature(body, std::max(8, nodes / 2));
    return {full, std::fabs(full - half)};
}

} // namespace kcell
