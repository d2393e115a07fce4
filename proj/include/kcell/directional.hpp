// Even directional distributions on the unit sphere: sampling, densities,
// and the hitting functional.
#pragma once

#include <string_view>
#include <utility>
#include <vector>

#include "kcell/body.hpp"
#include "kcell/rng.hpp"
#include "kcell/vec.hpp"

namespace kcell {

enum class DistKind { Isotropic, Density, Atomic };

class DirectionalDist {
public:
    static DirectionalDist isotropic(int d);
    // q(u) = Z_c (1 + c <u,e1>^2) w.r.t. unnormalized spherical Lebesgue measure;
    // sup_bound overrides the rejection envelope (density w.r.t. sigma), -1 = exact sup
    static DirectionalDist cosine2(int d, double c, double sup_bound = -1.0);
    // antipodal pairs are added automatically and weights renormalized
    static DirectionalDist atomic(int d, std::vector<std::pair<Vec, double>> atoms);

    // grammar: isotropic | cosine2:C | atomic:ux,uy[,uz]:w;...
    static DirectionalDist parse(int d, std::string_view text);

    int dim() const { return d_; }
    DistKind kind() const { return kind_; }
    bool has_density() const { return kind_ != DistKind::Atomic; }
    bool is_isotropic() const { return kind_ == DistKind::Isotropic; }
    double cosine2_param() const { return c_; }

    Vec sample(Rng& rng) const;
    // density proportional to (R - h(K,u)) under this distribution; R >= circumradius(K).
    // support_out, when given, receives h(K,u) of the accepted direction.
    Vec sample_weighted(const ConvexBody& body, double R, Rng& rng,
                        double* support_out = nullptr) const;

    // density w.r.t. unnormalized spherical Lebesgue measure (isotropic: 1/omega_d)
    double density_leb(const Vec& u) const;

    // hitting functional: integral of h(K,.) against this distribution
    double phi(const ConvexBody& body) const;
    struct PhiEstimate {
        double value;
        double error; // quadrature/Monte Carlo error estimate (0 when exact)
    };
    PhiEstimate phi_detailed(const ConvexBody& body) const;

    const std::vector<std::pair<Vec, double>>& atoms() const { return atoms_; }

    int quad_nodes() const { return quad_nodes_; }
    void set_quad_nodes(int n) { quad_nodes_ = n; }

private:
    DirectionalDist() = default;
    Vec sample_uniform(Rng& rng) const;
    double phi_quadrature(const ConvexBody& body, int nodes) const;

    int d_ = 2;
    DistKind kind_ = DistKind::Isotropic;
    double c_ = 0;          // cosine2 parameter
    double z_leb_ = 0;      // cosine2 normalization w.r.t. Lebesgue
    double sup_sigma_ = 1;  // rejection envelope for the sigma-density
    std::vector<std::pair<Vec, double>> atoms_;
    int quad_nodes_ = 0; // 0 = dimension default
};

} // namespace kcell
