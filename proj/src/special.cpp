#include "kcell/special.hpp"

#include <cmath>
#include <numbers>

namespace kcell {

namespace {

// Lanczos g = 7, n = 9 (Godfrey coefficients).
constexpr double kLanczosG = 7.0;
constexpr double kLanczos[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

} // namespace

double log_gamma(double x) {
    if (x < 0.5) {
        // reflection: Gamma(x)Gamma(1-x) = pi/sin(pi x)
        return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) - log_gamma(1.0 - x);
    }
    x -= 1.0;
    double a = kLanczos[0];
    double t = x + kLanczosG + 0.5;
    for (int i = 1; i < 9; ++i) a += kLanczos[i] / (x + i);
    return 0.5 * std::log(2.0 * std::numbers::pi) + (x + 0.5) * std::log(t) - t + std::log(a);
}

double gamma_fn(double x) {
    if (x < 0.5) return std::numbers::pi / (std::sin(std::numbers::pi * x) * gamma_fn(1.0 - x));
    return std::exp(log_gamma(x));
}

double gamma_self_check() {
    double worst = 0.0;
    for (double x = 0.1; x < 25.0; x += 0.37) {
        // Gamma(x+1) = x Gamma(x)
        double lhs = gamma_fn(x + 1.0);
        double rhs = x * gamma_fn(x);
        worst = std::max(worst, std::fabs(lhs - rhs) / std::fabs(rhs));
    }
    for (double x = 0.05; x < 0.95; x += 0.11) {
        // Gamma(x)Gamma(1-x) = pi/sin(pi x)
        double lhs = gamma_fn(x) * gamma_fn(1.0 - x);
        double rhs = std::numbers::pi / std::sin(std::numbers::pi * x);
        worst = std::max(worst, std::fabs(lhs - rhs) / std::fabs(rhs));
    }
    // half-integer anchor: Gamma(1/2) = sqrt(pi)
    worst = std::max(worst, std::fabs(gamma_fn(0.5) - std::sqrt(std::numbers::pi)) / std::sqrt(std::numbers::pi));
    return worst;
}

double sphere_area(int d) {
    return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / gamma_fn(0.5 * d);
}

double ball_volume(int d) {
    return std::pow(std::numbers::pi, 0.5 * d) / gamma_fn(0.5 * d + 1.0);
}

} // namespace kcell
