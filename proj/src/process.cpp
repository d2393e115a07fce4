#include "kcell/process.hpp"

#include <stdexcept>

namespace kcell {

void ProcessConfig::finalize() {
    if (intensity <= 0) throw std::invalid_argument("intensity must be positive");
    if (body.dim() != dist.dim()) throw std::invalid_argument("body/distribution dimension mismatch");
    if (growth_factor <= 1.0) throw std::invalid_argument("growth factor must exceed 1");
    if (max_doublings < 0) throw std::invalid_argument("max doublings must be >= 0");
    circum = body.circumradius();
    base_window = 2.0 * circum + 1.0;
    if (initial_window == 0) initial_window = base_window;
    if (initial_window < circum) throw std::invalid_argument("initial window must cover the body");
    phi_k = dist.phi(body);
}

HyperplaneBatch sample_window(const ProcessConfig& cfg, double R, Rng& rng) {
    if (R < cfg.circum) throw std::invalid_argument("window must cover the body");
    HyperplaneBatch batch;
    batch.r_in = 0;
    batch.r_out = R;
    const double mean = 2.0 * cfg.intensity * (R - cfg.phi_k);
    const std::uint64_t count = poisson(rng, mean);
    batch.planes.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        double h = 0;
        Vec u = cfg.dist.sample_weighted(cfg.body, R, rng, &h);
        double tau = h + (R - h) * (1.0 - rng.next_double()); // in (h, R]
        batch.planes.push_back({u, tau});
    }
    return batch;
}

HyperplaneBatch sample_annulus(const ProcessConfig& cfg, double r_in, double r_out, Rng& rng) {
    if (r_in < cfg.circum) throw std::invalid_argument("annulus must start outside the body");
    if (r_out <= r_in) throw std::invalid_argument("annulus must have positive width");
    HyperplaneBatch batch;
    batch.r_in = r_in;
    batch.r_out = r_out;
    const double mean = 2.0 * cfg.intensity * (r_out - r_in);
    const std::uint64_t count = poisson(rng, mean);
    batch.planes.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        Vec u = cfg.dist.sample(rng);
        double tau = r_in + (r_out - r_in) * (1.0 - rng.next_double()); // in (r_in, r_out]
        batch.planes.push_back({u, tau});
    }
    return batch;
}

} // namespace kcell
