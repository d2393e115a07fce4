#include "kcell/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <thread>

#include "kcell/special.hpp"

namespace kcell {

namespace {

struct MeanSe {
    double mean = 0;
    double se = 0;
};

MeanSe mean_se(const std::vector<double>& xs) {
    MeanSe out;
    const size_t n = xs.size();
    if (n == 0) return out;
    double s = 0;
    for (double x : xs) s += x;
    out.mean = s / n;
    if (n > 1) {
        double ss = 0;
        for (double x : xs) ss += (x - out.mean) * (x - out.mean);
        out.se = std::sqrt(ss / (n - 1)) / std::sqrt(static_cast<double>(n));
    }
    return out;
}

RateFit ols(const std::vector<double>& x, const std::vector<double>& y) {
    const int k = static_cast<int>(x.size());
    double mx = 0, my = 0;
    for (int i = 0; i < k; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= k;
    my /= k;
    double sxx = 0, sxy = 0;
    for (int i = 0; i < k; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    RateFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    if (k > 2) {
        double rss = 0;
        for (int i = 0; i < k; ++i) {
            double r = y[i] - fit.intercept - fit.slope * x[i];
            rss += r * r;
        }
        fit.stderr_slope = std::sqrt(rss / (k - 2) / sxx);
    }
    return fit;
}

double log_pmf(double k, double lambda) { return k * std::log(lambda) - lambda - log_gamma(k + 1.0); }

struct ReplicateStats {
    std::vector<FunctionalSample> samples;
    int truncated = 0;
};

ReplicateStats collect_samples(const ConvexBody& body, const DirectionalDist& dist, double n,
                               int reps, std::uint64_t seed, std::uint64_t experiment_id,
                               int workers, int sphere_nodes) {
    ProcessConfig pc;
    pc.intensity = n;
    pc.body = body;
    pc.dist = dist;
    pc.master_seed = seed;
    pc.finalize();

    EvalContext ctx;
    ctx.body = &body;
    ctx.dist = &dist;
    ctx.mean_width_k = mean_width(body, sphere_nodes);
    ctx.phi_k = pc.phi_k;
    ctx.sphere_nodes = sphere_nodes;

    ReplicateStats out;
    out.samples.assign(reps, {});
    parallel_replicates(reps, workers, [&](int r) {
        Rng rng = rng_stream(seed, experiment_id, static_cast<std::uint64_t>(r));
        Cell cell = build_cell(pc, rng);
        out.samples[r] = evaluate_sample(cell, ctx);
    });
    for (const auto& s : out.samples) out.truncated += s.truncated ? 1 : 0;
    return out;
}

IntensityRow aggregate_row(double n, const ReplicateStats& stats) {
    IntensityRow row;
    row.n = n;
    row.reps = static_cast<int>(stats.samples.size());
    row.truncated = stats.truncated;
    std::vector<double> dw, dphi, dphi2, dphi3, dphi4, f;
    for (const auto& s : stats.samples) {
        if (s.truncated) continue;
        dw.push_back(s.delta_w);
        dphi.push_back(s.delta_phi);
        dphi2.push_back(s.delta_phi * s.delta_phi);
        dphi3.push_back(s.delta_phi * s.delta_phi * s.delta_phi);
        dphi4.push_back(s.delta_phi * s.delta_phi * s.delta_phi * s.delta_phi);
        f.push_back(static_cast<double>(s.facets));
    }
    auto a = mean_se(dw);
    row.mean_dw = a.mean;
    row.se_dw = a.se;
    a = mean_se(dphi);
    row.mean_dphi = a.mean;
    row.se_dphi = a.se;
    a = mean_se(dphi2);
    row.mean_dphi2 = a.mean;
    row.se_dphi2 = a.se;
    a = mean_se(dphi3);
    row.mean_dphi3 = a.mean;
    row.se_dphi3 = a.se;
    a = mean_se(dphi4);
    row.mean_dphi4 = a.mean;
    row.se_dphi4 = a.se;
    a = mean_se(f);
    row.mean_f = a.mean;
    row.se_f = a.se;
    return row;
}

} // namespace

void parallel_replicates(int reps, int workers, const std::function<void(int)>& work) {
    workers = std::max(1, workers);
    if (workers == 1) {
        for (int r = 0; r < reps; ++r) work(r);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                int r = next.fetch_add(1);
                if (r >= reps) return;
                work(r);
            }
        });
    }
    for (auto& t : pool) t.join();
}

std::vector<double> GridSpec::points() const {
    if (!(start > 0) || !(end >= start) || !(factor > 1.0))
        throw std::invalid_argument("intensity grid must be positive, increasing, factor > 1");
    std::vector<double> pts;
    for (double v = start; v <= end * (1.0 + 1e-9); v *= factor) pts.push_back(v);
    return pts;
}

void ExperimentConfig::validate() const {
    grid.points();
    if (replicates < 100) throw std::invalid_argument("need at least 100 replicates per intensity");
    if (body.dim() != dist.dim()) throw std::invalid_argument("body/distribution dimension mismatch");
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    ExperimentResult res;
    auto pts = cfg.grid.points();
    for (size_t g = 0; g < pts.size(); ++g) {
        ReplicateStats stats = collect_samples(cfg.body, cfg.dist, pts[g], cfg.replicates,
                                               cfg.master_seed, g, cfg.workers, cfg.sphere_nodes);
        res.rows.push_back(aggregate_row(pts[g], stats));
    }
    return res;
}

std::string to_csv(const ExperimentResult& res) {
    std::string out = "n,reps,truncated,mean_dW,se_dW,mean_dPhi,se_dPhi,mean_dPhi2,se_dPhi2,mean_f,se_f\n";
    char buf[512];
    for (const auto& r : res.rows) {
        std::snprintf(buf, sizeof buf,
                      "%.17g,%d,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.n, r.reps,
                      r.truncated, r.mean_dw, r.se_dw, r.mean_dphi, r.se_dphi, r.mean_dphi2,
                      r.se_dphi2, r.mean_f, r.se_f);
        out += buf;
    }
    return out;
}

double row_value(const IntensityRow& row, RowField field) {
    switch (field) {
    case RowField::DW:
        return row.mean_dw;
    case RowField::DPhi:
        return row.mean_dphi;
    case RowField::DPhi2:
        return row.mean_dphi2;
    case RowField::F:
        return row.mean_f;
    }
    return 0;
}

RateFit rate_fit(const std::vector<IntensityRow>& rows, RowField field) {
    if (rows.size() < 3) throw std::domain_error("rate fit needs at least 3 grid points");
    std::vector<double> x, y;
    for (const auto& r : rows) {
        double v = row_value(r, field);
        if (!(v > 0)) throw std::domain_error("nonpositive-mean in rate fit");
        x.push_back(std::log(r.n));
        y.push_back(std::log(v));
    }
    return ols(x, y);
}

RateFit log_power_fit(const std::vector<IntensityRow>& rows, RowField field, int d, bool scale_by_n,
                      int points) {
    if (static_cast<int>(rows.size()) < points || points < 2)
        throw std::domain_error("log-power fit needs enough grid points");
    std::vector<double> x, y;
    for (size_t i = rows.size() - points; i < rows.size(); ++i) {
        double v = row_value(rows[i], field);
        if (scale_by_n) v *= rows[i].n;
        x.push_back(std::pow(std::log(rows[i].n), d - 1.0));
        y.push_back(v);
    }
    return ols(x, y);
}

LimitEstimate normalized_limit(const std::vector<IntensityRow>& rows, RowField field, double exponent,
                               int d) {
    if (rows.size() < 2) throw std::domain_error("normalized limit needs at least 2 grid points");
    LimitEstimate est;
    const auto& last = rows.back();
    const auto& prev = rows[rows.size() - 2];
    double a_last = std::pow(last.n, exponent) * row_value(last, field);
    double a_prev = std::pow(prev.n, exponent) * row_value(prev, field);
    est.last = a_last;
    const double beta = 1.0 / (d + 1);
    const double shrink = std::pow(last.n / prev.n, -beta);
    est.richardson = (a_last - a_prev * shrink) / (1.0 - shrink);
    return est;
}

// ---------------------------------------------------------------------------

EfronReport efron_check(const ConvexBody& body, const DirectionalDist& dist, double n, int reps,
                        std::uint64_t seed, int workers) {
    ReplicateStats stats = collect_samples(body, dist, n, reps, seed, 0, workers, 0);
    EfronReport rep;
    rep.n = n;
    rep.reps = reps;
    rep.truncated = stats.truncated;
    std::vector<double> f, rhs, diff;
    for (const auto& s : stats.samples) {
        if (s.truncated) continue;
        f.push_back(s.facets);
        rhs.push_back(2.0 * n * s.delta_phi);
        diff.push_back(s.facets - 2.0 * n * s.delta_phi);
    }
    rep.mean_f = mean_se(f).mean;
    rep.mean_rhs = mean_se(rhs).mean;
    auto d = mean_se(diff);
    rep.mean_diff = d.mean;
    rep.se_diff = d.se;
    rep.pass = std::fabs(rep.mean_diff) <= 3.0 * rep.se_diff;
    return rep;
}

Lemma41Report lemma41_check(const ConvexBody& body, const DirectionalDist& dist, double n, int reps,
                            std::uint64_t seed, int workers) {
    ReplicateStats stats = collect_samples(body, dist, n, reps, seed, 0, workers, 0);
    Lemma41Report rep;
    rep.reps = reps;
    rep.truncated = stats.truncated;
    std::vector<double> lhs, dphi2;
    for (const auto& s : stats.samples) {
        if (s.truncated) continue;
        lhs.push_back(static_cast<double>(s.facets) * (s.facets - 1.0));
        dphi2.push_back(s.delta_phi * s.delta_phi);
    }
    auto l = mean_se(lhs);
    auto r = mean_se(dphi2);
    const double scale = (2.0 * n) * (2.0 * n) / 2.0;
    rep.lhs = l.mean;
    rep.se_lhs = l.se;
    rep.rhs = scale * r.mean;
    rep.se_rhs = scale * r.se;
    rep.pass = rep.lhs <= rep.rhs + 3.0 * std::sqrt(rep.se_lhs * rep.se_lhs + rep.se_rhs * rep.se_rhs);
    return rep;
}

TailReport tail_estimate(const ConvexBody& body, const DirectionalDist& dist, double n, int reps,
                         const std::vector<double>& x_grid, std::uint64_t seed, int workers) {
    ProcessConfig pc;
    pc.intensity = n;
    pc.body = body;
    pc.dist = dist;
    pc.master_seed = seed;
    pc.finalize();

    std::vector<double> radius(reps, 0.0);
    std::vector<char> trunc(reps, 0);
    parallel_replicates(reps, workers, [&](int r) {
        Rng rng = rng_stream(seed, 0, static_cast<std::uint64_t>(r));
        Cell cell = build_cell(pc, rng);
        if (cell.truncated) {
            trunc[r] = 1;
        } else {
            radius[r] = cell_circumradius(cell);
        }
    });

    TailReport rep;
    rep.n = n;
    rep.reps = reps;
    rep.x_grid = x_grid;
    for (char t : trunc) rep.truncated += t;
    const double r0 = body.circumradius();
    for (double c : {1.5, 2.0}) {
        TailCurve curve;
        curve.c = c;
        for (double x : x_grid) {
            const double threshold = c * (r0 + x);
            int count = 0;
            for (int i = 0; i < reps; ++i)
                if (trunc[i] || radius[i] > threshold) ++count; // truncated cells exceed by construction
            double p = static_cast<double>(count) / reps;
            curve.prob.push_back(p);
            curve.se.push_back(std::sqrt(std::max(0.0, p * (1.0 - p) / reps)));
        }
        std::vector<double> xs, ys;
        for (size_t i = 0; i < x_grid.size(); ++i) {
            if (curve.prob[i] > 0) {
                xs.push_back(x_grid[i]);
                ys.push_back(std::log(curve.prob[i]));
            }
        }
        curve.below_resolution = xs.empty();
        if (xs.size() >= 2) {
            curve.slope = ols(xs, ys).slope;
            curve.slope_defined = true;
        }
        rep.curves.push_back(std::move(curve));
    }
    return rep;
}

double poisson_upper_tail(double x, double lambda) {
    double k0 = std::ceil(x);
    if (k0 <= 0) return 1.0;
    double total = 1.0, term = 1.0;
    for (double k = k0 + 1; term > 1e-22 * total; ++k) {
        term *= lambda / k;
        total += term;
        if (k > k0 + 60.0 * std::sqrt(lambda) + 1e4) break;
    }
    return std::exp(log_pmf(k0, lambda)) * total;
}

double poisson_lower_tail(double x, double lambda) {
    double k0 = std::floor(x);
    if (k0 < 0) return 0.0;
    double total = 1.0, term = 1.0;
    for (double k = k0; k >= 1 && term > 1e-22 * total; --k) {
        term *= k / lambda;
        total += term;
    }
    return std::exp(log_pmf(k0, lambda)) * total;
}

PoissonTailReport poisson_tail_bound_check(const std::vector<double>& lambdas) {
    PoissonTailReport rep;
    rep.lambdas = lambdas;
    rep.chernoff_ok = true;
    auto chernoff = [](double x, double lambda) {
        return std::exp(x - lambda - x * std::log(x / lambda));
    };
    for (double lambda : lambdas) {
        const double sd = std::sqrt(lambda);
        for (int i = 1; i <= 40; ++i) {
            double x = lambda + i * (10.0 * sd / 40.0);
            if (poisson_upper_tail(x, lambda) > chernoff(x, lambda)) rep.chernoff_ok = false;
        }
        for (int i = 1; i <= 40; ++i) {
            double x = lambda - i * (lambda / 41.0); // stays in (0, lambda)
            if (poisson_lower_tail(x, lambda) > chernoff(x, lambda)) rep.chernoff_ok = false;
        }
        const double a = std::pow(lambda, 0.75);
        double w = poisson_upper_tail(lambda - 1.0 + a, lambda) +
                   poisson_lower_tail(lambda - 1.0 - a, lambda);
        rep.window_prob.push_back(w);
    }
    rep.window_decreasing = true;
    for (size_t i = 1; i < rep.window_prob.size(); ++i)
        if (rep.window_prob[i] >= rep.window_prob[i - 1]) rep.window_decreasing = false;
    rep.pass = rep.chernoff_ok && rep.window_decreasing;
    return rep;
}

MixingReport poisson_mixing_check(MixingCase mode, double param, double lambda, double tol) {
    MixingReport rep;
    rep.lambda = lambda;
    const double sd = std::sqrt(lambda);
    const double lo = std::max(1.0, std::floor(lambda - 12.0 * sd));
    const double hi = std::ceil(lambda + 12.0 * sd);

    auto f_of = [&](double x) {
        switch (mode) {
        case MixingCase::PowerAlpha:
            return std::pow(x, param);
        case MixingCase::LogPower:
            return x / std::pow(std::log(x), param);
        case MixingCase::Growing:
            return std::pow(x, -param); // bar f
        }
        return 1.0;
    };
    auto g_of = [&](double k) {
        if (mode == MixingCase::Growing) return std::pow(k, param); // p_k with bar f(k) p_k = 1
        return 1.0 / f_of(k);                                       // g_k with f(k) g_k = 1
    };

    double sum = 0;
    for (double k = lo; k <= hi; ++k) sum += std::exp(log_pmf(k, lambda)) * g_of(k);
    rep.value = f_of(lambda) * sum;
    rep.target = 1.0;
    rep.abs_err = std::fabs(rep.value - rep.target);

    // everything summed grows at most linearly in k, so the discarded mass is
    // bounded by lambda * upper tail + lower tail
    rep.tail_budget = lambda * poisson_upper_tail(hi - 1.0, lambda) + poisson_lower_tail(lo, lambda);
    if (rep.tail_budget > 1e-10)
        throw std::runtime_error("truncation-budget-exceeded in poisson mixing check");
    rep.pass = rep.abs_err <= tol;
    return rep;
}

} // namespace kcell
