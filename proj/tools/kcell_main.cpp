// Command-line harness: simulate | experiment | constants | check.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "kcell/asymptotics.hpp"
#include "kcell/cell.hpp"
#include "kcell/harness.hpp"
#include "kcell/special.hpp"

namespace {

using namespace kcell;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

GridSpec parse_grid(const std::string& text) {
    // START:END:xFACTOR
    GridSpec g;
    size_t a = text.find(':');
    size_t b = text.find(':', a == std::string::npos ? a : a + 1);
    if (a == std::string::npos || b == std::string::npos)
        throw std::invalid_argument("grid must be START:END:xFACTOR");
    g.start = std::stod(text.substr(0, a));
    g.end = std::stod(text.substr(a + 1, b - a - 1));
    std::string f = text.substr(b + 1);
    if (f.empty() || f[0] != 'x') throw std::invalid_argument("grid factor must be written xF");
    g.factor = std::stod(f.substr(1));
    return g;
}

int default_workers() {
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void print_cell(const Cell& cell, std::ostream& os) {
    os << "dimension " << cell.dim << "\n";
    os << "window " << fmt(cell.window_used) << "\n";
    os << "truncated " << (cell.truncated ? 1 : 0) << "\n";
    if (cell.heuristic_window) os << "heuristic_window 1\n";
    os << "halfspaces " << cell.halfspaces.size() << "\n";
    for (size_t i = 0; i < cell.halfspaces.size(); ++i) {
        const auto& h = cell.halfspaces[i];
        for (int k = 0; k < cell.dim; ++k) os << fmt(h.normal[k]) << " ";
        os << fmt(h.offset) << " " << int(cell.facet_flags[i]) << "\n";
    }
    if (cell.dim <= 3) {
        os << "vertices " << cell.vertices.size() << "\n";
        for (const auto& v : cell.vertices) {
            for (int k = 0; k < cell.dim; ++k) os << fmt(v[k]) << (k + 1 < cell.dim ? " " : "");
            os << "\n";
        }
    }
}

void print_targets(const LimitTargets& t, bool csv, std::ostream& os) {
    os << "d " << t.d << "\n";
    os << "c_d " << fmt(t.cd) << "\n";
    if (t.f) os << "F " << fmt(*t.f) << "\n";
    if (t.g) os << "G " << fmt(*t.g) << "\n";
    if (t.thm31) os << "thm31_limit " << fmt(*t.thm31) << "\n";
    if (t.thm32) os << "thm32_limit " << fmt(*t.thm32) << "\n";
    if (t.thm42) os << "thm42_limit " << fmt(*t.thm42) << "\n";
    if (t.thm43) os << "thm43_limit " << fmt(*t.thm43) << "\n";
    if (csv) {
        auto opt = [](const std::optional<double>& v) { return v ? fmt(*v) : std::string(); };
        os << "csv," << t.d << "," << fmt(t.cd) << "," << opt(t.f) << "," << opt(t.g) << ","
           << opt(t.thm31) << "," << opt(t.thm32) << "," << opt(t.thm42) << "," << opt(t.thm43)
           << "\n";
    }
}

void summarize_experiment(const ExperimentResult& res, const std::string& tag, const ConvexBody& body,
                          const DirectionalDist& dist, std::optional<int> facet_override,
                          int boundary_res, std::ostream& os) {
    const int d = body.dim();
    int truncated = 0, reps = 0;
    for (const auto& r : res.rows) {
        truncated += r.truncated;
        reps += r.reps;
    }
    os << "rows " << res.rows.size() << "\n";
    os << "truncation_fraction " << fmt(reps ? static_cast<double>(truncated) / reps : 0.0) << "\n";

    auto fit_line = [&](const char* name, RowField f) {
        try {
            RateFit fit = rate_fit(res.rows, f);
            os << name << "_slope " << fmt(fit.slope) << " stderr " << fmt(fit.stderr_slope) << "\n";
        } catch (const std::domain_error&) {
            os << name << "_slope unavailable\n";
        }
    };

    LimitTargets targets;
    bool have_targets = false;
    try {
        targets = theorem_targets(body, dist, facet_override, boundary_res);
        have_targets = true;
    } catch (const std::exception&) {
    }

    if (tag == "thm31" || tag == "thm22" || tag == "thm41" || tag == "thm42" || tag == "efron" ||
        tag == "lemma41" || tag == "tail") {
        fit_line("dW", RowField::DW);
        fit_line("dPhi", RowField::DPhi);
        fit_line("dPhi2", RowField::DPhi2);
        fit_line("f", RowField::F);
    }
    if (tag == "thm31") {
        auto lim = normalized_limit(res.rows, RowField::DW, 2.0 / (d + 1), d);
        os << "thm31_normalized_last " << fmt(lim.last) << "\n";
        os << "thm31_richardson_heuristic " << fmt(lim.richardson) << "\n";
        if (have_targets && targets.thm31) os << "thm31_target " << fmt(*targets.thm31) << "\n";
    }
    if (tag == "thm42") {
        auto lim = normalized_limit(res.rows, RowField::F, -(d - 1.0) / (d + 1.0), d);
        os << "thm42_normalized_last " << fmt(lim.last) << "\n";
        os << "thm42_richardson_heuristic " << fmt(lim.richardson) << "\n";
        if (have_targets && targets.thm42) os << "thm42_target " << fmt(*targets.thm42) << "\n";
    }
    if (tag == "thm32" || tag == "thm43") {
        int top = std::max<int>(2, static_cast<int>(res.rows.size()) / 2);
        RateFit fw = log_power_fit(res.rows, RowField::DW, d, /*scale_by_n=*/true, top);
        RateFit ff = log_power_fit(res.rows, RowField::F, d, /*scale_by_n=*/false, top);
        os << "thm32_logfit_slope_ndW " << fmt(fw.slope) << " stderr " << fmt(fw.stderr_slope) << "\n";
        os << "thm43_logfit_slope_f " << fmt(ff.slope) << " stderr " << fmt(ff.stderr_slope) << "\n";
        const auto& last = res.rows.back();
        double lg = std::pow(std::log(last.n), d - 1.0);
        os << "ndW_over_log_last " << fmt(last.n * last.mean_dw / lg) << "\n";
        os << "f_over_log_last " << fmt(last.mean_f / lg) << "\n";
        if (have_targets && targets.thm32) os << "thm32_target " << fmt(*targets.thm32) << "\n";
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"K-cells of stationary Poisson hyperplane processes"};
    app.require_subcommand(1);

    // shared options
    int d = 2;
    std::string body_spec = "ball:1";
    std::string dist_spec = "isotropic";
    std::uint64_t seed = 1;
    int workers = default_workers();

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--d", d, "dimension (2..6)");
        cmd->add_option("--body", body_spec, "body spec, e.g. ball:1, cube:1, simplex:2, polygon:...");
        cmd->add_option("--dist", dist_spec, "distribution: isotropic | cosine2:C | atomic:...");
        cmd->add_option("--seed", seed, "master seed");
    };

    // simulate
    auto* sim = app.add_subcommand("simulate", "draw one K-cell and print it");
    double sim_intensity = 100;
    std::string sim_out;
    double sim_window = 0, sim_growth = 2.0;
    int sim_doublings = 64;
    add_common(sim);
    sim->add_option("--intensity", sim_intensity, "process intensity n")->required();
    sim->add_option("--out", sim_out, "write the cell to a file instead of stdout");
    sim->add_option("--window", sim_window, "initial window radius (default 2R_o+1)");
    sim->add_option("--growth", sim_growth, "window growth factor");
    sim->add_option("--max-doublings", sim_doublings, "window extension cap");

    // experiment
    auto* exp = app.add_subcommand("experiment", "Monte Carlo grid run, CSV output");
    std::string exp_theorem = "thm31", exp_grid = "128:8192:x2", exp_out = "experiment.csv";
    std::string exp_dump_dphi;
    int exp_reps = 1000, exp_quad = 0, exp_boundary = 4096;
    int exp_r = 0;
    add_common(exp);
    exp->add_option("--theorem", exp_theorem,
                    "thm31|thm32|thm42|thm43|thm22|thm41|tail|efron|lemma41");
    exp->add_option("--n-grid", exp_grid, "intensity grid START:END:xFACTOR")->required();
    exp->add_option("--reps", exp_reps, "replicates per grid point")->required();
    exp->add_option("--out", exp_out, "CSV output path")->required();
    exp->add_option("--workers", workers, "worker threads");
    exp->add_option("--quad-nodes", exp_quad, "sphere quadrature nodes (0 = default)");
    exp->add_option("--boundary-res", exp_boundary, "boundary quadrature resolution");
    exp->add_option("--r", exp_r, "facet count override for thm32/thm43 targets");
    exp->add_option("--dump-dphi", exp_dump_dphi, "write per-replicate dPhi samples to a CSV");

    // constants
    auto* con = app.add_subcommand("constants", "print the limit targets");
    bool con_csv = false;
    int con_r = 0, con_boundary = 4096;
    add_common(con);
    con->add_flag("--csv", con_csv, "also print one CSV row");
    con->add_option("--r", con_r, "facet count override for thm32/thm43");
    con->add_option("--boundary-res", con_boundary, "boundary quadrature resolution");

    // check
    auto* chk = app.add_subcommand("check", "run a verification suite");
    std::string chk_suite;
    double chk_n = 100, chk_param = 2.0 / 3.0, chk_lambda = 1e4, chk_tol = 0.01;
    int chk_reps = 10000;
    std::string chk_case = "a";
    std::vector<double> chk_lambdas{10, 100, 1000};
    std::vector<double> chk_xgrid{0, 0.25, 0.5, 0.75, 1.0};
    add_common(chk);
    chk->add_option("--suite", chk_suite, "efron|lemma41|poisson-tail|poisson-mixing|tail")->required();
    chk->add_option("--n", chk_n, "intensity");
    chk->add_option("--reps", chk_reps, "replicates");
    chk->add_option("--workers", workers, "worker threads");
    chk->add_option("--case", chk_case, "poisson-mixing case: a|b|growing");
    chk->add_option("--param", chk_param, "poisson-mixing parameter");
    chk->add_option("--lambda", chk_lambda, "poisson-mixing lambda");
    chk->add_option("--tol", chk_tol, "poisson-mixing tolerance");
    chk->add_option("--lambdas", chk_lambdas, "poisson-tail lambda grid");
    chk->add_option("--x-grid", chk_xgrid, "tail x grid");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) {
            ProcessConfig pc;
            pc.intensity = sim_intensity;
            if (sim_intensity < 1 || sim_intensity != std::floor(sim_intensity))
                throw std::invalid_argument("intensity must be a positive integer");
            pc.body = ConvexBody::parse(d, body_spec);
            pc.dist = DirectionalDist::parse(d, dist_spec);
            pc.initial_window = sim_window;
            pc.growth_factor = sim_growth;
            pc.max_doublings = sim_doublings;
            pc.master_seed = seed;
            pc.finalize();
            Rng rng = rng_stream(seed, 0, 0);
            Cell cell = build_cell(pc, rng);
            if (!sim_out.empty()) {
                std::ofstream f(sim_out);
                print_cell(cell, f);
            } else {
                print_cell(cell, std::cout);
            }
            return 0;
        }

        if (exp->parsed()) {
            ExperimentConfig cfg;
            cfg.theorem = exp_theorem;
            cfg.body = ConvexBody::parse(d, body_spec);
            cfg.dist = DirectionalDist::parse(d, dist_spec);
            cfg.grid = parse_grid(exp_grid);
            if (cfg.grid.start < 1 || cfg.grid.start != std::floor(cfg.grid.start))
                throw std::invalid_argument("intensities must be positive integers");
            cfg.replicates = exp_reps;
            cfg.master_seed = seed;
            cfg.workers = workers;
            cfg.sphere_nodes = exp_quad;
            cfg.boundary_resolution = exp_boundary;
            if (exp_r > 0) cfg.facet_override = exp_r;
            ExperimentResult res = run_experiment(cfg);
            std::ofstream f(exp_out);
            f << to_csv(res);
            f.close();
            summarize_experiment(res, exp_theorem, cfg.body, cfg.dist, cfg.facet_override,
                                 exp_boundary, std::cout);
            if (!exp_dump_dphi.empty()) {
                // per-replicate dPhi histogramming data for offline inspection
                std::ofstream hist(exp_dump_dphi);
                hist << "n,replicate,dPhi\n";
                auto pts = cfg.grid.points();
                for (size_t g = 0; g < pts.size(); ++g) {
                    ProcessConfig pc;
                    pc.intensity = pts[g];
                    pc.body = cfg.body;
                    pc.dist = cfg.dist;
                    pc.master_seed = seed;
                    pc.finalize();
                    EvalContext ctx{&cfg.body, &cfg.dist, mean_width(cfg.body, exp_quad), pc.phi_k,
                                    exp_quad};
                    std::vector<double> vals(cfg.replicates, -1.0);
                    parallel_replicates(cfg.replicates, workers, [&](int r) {
                        Rng rng = rng_stream(seed, g, static_cast<std::uint64_t>(r));
                        Cell cell = build_cell(pc, rng);
                        if (!cell.truncated) vals[r] = evaluate_sample(cell, ctx).delta_phi;
                    });
                    for (int r = 0; r < cfg.replicates; ++r)
                        if (vals[r] >= 0)
                            hist << fmt(pts[g]) << "," << r << "," << fmt(vals[r]) << "\n";
                }
            }
            return 0;
        }

        if (con->parsed()) {
            if (gamma_self_check() > 1e-12)
                throw std::runtime_error("gamma accuracy self-check failed");
            ConvexBody body = ConvexBody::parse(d, body_spec);
            DirectionalDist dist = DirectionalDist::parse(d, dist_spec);
            std::optional<int> r;
            if (con_r > 0) r = con_r;
            LimitTargets t = theorem_targets(body, dist, r, con_boundary);
            print_targets(t, con_csv, std::cout);
            return 0;
        }

        if (chk->parsed()) {
            bool pass = false;
            if (chk_suite == "efron") {
                ConvexBody body = ConvexBody::parse(d, body_spec);
                DirectionalDist dist = DirectionalDist::parse(d, dist_spec);
                EfronReport r = efron_check(body, dist, chk_n, chk_reps, seed, workers);
                std::cout << "mean_f " << fmt(r.mean_f) << "\nmean_2n_dPhi " << fmt(r.mean_rhs)
                          << "\npaired_diff " << fmt(r.mean_diff) << "\nse " << fmt(r.se_diff)
                          << "\ntruncated " << r.truncated << "\npass " << r.pass << "\n";
                pass = r.pass;
            } else if (chk_suite == "lemma41") {
                ConvexBody body = ConvexBody::parse(d, body_spec);
                DirectionalDist dist = DirectionalDist::parse(d, dist_spec);
                Lemma41Report r = lemma41_check(body, dist, chk_n, chk_reps, seed, workers);
                std::cout << "lhs " << fmt(r.lhs) << " se " << fmt(r.se_lhs) << "\nrhs " << fmt(r.rhs)
                          << " se " << fmt(r.se_rhs) << "\npass " << r.pass << "\n";
                pass = r.pass;
            } else if (chk_suite == "tail") {
                ConvexBody body = ConvexBody::parse(d, body_spec);
                DirectionalDist dist = DirectionalDist::parse(d, dist_spec);
                TailReport r = tail_estimate(body, dist, chk_n, chk_reps, chk_xgrid, seed, workers);
                pass = true;
                for (const auto& c : r.curves) {
                    std::cout << "c " << fmt(c.c) << "\n";
                    for (size_t i = 0; i < r.x_grid.size(); ++i)
                        std::cout << "  x " << fmt(r.x_grid[i]) << " p " << fmt(c.prob[i]) << " se "
                                  << fmt(c.se[i]) << "\n";
                    if (c.below_resolution) {
                        std::cout << "  tail below resolution\n";
                    } else if (c.slope_defined) {
                        std::cout << "  slope " << fmt(c.slope) << "\n";
                        pass = pass && c.slope < 0;
                    }
                }
            } else if (chk_suite == "poisson-tail") {
                PoissonTailReport r = poisson_tail_bound_check(chk_lambdas);
                std::cout << "chernoff_ok " << r.chernoff_ok << "\nwindow_decreasing "
                          << r.window_decreasing << "\n";
                for (size_t i = 0; i < r.lambdas.size(); ++i)
                    std::cout << "lambda " << fmt(r.lambdas[i]) << " window_prob "
                              << fmt(r.window_prob[i]) << "\n";
                pass = r.pass;
            } else if (chk_suite == "poisson-mixing") {
                MixingCase mode;
                if (chk_case == "a")
                    mode = MixingCase::PowerAlpha;
                else if (chk_case == "b")
                    mode = MixingCase::LogPower;
                else if (chk_case == "growing")
                    mode = MixingCase::Growing;
                else
                    throw std::invalid_argument("case must be a|b|growing");
                MixingReport r = poisson_mixing_check(mode, chk_param, chk_lambda, chk_tol);
                std::cout << "value " << fmt(r.value) << "\nabs_err " << fmt(r.abs_err)
                          << "\ntail_budget " << fmt(r.tail_budget) << "\npass " << r.pass << "\n";
                pass = r.pass;
            } else {
                throw std::invalid_argument("unknown suite '" + chk_suite + "'");
            }
            return pass ? 0 : 2;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
