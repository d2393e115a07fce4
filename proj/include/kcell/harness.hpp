// Monte Carlo experiment driver: replicate scheduling, estimators with
// standard errors, rate fitting, and the deterministic lemma checks.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "kcell/body.hpp"
#include "kcell/cell.hpp"
#include "kcell/directional.hpp"
#include "kcell/functionals.hpp"

namespace kcell {

struct GridSpec {
    double start = 0;
    double end = 0;
    double factor = 2.0;
    std::vector<double> points() const;
};

struct ExperimentConfig {
    std::string theorem = "thm31"; // thm31|thm32|thm42|thm43|thm22|thm41|tail|efron|lemma41
    ConvexBody body = ConvexBody::ball(2, 1.0);
    DirectionalDist dist = DirectionalDist::isotropic(2);
    GridSpec grid;
    int replicates = 1000;
    std::uint64_t master_seed = 1;
    int workers = 1;
    int sphere_nodes = 0;          // 0 = dimension default
    int boundary_resolution = 4096;
    std::optional<int> facet_override;

    void validate() const;
};

struct IntensityRow {
    double n = 0;
    int reps = 0;
    int truncated = 0;
    double mean_dw = 0, se_dw = 0;
    double mean_dphi = 0, se_dphi = 0;
    double mean_dphi2 = 0, se_dphi2 = 0;
    double mean_dphi3 = 0, se_dphi3 = 0;
    double mean_dphi4 = 0, se_dphi4 = 0;
    double mean_f = 0, se_f = 0;
};

struct ExperimentResult {
    std::vector<IntensityRow> rows;
};

ExperimentResult run_experiment(const ExperimentConfig& cfg);

// frozen CSV schema:
// n,reps,truncated,mean_dW,se_dW,mean_dPhi,se_dPhi,mean_dPhi2,se_dPhi2,mean_f,se_f
std::string to_csv(const ExperimentResult& res);

enum class RowField { DW, DPhi, DPhi2, F };
double row_value(const IntensityRow& row, RowField field);

struct RateFit {
    double slope = 0;
    double stderr_slope = 0;
    double intercept = 0;
};

// ordinary least squares of log(mean) against log(n); needs >= 3 rows and
// positive means (throws std::domain_error otherwise)
RateFit rate_fit(const std::vector<IntensityRow>& rows, RowField field);

// linear fit of y against log^{d-1}(n) over the last `points` rows;
// y = mean_f, or n*mean_dW when scale_by_n is set (the logarithmic-regime fits)
RateFit log_power_fit(const std::vector<IntensityRow>& rows, RowField field, int d, bool scale_by_n,
                      int points);

struct LimitEstimate {
    double last = 0;       // normalized value at the largest n
    double richardson = 0; // heuristic two-point extrapolation
};

// normalized limit n^{exponent} * mean(field) evaluated on the final rows
LimitEstimate normalized_limit(const std::vector<IntensityRow>& rows, RowField field, double exponent,
                               int d);

// ---------------------------------------------------------------------------
// check suites

struct EfronReport {
    double n = 0;
    int reps = 0;
    int truncated = 0;
    double mean_f = 0;
    double mean_rhs = 0;   // 2n * mean(dPhi)
    double mean_diff = 0;  // paired f - 2n dPhi
    double se_diff = 0;
    bool pass = false;
};
EfronReport efron_check(const ConvexBody& body, const DirectionalDist& dist, double n, int reps,
                        std::uint64_t seed, int workers);

struct Lemma41Report {
    double lhs = 0, se_lhs = 0; // E[f(f-1)]
    double rhs = 0, se_rhs = 0; // (2n)^2/2 E[dPhi^2]
    int reps = 0, truncated = 0;
    bool pass = false;
};
Lemma41Report lemma41_check(const ConvexBody& body, const DirectionalDist& dist, double n, int reps,
                            std::uint64_t seed, int workers);

struct TailCurve {
    double c = 0;
    std::vector<double> prob;
    std::vector<double> se;
    double slope = 0;       // OLS of log(prob) against x over positive entries
    bool slope_defined = false;
    bool below_resolution = false; // no exceedances anywhere
};
struct TailReport {
    double n = 0;
    int reps = 0;
    int truncated = 0;
    std::vector<double> x_grid;
    std::vector<TailCurve> curves; // c = 1.5 and c = 2
};
TailReport tail_estimate(const ConvexBody& body, const DirectionalDist& dist, double n, int reps,
                         const std::vector<double>& x_grid, std::uint64_t seed, int workers);

struct PoissonTailReport {
    std::vector<double> lambdas;
    bool chernoff_ok = false;     // exact tails below the bounds pointwise
    bool window_decreasing = false; // P(|N-lambda+1| > lambda^0.75) decreasing
    std::vector<double> window_prob;
    bool pass = false;
};
PoissonTailReport poisson_tail_bound_check(const std::vector<double>& lambdas);

enum class MixingCase { PowerAlpha, LogPower, Growing };
struct MixingReport {
    double lambda = 0;
    double value = 0;
    double target = 1.0;
    double abs_err = 0;
    double tail_budget = 0;
    bool pass = false;
};
// PowerAlpha: f = x^param; LogPower: f = x/log^param x; Growing: p_k = k^param
MixingReport poisson_mixing_check(MixingCase mode, double param, double lambda, double tol);

// deterministic replicate scheduling across threads
void parallel_replicates(int reps, int workers, const std::function<void(int)>& work);

// exact Poisson tails (stable series), shared by the deterministic checks
double poisson_upper_tail(double x, double lambda); // P(N >= x)
double poisson_lower_tail(double x, double lambda); // P(N <= x)

} // namespace kcell
