#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "gbs/grid.hpp"
#include "gbs/market.hpp"
#include "gbs/schemes.hpp"

namespace gbs {

// One ladder level of a refinement study. `rate` is empty on the first level;
// `mean_picard_iters` is populated only for implicit solves.
struct StudyLevel {
    int timesteps = 0;
    int nodes = 0;
    double linf_error = 0.0;
    std::optional<double> rate;
    double cpu_seconds = 0.0;
    double value_at_target = 0.0;
    double value_diff = 0.0;
    std::optional<double> mean_picard_iters;
};

struct ReferenceInfo {
    double value = 0.0;
    int timesteps = 0;
    int nodes = 0;
};

struct ConvergenceReport {
    std::vector<StudyLevel> levels;
    ReferenceInfo reference;
};

// Evaluates the degree-2 Lagrange polynomial through the three consecutive
// nodes whose center is nearest x0 (shifted inward at the domain edges).
// x0 must lie inside [x_min, x_max].
double interpolate_quadratic(const std::vector<double>& values, const GridSpec& grid, double x0);

// Max absolute difference between two terminal levels over their shared
// nodes. The grids must span the same domain and horizon and one spatial
// resolution must divide the other; symmetric in its arguments.
double linf_error(const GridSpec& grid_a, const std::vector<double>& values_a,
                  const GridSpec& grid_b, const std::vector<double>& values_b);
double linf_error(const Solution& candidate, const Solution& reference);

// ln(e_coarse/e_fine) / ln(refinement_ratio); both errors must be positive.
double observed_rate(double e_coarse, double e_fine, double refinement_ratio);

// Solves the implicit reference once, then every (N, M) ladder level with the
// configured scheme, filling errors (restricted to shared nodes), observed
// rates, wall times and interpolated values at x0. The optional precomputed
// reference must match (reference_cfg, domain) and skips the expensive solve.
ConvergenceReport run_convergence_study(const PayoffSpec& payoff, const MarketParams& params,
                                        double x_min, double x_max, double x0,
                                        const std::vector<std::pair<int, int>>& ladder,
                                        const SchemeConfig& cfg,
                                        std::pair<int, int> reference_cfg,
                                        const FinalLevel* precomputed_reference = nullptr);

// One resolution of the log-vs-no-log efficiency comparison: both explicit
// solvers at their minimum admissible number of time steps.
struct DomainRow {
    int m = 0;  // spatial intervals (shared by both domains)
    // untransformed price grid on [s_min, s_max]
    double h_s = 0.0;
    int n_s = 0;
    double value_s = 0.0;
    double rel_error_s = 0.0;
    double cpu_s = 0.0;
    // log-price grid on [ln s_min, ln s_max]
    double h_x = 0.0;
    int n_x = 0;
    double value_x = 0.0;
    double rel_error_x = 0.0;
    double cpu_x = 0.0;
};

struct DomainComparison {
    double s0 = 0.0;
    ReferenceInfo reference;  // implicit log-price reference shared by both columns
    std::vector<DomainRow> rows;
};

// Runs the explicit scheme on the price grid [s_min, s_max] and on the
// log-price grid [ln s_min, ln s_max] for each M, each at the minimum number
// of time steps its stability condition admits, and reports the interpolated
// value at s0 with its relative error against an implicit reference.
DomainComparison compare_domains(const PayoffSpec& payoff, const MarketParams& params,
                                 double s_min, double s_max, double s0,
                                 const std::vector<int>& m_list,
                                 std::pair<int, int> reference_cfg = {16384, 20480});

// Per-step Picard counts of an implicit solve with summary statistics.
struct IterationProfile {
    std::vector<int> counts;
    double mean = 0.0;
    int max = 0;
};

// Throws NotApplicableError for solutions produced by an explicit method.
IterationProfile iteration_profile(const Solution& solution);

}  // namespace gbs
