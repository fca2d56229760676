#include "gbs/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>

#include "gbs/errors.hpp"

namespace gbs {

namespace {

// Shared-domain check for error norms: the terminal levels are comparable
// only when the spatial domain and the horizon coincide exactly.
bool same_span(const GridSpec& a, const GridSpec& b) {
    return a.x_min == b.x_min && a.x_max == b.x_max && a.T == b.T;
}

std::string grid_label(const GridSpec& g) {
    std::ostringstream out;
    out << "(N=" << g.N << ", M=" << g.M << ")";
    return out.str();
}

}  // namespace

double interpolate_quadratic(const std::vector<double>& values, const GridSpec& grid, double x0) {
    if (values.size() != static_cast<std::size_t>(grid.M) + 1) {
        throw InvalidArgument("level size does not match the grid");
    }
    if (!(x0 >= grid.x_min && x0 <= grid.x_max)) {
        std::ostringstream msg;
        msg << "evaluation point " << x0 << " lies outside [" << grid.x_min << ", " << grid.x_max
            << "]";
        throw InvalidArgument(msg.str());
    }
    // Center the stencil on the node nearest x0, shifted inward at the edges.
    long center = std::lround((x0 - grid.x_min) / grid.h());
    center = std::clamp(center, 1L, static_cast<long>(grid.M) - 1L);
    const int j = static_cast<int>(center);

    const double xa = grid.node(j - 1), xb = grid.node(j), xc = grid.node(j + 1);
    const double la = (x0 - xb) * (x0 - xc) / ((xa - xb) * (xa - xc));
    const double lb = (x0 - xa) * (x0 - xc) / ((xb - xa) * (xb - xc));
    const double lc = (x0 - xa) * (x0 - xb) / ((xc - xa) * (xc - xb));
    return la * values[j - 1] + lb * values[j] + lc * values[j + 1];
}

double linf_error(const GridSpec& grid_a, const std::vector<double>& values_a,
                  const GridSpec& grid_b, const std::vector<double>& values_b) {
    if (values_a.size() != static_cast<std::size_t>(grid_a.M) + 1 ||
        values_b.size() != static_cast<std::size_t>(grid_b.M) + 1) {
        throw InvalidArgument("level size does not match the grid");
    }
    if (!same_span(grid_a, grid_b)) {
        throw GridMismatchError("grids span different domains or horizons");
    }
    const bool a_coarse = grid_a.M <= grid_b.M;
    const GridSpec& coarse = a_coarse ? grid_a : grid_b;
    const GridSpec& fine = a_coarse ? grid_b : grid_a;
    const std::vector<double>& vc = a_coarse ? values_a : values_b;
    const std::vector<double>& vf = a_coarse ? values_b : values_a;
    if (fine.M % coarse.M != 0) {
        std::ostringstream msg;
        msg << "grids do not nest: " << fine.M << " spatial intervals are not a multiple of "
            << coarse.M;
        throw GridMismatchError(msg.str());
    }
    const int stride = fine.M / coarse.M;
    double err = 0.0;
    for (int i = 0; i <= coarse.M; ++i) {
        err = std::max(err, std::abs(vc[i] - vf[static_cast<std::size_t>(i) * stride]));
    }
    return err;
}

double linf_error(const Solution& candidate, const Solution& reference) {
    if (candidate.levels.empty() || reference.levels.empty()) {
        throw InvalidArgument("solution has no levels");
    }
    return linf_error(candidate.grid, candidate.levels.back(), reference.grid,
                      reference.levels.back());
}

double observed_rate(double e_coarse, double e_fine, double refinement_ratio) {
    if (!(e_coarse > 0.0) || !(e_fine > 0.0)) {
        throw InvalidArgument("observed_rate requires positive errors");
    }
    if (!(refinement_ratio > 1.0)) {
        throw InvalidArgument("refinement ratio must exceed 1");
    }
    return std::log(e_coarse / e_fine) / std::log(refinement_ratio);
}

ConvergenceReport run_convergence_study(const PayoffSpec& payoff, const MarketParams& params,
                                        double x_min, double x_max, double x0,
                                        const std::vector<std::pair<int, int>>& ladder,
                                        const SchemeConfig& cfg,
                                        std::pair<int, int> reference_cfg,
                                        const FinalLevel* precomputed_reference) {
    params.validate();
    if (ladder.empty()) {
        throw InvalidArgument("ladder must contain at least one level");
    }
    for (std::size_t k = 1; k < ladder.size(); ++k) {
        if (ladder[k].first <= ladder[k - 1].first || ladder[k].second <= ladder[k - 1].second) {
            throw InvalidArgument("ladder levels must strictly refine in both N and M");
        }
    }
    const auto [n_ref, m_ref] = reference_cfg;
    if (n_ref < ladder.back().first || m_ref < ladder.back().second) {
        throw InvalidArgument("reference grid must be at least as fine as the finest level");
    }
    for (const auto& [n, m] : ladder) {
        if (m_ref % m != 0) {
            std::ostringstream msg;
            msg << "reference spatial resolution " << m_ref << " does not nest ladder level M="
                << m;
            throw GridMismatchError(msg.str());
        }
    }

    const GridSpec ref_grid = build_grid(x_min, x_max, m_ref, n_ref, params.T);
    SchemeConfig ref_cfg = cfg;
    ref_cfg.method = Method::ImplicitX;

    FinalLevel owned_reference;
    const FinalLevel* ref = precomputed_reference;
    if (ref != nullptr) {
        if (!(same_span(ref->grid, ref_grid) && ref->grid.M == m_ref && ref->grid.N == n_ref)) {
            throw GridMismatchError("precomputed reference does not match the requested grid");
        }
    } else {
        owned_reference = solve_final(payoff, params, ref_grid, ref_cfg);
        ref = &owned_reference;
    }

    ConvergenceReport report;
    report.reference.value = interpolate_quadratic(ref->values, ref->grid, x0);
    report.reference.timesteps = n_ref;
    report.reference.nodes = m_ref + 1;

    double prev_error = 0.0;
    int prev_m = 0;
    for (std::size_t k = 0; k < ladder.size(); ++k) {
        const auto [n, m] = ladder[k];
        const GridSpec grid = build_grid(x_min, x_max, m, n, params.T);
        FinalLevel fin;
        try {
            fin = solve_final(payoff, params, grid, cfg);
        } catch (const Error& e) {
            std::ostringstream msg;
            msg << "ladder level " << k + 1 << " " << grid_label(grid) << ": " << e.what();
            throw Error(msg.str());
        }

        StudyLevel level;
        level.timesteps = n;
        level.nodes = m + 1;
        level.cpu_seconds = fin.wall_seconds;
        level.linf_error = linf_error(grid, fin.values, ref->grid, ref->values);
        level.value_at_target = interpolate_quadratic(fin.values, grid, x0);
        level.value_diff = std::abs(level.value_at_target - report.reference.value);
        if (!fin.picard_counts.empty()) {
            double total = 0.0;
            for (int c : fin.picard_counts) total += c;
            level.mean_picard_iters = total / static_cast<double>(fin.picard_counts.size());
        }
        if (k > 0 && prev_error > 0.0 && level.linf_error > 0.0) {
            level.rate = observed_rate(prev_error, level.linf_error,
                                       static_cast<double>(m) / prev_m);
        }
        prev_error = level.linf_error;
        prev_m = m;
        report.levels.push_back(level);
    }
    return report;
}

DomainComparison compare_domains(const PayoffSpec& payoff, const MarketParams& params,
                                 double s_min, double s_max, double s0,
                                 const std::vector<int>& m_list,
                                 std::pair<int, int> reference_cfg) {
    params.validate();
    if (!(s_min > 0.0 && s_min < s_max)) {
        throw InvalidArgument("price bounds must satisfy 0 < s_min < s_max");
    }
    if (!(s0 > s_min && s0 < s_max)) {
        throw InvalidArgument("target price must lie inside (s_min, s_max)");
    }
    if (m_list.empty()) {
        throw InvalidArgument("m_list must contain at least one resolution");
    }

    const double x_min = std::log(s_min);
    const double x_max = std::log(s_max);
    const double x0 = std::log(s0);
    const auto [n_ref, m_ref] = reference_cfg;

    const GridSpec ref_grid = build_grid(x_min, x_max, m_ref, n_ref, params.T);
    const SchemeConfig implicit_cfg{Method::ImplicitX};
    const FinalLevel ref = solve_final(payoff, params, ref_grid, implicit_cfg);

    DomainComparison cmp;
    cmp.s0 = s0;
    cmp.reference.value = interpolate_quadratic(ref.values, ref.grid, x0);
    cmp.reference.timesteps = n_ref;
    cmp.reference.nodes = m_ref + 1;
    const double ref_scale = std::abs(cmp.reference.value);

    for (int m : m_list) {
        if (m < 2) {
            throw InvalidArgument("spatial resolution must be at least 2 intervals");
        }
        DomainRow row;
        row.m = m;

        const MeshReport rep_s = check_s_domain_mesh(s_min, s_max, m, params);
        row.h_s = rep_s.h;
        row.n_s = rep_s.min_timesteps;
        const GridSpec grid_s = build_grid(s_min, s_max, m, row.n_s, params.T);
        const FinalLevel fin_s =
            solve_final(payoff, params, grid_s, SchemeConfig{Method::ExplicitS});
        row.value_s = interpolate_quadratic(fin_s.values, grid_s, s0);
        row.rel_error_s = std::abs(row.value_s - cmp.reference.value) / ref_scale;
        row.cpu_s = fin_s.wall_seconds;

        GridSpec grid_x = build_grid(x_min, x_max, m, 1, params.T);
        const MeshReport rep_x = check_explicit_mesh(grid_x, params);
        row.h_x = rep_x.h;
        row.n_x = rep_x.min_timesteps;
        grid_x.N = row.n_x;
        const FinalLevel fin_x =
            solve_final(payoff, params, grid_x, SchemeConfig{Method::ExplicitX});
        row.value_x = interpolate_quadratic(fin_x.values, grid_x, x0);
        row.rel_error_x = std::abs(row.value_x - cmp.reference.value) / ref_scale;
        row.cpu_x = fin_x.wall_seconds;

        cmp.rows.push_back(row);
    }
    return cmp;
}

IterationProfile iteration_profile(const Solution& solution) {
    if (solution.picard_counts.empty()) {
        throw NotApplicableError("iteration profile requires an implicit-method solution");
    }
    IterationProfile profile;
    profile.counts = solution.picard_counts;
    double total = 0.0;
    for (int c : profile.counts) {
        total += c;
        profile.max = std::max(profile.max, c);
    }
    profile.mean = total / static_cast<double>(profile.counts.size());
    return profile;
}

}  // namespace gbs
