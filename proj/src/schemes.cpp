#include "gbs/schemes.hpp"

#include <chrono>
#include <cmath>
#include <cstddef>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>

#include "gbs/errors.hpp"
#include "gbs/tridiagonal.hpp"

namespace gbs {

namespace {

// Volatility selection without the finiteness guard of sigma_star(): the
// steppers screen every produced level for non-finite values, so a NaN proxy
// can only originate from data that has already been rejected.
inline double select(double w, const EffectiveBand& band) {
    return w >= 0.0 ? band.high : band.low;
}

void step_explicit_x(const std::vector<double>& in, std::vector<double>& out, int n,
                     const GridSpec& grid, const MarketParams& params, const EffectiveBand& band,
                     const PayoffSpec& payoff, double s_max) {
    const int m = grid.M;
    const double h = grid.h();
    const double dt = grid.dt();
    const double r = params.r;
    const double disc = 1.0 + r * dt;

    out[0] = in[0] / disc;
    for (int i = 1; i < m; ++i) {
        const double d2 = (in[i + 1] - 2.0 * in[i] + in[i - 1]) / (h * h);
        const double d1 = (in[i + 1] - in[i - 1]) / (2.0 * h);
        const double s2 = [&] {
            const double sel = select(d2 - d1, band);
            return sel * sel;
        }();
        const double a = (dt / (2.0 * h)) * (s2 / h + s2 / 2.0 - r);
        const double c = (dt / (2.0 * h)) * (r + s2 / h - s2 / 2.0);
        const double b = 1.0 - s2 * dt / (h * h);
        out[i] = (a * in[i - 1] + b * in[i] + c * in[i + 1]) / disc;
    }
    out[m] = payoff.right_boundary((n + 1) * dt, r, s_max);
}

void step_explicit_s(const std::vector<double>& in, std::vector<double>& out, int n,
                     const GridSpec& grid, const MarketParams& params, const EffectiveBand& band,
                     const PayoffSpec& payoff) {
    const int m = grid.M;
    const double h = grid.h();
    const double dt = grid.dt();
    const double r = params.r;
    const double disc = 1.0 + r * dt;

    out[0] = in[0] / disc;
    for (int i = 1; i < m; ++i) {
        const double s_i = grid.node(i);
        const double d2 = (in[i + 1] - 2.0 * in[i] + in[i - 1]) / (h * h);
        const double d1 = (in[i + 1] - in[i - 1]) / (2.0 * h);
        const double sel = select(d2, band);
        out[i] = (in[i] + dt * (r * s_i * d1 + 0.5 * s_i * s_i * sel * sel * d2)) / disc;
    }
    out[m] = payoff.right_boundary((n + 1) * dt, r, grid.x_max);
}

struct ImplicitWork {
    std::vector<double> sub, diag, sup, rhs, iterate;

    explicit ImplicitWork(std::size_t size)
        : sub(size > 0 ? size - 1 : 0),
          diag(size),
          sup(size > 0 ? size - 1 : 0),
          rhs(size),
          iterate(size) {}
};

// One implicit step; the result ends up in `out` and the sweep count is
// returned. `in` and `out` may not alias.
int step_implicit_x(const std::vector<double>& in, std::vector<double>& out, ImplicitWork& work,
                    int n, const GridSpec& grid, const MarketParams& params,
                    const EffectiveBand& band, const PayoffSpec& payoff, double s_max,
                    const SchemeConfig& cfg, PicardTrace* trace) {
    const int m = grid.M;
    const double h = grid.h();
    const double dt = grid.dt();
    const double r = params.r;
    const double boundary = payoff.right_boundary((n + 1) * dt, r, s_max);

    work.iterate = in;  // warm start from the previous level
    double increment = 0.0;
    for (int sweep = 1; sweep <= cfg.picard_max_iters; ++sweep) {
        // sub[i-1] multiplies V_{i-1} in row i; sup[i] multiplies V_{i+1} in
        // row i (the solver's band layout).
        work.diag[0] = 1.0 / dt + r;
        work.sup[0] = 0.0;
        work.rhs[0] = in[0] / dt;
        for (int i = 1; i < m; ++i) {
            const double d2 =
                (work.iterate[i + 1] - 2.0 * work.iterate[i] + work.iterate[i - 1]) / (h * h);
            const double d1 = (work.iterate[i + 1] - work.iterate[i - 1]) / (2.0 * h);
            const double sel = select(d2 - d1, band);
            const double s2 = sel * sel;
            work.sub[i - 1] = -(s2 / (2.0 * h * h) - r / (2.0 * h) + s2 / (4.0 * h));
            work.diag[i] = 1.0 / dt + r + s2 / (h * h);
            work.sup[i] = -(s2 / (2.0 * h * h) + r / (2.0 * h) - s2 / (4.0 * h));
            work.rhs[i] = in[i] / dt;
        }
        work.sub[m - 1] = 0.0;
        work.diag[m] = 1.0;
        work.rhs[m] = boundary;

        tridiagonal_solve_in_place(work.sub, work.diag, work.sup, work.rhs);

        increment = 0.0;
        for (int i = 0; i <= m; ++i) {
            increment = std::max(increment, std::abs(work.rhs[i] - work.iterate[i]));
        }
        work.iterate.swap(work.rhs);
        if (trace != nullptr) {
            trace->iterates.push_back(work.iterate);
        }
        if (increment < cfg.picard_tol) {
            out = work.iterate;
            return sweep;
        }
    }
    std::ostringstream msg;
    msg << "Picard iteration did not reach tol=" << cfg.picard_tol << " within "
        << cfg.picard_max_iters << " sweeps at time step " << n + 1;
    throw PicardError(increment, msg.str());
}

// Aborts on the first non-finite entry of a freshly computed level.
void require_finite(const std::vector<double>& level, int n) {
    for (std::size_t i = 0; i < level.size(); ++i) {
        if (!std::isfinite(level[i])) {
            std::ostringstream msg;
            msg << "non-finite value at time step " << n << ", node " << i
                << " (the scheme is unstable on this mesh)";
            throw DivergenceError(n, static_cast<int>(i), msg.str());
        }
    }
}

void report_violation(MeshEnforcement mode, const std::string& what) {
    if (mode == MeshEnforcement::Error) {
        throw MeshError(what);
    }
    if (mode == MeshEnforcement::Warn) {
        std::cerr << "warning: " << what << '\n';
    }
}

// Checks the conditions relevant to the chosen method: the explicit log-price
// scheme needs both the time-step and the spatial bound, the implicit scheme
// only the spatial bound (its time step is unconstrained), and the
// untransformed explicit scheme its own pair of bounds.
void enforce_mesh(const GridSpec& grid, const MarketParams& params, Method method,
                  MeshEnforcement mode) {
    if (mode == MeshEnforcement::Ignore) {
        return;
    }
    std::ostringstream msg;
    if (method == Method::ExplicitX || method == Method::ImplicitX) {
        const MeshReport rep = check_explicit_mesh(grid, params);
        if (method == Method::ExplicitX && !rep.explicit_lower_ok) {
            msg << "explicit stability violated: sigma_high*sqrt(dt)=" << std::sqrt(rep.dt) *
                       EffectiveBand::from(params).high
                << " exceeds h=" << rep.h << "; need at least " << rep.min_timesteps
                << " time steps (got " << grid.N << ")";
            report_violation(mode, msg.str());
            return;
        }
        if (!rep.upper_ok) {
            msg << "monotonicity bound violated: h=" << rep.h << " exceeds " << rep.upper_bound;
            report_violation(mode, msg.str());
        }
        return;
    }
    const MeshReport rep = check_s_domain_mesh(grid.x_min, grid.x_max, grid.M, params);
    if (grid.N < rep.min_timesteps) {
        msg << "explicit stability violated on the price grid: need at least "
            << rep.min_timesteps << " time steps (got " << grid.N << ")";
        report_violation(mode, msg.str());
        return;
    }
    if (!rep.upper_ok) {
        msg << "price-grid monotonicity bound violated: h=" << rep.h << " exceeds "
            << rep.upper_bound;
        report_violation(mode, msg.str());
    }
}

}  // namespace

std::vector<double> explicit_step_x(const std::vector<double>& Vn, int n, const GridSpec& grid,
                                    const MarketParams& params, const PayoffSpec& payoff) {
    params.validate();
    if (Vn.size() != static_cast<std::size_t>(grid.M) + 1) {
        throw InvalidArgument("level size does not match the grid");
    }
    std::vector<double> out(Vn.size());
    step_explicit_x(Vn, out, n, grid, params, EffectiveBand::from(params), payoff,
                    std::exp(grid.x_max));
    return out;
}

std::pair<std::vector<double>, int> implicit_step_x(const std::vector<double>& Vn, int n,
                                                    const GridSpec& grid,
                                                    const MarketParams& params,
                                                    const PayoffSpec& payoff,
                                                    const SchemeConfig& cfg, PicardTrace* trace) {
    params.validate();
    if (Vn.size() != static_cast<std::size_t>(grid.M) + 1) {
        throw InvalidArgument("level size does not match the grid");
    }
    if (cfg.picard_max_iters < 1) {
        throw InvalidArgument("picard_max_iters must be at least 1");
    }
    std::vector<double> out(Vn.size());
    ImplicitWork work(Vn.size());
    const int sweeps = step_implicit_x(Vn, out, work, n, grid, params, EffectiveBand::from(params),
                                       payoff, std::exp(grid.x_max), cfg, trace);
    return {std::move(out), sweeps};
}

std::vector<double> explicit_step_s(const std::vector<double>& Un, int n, const GridSpec& grid,
                                    const MarketParams& params, const PayoffSpec& payoff) {
    params.validate();
    if (Un.size() != static_cast<std::size_t>(grid.M) + 1) {
        throw InvalidArgument("level size does not match the grid");
    }
    std::vector<double> out(Un.size());
    step_explicit_s(Un, out, n, grid, params, EffectiveBand::from(params), payoff);
    return out;
}

Solution solve(const PayoffSpec& payoff, const MarketParams& params, const GridSpec& grid,
               const SchemeConfig& cfg) {
    params.validate();
    build_grid(grid.x_min, grid.x_max, grid.M, grid.N, grid.T);  // re-validate bounds
    enforce_mesh(grid, params, cfg.method, cfg.enforce_mesh_conditions);

    const EffectiveBand band = EffectiveBand::from(params);
    const Domain domain = cfg.method == Method::ExplicitS ? Domain::S : Domain::X;
    const double s_max = domain == Domain::X ? std::exp(grid.x_max) : grid.x_max;

    Solution sol;
    sol.grid = grid;
    sol.levels.reserve(grid.N + 1);
    sol.levels.push_back(payoff_on_grid(payoff, grid.nodes(), domain));
    require_finite(sol.levels.front(), 0);
    if (cfg.method == Method::ImplicitX) {
        sol.picard_counts.reserve(grid.N);
    }

    ImplicitWork work(cfg.method == Method::ImplicitX ? sol.levels.front().size() : 0);
    for (int n = 0; n < grid.N; ++n) {
        std::vector<double> next(sol.levels.back().size());
        switch (cfg.method) {
            case Method::ExplicitX:
                step_explicit_x(sol.levels.back(), next, n, grid, params, band, payoff, s_max);
                break;
            case Method::ImplicitX:
                sol.picard_counts.push_back(step_implicit_x(sol.levels.back(), next, work, n, grid,
                                                            params, band, payoff, s_max, cfg,
                                                            nullptr));
                break;
            case Method::ExplicitS:
                step_explicit_s(sol.levels.back(), next, n, grid, params, band, payoff);
                break;
        }
        require_finite(next, n + 1);
        sol.levels.push_back(std::move(next));
    }
    return sol;
}

FinalLevel solve_final(const PayoffSpec& payoff, const MarketParams& params, const GridSpec& grid,
                       const SchemeConfig& cfg) {
    params.validate();
    build_grid(grid.x_min, grid.x_max, grid.M, grid.N, grid.T);
    enforce_mesh(grid, params, cfg.method, cfg.enforce_mesh_conditions);

    const EffectiveBand band = EffectiveBand::from(params);
    const Domain domain = cfg.method == Method::ExplicitS ? Domain::S : Domain::X;
    const double s_max = domain == Domain::X ? std::exp(grid.x_max) : grid.x_max;

    const auto start = std::chrono::steady_clock::now();
    FinalLevel fin;
    fin.grid = grid;
    fin.values = payoff_on_grid(payoff, grid.nodes(), domain);
    require_finite(fin.values, 0);
    if (cfg.method == Method::ImplicitX) {
        fin.picard_counts.reserve(grid.N);
    }

    std::vector<double> next(fin.values.size());
    ImplicitWork work(cfg.method == Method::ImplicitX ? fin.values.size() : 0);
    for (int n = 0; n < grid.N; ++n) {
        switch (cfg.method) {
            case Method::ExplicitX:
                step_explicit_x(fin.values, next, n, grid, params, band, payoff, s_max);
                break;
            case Method::ImplicitX:
                fin.picard_counts.push_back(step_implicit_x(fin.values, next, work, n, grid,
                                                            params, band, payoff, s_max, cfg,
                                                            nullptr));
                break;
            case Method::ExplicitS:
                step_explicit_s(fin.values, next, n, grid, params, band, payoff);
                break;
        }
        require_finite(next, n + 1);
        fin.values.swap(next);
    }
    fin.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                           .count();
    return fin;
}

}  // namespace gbs
