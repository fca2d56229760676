#pragma once

#include <utility>
#include <vector>

#include "gbs/grid.hpp"
#include "gbs/market.hpp"

namespace gbs {

enum class Method { ExplicitX, ImplicitX, ExplicitS };

enum class MeshEnforcement { Error, Warn, Ignore };

struct SchemeConfig {
    Method method = Method::ImplicitX;
    double picard_tol = 1e-6;      // sup-norm increment threshold
    int picard_max_iters = 100;    // sweeps before declaring failure
    MeshEnforcement enforce_mesh_conditions = MeshEnforcement::Error;

    bool operator==(const SchemeConfig&) const = default;
};

// Full space-time solution in reversed time: levels[n][i] = V_i^n with the
// payoff at level 0. picard_counts has one entry per time step for the
// implicit method and is empty for explicit methods.
struct Solution {
    GridSpec grid;
    std::vector<std::vector<double>> levels;
    std::vector<int> picard_counts;
};

// Terminal level only (plus telemetry); the footprint-friendly variant used
// for reference solves and convergence ladders where intermediate levels are
// not needed.
struct FinalLevel {
    GridSpec grid;
    std::vector<double> values;
    std::vector<int> picard_counts;
    double wall_seconds = 0.0;
};

// Per-sweep Picard iterates of a single implicit step, recorded when a trace
// sink is supplied (used by the monotonicity property tests).
struct PicardTrace {
    std::vector<std::vector<double>> iterates;  // outputs of sweeps 1..k
};

// One explicit step of the log-price scheme: for interior nodes the
// adversarial volatility is selected from the sign of w = d2 V - d1 V, then
//   V_i^{n+1} = [ (dt/2h)(S^2/h + S^2/2 - r) V_{i-1}
//               + (1 - S^2 dt/h^2) V_i
//               + (dt/2h)(r + S^2/h - S^2/2) V_{i+1} ] / (1 + r dt),
// with S^2 = sigma_star(w)^2. The left boundary discounts, the right is the
// Dirichlet payoff rule at reversed time (n+1) dt.
std::vector<double> explicit_step_x(const std::vector<double>& Vn, int n, const GridSpec& grid,
                                    const MarketParams& params, const PayoffSpec& payoff);

// One implicit step solved by Picard iteration with warm start V^{n+1,0}=V^n:
// each sweep freezes the volatility selection on the current iterate,
// assembles the tridiagonal system
//   row i:   diag 1/dt + r + S^2/h^2,
//            sub  -(S^2/(2h^2) - r/(2h) + S^2/(4h)),
//            super -(S^2/(2h^2) + r/(2h) - S^2/(4h)),  rhs V_i^n/dt,
//   row 0:   (1/dt + r) V_0 = V_0^n/dt,
//   row M:   V_M = boundary value,
// and solves it directly. Stops when the sup-norm increment drops below
// cfg.picard_tol; throws PicardError at the iteration cap. Returns the new
// level and the sweep count.
std::pair<std::vector<double>, int> implicit_step_x(const std::vector<double>& Vn, int n,
                                                    const GridSpec& grid,
                                                    const MarketParams& params,
                                                    const PayoffSpec& payoff,
                                                    const SchemeConfig& cfg,
                                                    PicardTrace* trace = nullptr);

// One explicit step of the untransformed scheme on S-nodes (grid.x_min/x_max
// are S values); the volatility selection uses the plain second difference,
//   U_i^{n+1} = [ U_i + dt ( r S_i d1 U + (1/2) S_i^2 S^2 d2 U ) ] / (1 + r dt).
std::vector<double> explicit_step_s(const std::vector<double>& Un, int n, const GridSpec& grid,
                                    const MarketParams& params, const PayoffSpec& payoff);

// Marches the configured scheme over all N steps and keeps every level.
// With MeshEnforcement::Error the relevant mesh conditions must hold
// (MeshError otherwise); Warn prints the violation to stderr and proceeds;
// Ignore proceeds silently. Non-finite values abort with DivergenceError
// naming the first offending (level, node).
Solution solve(const PayoffSpec& payoff, const MarketParams& params, const GridSpec& grid,
               const SchemeConfig& cfg);

// Same march keeping only the terminal level; used for reference solves
// where full storage would be prohibitive.
FinalLevel solve_final(const PayoffSpec& payoff, const MarketParams& params, const GridSpec& grid,
                       const SchemeConfig& cfg);

}  // namespace gbs
