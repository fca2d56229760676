#include "gbs/grid.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "gbs/errors.hpp"

namespace gbs {

namespace {

constexpr double kSlack = 1e-12;  // relative slack for boundary-tight meshes

// Ceiling with protection against values sitting a rounding error above an
// integer: ties (exact equality in real arithmetic) keep the equality-
// satisfying count.
long guarded_ceil(double q) {
    return static_cast<long>(std::ceil(q - 1e-9));
}

}  // namespace

std::vector<double> GridSpec::nodes() const {
    std::vector<double> xs(static_cast<std::size_t>(M) + 1);
    for (int i = 0; i <= M; ++i) xs[static_cast<std::size_t>(i)] = node(i);
    return xs;
}

GridSpec build_grid(double x_min, double x_max, int M, int N, double T) {
    if (!(x_min < x_max))
        throw InvalidArgument("build_grid: need x_min < x_max, got [" + std::to_string(x_min) +
                              ", " + std::to_string(x_max) + "]");
    if (M < 2) throw InvalidArgument("build_grid: need at least 2 space intervals");
    if (N < 1) throw InvalidArgument("build_grid: need at least 1 time step");
    if (!(T > 0.0)) throw InvalidArgument("build_grid: maturity must be positive");
    return {x_min, x_max, M, N, T};
}

double first_diff(const std::vector<double>& V, int i, double h) {
    if (i <= 0 || static_cast<std::size_t>(i) + 1 >= V.size())
        throw InvalidArgument("first_diff: index " + std::to_string(i) + " is not interior");
    return (V[static_cast<std::size_t>(i) + 1] - V[static_cast<std::size_t>(i) - 1]) / (2.0 * h);
}

double second_diff(const std::vector<double>& V, int i, double h) {
    if (i <= 0 || static_cast<std::size_t>(i) + 1 >= V.size())
        throw InvalidArgument("second_diff: index " + std::to_string(i) + " is not interior");
    const std::size_t u = static_cast<std::size_t>(i);
    return (V[u + 1] - 2.0 * V[u] + V[u - 1]) / (h * h);
}

MeshReport check_explicit_mesh(const GridSpec& grid, const MarketParams& params) {
    const EffectiveBand band = EffectiveBand::from(params);
    MeshReport rep;
    rep.h = grid.h();
    rep.dt = grid.dt();

    rep.explicit_lower_ok = band.high * std::sqrt(rep.dt) <= rep.h * (1.0 + kSlack);

    const double denom = std::max(2.0 * params.r - band.low * band.low,
                                  band.high * band.high - 2.0 * params.r);
    rep.upper_bound = denom > 0.0 ? 2.0 * band.low * band.low / denom
                                  : std::numeric_limits<double>::infinity();
    rep.upper_ok = rep.h <= rep.upper_bound * (1.0 + kSlack);

    rep.min_timesteps = guarded_ceil(grid.T * band.high * band.high / (rep.h * rep.h));
    return rep;
}

MeshReport check_s_domain_mesh(double s_min, double s_max, int M, const MarketParams& params) {
    if (!(s_min > 0.0) || !(s_min < s_max))
        throw InvalidArgument("check_s_domain_mesh: need 0 < s_min < s_max");
    if (M < 2) throw InvalidArgument("check_s_domain_mesh: need at least 2 space intervals");
    const EffectiveBand band = EffectiveBand::from(params);

    MeshReport rep;
    rep.h = (s_max - s_min) / M;
    const double width = s_max - s_min;
    rep.min_timesteps = guarded_ceil(params.T * s_max * s_max * band.high * band.high *
                                     static_cast<double>(M) * static_cast<double>(M) /
                                     (width * width));
    rep.dt = params.T / static_cast<double>(rep.min_timesteps);

    rep.explicit_lower_ok = s_max * band.high * std::sqrt(rep.dt) <= rep.h * (1.0 + kSlack);
    rep.upper_bound = params.r > 0.0 ? s_min * band.low * band.low / params.r
                                     : std::numeric_limits<double>::infinity();
    rep.upper_ok = rep.h <= rep.upper_bound * (1.0 + kSlack);
    return rep;
}

}  // namespace gbs
