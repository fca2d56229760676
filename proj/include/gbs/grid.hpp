#pragma once

#include <vector>

#include "gbs/market.hpp"

namespace gbs {

// Uniform space-time lattice: M space intervals (M+1 nodes) on
// [x_min, x_max], N time steps on [0, T] in reversed time.
struct GridSpec {
    double x_min = 0.0;
    double x_max = 0.0;
    int M = 0;
    int N = 0;
    double T = 0.0;

    double h() const { return (x_max - x_min) / M; }
    double dt() const { return T / N; }
    double node(int i) const { return x_min + i * h(); }
    std::vector<double> nodes() const;

    bool operator==(const GridSpec&) const = default;
};

// Validates and builds a GridSpec. Throws InvalidArgument for a degenerate
// domain, M < 2, N < 1 or T <= 0.
GridSpec build_grid(double x_min, double x_max, int M, int N, double T);

// Three-point central differences on a value vector.
double first_diff(const std::vector<double>& V, int i, double h);
double second_diff(const std::vector<double>& V, int i, double h);

// Outcome of a mesh-condition check. The explicit scheme is monotone (hence
// stable and convergent to the viscosity solution) when
//   band.high * sqrt(dt) <= h <= 2 band.low^2 / max(2r - band.low^2,
//                                                   band.high^2 - 2r),
// the upper bound being vacuous when that max is <= 0. min_timesteps is the
// smallest N satisfying the left inequality at this h. Comparisons carry a
// 1e-12 relative slack so exact-equality meshes (the tables sit exactly on
// the bound) are not rejected by rounding.
struct MeshReport {
    double h = 0.0;
    double dt = 0.0;
    bool explicit_lower_ok = false;
    bool upper_ok = false;
    long min_timesteps = 0;
    double upper_bound = 0.0;  // +inf when vacuous
};

MeshReport check_explicit_mesh(const GridSpec& grid, const MarketParams& params);

// Mesh conditions for the untransformed S-domain explicit scheme on
// [s_min, s_max] with M intervals:
//   s_max * band.high * sqrt(dt) <= h_s <= s_min * band.low^2 / r,
// minimum timesteps ceil(T * s_max^2 * band.high^2 * M^2 / (s_max - s_min)^2).
MeshReport check_s_domain_mesh(double s_min, double s_max, int M, const MarketParams& params);

}  // namespace gbs
