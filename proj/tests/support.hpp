#pragma once

// Shared helpers for the test suites: the experiment parameter set used
// throughout, a deterministic enumeration of admissible solver setups for the
// property tests, and small vector utilities.

#include <cmath>
#include <cstdint>
#include <vector>

#include "gbs/grid.hpp"
#include "gbs/market.hpp"
#include "gbs/schemes.hpp"

namespace gbs::test {

// The study parameters: r = 0.1, unit reference volatility, band
// [0.15, 0.25], quarter-year maturity.
inline MarketParams study_market() { return {0.1, 1.0, 0.15, 0.25, 0.25}; }

inline double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

// A tiny deterministic mixer (splitmix64) used to spread property-test
// parameters over their admissible ranges. Not an RNG dependency: same
// sequence every run, seeded by the case index.
inline double mix01(std::uint64_t i, std::uint64_t salt) {
    std::uint64_t z = (i + 1) * 0x9e3779b97f4a7c15ULL + salt * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z = z ^ (z >> 31);
    return static_cast<double>(z >> 11) * 0x1.0p-53;
}

struct PropertyCase {
    MarketParams market;
    GridSpec grid;  // log-price grid satisfying both explicit mesh bounds
};

// Enumerates admissible configurations: rates, bands and domains vary; the
// spatial step is placed strictly inside the monotonicity bound and the
// time-step count at (or just above) the stability minimum, so every case
// sits near the constraints without crossing them.
inline PropertyCase property_case(int index) {
    const auto u = [&](int salt) { return mix01(static_cast<std::uint64_t>(index), salt); };
    MarketParams mk;
    mk.r = 0.2 * u(1);                      // [0, 0.2)
    mk.sigma = 1.0;
    mk.sigma_low = 0.1 + 0.15 * u(2);       // [0.1, 0.25)
    mk.sigma_high = mk.sigma_low + 0.15 * u(3) + 0.01;
    mk.T = 0.1 + 0.4 * u(4);                // [0.1, 0.5)

    const double center = std::log(100.0);
    const double half = 2.0 + 4.0 * u(5);   // [2, 6)
    const double width = 2.0 * half;

    const double lo = mk.sigma_low, hi = mk.sigma_high;
    const double denom = std::max(2.0 * mk.r - lo * lo, hi * hi - 2.0 * mk.r);
    const double h_cap = denom > 0.0 ? 2.0 * lo * lo / denom : width / 20.0;
    const double h_target = std::min(h_cap, width / 20.0) * (0.3 + 0.6 * u(6));

    GridSpec g;
    g.x_min = center - half;
    g.x_max = center + half;
    g.M = static_cast<int>(std::ceil(width / h_target));
    g.T = mk.T;
    const double h = g.h();
    g.N = static_cast<int>(std::ceil(mk.T * hi * hi / (h * h))) + index % 2;
    return {mk, g};
}

}  // namespace gbs::test
