#include "doctest.h"

#include <cmath>
#include <vector>

#include "gbs/errors.hpp"
#include "gbs/grid.hpp"
#include "support.hpp"

using namespace gbs;

TEST_CASE("grid geometry") {
    const GridSpec g = build_grid(0.0, 2.0, 4, 10, 0.5);
    CHECK(g.h() == 0.5);
    CHECK(g.dt() == 0.05);
    CHECK(g.node(0) == 0.0);
    CHECK(g.node(4) == 2.0);
    CHECK(g.nodes() == std::vector<double>{0.0, 0.5, 1.0, 1.5, 2.0});
}

TEST_CASE("grid validation") {
    CHECK_THROWS_AS(build_grid(1.0, 1.0, 4, 10, 0.5), InvalidArgument);
    CHECK_THROWS_AS(build_grid(2.0, 1.0, 4, 10, 0.5), InvalidArgument);
    CHECK_THROWS_AS(build_grid(0.0, 1.0, 1, 10, 0.5), InvalidArgument);
    CHECK_THROWS_AS(build_grid(0.0, 1.0, 4, 0, 0.5), InvalidArgument);
    CHECK_THROWS_AS(build_grid(0.0, 1.0, 4, 10, 0.0), InvalidArgument);
}

TEST_CASE("central differences are exact on quadratics") {
    // V(x) = 3x^2 - 2x + 1 sampled at h = 0.25.
    const double h = 0.25;
    std::vector<double> v;
    for (int i = 0; i <= 8; ++i) {
        const double x = i * h;
        v.push_back(3.0 * x * x - 2.0 * x + 1.0);
    }
    for (int i = 1; i < 8; ++i) {
        const double x = i * h;
        CHECK(first_diff(v, i, h) == doctest::Approx(6.0 * x - 2.0).epsilon(1e-13));
        CHECK(second_diff(v, i, h) == doctest::Approx(6.0).epsilon(1e-13));
    }
    CHECK_THROWS_AS(first_diff(v, 0, h), InvalidArgument);
    CHECK_THROWS_AS(second_diff(v, 8, h), InvalidArgument);
}

TEST_CASE("explicit mesh bounds at the study parameters") {
    const MarketParams mk = gbs::test::study_market();

    SUBCASE("upper bound value") {
        // 2 * 0.15^2 / max(2*0.1 - 0.15^2, 0.25^2 - 2*0.1) = 0.045 / 0.1775.
        const GridSpec g = build_grid(0.0, 1.0, 100, 10, mk.T);
        const MeshReport rep = check_explicit_mesh(g, mk);
        CHECK(rep.upper_bound == doctest::Approx(0.2535211267605634).epsilon(1e-14));
        CHECK(rep.upper_ok);
    }

    SUBCASE("stability-tight grid is admissible") {
        // h = 15/960, dt = 0.25/64: sigma_high * sqrt(dt) equals h exactly.
        const double c = 2.0 * std::log(10.0);
        const GridSpec g = build_grid(c - 7.5, c + 7.5, 960, 64, mk.T);
        const MeshReport rep = check_explicit_mesh(g, mk);
        CHECK(rep.explicit_lower_ok);
        CHECK(rep.min_timesteps == 64);
    }

    SUBCASE("one fewer time step is rejected") {
        const double c = 2.0 * std::log(10.0);
        const GridSpec g = build_grid(c - 7.5, c + 7.5, 960, 63, mk.T);
        CHECK_FALSE(check_explicit_mesh(g, mk).explicit_lower_ok);
    }

    SUBCASE("coarse spatial step violates the upper bound") {
        const GridSpec g = build_grid(0.0, 10.0, 20, 4000, mk.T);  // h = 0.5
        const MeshReport rep = check_explicit_mesh(g, mk);
        CHECK_FALSE(rep.upper_ok);
    }

    SUBCASE("zero rate switches to the diffusion-driven branch") {
        MarketParams zero_rate = mk;
        zero_rate.r = 0.0;
        const GridSpec g = build_grid(0.0, 1.0, 100, 10, mk.T);
        const MeshReport rep = check_explicit_mesh(g, zero_rate);
        // max(2r - lo^2, hi^2 - 2r) = hi^2 -> bound = 2*0.0225/0.0625 = 0.72.
        CHECK(rep.upper_bound == doctest::Approx(0.72).epsilon(1e-14));
    }

    SUBCASE("upper bound vanishes for a balanced degenerate band") {
        // With sigma_low = sigma_high = 0.25 and r = 0.03125 both monotonicity
        // terms are exactly zero in binary, so no spatial step is excluded.
        MarketParams balanced = mk;
        balanced.r = 0.03125;
        balanced.sigma_low = 0.25;
        balanced.sigma_high = 0.25;
        const GridSpec g = build_grid(0.0, 10.0, 4, 10, mk.T);  // h = 2.5
        const MeshReport rep = check_explicit_mesh(g, balanced);
        CHECK(std::isinf(rep.upper_bound));
        CHECK(rep.upper_ok);
    }
}

TEST_CASE("minimum time steps reproduce the efficiency-comparison table") {
    const MarketParams mk = gbs::test::study_market();

    SUBCASE("log-price grid on [ln 50, ln 150]") {
        const double x_min = std::log(50.0), x_max = std::log(150.0);
        const long expected[] = {518, 2072, 8286};
        const int ms[] = {200, 400, 800};
        for (int k = 0; k < 3; ++k) {
            const GridSpec g = build_grid(x_min, x_max, ms[k], 1, mk.T);
            CHECK(check_explicit_mesh(g, mk).min_timesteps == expected[k]);
        }
        // Frozen spatial step at M = 200: ln(3)/200.
        const GridSpec g200 = build_grid(x_min, x_max, 200, 1, mk.T);
        CHECK(g200.h() == doctest::Approx(0.005493061443340549).epsilon(1e-15));
    }

    SUBCASE("price grid on [50, 150]") {
        const long expected[] = {1407, 5625, 22500};
        const int ms[] = {200, 400, 800};
        for (int k = 0; k < 3; ++k) {
            const MeshReport rep = check_s_domain_mesh(50.0, 150.0, ms[k], mk);
            CHECK(rep.min_timesteps == expected[k]);
            CHECK(rep.explicit_lower_ok);
            CHECK(rep.upper_ok);
        }
        CHECK(check_s_domain_mesh(50.0, 150.0, 200, mk).h == 0.5);
        // Upper bound s_min * lo^2 / r = 50 * 0.0225 / 0.1.
        CHECK(check_s_domain_mesh(50.0, 150.0, 200, mk).upper_bound ==
              doctest::Approx(11.25).epsilon(1e-14));
    }

    SUBCASE("time-step penalty of skipping the log transform") {
        // s_max^2 ln(s_max/s_min)^2 / (s_max - s_min)^2 at [50, 150].
        const double ratio = 150.0 * 150.0 * std::log(3.0) * std::log(3.0) / (100.0 * 100.0);
        CHECK(ratio == doctest::Approx(2.715635161828309).epsilon(1e-14));
        CHECK(std::abs(ratio - 2.7155) < 1e-3);
        // The reported integer counts show the same factor after rounding.
        CHECK(22500.0 / 8286.0 == doctest::Approx(2.7155).epsilon(1e-3));
    }
}

TEST_CASE("tight meshes survive the floating-point slack") {
    // Configurations whose stability condition holds with exact equality in
    // real arithmetic must not be rejected by rounding noise: the (T, hi, h)
    // combinations below make T * hi^2 / h^2 an exact integer.
    const MarketParams mk = gbs::test::study_market();
    const double c = 2.0 * std::log(10.0);
    const int cases[][2] = {{960, 64}, {1920, 256}, {3840, 1024}, {7680, 4096}};
    for (const auto& [m, n] : cases) {
        const GridSpec g = build_grid(c - 7.5, c + 7.5, m, n, mk.T);
        const MeshReport rep = check_explicit_mesh(g, mk);
        CHECK(rep.min_timesteps == n);
        CHECK(rep.explicit_lower_ok);
    }
}

TEST_CASE("s-domain mesh validation") {
    const MarketParams mk = gbs::test::study_market();
    CHECK_THROWS_AS(check_s_domain_mesh(-1.0, 150.0, 100, mk), InvalidArgument);
    CHECK_THROWS_AS(check_s_domain_mesh(150.0, 50.0, 100, mk), InvalidArgument);
    CHECK_THROWS_AS(check_s_domain_mesh(50.0, 150.0, 1, mk), InvalidArgument);
}
