// End-to-end acceptance checks for the pricing engine: convergence-table
// reproduction, mesh arithmetic, efficiency comparison, degenerate-band
// oracles, the solver property suite, and front-end determinism. Each
// criterion prints exactly one PASS/FAIL verdict line (details indented
// beneath it); the process exits nonzero if any criterion fails.

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gbs/analysis.hpp"
#include "gbs/black_scholes.hpp"
#include "gbs/errors.hpp"
#include "gbs/grid.hpp"
#include "gbs/market.hpp"
#include "gbs/schemes.hpp"
#include "support.hpp"

using namespace gbs;
using gbs::test::max_abs;
using gbs::test::mix01;
using gbs::test::property_case;
using gbs::test::study_market;

namespace {

struct Check {
    std::string detail;
    bool ok;
};

bool criterion(int index, const std::string& title, const std::vector<Check>& checks) {
    bool ok = true;
    for (const auto& c : checks) ok = ok && c.ok;
    std::printf("criterion %d (%s): %s\n", index, title.c_str(), ok ? "PASS" : "FAIL");
    for (const auto& c : checks) {
        std::printf("    [%s] %s\n", c.ok ? " ok" : "OUT", c.detail.c_str());
    }
    std::fflush(stdout);
    return ok;
}

std::string fmt(const char* pattern, ...) {
    char buf[512];
    va_list args;
    va_start(args, pattern);
    std::vsnprintf(buf, sizeof buf, pattern, args);
    va_end(args);
    return buf;
}

Check within(const std::string& label, double got, double target, double tol) {
    const double diff = std::abs(got - target);
    return {fmt("%s: %.6f vs %.6f (|diff| %.2e, tol %.1e)", label.c_str(), got, target, diff, tol),
            diff <= tol};
}

Check rel_within(const std::string& label, double got, double target, double tol) {
    const double rel = std::abs(got - target) / std::abs(target);
    return {fmt("%s: %.9f vs %.9f (rel %.2e, tol %.1e)", label.c_str(), got, target, rel, tol),
            rel <= tol};
}

Check equals_int(const std::string& label, long got, long want) {
    return {fmt("%s: %ld vs %ld", label.c_str(), got, want), got == want};
}

double rate_at(const ConvergenceReport& rep, std::size_t level) {
    return rep.levels.at(level).rate.value_or(-99.0);
}

// Constant payoff whose boundary matches the discrete discounting exactly.
PayoffSpec constant_payoff(double c, const GridSpec& grid) {
    PayoffSpec p = PayoffSpec::tabulated(std::vector<double>(grid.M + 1, c));
    const double dt = grid.dt();
    p.boundary_override = [c, dt](double t, double r, double) {
        return c / std::pow(1.0 + r * dt, static_cast<double>(std::lround(t / dt)));
    };
    return p;
}

PayoffSpec rough_tabulated(int m, int salt, double base, double span) {
    std::vector<double> v(m + 1);
    for (int i = 0; i <= m; ++i) v[i] = base + span * mix01(i, salt);
    return PayoffSpec::tabulated(std::move(v));
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

// Data rows of a converge CSV with the per-run cpu_seconds column removed.
std::string strip_cpu_column(const std::string& text) {
    std::ostringstream out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("#", 0) == 0 || line.find_first_of("0123456789") != 0) {
            out << line << '\n';
            continue;
        }
        std::istringstream cells(line);
        std::string cell;
        for (int col = 0; std::getline(cells, cell, ','); ++col) {
            if (col == 4) continue;  // cpu_seconds
            out << cell << ',';
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace

int main(int argc, char** argv) {
    const MarketParams mk = study_market();
    const double x0 = std::log(100.0);
    const SchemeConfig explicit_cfg{Method::ExplicitX};
    const SchemeConfig implicit_cfg{Method::ImplicitX};
    bool all_ok = true;

    // ---- butterfly studies (criteria 1-3) share one reference solve ----
    const double bf_lo = x0 - 3.625, bf_hi = x0 + 3.625;
    const PayoffSpec butterfly = PayoffSpec::butterfly(90.0, 110.0);
    std::printf("solving butterfly reference (16384 steps, 20480 intervals)...\n");
    std::fflush(stdout);
    const GridSpec bf_ref_grid = build_grid(bf_lo, bf_hi, 20480, 16384, mk.T);
    const FinalLevel bf_ref = solve_final(butterfly, mk, bf_ref_grid, implicit_cfg);

    const auto bf_exp = run_convergence_study(
        butterfly, mk, bf_lo, bf_hi, x0, {{16, 160}, {64, 320}, {256, 640}, {1024, 1280}},
        explicit_cfg, {16384, 20480}, &bf_ref);
    const auto bf_imp = run_convergence_study(
        butterfly, mk, bf_lo, bf_hi, x0, {{16, 640}, {64, 1280}, {256, 2560}, {1024, 5120}},
        implicit_cfg, {16384, 20480}, &bf_ref);

    {
        std::vector<Check> checks;
        const double targets[3] = {1.63, 1.90, 2.04};
        for (int k = 0; k < 3; ++k) {
            checks.push_back(within(fmt("observed rate %d", k + 1), rate_at(bf_exp, k + 1),
                                    targets[k], 0.3));
        }
        for (std::size_t k = 1; k < bf_exp.levels.size(); ++k) {
            checks.push_back({fmt("error decreases at level %zu: %.5e -> %.5e", k + 1,
                                  bf_exp.levels[k - 1].linf_error, bf_exp.levels[k].linf_error),
                              bf_exp.levels[k].linf_error < bf_exp.levels[k - 1].linf_error});
        }
        all_ok &= criterion(1, "butterfly explicit convergence on the log-price grid", checks);
    }

    {
        std::vector<Check> checks;
        const double targets[3] = {1.95, 1.87, 2.36};
        for (int k = 0; k < 3; ++k) {
            checks.push_back(within(fmt("observed rate %d", k + 1), rate_at(bf_imp, k + 1),
                                    targets[k], 0.3));
        }
        for (const auto& lv : bf_imp.levels) {
            const double mean = lv.mean_picard_iters.value_or(99.0);
            checks.push_back({fmt("mean Picard sweeps at N=%d: %.4f (cap 3.0)", lv.timesteps,
                                  mean),
                              mean <= 3.0});
        }
        all_ok &= criterion(2, "butterfly implicit convergence with few Picard sweeps", checks);
    }

    {
        std::vector<Check> checks;
        checks.push_back(within("explicit value at (1024, 1281)",
                                bf_exp.levels.back().value_at_target, 4.883390, 5e-3));
        checks.push_back(within("implicit value at (1024, 5121)",
                                bf_imp.levels.back().value_at_target, 4.881922, 5e-3));
        checks.push_back(within("reference value at (16384, 20481)", bf_exp.reference.value,
                                4.881582, 5e-3));
        all_ok &= criterion(3, "butterfly tabulated values", checks);
    }

    // ---- digital studies (criterion 4) ----
    const double dg_lo = x0 - 7.5, dg_hi = x0 + 7.5;
    const PayoffSpec digital = PayoffSpec::digital(100.0);
    std::printf("solving digital references (16384 steps; 15360 and 20480 intervals)...\n");
    std::fflush(stdout);
    const auto dg_exp = run_convergence_study(
        digital, mk, dg_lo, dg_hi, x0, {{64, 960}, {256, 1920}, {1024, 3840}, {4096, 7680}},
        explicit_cfg, {16384, 15360});
    const auto dg_imp = run_convergence_study(
        digital, mk, dg_lo, dg_hi, x0, {{64, 1280}, {256, 2560}, {1024, 5120}, {4096, 10240}},
        implicit_cfg, {16384, 20480});

    {
        std::vector<Check> checks;
        const double targets[3] = {1.06, 1.11, 1.24};
        for (int k = 0; k < 3; ++k) {
            checks.push_back(within(fmt("explicit observed rate %d", k + 1),
                                    rate_at(dg_exp, k + 1), targets[k], 0.3));
        }
        checks.push_back(
            within("implicit final observed rate", rate_at(dg_imp, 3), 1.19, 0.4));
        checks.push_back(within("explicit value at (4096, 7681)",
                                dg_exp.levels.back().value_at_target, 0.688773, 5e-3));
        checks.push_back(within("reference value at (16384, 20481)", dg_imp.reference.value,
                                0.690662, 5e-3));
        all_ok &= criterion(4, "digital convergence on the log-price grid", checks);
    }

    // ---- mesh arithmetic (criterion 5) ----
    {
        std::vector<Check> checks;
        const int ms[3] = {200, 400, 800};
        const long x_steps[3] = {518, 2072, 8286};
        const long s_steps[3] = {1407, 5625, 22500};
        for (int i = 0; i < 3; ++i) {
            const GridSpec gx = build_grid(std::log(50.0), std::log(150.0), ms[i], 1, mk.T);
            checks.push_back(equals_int(fmt("log-price minimum steps at M=%d", ms[i]),
                                        check_explicit_mesh(gx, mk).min_timesteps, x_steps[i]));
            checks.push_back(
                equals_int(fmt("price-grid minimum steps at M=%d", ms[i]),
                           check_s_domain_mesh(50.0, 150.0, ms[i], mk).min_timesteps,
                           s_steps[i]));
        }
        const double ratio =
            150.0 * 150.0 * std::log(3.0) * std::log(3.0) / (100.0 * 100.0);
        checks.push_back(within("time-step penalty of skipping the log transform", ratio,
                                2.7155, 1e-3));
        all_ok &= criterion(5, "stability-floor arithmetic on [50, 150]", checks);
    }

    // ---- efficiency comparison tables (criterion 6) ----
    std::printf("solving efficiency-comparison references on [ln 50, ln 150]...\n");
    std::fflush(stdout);
    const DomainComparison cmp_bf =
        compare_domains(butterfly, mk, 50.0, 150.0, 100.0, {200, 400, 800}, {16384, 20480});
    const DomainComparison cmp_dg =
        compare_domains(digital, mk, 50.0, 150.0, 100.0, {200, 400, 800}, {16384, 20480});
    {
        std::vector<Check> checks;
        const double bf_vals[3] = {4.88094, 4.88127, 4.88142};
        const double dg_vals[3] = {0.68470, 0.68928, 0.69156};
        for (int i = 0; i < 3; ++i) {
            checks.push_back(within(fmt("butterfly log-grid value at M=%d", cmp_bf.rows[i].m),
                                    cmp_bf.rows[i].value_x, bf_vals[i], 5e-3));
        }
        checks.push_back(
            within("butterfly reference value", cmp_bf.reference.value, 4.881540, 5e-3));
        for (int i = 0; i < 3; ++i) {
            checks.push_back(within(fmt("digital log-grid value at M=%d", cmp_dg.rows[i].m),
                                    cmp_dg.rows[i].value_x, dg_vals[i], 5e-3));
        }
        checks.push_back(
            within("digital reference value", cmp_dg.reference.value, 0.690660, 5e-3));
        all_ok &= criterion(6, "explicit log-grid values of the efficiency comparison", checks);
    }

    // ---- degenerate band vs closed form (criterion 7) ----
    {
        std::vector<Check> checks;
        const GridSpec g = build_grid(x0 - 5.0, x0 + 5.0, 5120, 1024, mk.T);
        const MarketParams call_mk{0.1, 1.0, 0.25, 0.25, 0.25};
        const FinalLevel call_fin =
            solve_final(PayoffSpec::call(100.0), call_mk, g, implicit_cfg);
        checks.push_back(rel_within(
            "call with the band collapsed to 0.25", call_fin.values[g.M / 2],
            bs_closed_form(OptionType::Call, 100.0, 100.0, 0.1, 0.25, 0.25), 1e-3));

        const MarketParams put_mk{0.1, 1.0, 0.15, 0.15, 0.25};
        const FinalLevel put_fin = solve_final(PayoffSpec::put(100.0), put_mk, g, implicit_cfg);
        checks.push_back(rel_within(
            "put with the band collapsed to 0.15", put_fin.values[g.M / 2],
            bs_closed_form(OptionType::Put, 100.0, 100.0, 0.1, 0.15, 0.25), 1e-3));
        all_ok &= criterion(7, "degenerate band reproduces constant-volatility prices", checks);
    }

    // ---- solver property suite (criterion 8) ----
    {
        std::vector<Check> checks;

        // Sup-norm stability across 50 admissible configurations.
        int stable = 0;
        double worst_growth = 0.0;
        for (int c = 0; c < 50; ++c) {
            const auto pc = property_case(c);
            const PayoffSpec p = rough_tabulated(pc.grid.M, 1000 + c, 0.5, 9.0);
            SchemeConfig cfg;
            cfg.method = (c % 2 == 0) ? Method::ExplicitX : Method::ImplicitX;
            const Solution sol = solve(p, pc.market, pc.grid, cfg);
            const double bound = max_abs(sol.levels.front());
            double peak = 0.0;
            for (const auto& level : sol.levels) peak = std::max(peak, max_abs(level));
            worst_growth = std::max(worst_growth, peak - bound);
            if (peak <= bound + 1e-12) ++stable;
        }
        checks.push_back({fmt("sup-norm stability: %d/50 cases bounded (worst growth %.2e)",
                              stable, worst_growth),
                          stable == 50});

        // Comparison principle across 50 ordered payoff pairs.
        int ordered = 0;
        double worst_crossing = 0.0;
        for (int c = 0; c < 50; ++c) {
            const auto pc = property_case(c);
            const int m = pc.grid.M;
            PayoffSpec lo_payoff = rough_tabulated(m, 2000 + c, 0.0, 9.0);
            std::vector<double> bumped = lo_payoff.tabulated_values;
            for (int i = 0; i <= m; ++i) bumped[i] += 0.75 * mix01(i, 3000 + c);
            bumped[m] = lo_payoff.tabulated_values[m];
            const PayoffSpec hi_payoff = PayoffSpec::tabulated(std::move(bumped));
            SchemeConfig cfg;
            cfg.method = (c % 2 == 0) ? Method::ExplicitX : Method::ImplicitX;
            const Solution a = solve(lo_payoff, pc.market, pc.grid, cfg);
            const Solution b = solve(hi_payoff, pc.market, pc.grid, cfg);
            double crossing = 0.0;
            for (std::size_t n = 0; n < a.levels.size(); ++n) {
                for (int i = 0; i <= m; ++i) {
                    crossing = std::max(crossing, a.levels[n][i] - b.levels[n][i]);
                }
            }
            worst_crossing = std::max(worst_crossing, crossing);
            if (crossing <= 1e-12) ++ordered;
        }
        checks.push_back({fmt("comparison principle: %d/50 pairs ordered (worst crossing %.2e)",
                              ordered, worst_crossing),
                          ordered == 50});

        // Picard sweeps are nodewise nondecreasing over 20 implicit steps.
        {
            const GridSpec g = build_grid(bf_lo, bf_hi, 320, 20, mk.T);
            std::vector<double> level = payoff_on_grid(butterfly, g.nodes(), Domain::X);
            bool monotone = true;
            int multi = 0;
            double worst_drop = 0.0;
            for (int n = 0; n < g.N; ++n) {
                PicardTrace trace;
                auto [next, sweeps] = implicit_step_x(level, n, g, mk, butterfly,
                                                      implicit_cfg, &trace);
                if (sweeps > 1) ++multi;
                for (std::size_t k = 1; k < trace.iterates.size(); ++k) {
                    for (int i = 0; i <= g.M; ++i) {
                        const double drop = trace.iterates[k - 1][i] - trace.iterates[k][i];
                        worst_drop = std::max(worst_drop, drop);
                        monotone = monotone && drop <= 1e-12;
                    }
                }
                level = std::move(next);
            }
            checks.push_back({fmt("Picard monotonicity over 20 steps: worst decrease %.2e "
                                  "(%d multi-sweep steps)",
                                  worst_drop, multi),
                              monotone && multi > 0});
        }

        // Exact discrete discounting of a constant by all three schemes.
        {
            double worst = 0.0;
            const struct {
                Method method;
                GridSpec grid;
            } runs[] = {
                {Method::ExplicitX, build_grid(std::log(50.0), std::log(150.0), 200, 520, mk.T)},
                {Method::ImplicitX, build_grid(std::log(50.0), std::log(150.0), 200, 64, mk.T)},
                {Method::ExplicitS, build_grid(50.0, 150.0, 200, 1407, mk.T)},
            };
            for (const auto& rn : runs) {
                const PayoffSpec p = constant_payoff(3.0, rn.grid);
                SchemeConfig cfg;
                cfg.method = rn.method;
                const Solution sol = solve(p, mk, rn.grid, cfg);
                const double expected = 3.0 / std::pow(1.0 + mk.r * rn.grid.dt(), rn.grid.N);
                for (double v : sol.levels.back()) {
                    worst = std::max(worst, std::abs(v - expected) / expected);
                }
            }
            checks.push_back(
                {fmt("constant discounting, all schemes: worst relative drift %.2e", worst),
                 worst <= 1e-12});
        }

        // Quadratic interpolation reproduces quadratics.
        {
            const auto q = [](double x) { return 2.0 * x * x - 3.0 * x + 0.7; };
            const GridSpec g = build_grid(std::log(50.0), std::log(150.0), 64, 1, 1.0);
            std::vector<double> v;
            for (double x : g.nodes()) v.push_back(q(x));
            double worst = 0.0;
            for (int k = 0; k < 20; ++k) {
                const double p = g.x_min + (g.x_max - g.x_min) * mix01(k, 11);
                const double err =
                    std::abs(interpolate_quadratic(v, g, p) - q(p)) /
                    std::max(1.0, std::abs(q(p)));
                worst = std::max(worst, err);
            }
            checks.push_back(
                {fmt("quadratic interpolation exactness: worst relative error %.2e", worst),
                 worst <= 1e-12});
        }

        all_ok &= criterion(8, "solver property suite", checks);
    }

    // ---- front-end determinism (criterion 9) ----
    {
        std::vector<Check> checks;
        if (argc < 2) {
            checks.push_back({"front-end binary path not supplied", false});
        } else {
            const auto dir = std::filesystem::temp_directory_path();
            const auto pa = dir / "gbs_acceptance_det_a.csv";
            const auto pb = dir / "gbs_acceptance_det_b.csv";
            const std::string base = std::string("\"") + argv[1] +
                                     "\" converge --grid-ladder 16x160,64x320 "
                                     "--grid-reference_n 256 --grid-reference_m 640 "
                                     "--output-path ";
            const int rc_a = std::system((base + "\"" + pa.string() + "\"").c_str());
            const int rc_b = std::system((base + "\"" + pb.string() + "\"").c_str());
            checks.push_back({fmt("two front-end runs exit cleanly (%d, %d)", rc_a, rc_b),
                              rc_a == 0 && rc_b == 0});
            const std::string a = strip_cpu_column(slurp(pa));
            const std::string b = strip_cpu_column(slurp(pb));
            checks.push_back({fmt("artifacts are byte-identical outside cpu_seconds "
                                  "(%zu bytes compared)",
                                  a.size()),
                              !a.empty() && a == b});
            std::filesystem::remove(pa);
            std::filesystem::remove(pb);
        }
        all_ok &= criterion(9, "repeated runs write identical artifacts", checks);
    }

    std::printf("acceptance: %s\n", all_ok ? "all criteria PASS" : "at least one criterion FAILED");
    return all_ok ? 0 : 1;
}
