#include "cli/run.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "gbs/analysis.hpp"
#include "gbs/errors.hpp"
#include "gbs/grid.hpp"

namespace gbs::cli {

namespace {

using nlohmann::json;

std::string sci(double v) {  // 6 significant digits, scientific (error columns)
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.5e", v);
    return buf;
}

std::string fixed6(double v) {  // price-like values
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::string fixed4(double v) {  // rates, iteration means
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

std::string g9(double v) {  // grid geometry
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

const char* yesno(bool b) { return b ? "true" : "false"; }

// Shared meta description of the run, used verbatim by every writer.
json meta_json(const RunConfig& cfg) {
    json m;
    m["command"] = to_string(cfg.command);
    m["method"] = to_string(cfg.scheme.method);
    m["payoff"]["kind"] = to_string(cfg.payoff_kind);
    if (cfg.payoff_kind == PayoffKind::Butterfly) {
        m["payoff"]["k1"] = cfg.k1;
        m["payoff"]["k2"] = cfg.k2;
    } else {
        m["payoff"]["k"] = cfg.k;
    }
    m["market"] = {{"r", cfg.market.r},
                   {"sigma", cfg.market.sigma},
                   {"sigma_low", cfg.market.sigma_low},
                   {"sigma_high", cfg.market.sigma_high},
                   {"t", cfg.market.T}};
    return m;
}

void meta_csv(std::ostream& out, const RunConfig& cfg) {
    out << "# command = " << to_string(cfg.command) << '\n';
    out << "# method = " << to_string(cfg.scheme.method) << '\n';
    out << "# payoff = " << to_string(cfg.payoff_kind) << '\n';
}

void write_price(std::ostream& out, const RunConfig& cfg) {
    const PayoffSpec payoff = make_payoff(cfg);
    const bool on_price_grid = cfg.scheme.method == Method::ExplicitS;
    const auto [x_lo, x_hi] = resolved_domain(cfg);
    const double lo = on_price_grid ? cfg.s_min : x_lo;
    const double hi = on_price_grid ? cfg.s_max : x_hi;
    const GridSpec grid = build_grid(lo, hi, cfg.m, cfg.n, cfg.market.T);
    const MeshReport rep = on_price_grid
                               ? check_s_domain_mesh(cfg.s_min, cfg.s_max, cfg.m, cfg.market)
                               : check_explicit_mesh(grid, cfg.market);

    const FinalLevel fin = solve_final(payoff, cfg.market, grid, cfg.scheme);
    const double target = on_price_grid ? std::exp(resolved_x0(cfg)) : resolved_x0(cfg);
    const double value = interpolate_quadratic(fin.values, grid, target);

    double mean_picard = 0.0;
    int max_picard = 0;
    for (int c : fin.picard_counts) {
        mean_picard += c;
        max_picard = std::max(max_picard, c);
    }
    if (!fin.picard_counts.empty()) mean_picard /= static_cast<double>(fin.picard_counts.size());

    if (cfg.format == OutputFormat::Csv) {
        meta_csv(out, cfg);
        out << "value,target,grid_min,grid_max,m,n,t,h,dt,min_timesteps,explicit_lower_ok,"
               "upper_ok,mean_picard_iters,max_picard_iters,cpu_seconds\n";
        out << fixed6(value) << ',' << g9(target) << ',' << g9(grid.x_min) << ','
            << g9(grid.x_max) << ',' << grid.M << ',' << grid.N << ',' << g9(grid.T) << ','
            << g9(rep.h) << ',' << g9(rep.dt) << ',' << rep.min_timesteps << ','
            << yesno(rep.explicit_lower_ok) << ',' << yesno(rep.upper_ok) << ','
            << (fin.picard_counts.empty() ? "" : fixed4(mean_picard)) << ','
            << (fin.picard_counts.empty() ? "" : std::to_string(max_picard)) << ','
            << fixed6(fin.wall_seconds) << '\n';
        return;
    }
    json j;
    j["meta"] = meta_json(cfg);
    json row = {{"value", value},
                {"target", target},
                {"grid", {{"min", grid.x_min},
                          {"max", grid.x_max},
                          {"m", grid.M},
                          {"n", grid.N},
                          {"t", grid.T}}},
                {"mesh", {{"h", rep.h},
                          {"dt", rep.dt},
                          {"min_timesteps", rep.min_timesteps},
                          {"explicit_lower_ok", rep.explicit_lower_ok},
                          {"upper_ok", rep.upper_ok}}},
                {"cpu_seconds", fin.wall_seconds}};
    if (!fin.picard_counts.empty()) {
        row["mean_picard_iters"] = mean_picard;
        row["max_picard_iters"] = max_picard;
    }
    j["rows"] = json::array({row});
    out << j.dump(2) << '\n';
}

void write_converge(std::ostream& out, const RunConfig& cfg) {
    const PayoffSpec payoff = make_payoff(cfg);
    const auto [x_lo, x_hi] = resolved_domain(cfg);
    const double x0 = resolved_x0(cfg);
    const ConvergenceReport report =
        run_convergence_study(payoff, cfg.market, x_lo, x_hi, x0, parse_ladder(cfg.ladder),
                              cfg.scheme, resolved_reference(cfg));

    if (cfg.format == OutputFormat::Csv) {
        meta_csv(out, cfg);
        out << "# x_min = " << g9(x_lo) << ", x_max = " << g9(x_hi) << ", x0 = " << g9(x0)
            << '\n';
        out << "# reference_value = " << fixed6(report.reference.value)
            << ", reference_timesteps = " << report.reference.timesteps
            << ", reference_nodes = " << report.reference.nodes << '\n';
        out << "timesteps,nodes,linf_error,rate,cpu_seconds,value_at_target,value_diff,"
               "mean_picard_iters\n";
        for (const auto& lv : report.levels) {
            out << lv.timesteps << ',' << lv.nodes << ',' << sci(lv.linf_error) << ','
                << (lv.rate ? fixed4(*lv.rate) : "") << ',' << fixed6(lv.cpu_seconds) << ','
                << fixed6(lv.value_at_target) << ',' << sci(lv.value_diff) << ','
                << (lv.mean_picard_iters ? fixed4(*lv.mean_picard_iters) : "") << '\n';
        }
        return;
    }
    json j;
    j["meta"] = meta_json(cfg);
    j["meta"]["x_min"] = x_lo;
    j["meta"]["x_max"] = x_hi;
    j["meta"]["x0"] = x0;
    j["meta"]["reference"] = {{"value", report.reference.value},
                              {"timesteps", report.reference.timesteps},
                              {"nodes", report.reference.nodes}};
    j["rows"] = json::array();
    for (const auto& lv : report.levels) {
        json row = {{"timesteps", lv.timesteps},
                    {"nodes", lv.nodes},
                    {"linf_error", lv.linf_error},
                    {"cpu_seconds", lv.cpu_seconds},
                    {"value_at_target", lv.value_at_target},
                    {"value_diff", lv.value_diff}};
        if (lv.rate) row["rate"] = *lv.rate;
        if (lv.mean_picard_iters) row["mean_picard_iters"] = *lv.mean_picard_iters;
        j["rows"].push_back(row);
    }
    out << j.dump(2) << '\n';
}

void write_compare(std::ostream& out, const RunConfig& cfg) {
    const PayoffSpec payoff = make_payoff(cfg);
    const double s0 = std::exp(resolved_x0(cfg));
    const DomainComparison cmp =
        compare_domains(payoff, cfg.market, cfg.s_min, cfg.s_max, s0, parse_m_list(cfg.m_list),
                        resolved_reference(cfg));

    if (cfg.format == OutputFormat::Csv) {
        meta_csv(out, cfg);
        out << "# s_min = " << g9(cfg.s_min) << ", s_max = " << g9(cfg.s_max)
            << ", s0 = " << g9(cmp.s0) << '\n';
        out << "# reference_value = " << fixed6(cmp.reference.value)
            << ", reference_timesteps = " << cmp.reference.timesteps
            << ", reference_nodes = " << cmp.reference.nodes << '\n';
        out << "m,metric,without_log,with_log\n";
        for (const auto& row : cmp.rows) {
            out << row.m << ",spatial_step," << g9(row.h_s) << ',' << g9(row.h_x) << '\n';
            out << row.m << ",min_timesteps," << row.n_s << ',' << row.n_x << '\n';
            out << row.m << ",value," << fixed6(row.value_s) << ',' << fixed6(row.value_x)
                << '\n';
            out << row.m << ",rel_error," << sci(row.rel_error_s) << ',' << sci(row.rel_error_x)
                << '\n';
            out << row.m << ",cpu_seconds," << fixed6(row.cpu_s) << ',' << fixed6(row.cpu_x)
                << '\n';
        }
        return;
    }
    json j;
    j["meta"] = meta_json(cfg);
    j["meta"]["s_min"] = cfg.s_min;
    j["meta"]["s_max"] = cfg.s_max;
    j["meta"]["s0"] = cmp.s0;
    j["meta"]["reference"] = {{"value", cmp.reference.value},
                              {"timesteps", cmp.reference.timesteps},
                              {"nodes", cmp.reference.nodes}};
    j["rows"] = json::array();
    for (const auto& row : cmp.rows) {
        j["rows"].push_back({{"m", row.m},
                             {"without_log", {{"spatial_step", row.h_s},
                                              {"min_timesteps", row.n_s},
                                              {"value", row.value_s},
                                              {"rel_error", row.rel_error_s},
                                              {"cpu_seconds", row.cpu_s}}},
                             {"with_log", {{"spatial_step", row.h_x},
                                           {"min_timesteps", row.n_x},
                                           {"value", row.value_x},
                                           {"rel_error", row.rel_error_x},
                                           {"cpu_seconds", row.cpu_x}}}});
    }
    out << j.dump(2) << '\n';
}

void write_iterations(std::ostream& out, const RunConfig& cfg) {
    if (cfg.scheme.method != Method::ImplicitX) {
        throw NotApplicableError("iteration profiles require the implicit method");
    }
    const PayoffSpec payoff = make_payoff(cfg);
    const auto [x_lo, x_hi] = resolved_domain(cfg);
    const GridSpec grid = build_grid(x_lo, x_hi, cfg.m, cfg.n, cfg.market.T);
    const FinalLevel fin = solve_final(payoff, cfg.market, grid, cfg.scheme);

    double mean = 0.0;
    int max = 0;
    for (int c : fin.picard_counts) {
        mean += c;
        max = std::max(max, c);
    }
    mean /= static_cast<double>(fin.picard_counts.size());

    if (cfg.format == OutputFormat::Csv) {
        meta_csv(out, cfg);
        out << "# m = " << grid.M << ", n = " << grid.N << ", mean = " << fixed4(mean)
            << ", max = " << max << '\n';
        out << "step,iterations\n";
        for (std::size_t i = 0; i < fin.picard_counts.size(); ++i) {
            out << i + 1 << ',' << fin.picard_counts[i] << '\n';
        }
        return;
    }
    json j;
    j["meta"] = meta_json(cfg);
    j["meta"]["m"] = grid.M;
    j["meta"]["n"] = grid.N;
    j["meta"]["mean"] = mean;
    j["meta"]["max"] = max;
    j["rows"] = json::array();
    for (std::size_t i = 0; i < fin.picard_counts.size(); ++i) {
        j["rows"].push_back({{"step", i + 1}, {"iterations", fin.picard_counts[i]}});
    }
    out << j.dump(2) << '\n';
}

void emit(const RunConfig& cfg, const std::string& body) {
    if (cfg.path == "-") {
        std::cout << body;
        std::cout.flush();
        return;
    }
    std::ofstream file(cfg.path);
    if (!file) {
        throw IoError("cannot open '" + cfg.path + "' for writing");
    }
    file << body;
    file.flush();
    if (!file) {
        throw IoError("failed writing '" + cfg.path + "'");
    }
}

int fail(int code, const char* type, const std::string& message) {
    json err;
    err["error"] = {{"type", type}, {"message", message}, {"exit_code", code}};
    std::cerr << err.dump() << '\n';
    return code;
}

}  // namespace

int run(const RunConfig& cfg) {
    try {
        validate_config(cfg);
        std::ostringstream body;
        switch (cfg.command) {
            case Command::Price:
                write_price(body, cfg);
                break;
            case Command::Converge:
                write_converge(body, cfg);
                break;
            case Command::CompareDomains:
                write_compare(body, cfg);
                break;
            case Command::Iterations:
                write_iterations(body, cfg);
                break;
        }
        emit(cfg, body.str());
        return kExitOk;
    } catch (...) {
        return report_error(std::current_exception());
    }
}

int report_error(std::exception_ptr error) {
    try {
        std::rethrow_exception(error);
    } catch (const ConfigError& e) {
        return fail(kExitConfig, "config", e.what());
    } catch (const MeshError& e) {
        return fail(kExitMesh, "mesh", e.what());
    } catch (const DivergenceError& e) {
        return fail(kExitDivergence, "divergence", e.what());
    } catch (const PicardError& e) {
        return fail(kExitPicard, "picard", e.what());
    } catch (const IoError& e) {
        return fail(kExitIo, "io", e.what());
    } catch (const std::exception& e) {
        return fail(kExitNumeric, "numeric", e.what());
    }
}

}  // namespace gbs::cli
