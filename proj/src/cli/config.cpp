#include "cli/config.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <system_error>

#include "gbs/errors.hpp"

namespace gbs::cli {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::string with_line(const std::string& what, int line) {
    if (line <= 0) return what;
    std::ostringstream out;
    out << what << " (line " << line << ")";
    return out.str();
}

double parse_double(const std::string& key, const std::string& s, int line) {
    double v = 0.0;
    const char* last = s.data() + s.size();
    const auto res = std::from_chars(s.data(), last, v);
    if (res.ec != std::errc{} || res.ptr != last) {
        throw ConfigError(key, with_line("expected a number, got '" + s + "'", line));
    }
    return v;
}

int parse_int(const std::string& key, const std::string& s, int line) {
    int v = 0;
    const char* last = s.data() + s.size();
    const auto res = std::from_chars(s.data(), last, v);
    if (res.ec != std::errc{} || res.ptr != last) {
        throw ConfigError(key, with_line("expected an integer, got '" + s + "'", line));
    }
    return v;
}

bool parse_bool(const std::string& key, const std::string& s, int line) {
    if (s == "true") return true;
    if (s == "false") return false;
    throw ConfigError(key, with_line("expected true or false, got '" + s + "'", line));
}

// Shortest round-trip decimal form.
std::string fmt(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

Command parse_command(const std::string& key, const std::string& s, int line) {
    if (s == "price") return Command::Price;
    if (s == "converge") return Command::Converge;
    if (s == "compare-domains") return Command::CompareDomains;
    if (s == "iterations") return Command::Iterations;
    throw ConfigError(
        key, with_line("expected price, converge, compare-domains or iterations, got '" + s + "'",
                       line));
}

PayoffKind parse_kind(const std::string& key, const std::string& s, int line) {
    if (s == "butterfly") return PayoffKind::Butterfly;
    if (s == "digital") return PayoffKind::Digital;
    if (s == "call") return PayoffKind::Call;
    if (s == "put") return PayoffKind::Put;
    throw ConfigError(
        key, with_line("expected butterfly, digital, call or put, got '" + s + "'", line));
}

Method parse_method(const std::string& key, const std::string& s, int line) {
    if (s == "explicit-x") return Method::ExplicitX;
    if (s == "implicit-x") return Method::ImplicitX;
    if (s == "explicit-s") return Method::ExplicitS;
    throw ConfigError(
        key, with_line("expected explicit-x, implicit-x or explicit-s, got '" + s + "'", line));
}

MeshEnforcement parse_enforce(const std::string& key, const std::string& s, int line) {
    if (s == "error") return MeshEnforcement::Error;
    if (s == "warn") return MeshEnforcement::Warn;
    if (s == "ignore") return MeshEnforcement::Ignore;
    throw ConfigError(key, with_line("expected error, warn or ignore, got '" + s + "'", line));
}

OutputFormat parse_format(const std::string& key, const std::string& s, int line) {
    if (s == "csv") return OutputFormat::Csv;
    if (s == "json") return OutputFormat::Json;
    throw ConfigError(key, with_line("expected csv or json, got '" + s + "'", line));
}

void apply_kv_line(RunConfig& cfg, const std::string& key, const std::string& value, int line) {
    if (key == "command") {
        cfg.command = parse_command(key, value, line);
    } else if (key == "market.r") {
        cfg.market.r = parse_double(key, value, line);
    } else if (key == "market.sigma") {
        cfg.market.sigma = parse_double(key, value, line);
    } else if (key == "market.sigma_low") {
        cfg.market.sigma_low = parse_double(key, value, line);
    } else if (key == "market.sigma_high") {
        cfg.market.sigma_high = parse_double(key, value, line);
    } else if (key == "market.t") {
        cfg.market.T = parse_double(key, value, line);
    } else if (key == "payoff.kind") {
        cfg.payoff_kind = parse_kind(key, value, line);
    } else if (key == "payoff.k1") {
        cfg.k1 = parse_double(key, value, line);
    } else if (key == "payoff.k2") {
        cfg.k2 = parse_double(key, value, line);
    } else if (key == "payoff.k") {
        cfg.k = parse_double(key, value, line);
    } else if (key == "grid.x_min") {
        cfg.x_min = parse_double(key, value, line);
    } else if (key == "grid.x_max") {
        cfg.x_max = parse_double(key, value, line);
    } else if (key == "grid.m") {
        cfg.m = parse_int(key, value, line);
    } else if (key == "grid.n") {
        cfg.n = parse_int(key, value, line);
    } else if (key == "grid.ladder") {
        cfg.ladder = value;
    } else if (key == "grid.reference_n") {
        cfg.reference_n = parse_int(key, value, line);
    } else if (key == "grid.reference_m") {
        cfg.reference_m = parse_int(key, value, line);
    } else if (key == "grid.desk_scale") {
        cfg.desk_scale = parse_bool(key, value, line);
    } else if (key == "grid.s_min") {
        cfg.s_min = parse_double(key, value, line);
    } else if (key == "grid.s_max") {
        cfg.s_max = parse_double(key, value, line);
    } else if (key == "grid.m_list") {
        cfg.m_list = value;
    } else if (key == "scheme.method") {
        cfg.scheme.method = parse_method(key, value, line);
    } else if (key == "scheme.picard_tol") {
        cfg.scheme.picard_tol = parse_double(key, value, line);
    } else if (key == "scheme.picard_max_iters") {
        cfg.scheme.picard_max_iters = parse_int(key, value, line);
    } else if (key == "scheme.enforce_mesh") {
        cfg.scheme.enforce_mesh_conditions = parse_enforce(key, value, line);
    } else if (key == "output.path") {
        cfg.path = value;
    } else if (key == "output.format") {
        cfg.format = parse_format(key, value, line);
    } else if (key == "output.target_s0") {
        cfg.target_s0 = parse_double(key, value, line);
    } else if (key == "output.target_x0") {
        cfg.target_x0 = parse_double(key, value, line);
    } else {
        throw ConfigError(key, with_line("unknown configuration key", line));
    }
}

}  // namespace

const std::vector<ConfigKey>& config_keys() {
    static const std::vector<ConfigKey> keys = {
        {"command", "run mode: price, converge, compare-domains or iterations"},
        {"market.r", "risk-free rate"},
        {"market.sigma", "reference volatility multiplied into the band"},
        {"market.sigma_low", "lower end of the volatility-uncertainty band"},
        {"market.sigma_high", "upper end of the volatility-uncertainty band"},
        {"market.t", "maturity in years"},
        {"payoff.kind", "payoff: butterfly, digital, call or put"},
        {"payoff.k1", "butterfly lower strike"},
        {"payoff.k2", "butterfly upper strike"},
        {"payoff.k", "digital/call/put strike"},
        {"grid.x_min", "left log-price bound (default: payoff-dependent window)"},
        {"grid.x_max", "right log-price bound (default: payoff-dependent window)"},
        {"grid.m", "spatial intervals for price/iterations"},
        {"grid.n", "time steps for price/iterations"},
        {"grid.ladder", "converge levels as comma-separated NxM pairs"},
        {"grid.reference_n", "reference time steps"},
        {"grid.reference_m", "reference spatial intervals"},
        {"grid.desk_scale", "true shrinks the reference to 4096x8192 for quick runs"},
        {"grid.s_min", "compare-domains lower price bound"},
        {"grid.s_max", "compare-domains upper price bound"},
        {"grid.m_list", "compare-domains resolutions, comma-separated"},
        {"scheme.method", "explicit-x, implicit-x or explicit-s"},
        {"scheme.picard_tol", "sup-norm stopping tolerance of the inner iteration"},
        {"scheme.picard_max_iters", "inner-iteration cap"},
        {"scheme.enforce_mesh", "mesh-condition handling: error, warn or ignore"},
        {"output.path", "output file, - for stdout"},
        {"output.format", "csv or json"},
        {"output.target_s0", "evaluation spot price (default 100)"},
        {"output.target_x0", "evaluation log-price (alternative to target_s0)"},
    };
    return keys;
}

void apply_kv(RunConfig& cfg, const std::string& key, const std::string& value) {
    apply_kv_line(cfg, key, value, 0);
}

void validate_config(const RunConfig& cfg) {
    const auto& mk = cfg.market;
    if (!(std::isfinite(mk.r) && mk.r >= 0.0)) {
        throw ConfigError("market.r", "rate must be finite and nonnegative");
    }
    if (!(std::isfinite(mk.sigma) && mk.sigma > 0.0)) {
        throw ConfigError("market.sigma", "reference volatility must be positive");
    }
    if (!(std::isfinite(mk.sigma_low) && std::isfinite(mk.sigma_high) && mk.sigma_low > 0.0 &&
          mk.sigma_low <= mk.sigma_high)) {
        throw ConfigError("market.sigma_band",
                          "band must satisfy 0 < sigma_low <= sigma_high (got " +
                              fmt(mk.sigma_low) + ", " + fmt(mk.sigma_high) + ")");
    }
    if (!(std::isfinite(mk.T) && mk.T > 0.0)) {
        throw ConfigError("market.t", "maturity must be positive");
    }

    if (cfg.payoff_kind == PayoffKind::Butterfly) {
        if (!(cfg.k1 > 0.0 && cfg.k1 < cfg.k2)) {
            throw ConfigError("payoff.k1", "butterfly strikes must satisfy 0 < k1 < k2 (got " +
                                               fmt(cfg.k1) + ", " + fmt(cfg.k2) + ")");
        }
    } else if (!(cfg.k > 0.0)) {
        throw ConfigError("payoff.k", "strike must be positive");
    }

    if (cfg.x_min.has_value() != cfg.x_max.has_value()) {
        throw ConfigError("grid.x_min", "set both x_min and x_max or neither");
    }
    if (cfg.x_min && !(*cfg.x_min < *cfg.x_max)) {
        throw ConfigError("grid.x_min", "x_min must be below x_max");
    }
    if (cfg.m < 2) {
        throw ConfigError("grid.m", "need at least 2 spatial intervals");
    }
    if (cfg.n < 1) {
        throw ConfigError("grid.n", "need at least 1 time step");
    }
    if (cfg.reference_n < 1 || cfg.reference_m < 2) {
        throw ConfigError("grid.reference_n", "reference resolution is too small");
    }
    if (!(cfg.s_min > 0.0 && cfg.s_min < cfg.s_max)) {
        throw ConfigError("grid.s_min", "price bounds must satisfy 0 < s_min < s_max");
    }
    parse_ladder(cfg.ladder);
    parse_m_list(cfg.m_list);

    if (!(std::isfinite(cfg.scheme.picard_tol) && cfg.scheme.picard_tol > 0.0)) {
        throw ConfigError("scheme.picard_tol", "tolerance must be positive");
    }
    if (cfg.scheme.picard_max_iters < 1) {
        throw ConfigError("scheme.picard_max_iters", "iteration cap must be at least 1");
    }

    if (cfg.path.empty()) {
        throw ConfigError("output.path", "path must not be empty");
    }
    if (cfg.target_s0 && cfg.target_x0) {
        throw ConfigError("output.target_x0", "set at most one of target_s0 and target_x0");
    }
    if (cfg.target_s0 && !(*cfg.target_s0 > 0.0)) {
        throw ConfigError("output.target_s0", "spot target must be positive");
    }
    if (cfg.command == Command::Converge &&
        cfg.scheme.method == Method::ExplicitS) {
        throw ConfigError("scheme.method",
                          "converge runs on the log-price grid; use explicit-x or implicit-x");
    }
    const bool price_grid = cfg.command == Command::CompareDomains ||
                            cfg.scheme.method == Method::ExplicitS;
    if (price_grid) {
        const double s0 = std::exp(resolved_x0(cfg));
        if (!(s0 > cfg.s_min && s0 < cfg.s_max)) {
            throw ConfigError("output.target_s0",
                              "evaluation point lies outside (s_min, s_max)");
        }
    } else {
        const auto [x_lo, x_hi] = resolved_domain(cfg);
        const double x0 = resolved_x0(cfg);
        if (!(x0 >= x_lo && x0 <= x_hi)) {
            throw ConfigError("output.target_s0",
                              "evaluation point lies outside the grid domain");
        }
    }
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const auto comment = raw.find_first_of("#;");
        std::string line = trim(comment == std::string::npos ? raw : raw.substr(0, comment));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError("", with_line("unterminated section header", lineno));
            }
            section = trim(line.substr(1, line.size() - 2));
            if (section != "market" && section != "payoff" && section != "grid" &&
                section != "scheme" && section != "output") {
                throw ConfigError(section, with_line("unknown section", lineno));
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("", with_line("expected key = value", lineno));
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError("", with_line("empty key", lineno));
        }
        if (section.empty() && key != "command") {
            throw ConfigError(key, with_line("key appears before any section", lineno));
        }
        apply_kv_line(cfg, section.empty() ? key : section + "." + key, value, lineno);
    }
    validate_config(cfg);
    return cfg;
}

std::string render_config(const RunConfig& cfg) {
    std::ostringstream out;
    out << "command = " << to_string(cfg.command) << "\n\n";
    out << "[market]\n";
    out << "r = " << fmt(cfg.market.r) << '\n';
    out << "sigma = " << fmt(cfg.market.sigma) << '\n';
    out << "sigma_low = " << fmt(cfg.market.sigma_low) << '\n';
    out << "sigma_high = " << fmt(cfg.market.sigma_high) << '\n';
    out << "t = " << fmt(cfg.market.T) << "\n\n";
    out << "[payoff]\n";
    out << "kind = " << to_string(cfg.payoff_kind) << '\n';
    out << "k1 = " << fmt(cfg.k1) << '\n';
    out << "k2 = " << fmt(cfg.k2) << '\n';
    out << "k = " << fmt(cfg.k) << "\n\n";
    out << "[grid]\n";
    if (cfg.x_min) out << "x_min = " << fmt(*cfg.x_min) << '\n';
    if (cfg.x_max) out << "x_max = " << fmt(*cfg.x_max) << '\n';
    out << "m = " << cfg.m << '\n';
    out << "n = " << cfg.n << '\n';
    out << "ladder = " << cfg.ladder << '\n';
    out << "reference_n = " << cfg.reference_n << '\n';
    out << "reference_m = " << cfg.reference_m << '\n';
    out << "desk_scale = " << (cfg.desk_scale ? "true" : "false") << '\n';
    out << "s_min = " << fmt(cfg.s_min) << '\n';
    out << "s_max = " << fmt(cfg.s_max) << '\n';
    out << "m_list = " << cfg.m_list << "\n\n";
    out << "[scheme]\n";
    out << "method = " << to_string(cfg.scheme.method) << '\n';
    out << "picard_tol = " << fmt(cfg.scheme.picard_tol) << '\n';
    out << "picard_max_iters = " << cfg.scheme.picard_max_iters << '\n';
    out << "enforce_mesh = " << to_string(cfg.scheme.enforce_mesh_conditions) << "\n\n";
    out << "[output]\n";
    out << "path = " << cfg.path << '\n';
    out << "format = " << to_string(cfg.format) << '\n';
    if (cfg.target_s0) out << "target_s0 = " << fmt(*cfg.target_s0) << '\n';
    if (cfg.target_x0) out << "target_x0 = " << fmt(*cfg.target_x0) << '\n';
    return out.str();
}

std::pair<double, double> resolved_domain(const RunConfig& cfg) {
    if (cfg.x_min && cfg.x_max) {
        return {*cfg.x_min, *cfg.x_max};
    }
    // Payoff-dependent windows wide enough that the truncation error at the
    // evaluation region is far below the schemes' discretization error: the
    // localized butterfly needs little room, the discontinuous digital needs
    // a wide buffer before its boundary data dominates, calls/puts sit in
    // between.
    double center = 0.0;
    double half = 0.0;
    switch (cfg.payoff_kind) {
        case PayoffKind::Butterfly:
            center = std::log(0.5 * (cfg.k1 + cfg.k2));
            half = 3.625;
            break;
        case PayoffKind::Digital:
            center = std::log(cfg.k);
            half = 7.5;
            break;
        default:
            center = std::log(cfg.k);
            half = 5.0;
            break;
    }
    return {center - half, center + half};
}

double resolved_x0(const RunConfig& cfg) {
    if (cfg.target_x0) return *cfg.target_x0;
    return std::log(cfg.target_s0.value_or(100.0));
}

std::pair<int, int> resolved_reference(const RunConfig& cfg) {
    if (cfg.desk_scale) return {4096, 8192};
    return {cfg.reference_n, cfg.reference_m};
}

PayoffSpec make_payoff(const RunConfig& cfg) {
    switch (cfg.payoff_kind) {
        case PayoffKind::Butterfly:
            return PayoffSpec::butterfly(cfg.k1, cfg.k2);
        case PayoffKind::Digital:
            return PayoffSpec::digital(cfg.k);
        case PayoffKind::Call:
            return PayoffSpec::call(cfg.k);
        case PayoffKind::Put:
            return PayoffSpec::put(cfg.k);
        default:
            throw ConfigError("payoff.kind", "unsupported payoff kind");
    }
}

std::vector<std::pair<int, int>> parse_ladder(const std::string& text) {
    std::vector<std::pair<int, int>> ladder;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        const auto x = item.find('x');
        if (x == std::string::npos) {
            throw ConfigError("grid.ladder", "expected NxM, got '" + item + "'");
        }
        const int n = parse_int("grid.ladder", trim(item.substr(0, x)), 0);
        const int m = parse_int("grid.ladder", trim(item.substr(x + 1)), 0);
        if (n < 1 || m < 2) {
            throw ConfigError("grid.ladder", "level '" + item + "' is too small");
        }
        ladder.emplace_back(n, m);
    }
    if (ladder.empty()) {
        throw ConfigError("grid.ladder", "ladder must contain at least one NxM level");
    }
    return ladder;
}

std::vector<int> parse_m_list(const std::string& text) {
    std::vector<int> list;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        const int m = parse_int("grid.m_list", item, 0);
        if (m < 2) {
            throw ConfigError("grid.m_list", "resolution '" + item + "' is too small");
        }
        list.push_back(m);
    }
    if (list.empty()) {
        throw ConfigError("grid.m_list", "m_list must contain at least one resolution");
    }
    return list;
}

std::string to_string(Command c) {
    switch (c) {
        case Command::Price: return "price";
        case Command::Converge: return "converge";
        case Command::CompareDomains: return "compare-domains";
        case Command::Iterations: return "iterations";
    }
    return "?";
}

std::string to_string(OutputFormat f) {
    return f == OutputFormat::Csv ? "csv" : "json";
}

std::string to_string(Method m) {
    switch (m) {
        case Method::ExplicitX: return "explicit-x";
        case Method::ImplicitX: return "implicit-x";
        case Method::ExplicitS: return "explicit-s";
    }
    return "?";
}

std::string to_string(MeshEnforcement e) {
    switch (e) {
        case MeshEnforcement::Error: return "error";
        case MeshEnforcement::Warn: return "warn";
        case MeshEnforcement::Ignore: return "ignore";
    }
    return "?";
}

std::string to_string(PayoffKind k) {
    switch (k) {
        case PayoffKind::Butterfly: return "butterfly";
        case PayoffKind::Digital: return "digital";
        case PayoffKind::Call: return "call";
        case PayoffKind::Put: return "put";
        case PayoffKind::Tabulated: return "tabulated";
    }
    return "?";
}

}  // namespace gbs::cli
