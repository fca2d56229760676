#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gbs/market.hpp"
#include "gbs/schemes.hpp"

namespace gbs::cli {

enum class Command { Price, Converge, CompareDomains, Iterations };

enum class OutputFormat { Csv, Json };

// A fully parsed run description. Strikes and payoff kind are stored as plain
// fields (not a PayoffSpec) so configurations stay comparable and renderable;
// list-valued keys keep their textual form and are validated at parse time.
struct RunConfig {
    Command command = Command::Price;

    MarketParams market{0.1, 1.0, 0.15, 0.25, 0.25};

    PayoffKind payoff_kind = PayoffKind::Butterfly;
    double k1 = 90.0;   // butterfly lower strike
    double k2 = 110.0;  // butterfly upper strike
    double k = 100.0;   // digital / call / put strike

    // Log-price truncation bounds; when unset a payoff-dependent default
    // window around the strike is used (see resolved_domain).
    std::optional<double> x_min;
    std::optional<double> x_max;
    int m = 1280;  // spatial intervals (price / iterations commands)
    int n = 1024;  // time steps (price / iterations commands)
    std::string ladder = "16x160,64x320,256x640,1024x1280";  // converge: NxM list
    int reference_n = 16384;
    int reference_m = 20480;
    bool desk_scale = false;  // shrink the reference to (4096, 8192)
    double s_min = 50.0;      // compare-domains price bounds
    double s_max = 150.0;
    std::string m_list = "200,400,800";  // compare-domains resolutions

    SchemeConfig scheme;

    std::string path = "-";  // "-" writes to stdout
    OutputFormat format = OutputFormat::Csv;
    std::optional<double> target_s0;  // evaluation point, at most one of the
    std::optional<double> target_x0;  // two forms (default S0 = 100)

    bool operator==(const RunConfig&) const = default;
};

// The documented configuration schema, in render order. `key` is the
// fully-qualified name ("market.r"); `help` is the one-line description shown
// by the command-line front end.
struct ConfigKey {
    const char* key;
    const char* help;
};
const std::vector<ConfigKey>& config_keys();

// Applies one key/value pair; throws ConfigError naming the key for unknown
// keys or unparsable values.
void apply_kv(RunConfig& cfg, const std::string& key, const std::string& value);

// Cross-field validation with field-level messages (band ordering, strike
// layout, grid bounds, ladder/list syntax, target exclusivity).
void validate_config(const RunConfig& cfg);

// Parses INI-style text: optional top-level `command` key, then sections
// [market] [payoff] [grid] [scheme] [output]. '#' and ';' start comments.
// The result is validated. Errors carry the offending line number.
RunConfig parse_config(const std::string& text);

// Deterministic INI rendering; parse_config(render_config(cfg)) == cfg for
// every valid cfg.
std::string render_config(const RunConfig& cfg);

// --- resolved views used by the runner ---

// Effective log-price bounds: explicit values when set, otherwise a window
// centered on ln(strike) wide enough for the payoff's tail behavior.
std::pair<double, double> resolved_domain(const RunConfig& cfg);

// Evaluation point as a log-price (target_x0, or ln of target_s0 / 100).
double resolved_x0(const RunConfig& cfg);

// Effective reference resolution, honoring desk_scale.
std::pair<int, int> resolved_reference(const RunConfig& cfg);

PayoffSpec make_payoff(const RunConfig& cfg);

std::vector<std::pair<int, int>> parse_ladder(const std::string& text);
std::vector<int> parse_m_list(const std::string& text);

std::string to_string(Command c);
std::string to_string(OutputFormat f);
std::string to_string(Method m);
std::string to_string(MeshEnforcement e);
std::string to_string(PayoffKind k);

}  // namespace gbs::cli
