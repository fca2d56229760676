// Command-line front end: an INI configuration file plus per-key override
// flags select one of the four run modes (price, converge, compare-domains,
// iterations); results are written as CSV or JSON.

#include <cstdio>
#include <exception>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cli/config.hpp"
#include "cli/run.hpp"
#include "gbs/errors.hpp"

namespace {

std::string flag_name(const std::string& key) {
    std::string name = "--" + key;
    for (char& c : name) {
        if (c == '.') c = '-';
    }
    return name;
}

std::string slurp(const std::string& path) {
    std::ifstream file(path);
    if (!file) {
        throw gbs::IoError("cannot read configuration file '" + path + "'");
    }
    std::ostringstream text;
    text << file.rdbuf();
    return text.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-difference pricing engine for European options under an uncertain "
                 "volatility band"};
    app.require_subcommand(0, 1);

    std::string config_path;
    app.add_option("--config", config_path, "INI configuration file (sections market, payoff, "
                                            "grid, scheme, output)")
        ->check(CLI::ExistingFile);
    bool dump = false;
    app.add_flag("--dump-config", dump, "print the effective configuration and exit");

    const auto& keys = gbs::cli::config_keys();
    std::vector<std::string> values(keys.size());
    std::vector<CLI::Option*> options(keys.size());
    for (std::size_t i = 0; i < keys.size(); ++i) {
        options[i] = app.add_option(flag_name(keys[i].key), values[i], keys[i].help);
    }

    CLI::App* price = app.add_subcommand("price", "price one contract on one grid");
    CLI::App* converge = app.add_subcommand("converge", "run a grid-refinement study");
    CLI::App* compare =
        app.add_subcommand("compare-domains", "explicit scheme on price vs. log-price grids");
    CLI::App* iterations =
        app.add_subcommand("iterations", "per-time-step inner iteration counts");
    for (CLI::App* sub : {price, converge, compare, iterations}) {
        sub->fallthrough();
    }

    CLI11_PARSE(app, argc, argv);

    try {
        gbs::cli::RunConfig cfg;
        if (!config_path.empty()) {
            cfg = gbs::cli::parse_config(slurp(config_path));
        }
        for (std::size_t i = 0; i < keys.size(); ++i) {
            if (options[i]->count() > 0) {
                gbs::cli::apply_kv(cfg, keys[i].key, values[i]);
            }
        }
        if (price->parsed()) cfg.command = gbs::cli::Command::Price;
        if (converge->parsed()) cfg.command = gbs::cli::Command::Converge;
        if (compare->parsed()) cfg.command = gbs::cli::Command::CompareDomains;
        if (iterations->parsed()) cfg.command = gbs::cli::Command::Iterations;

        if (dump) {
            gbs::cli::validate_config(cfg);
            std::printf("%s", gbs::cli::render_config(cfg).c_str());
            return 0;
        }
        return gbs::cli::run(cfg);
    } catch (...) {
        return gbs::cli::report_error(std::current_exception());
    }
}
