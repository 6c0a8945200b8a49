// spinpair-cli: figure data, stage timeline and exact-discord checks.
//
//   spinpair-cli figure <1a|1b|1c|2|3|4|5> [--config f] [--out f] [--format csv|json] [--grid n]
//   spinpair-cli timeline [...]
//   spinpair-cli discord-exact --stage prep|deco|relax --time x [...]
//   spinpair-cli validate-config --config f
//
// Exit codes: 0 ok, 2 configuration or usage error, 3 numerical failure.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>

#include "spinpair/cli/config.hpp"
#include "spinpair/cli/figures.hpp"
#include "spinpair/cli/table.hpp"

namespace {

using namespace spinpair;
using namespace spinpair::cli;

struct CommonOptions {
    std::string config_path;
    std::string out;
    std::string format;
    std::optional<int> grid;
    bool bits = false;
};

void add_common(CLI::App *cmd, CommonOptions &opts) {
    cmd->add_option("--config", opts.config_path, "JSON config file (defaults to gypsum values)");
    cmd->add_option("--out", opts.out, "output file (default: config 'output', else stdout)");
    cmd->add_option("--format", opts.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--grid", opts.grid, "rows per curve")->check(CLI::Range(2, 1'000'000));
    cmd->add_flag("--bits", opts.bits, "report measures in bits instead of nats");
}

RunConfig resolve(const CommonOptions &opts) {
    RunConfig cfg = opts.config_path.empty() ? parse_config(nlohmann::json::object())
                                             : load_config(opts.config_path);
    if (opts.grid)
        cfg.grid = *opts.grid;
    if (!opts.format.empty())
        cfg.format = opts.format;
    if (!opts.out.empty())
        cfg.output = opts.out;
    return cfg;
}

void check_finite(const Table &table, const std::vector<std::string> &allow_nan = {}) {
    for (const auto &row : table.rows)
        for (std::size_t i = 0; i < row.size(); ++i)
            if (const auto *x = std::get_if<double>(&row[i]); x && !std::isfinite(*x)) {
                bool allowed = false;
                for (const auto &name : allow_nan)
                    allowed = allowed || table.columns[i] == name;
                if (!allowed)
                    throw NumericalError("non-finite value in column '" + table.columns[i] + "'");
            }
}

void emit(const Table &table, const RunConfig &cfg) {
    auto write = [&](std::ostream &out) {
        if (cfg.format == "json")
            write_json(out, table);
        else
            write_csv(out, table);
    };
    if (cfg.output.empty() || cfg.output == "-") {
        write(std::cout);
        return;
    }
    std::ofstream file(cfg.output, std::ios::binary);
    if (!file)
        throw ConfigError("output", "cannot write '" + cfg.output + "'");
    write(file);
}

double units(const CommonOptions &opts) { return opts.bits ? 1.0 / std::numbers::ln2 : 1.0; }

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Discord dynamics of a dipole-coupled spin pair"};
    app.require_subcommand(1);

    CommonOptions figure_opts;
    std::string figure_id;
    auto *figure = app.add_subcommand("figure", "write the data behind one figure");
    figure->add_option("id", figure_id, "1a, 1b, 1c, 2, 3, 4 or 5")->required();
    add_common(figure, figure_opts);

    CommonOptions timeline_opts;
    auto *timeline = app.add_subcommand("timeline", "preparation, decoherence and relaxation on one time axis");
    add_common(timeline, timeline_opts);

    CommonOptions exact_opts;
    std::string stage = "prep";
    double time = 0.25;
    auto *exact = app.add_subcommand("discord-exact", "exact discord at the inflated beta0 vs closed forms");
    exact->add_option("--stage", stage, "prep, deco or relax")
        ->check(CLI::IsMember({"prep", "deco", "relax"}));
    exact->add_option("--time", time,
                      "omega_D tau / pi (prep), t / tau_D (deco) or t / T_L (relax)");
    add_common(exact, exact_opts);

    CommonOptions validate_opts;
    auto *validate = app.add_subcommand("validate-config", "check a config and print it resolved");
    add_common(validate, validate_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*figure) {
            const RunConfig cfg = resolve(figure_opts);
            const Table table = run_figure(parse_figure(figure_id), cfg, units(figure_opts));
            check_finite(table);
            emit(table, cfg);
        } else if (*timeline) {
            const RunConfig cfg = resolve(timeline_opts);
            const Table table = run_timeline(cfg, units(timeline_opts));
            check_finite(table);
            emit(table, cfg);
        } else if (*exact) {
            const RunConfig cfg = resolve(exact_opts);
            const Table table = run_discord_exact(cfg, parse_stage(stage), time, units(exact_opts));
            check_finite(table, {"relative_gap", "direction_error"});
            emit(table, cfg);
        } else if (*validate) {
            const RunConfig cfg = resolve(validate_opts);
            std::cout << to_json(cfg).dump(2) << '\n';
        }
    } catch (const ConfigError &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const NumericalError &e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const DomainError &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
