#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "tunnelstat/config.hpp"

namespace {

// Exit codes: 0 ok, 2 config error, 3 computation error, 4 invariant violation.
constexpr int kExitConfig = 2;
constexpr int kExitCompute = 3;
constexpr int kExitInvariant = 4;

void write_dataset(const tunnelstat::Dataset& ds, const std::string& out_path) {
    const std::string csv = ds.to_csv();
    if (out_path.empty()) {
        std::cout << csv;
        return;
    }
    std::ofstream os(out_path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open output file '" + out_path + "'");
    os << csv;
}

int run(int argc, char** argv) {
    CLI::App app{"Two-particle tunnelling statistics for 1D barriers"};
    app.require_subcommand(1);

    std::string tag, config_path, out_path;

    auto* fig = app.add_subcommand("figure", "emit a built-in dataset as CSV");
    fig->add_option("tag", tag, "one of fig2, fig3a, fig3b, fig4a, fig4b")
        ->required();
    fig->add_option("--out", out_path, "output path (default: stdout)");

    auto* sweep = app.add_subcommand("sweep", "outcome statistics over a T sweep");
    sweep->add_option("--config", config_path, "run configuration file")
        ->required();
    sweep->add_option("--out", out_path, "output path (default: stdout)");

    auto* reso = app.add_subcommand("resonances", "locate transparency peaks");
    reso->add_option("--config", config_path, "run configuration file")->required();
    reso->add_option("--out", out_path, "output path (default: stdout)");

    auto* check = app.add_subcommand("oracle-check",
                                     "momentum pipeline vs time-domain propagation");
    check->add_option("--config", config_path, "run configuration file")
        ->required();
    check->add_option("--out", out_path, "output path (default: stdout)");

    CLI11_PARSE(app, argc, argv);

    tunnelstat::Dataset ds;
    if (fig->parsed()) {
        ds = tunnelstat::run_figure(tag);
    } else {
        const tunnelstat::RunConfig cfg = tunnelstat::parse_config_file(config_path);
        if (out_path.empty()) out_path = cfg.output_path;
        if (sweep->parsed())
            ds = tunnelstat::run_sweep(cfg);
        else if (reso->parsed())
            ds = tunnelstat::run_resonances(cfg);
        else
            ds = tunnelstat::run_oracle_check(cfg);
    }
    write_dataset(ds, out_path);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const tunnelstat::InvariantViolation& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return kExitInvariant;
    } catch (const tunnelstat::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCompute;
    }
}
