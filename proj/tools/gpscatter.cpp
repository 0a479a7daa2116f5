// Command-line harness for the quasi-1D condensate scattering laboratory.
//
//   gpscatter <groundstate|evolve|variational|compare|sweep>
//             --config <path> [--out <dir>] [--jobs N]
//
// The GPSCATTER_JOBS environment variable overrides --jobs. Exit codes:
// 0 success, 2 config error, 3 numerical failure, 4 I/O error.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "gpscatter/errors.hpp"
#include "gpscatter/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Quasi-1D GPE scattering laboratory"};
    app.require_subcommand(1);

    struct Args {
        std::string config_path;
        std::string out_dir;
        int jobs = -1;
    };
    Args args;
    std::string selected;

    for (const char* name :
         {"groundstate", "evolve", "variational", "compare", "sweep"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", args.config_path, "experiment config file")
            ->required();
        sub->add_option("--out", args.out_dir, "override run.output_dir");
        sub->add_option("--jobs", args.jobs, "sweep worker count");
        sub->callback([&selected, name]() { selected = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : gpscatter::exit_config_error;
    }

    try {
        gpscatter::ExperimentConfig cfg =
            gpscatter::parse_config_file(args.config_path);
        if (!cfg.command.empty() && cfg.command != selected)
            throw gpscatter::ConfigError(
                "config run.command='" + cfg.command +
                "' does not match CLI subcommand '" + selected + "'");
        cfg.command = selected;
        if (!args.out_dir.empty()) cfg.output_dir = args.out_dir;
        if (args.jobs >= 0) cfg.jobs = args.jobs;
        if (const char* env = std::getenv("GPSCATTER_JOBS"))
            cfg.jobs = std::atoi(env);

        gpscatter::run_command(cfg);
        return gpscatter::exit_ok;
    } catch (const gpscatter::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return gpscatter::exit_config_error;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return gpscatter::exit_config_error;
    } catch (const gpscatter::NumericalError& e) {
        std::cerr << "numerical failure at step " << e.step() << " (t=" << e.time()
                  << "): " << e.what() << "\n";
        return gpscatter::exit_numerical_error;
    } catch (const gpscatter::IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return gpscatter::exit_io_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return gpscatter::exit_numerical_error;
    }
}
