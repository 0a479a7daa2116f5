#pragma once

#include <string>

#include "gpscatter/config.hpp"
#include "gpscatter/observables.hpp"

namespace gpscatter {

/// CLI exit codes.
enum ExitCode : int {
    exit_ok = 0,
    exit_config_error = 2,
    exit_numerical_error = 3,
    exit_io_error = 4,
};

/// Dispatches cfg.command. Throws ConfigError / NumericalError / IoError;
/// the CLI maps those to exit codes.
void run_command(const ExperimentConfig& cfg);

void run_groundstate(const ExperimentConfig& cfg); // psi0.bin, summary.csv
void run_evolve(const ExperimentConfig& cfg);      // timeseries.csv, density.bin
void run_variational(const ExperimentConfig& cfg); // var_timeseries.csv
void run_compare(const ExperimentConfig& cfg);     // compare.csv, report.csv
void run_sweep(const ExperimentConfig& cfg);       // sweep.csv

/// Ground state for the preparation trap: loads output_dir/psi0.bin when
/// present (validating the grid), otherwise relaxes inline.
Wavefunction obtain_initial_state(const ExperimentConfig& cfg, const Grid& grid);

/// Variational initial condition used by every comparison: center x_init at
/// rest, equilibrium width for g_s, b = 0.
VariationalState initial_variational_state(const ExperimentConfig& cfg);

} // namespace gpscatter
