#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "gpscatter/grid.hpp"
#include "gpscatter/potential.hpp"
#include "gpscatter/propagator.hpp"

namespace gpscatter {

/// Flat INI-style experiment description. Sections and keys are fixed;
/// unknown sections or keys are hard errors so stale configs cannot drift
/// silently. All values live in oscillator units.
struct ExperimentConfig {
    // [grid]
    long n = 8192;
    double dx = 0.0177;

    // [physics]
    double g_s = 30.0;
    double v0 = 0.0;
    double w0 = 0.0;
    double obstacle_width = 1.0;
    double x_init = 35.0;

    // [time]
    double dt = 1e-4;
    double t_final = 25.0;
    long snapshot_stride = 100;
    long density_stride = 2500;
    double imag_dt = 1e-3;
    double imag_tol = 1e-10;
    long max_imag_steps = 500000;

    // [run]
    std::string command;   // optional in the file; the CLI subcommand wins
    std::string output_dir = "out";
    std::vector<double> sweep_v0;
    std::vector<double> sweep_w0;
    double center_threshold = 2.0;

    // Worker count for sweeps. Not a config-file key (it never changes the
    // output bytes); set from --jobs or GPSCATTER_JOBS. 0 = hardware
    // concurrency.
    int jobs = 0;
};

/// Parses and validates. Throws ConfigError with file/line context.
ExperimentConfig parse_config_text(std::string_view text);
ExperimentConfig parse_config_file(const std::string& path);

/// Structural validation (positivity, power-of-two n, stride divisibility,
/// sweep lists when command = sweep). Throws ConfigError.
void validate_config(const ExperimentConfig& cfg);

/// Canonical deterministic echo of the full effective config, suitable for
/// re-parsing and for provenance headers (17 significant digits on floats).
std::string canonical_config_text(const ExperimentConfig& cfg);

/// Derived pieces.
Grid make_grid(const ExperimentConfig& cfg);
PotentialSpec preparation_spec(const ExperimentConfig& cfg); // trap at x_init, no obstacle
PotentialSpec scattering_spec(const ExperimentConfig& cfg);  // trap at 0, obstacle + PT term
SolverConfig solver_config(const ExperimentConfig& cfg);
PhysicsParams scattering_params(const ExperimentConfig& cfg);

/// "%.17g" float formatting used for every CSV value.
std::string format_g17(double v);

} // namespace gpscatter
