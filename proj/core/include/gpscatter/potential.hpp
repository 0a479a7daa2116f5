#pragma once

#include <span>
#include <vector>

#include "gpscatter/grid.hpp"

namespace gpscatter {

/// External potential parameters, all in oscillator units:
///   V(x) = (x - trap_center)^2/2 + v0 exp(-(x/w)^2) + i w0 x exp(-(x/w)^2)
/// with w = obstacle_width. v0 < 0 is a well, v0 > 0 a barrier. w0 > 0 puts
/// gain on x > 0 and loss on x < 0; the imaginary part is odd about x = 0,
/// so with trap_center = 0 the potential satisfies V(x) = conj(V(-x)).
struct PotentialSpec {
    double trap_center = 0.0;
    double v0 = 0.0;
    double w0 = 0.0;
    double obstacle_width = 1.0;
};

/// Point evaluation of V(x).
Complex eval_potential_at(const PotentialSpec& spec, double x);

/// V sampled on the lattice.
std::vector<Complex> eval_potential(const PotentialSpec& spec, const Grid& grid);

/// Max over lattice-reflected pairs of |f(x_j) - conj(f(-x_j))| for an
/// arbitrary complex field.
double pt_violation(const Grid& grid, std::span<const Complex> field);

/// pt_violation of the sampled potential. Throws std::invalid_argument when
/// trap_center != 0 (the symmetry condition does not apply off-center).
double pt_symmetry_check(const PotentialSpec& spec, const Grid& grid);

/// Trap/atom numbers in SI units, for converting to the dimensionless
/// interaction strength.
struct DimensionalParams {
    long long atom_count = 0;           // N
    double scattering_length_m = 0.0;   // a_s
    double omega_radial = 0.0;          // omega_r, rad/s
    double omega_axial = 0.0;           // omega_x, rad/s
    double mass_kg = 0.0;               // m
};

/// g_s = 2 N omega_r a_s / (omega_x L), L = sqrt(hbar/(m omega_x)).
/// Throws std::invalid_argument for non-positive N, frequencies, or mass;
/// a_s = 0 is allowed (ideal gas) but negative a_s is not.
double nondimensionalize(const DimensionalParams& p);

} // namespace gpscatter
