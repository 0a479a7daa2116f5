#include "gpscatter/potential.hpp"

#include <cmath>
#include <stdexcept>

namespace gpscatter {

namespace {
constexpr double hbar_si = 1.054571817e-34; // J s
} // namespace

Complex eval_potential_at(const PotentialSpec& spec, double x) {
    const double u = x / spec.obstacle_width;
    const double gauss = std::exp(-u * u);
    const double dxc = x - spec.trap_center;
    return {0.5 * dxc * dxc + spec.v0 * gauss, spec.w0 * x * gauss};
}

std::vector<Complex> eval_potential(const PotentialSpec& spec, const Grid& grid) {
    if (!(spec.obstacle_width > 0.0))
        throw std::invalid_argument("PotentialSpec: obstacle_width must be positive");
    std::vector<Complex> v(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j)
        v[j] = eval_potential_at(spec, grid.x(j));
    return v;
}

double pt_violation(const Grid& grid, std::span<const Complex> field) {
    if (field.size() != grid.size())
        throw std::invalid_argument("pt_violation: length mismatch");
    double worst = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const Complex d = field[j] - std::conj(field[grid.reflect(j)]);
        worst = std::max(worst, std::abs(d));
    }
    return worst;
}

double pt_symmetry_check(const PotentialSpec& spec, const Grid& grid) {
    if (spec.trap_center != 0.0)
        throw std::invalid_argument(
            "pt_symmetry_check: requires trap_center = 0");
    return pt_violation(grid, eval_potential(spec, grid));
}

double nondimensionalize(const DimensionalParams& p) {
    if (p.atom_count <= 0)
        throw std::invalid_argument("nondimensionalize: atom_count must be positive");
    if (p.scattering_length_m < 0.0)
        throw std::invalid_argument("nondimensionalize: negative scattering length");
    if (!(p.omega_radial > 0.0) || !(p.omega_axial > 0.0) || !(p.mass_kg > 0.0))
        throw std::invalid_argument(
            "nondimensionalize: frequencies and mass must be positive");
    const double osc_length = std::sqrt(hbar_si / (p.mass_kg * p.omega_axial));
    return 2.0 * static_cast<double>(p.atom_count) * p.omega_radial *
           p.scattering_length_m / (p.omega_axial * osc_length);
}

} // namespace gpscatter
