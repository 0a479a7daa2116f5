#pragma once

#include <vector>

#include "gpscatter/grid.hpp"

namespace gpscatter {

/// Reduced Gaussian-ansatz coordinates: center x0, center velocity v = x0',
/// width a (> 0), width velocity b = a'. The ansatz
///   psi = (a sqrt(pi))^{-1/2} exp(-(x-x0)^2/(2a^2) + i x alpha + i x^2 beta)
/// carries phase parameters alpha = v - x0 b / a and beta = b/(2a); these are
/// used only for wavefunction reconstruction, never in the dynamics.
struct VariationalState {
    double x0 = 0.0;
    double v = 0.0;
    double a = 1.0;
    double b = 0.0;
    double t = 0.0;

    double zeta() const { return 1.0 + a * a; }
};

/// Width floor below which the reduced dynamics are considered collapsed.
inline constexpr double variational_min_width = 1e-6;

/// Second derivatives (x0'', a'') of the reduced system.
struct VariationalRhs {
    double x0_dd = 0.0;
    double a_dd = 0.0;
};

/// Conservative reduced dynamics (no gain/loss):
///   x0'' = -x0 + 2 v0 x0 e^{-x0^2/z} / z^{3/2}
///   a''  = -a + 1/a^3 + g_s/(sqrt(2 pi) a^2)
///          + 2 v0 a e^{-x0^2/z} / z^{3/2} (1 - 2 x0^2/z),   z = 1 + a^2.
/// Throws std::invalid_argument on width underflow (a <= 1e-6).
VariationalRhs rhs_conservative(const VariationalState& s, double v0, double g_s);

/// Full reduced dynamics including the gain/loss terms (quadratic in w0 plus
/// velocity couplings linear in w0). Reduces exactly to rhs_conservative at
/// w0 = 0.
VariationalRhs rhs_full(const VariationalState& s, double v0, double w0, double g_s);

/// Stationary width of the conservative width equation at x0 = 0: the
/// positive root of
///   -a + 1/a^3 + g_s/(sqrt(2 pi) a^2) + 2 v0 a/(1+a^2)^{3/2} = 0,
/// found by bracketed bisection to 1e-12. For v0 = 0 this is the unique
/// positive root of a^4 - g_s a/sqrt(2 pi) - 1 = 0.
double equilibrium_width(double g_s, double v0 = 0.0);

/// Energy surrogate conserved by the conservative reduced dynamics:
///   v^2/2 + x0^2/2 + b^2/4 + 1/(4a^2) + a^2/4 + g_s/(2 sqrt(2 pi) a)
///   + v0 e^{-x0^2/z}/sqrt(z).
/// (This is the GP energy functional evaluated on the ansatz.)
double variational_energy(const VariationalState& s, double g_s, double v0 = 0.0);

/// Classical RK4 on (x0, v, a, b) with fixed step dt, sampled every
/// sample_stride steps (the initial state and the final state are always
/// included). Throws std::invalid_argument for dt outside (0, 1e-3] and
/// NumericalError (with t) on width underflow or non-finite state.
std::vector<VariationalState> integrate_ode(const VariationalState& s0,
                                            double v0, double w0, double g_s,
                                            double dt, double t_final,
                                            long sample_stride = 1);

/// Gaussian ansatz sampled on the grid (unit continuum norm by construction).
Wavefunction ansatz_wavefunction(const VariationalState& s, const Grid& grid);

} // namespace gpscatter
