#pragma once

#include <functional>
#include <vector>

#include "gpscatter/grid.hpp"
#include "gpscatter/potential.hpp"

namespace gpscatter {

enum class TimeMode { real_time, imaginary_time };

/// Stepping parameters. dt and t_final are dimensionless (oscillator units);
/// imag_dt/imag_tol govern the imaginary-time relaxation used for ground
/// states.
struct SolverConfig {
    double dt = 1e-4;
    double t_final = 25.0;
    long snapshot_stride = 100;
    TimeMode mode = TimeMode::real_time;
    double imag_dt = 1e-3;
    double imag_tol = 1e-10;
    long max_imag_steps = 500000;
};

/// Dimensionless interaction strength plus the external potential.
struct PhysicsParams {
    double g_s = 30.0;
    PotentialSpec spec;
};

/// Called with completed-step snapshots; psi.t carries the sample time.
/// Snapshots are read-only views of internal state and must be copied if
/// retained.
using Observer = std::function<void(long step, const Wavefunction& psi)>;

/// Result of a real-time evolution. norm2_trace[s] is the squared norm after
/// step s (entry 0 is the initial norm), recorded every step regardless of
/// the snapshot stride.
struct Evolution {
    Wavefunction psi;
    std::vector<double> norm2_trace;
    long steps = 0;
};

struct GroundState {
    Wavefunction psi;
    double energy = 0.0;
    long iterations = 0;
};

/// Strang-split spectral stepper for the dimensionless GPE
///   i dpsi/dt = [-1/2 d^2/dx^2 + V_R + i V_I + g_s |psi|^2] psi
/// with the ordering kinetic-half, potential-full, kinetic-half. The
/// diagonal substep is integrated in closed form, including the |psi|^2
/// growth law under gain/loss (see potential_substep). One instance holds
/// the FFT plans and phase tables for a fixed (grid, potential, g_s, dt);
/// use one instance per thread.
class Propagator {
public:
    Propagator(const Grid& grid, std::vector<Complex> potential, double g_s, double dt);
    Propagator(const Grid& grid, const PhysicsParams& params, double dt);

    const Grid& grid() const { return grid_; }
    double dt() const { return dt_; }

    /// One Strang step in place; advances psi.t by dt. Throws NumericalError
    /// if the state stops being finite.
    void step(Wavefunction& psi);

    /// Advances round(t_final/dt) steps. The observer fires at step 0, every
    /// snapshot_stride steps, and at the final step. Consecutive kinetic
    /// half-steps between snapshots are fused into full spectral steps; the
    /// operator product is identical to repeated step().
    Evolution evolve(Wavefunction psi, double t_final, long snapshot_stride,
                     const Observer& observer = {});

private:
    double potential_substep_inplace(std::vector<Complex>& amp, long step_index) const;

    Grid grid_;
    SpectralTransform fft_;
    double g_s_;
    double dt_;
    bool has_gain_ = false;
    std::vector<double> vr_;        // Re V
    std::vector<double> vi_;        // Im V
    std::vector<double> vr_dt_;     // Re V * dt
    std::vector<double> amp_fac_;   // e^{V_I dt}
    std::vector<double> amp_fac2_;  // e^{2 V_I dt}
    std::vector<double> gain_fac_;  // (e^{2 V_I dt} - 1)/(2 V_I)
    std::vector<Complex> kin_half_n_;  // e^{-i (k^2/2)(dt/2)} / n
    std::vector<Complex> kin_full_n_;  // e^{-i (k^2/2) dt} / n
};

/// One Strang step of psi under params (convenience wrapper; builds a
/// throwaway Propagator).
Wavefunction step_real(const Wavefunction& psi, const PhysicsParams& params, double dt);

/// Exact diagonal substep: solves i dpsi/dt = (V_R + i V_I + g_s|psi|^2) psi
/// pointwise over dt, using |psi(s)|^2 = |psi(0)|^2 e^{2 V_I s}:
///   psi <- psi * e^{V_I dt} * e^{-i (V_R dt + g_s |psi0|^2 G)},
///   G = (e^{2 V_I dt} - 1)/(2 V_I)  (Taylor limit dt(1 + V_I dt) for
///   |2 V_I dt| <= 1e-8).
Wavefunction potential_substep(const Wavefunction& psi, const PhysicsParams& params, double dt);

/// GP energy functional (real part of the potential only):
///   E = integral( |dpsi/dx|^2/2 + V_R |psi|^2 + g_s/2 |psi|^4 ) dx,
/// kinetic term evaluated spectrally.
double gp_energy(const Wavefunction& psi, std::span<const double> v_real,
                 double g_s, const SpectralTransform* fft = nullptr);
double gp_energy(const Wavefunction& psi, const PhysicsParams& params);

/// Instantaneous norm growth rate 2 integral(V_I |psi|^2) dx.
double norm_rate(const Wavefunction& psi, const PotentialSpec& spec);

/// Normalized imaginary-time relaxation to the ground state, starting from a
/// unit-norm width-1 Gaussian at the trap center. Runs a main stage at
/// cfg.imag_dt until the relative energy change per step drops below
/// cfg.imag_tol, then a refinement stage at cfg.imag_dt/4 (the Strang
/// fixed-point bias scales as dtau^2, and the refinement brings the width
/// bias below observable-level tolerances). Requires spec.w0 == 0. Throws
/// NumericalError if cfg.max_imag_steps is exhausted before convergence.
/// When energy_trace is given, the per-iteration GP energies are appended.
GroundState ground_state(const Grid& grid, const PhysicsParams& params,
                         const SolverConfig& cfg,
                         std::vector<double>* energy_trace = nullptr);

/// Real-time evolution driven by cfg (dt, t_final, snapshot_stride).
/// Requires cfg.mode == real_time.
Evolution evolve(const Wavefunction& psi0, const PhysicsParams& params,
                 const SolverConfig& cfg, const Observer& observer = {});

} // namespace gpscatter
