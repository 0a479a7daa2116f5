#include "gpscatter/propagator.hpp"

#include <cmath>
#include <stdexcept>

#include "gpscatter/errors.hpp"

namespace gpscatter {

namespace {

inline void sincos_fast(double x, double& s, double& c) {
#if defined(__GNUC__)
    __builtin_sincos(x, &s, &c);
#else
    s = std::sin(x);
    c = std::cos(x);
#endif
}

// (e^{2 v s} - 1)/(2 v) with the Taylor limit for small |2 v s|.
inline double gain_integral(double v, double s) {
    const double arg = 2.0 * v * s;
    if (std::abs(arg) > 1e-8) return (std::exp(arg) - 1.0) / (2.0 * v);
    return s * (1.0 + v * s);
}

} // namespace

Propagator::Propagator(const Grid& grid, std::vector<Complex> potential,
                       double g_s, double dt)
    : grid_(grid), fft_(grid), g_s_(g_s), dt_(dt) {
    if (potential.size() != grid.size())
        throw std::invalid_argument("Propagator: potential length mismatch");
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw std::invalid_argument("Propagator: dt must be positive");
    if (g_s < 0.0)
        throw std::invalid_argument("Propagator: g_s must be >= 0");

    const std::size_t n = grid.size();
    vr_.resize(n);
    vi_.resize(n);
    vr_dt_.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        vr_[j] = potential[j].real();
        vi_[j] = potential[j].imag();
        vr_dt_[j] = vr_[j] * dt;
        if (vi_[j] != 0.0) has_gain_ = true;
    }
    if (has_gain_) {
        amp_fac_.resize(n);
        amp_fac2_.resize(n);
        gain_fac_.resize(n);
        for (std::size_t j = 0; j < n; ++j) {
            amp_fac_[j] = std::exp(vi_[j] * dt);
            amp_fac2_[j] = amp_fac_[j] * amp_fac_[j];
            gain_fac_[j] = gain_integral(vi_[j], dt);
        }
    }
    kin_half_n_.resize(n);
    kin_full_n_.resize(n);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t m = 0; m < n; ++m) {
        const double k2h = 0.5 * grid.k(m) * grid.k(m);
        double s, c;
        sincos_fast(-k2h * 0.5 * dt, s, c);
        kin_half_n_[m] = Complex{c * inv_n, s * inv_n};
        sincos_fast(-k2h * dt, s, c);
        kin_full_n_[m] = Complex{c * inv_n, s * inv_n};
    }
}

Propagator::Propagator(const Grid& grid, const PhysicsParams& params, double dt)
    : Propagator(grid, eval_potential(params.spec, grid), params.g_s, dt) {}

double Propagator::potential_substep_inplace(std::vector<Complex>& amp,
                                             long step_index) const {
    auto* a = reinterpret_cast<double*>(amp.data());
    const std::size_t n = amp.size();
    double accum = 0.0;
    if (has_gain_) {
        for (std::size_t j = 0; j < n; ++j) {
            const double re = a[2 * j], im = a[2 * j + 1];
            const double rho = re * re + im * im;
            const double phase = vr_dt_[j] + g_s_ * rho * gain_fac_[j];
            double s, c;
            sincos_fast(phase, s, c);
            const double A = amp_fac_[j];
            a[2 * j] = A * (re * c + im * s);
            a[2 * j + 1] = A * (im * c - re * s);
            accum += rho * amp_fac2_[j];
        }
    } else {
        const double g_dt = g_s_ * dt_;
        for (std::size_t j = 0; j < n; ++j) {
            const double re = a[2 * j], im = a[2 * j + 1];
            const double rho = re * re + im * im;
            const double phase = vr_dt_[j] + g_dt * rho;
            double s, c;
            sincos_fast(phase, s, c);
            a[2 * j] = re * c + im * s;
            a[2 * j + 1] = im * c - re * s;
            accum += rho;
        }
    }
    const double norm2 = accum * grid_.dx();
    if (!std::isfinite(norm2))
        throw NumericalError("propagation blow-up: non-finite state", step_index,
                             static_cast<double>(step_index) * dt_);
    return norm2;
}

namespace {
inline void spectral_multiply(std::vector<Complex>& amp,
                              const std::vector<Complex>& table) {
    auto* a = reinterpret_cast<double*>(amp.data());
    const auto* t = reinterpret_cast<const double*>(table.data());
    const std::size_t n = amp.size();
    for (std::size_t j = 0; j < n; ++j) {
        const double re = a[2 * j], im = a[2 * j + 1];
        const double tr = t[2 * j], ti = t[2 * j + 1];
        a[2 * j] = re * tr - im * ti;
        a[2 * j + 1] = re * ti + im * tr;
    }
}
} // namespace

void Propagator::step(Wavefunction& psi) {
    if (psi.amp.size() != grid_.size())
        throw std::invalid_argument("Propagator::step: grid mismatch");
    fft_.forward_inplace(psi.amp);
    spectral_multiply(psi.amp, kin_half_n_);
    fft_.inverse_raw_inplace(psi.amp);
    const long idx = std::lround(psi.t / dt_) + 1;
    potential_substep_inplace(psi.amp, idx);
    fft_.forward_inplace(psi.amp);
    spectral_multiply(psi.amp, kin_half_n_);
    fft_.inverse_raw_inplace(psi.amp);
    psi.t += dt_;
}

Evolution Propagator::evolve(Wavefunction psi, double t_final,
                             long snapshot_stride, const Observer& observer) {
    if (psi.amp.size() != grid_.size())
        throw std::invalid_argument("Propagator::evolve: grid mismatch");
    if (snapshot_stride < 1)
        throw std::invalid_argument("Propagator::evolve: snapshot_stride must be >= 1");
    const long total = std::lround(t_final / dt_);
    if (total < 1)
        throw std::invalid_argument("Propagator::evolve: t_final shorter than one step");

    std::vector<double> norm2_trace;
    norm2_trace.reserve(static_cast<std::size_t>(total) + 1);
    norm2_trace.push_back(norm_squared(psi));
    psi.t = 0.0;
    if (observer) observer(0, psi);

    long step = 0;
    while (step < total) {
        const long block_end = std::min(total, (step / snapshot_stride + 1) * snapshot_stride);
        // K_half (P K_full)^{b-1} P K_half == (K_half P K_half)^b
        fft_.forward_inplace(psi.amp);
        spectral_multiply(psi.amp, kin_half_n_);
        fft_.inverse_raw_inplace(psi.amp);
        while (true) {
            ++step;
            norm2_trace.push_back(potential_substep_inplace(psi.amp, step));
            if (step == block_end) break;
            fft_.forward_inplace(psi.amp);
            spectral_multiply(psi.amp, kin_full_n_);
            fft_.inverse_raw_inplace(psi.amp);
        }
        fft_.forward_inplace(psi.amp);
        spectral_multiply(psi.amp, kin_half_n_);
        fft_.inverse_raw_inplace(psi.amp);
        psi.t = static_cast<double>(step) * dt_;
        if (observer) observer(step, psi);
    }
    return Evolution{std::move(psi), std::move(norm2_trace), total};
}

Wavefunction step_real(const Wavefunction& psi, const PhysicsParams& params, double dt) {
    Propagator prop(psi.grid, params, dt);
    Wavefunction out = psi;
    prop.step(out);
    return out;
}

Wavefunction potential_substep(const Wavefunction& psi, const PhysicsParams& params,
                               double dt) {
    const std::vector<Complex> v = eval_potential(params.spec, psi.grid);
    Wavefunction out = psi;
    for (std::size_t j = 0; j < out.amp.size(); ++j) {
        const double vr = v[j].real(), vi = v[j].imag();
        const double rho = std::norm(out.amp[j]);
        const double phase = vr * dt + params.g_s * rho * gain_integral(vi, dt);
        double s, c;
        sincos_fast(phase, s, c);
        out.amp[j] *= std::exp(vi * dt) * Complex{c, -s};
    }
    return out;
}

double gp_energy(const Wavefunction& psi, std::span<const double> v_real,
                 double g_s, const SpectralTransform* fft) {
    if (v_real.size() != psi.grid.size())
        throw std::invalid_argument("gp_energy: potential length mismatch");
    const std::size_t n = psi.grid.size();
    std::vector<Complex> spec(psi.amp.begin(), psi.amp.end());
    if (fft) {
        fft->forward_inplace(spec);
    } else {
        SpectralTransform local(psi.grid);
        local.forward_inplace(spec);
    }
    double kin = 0.0;
    for (std::size_t m = 0; m < n; ++m)
        kin += psi.grid.k(m) * psi.grid.k(m) * std::norm(spec[m]);
    kin *= psi.grid.dx() / (2.0 * static_cast<double>(n));

    double pot = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double rho = std::norm(psi.amp[j]);
        pot += (v_real[j] + 0.5 * g_s * rho) * rho;
    }
    return kin + pot * psi.grid.dx();
}

double gp_energy(const Wavefunction& psi, const PhysicsParams& params) {
    const std::vector<Complex> v = eval_potential(params.spec, psi.grid);
    std::vector<double> vr(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) vr[j] = v[j].real();
    return gp_energy(psi, vr, params.g_s);
}

double norm_rate(const Wavefunction& psi, const PotentialSpec& spec) {
    double sum = 0.0;
    for (std::size_t j = 0; j < psi.grid.size(); ++j) {
        const double x = psi.grid.x(j);
        const double u = x / spec.obstacle_width;
        sum += spec.w0 * x * std::exp(-u * u) * std::norm(psi.amp[j]);
    }
    return 2.0 * sum * psi.grid.dx();
}

GroundState ground_state(const Grid& grid, const PhysicsParams& params,
                         const SolverConfig& cfg,
                         std::vector<double>* energy_trace) {
    if (params.spec.w0 != 0.0)
        throw std::invalid_argument("ground_state: requires w0 = 0");
    if (!(cfg.imag_dt > 0.0) || !(cfg.imag_tol > 0.0))
        throw std::invalid_argument("ground_state: imag_dt and imag_tol must be positive");

    const std::size_t n = grid.size();
    const std::vector<Complex> v = eval_potential(params.spec, grid);
    std::vector<double> vr(n);
    for (std::size_t j = 0; j < n; ++j) vr[j] = v[j].real();

    SpectralTransform fft(grid);
    Wavefunction psi = gaussian_state(grid, params.spec.trap_center, 1.0);
    double energy = gp_energy(psi, vr, params.g_s, &fft);
    if (energy_trace) energy_trace->push_back(energy);

    const double dx = grid.dx();
    const double inv_n = 1.0 / static_cast<double>(n);
    std::vector<double> ehalf(n), ehalf_n(n);

    long iterations = 0;
    // Main stage at imag_dt, then one refinement stage at imag_dt/4. The
    // refinement runs a minimum of 6 imaginary-time units so the state
    // actually contracts onto the finer fixed point (the energy criterion
    // alone is insensitive to the residual state error).
    const double stage_dtau[2] = {cfg.imag_dt, cfg.imag_dt / 4.0};
    const long stage_min_steps[2] = {0, std::lround(6.0 / (cfg.imag_dt / 4.0))};
    for (int stage = 0; stage < 2; ++stage) {
        const double dtau = stage_dtau[stage];
        for (std::size_t m = 0; m < n; ++m) {
            ehalf[m] = std::exp(-0.25 * grid.k(m) * grid.k(m) * dtau);
            ehalf_n[m] = ehalf[m] * inv_n;
        }
        long in_stage = 0;
        while (true) {
            if (iterations >= cfg.max_imag_steps)
                throw NumericalError(
                    "ground_state: max_imag_steps exceeded before convergence",
                    iterations, static_cast<double>(iterations) * dtau);

            // K_half
            fft.forward_inplace(psi.amp);
            for (std::size_t m = 0; m < n; ++m) psi.amp[m] *= ehalf_n[m];
            fft.inverse_raw_inplace(psi.amp);
            // exact diagonal decay with frozen density
            for (std::size_t j = 0; j < n; ++j) {
                const double rho = std::norm(psi.amp[j]);
                psi.amp[j] *= std::exp(-(vr[j] + params.g_s * rho) * dtau);
            }
            // K_half; harvest norm and kinetic energy from the spectrum
            fft.forward_inplace(psi.amp);
            double norm2_raw = 0.0, kin_raw = 0.0;
            for (std::size_t m = 0; m < n; ++m) {
                psi.amp[m] *= ehalf[m];
                const double r2 = std::norm(psi.amp[m]);
                norm2_raw += r2;
                kin_raw += grid.k(m) * grid.k(m) * r2;
            }
            const double norm2 = norm2_raw * dx * inv_n;
            if (!(norm2 > 0.0) || !std::isfinite(norm2))
                throw NumericalError("ground_state: state collapsed or blew up",
                                     iterations, static_cast<double>(iterations) * dtau);
            const double scale = inv_n / std::sqrt(norm2);
            for (std::size_t m = 0; m < n; ++m) psi.amp[m] *= scale;
            fft.inverse_raw_inplace(psi.amp);

            const double kin = 0.5 * kin_raw * dx * inv_n / norm2;
            double pot = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                const double rho = std::norm(psi.amp[j]);
                pot += (vr[j] + 0.5 * params.g_s * rho) * rho;
            }
            const double e_new = kin + pot * dx;
            ++iterations;
            ++in_stage;
            if (energy_trace) energy_trace->push_back(e_new);
            const bool settled =
                std::abs(e_new - energy) < cfg.imag_tol * std::abs(e_new);
            energy = e_new;
            if (settled && in_stage >= stage_min_steps[stage]) break;
        }
    }
    psi.t = 0.0;
    return {std::move(psi), energy, iterations};
}

Evolution evolve(const Wavefunction& psi0, const PhysicsParams& params,
                 const SolverConfig& cfg, const Observer& observer) {
    if (cfg.mode != TimeMode::real_time)
        throw std::invalid_argument("evolve: requires real_time mode");
    Propagator prop(psi0.grid, params, cfg.dt);
    return prop.evolve(psi0, cfg.t_final, cfg.snapshot_stride, observer);
}

} // namespace gpscatter
