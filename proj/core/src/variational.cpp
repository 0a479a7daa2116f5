#include "gpscatter/variational.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gpscatter/errors.hpp"

namespace gpscatter {

namespace {

const double sqrt_2pi = std::sqrt(2.0 * std::numbers::pi);

void check_width(const VariationalState& s) {
    if (!(s.a > variational_min_width))
        throw std::invalid_argument("variational width underflow");
}

} // namespace

VariationalRhs rhs_conservative(const VariationalState& s, double v0, double g_s) {
    check_width(s);
    const double a = s.a, x0 = s.x0;
    const double z = 1.0 + a * a;
    const double p = x0 * x0;
    const double e1 = std::exp(-p / z);
    const double z32 = z * std::sqrt(z);
    const double obstacle = 2.0 * v0 * e1 / z32;

    VariationalRhs r;
    r.x0_dd = -x0 + obstacle * x0;
    r.a_dd = -a + 1.0 / (a * a * a) + g_s / (sqrt_2pi * a * a) +
             obstacle * a * (1.0 - 2.0 * p / z);
    return r;
}

VariationalRhs rhs_full(const VariationalState& s, double v0, double w0, double g_s) {
    if (w0 == 0.0) return rhs_conservative(s, v0, g_s);
    check_width(s);

    const double a = s.a, x0 = s.x0, v = s.v, b = s.b;
    const double a2 = a * a, a4 = a2 * a2;
    const double z = 1.0 + a2;
    const double z2 = z * z;
    const double p = x0 * x0;
    const double sz = std::sqrt(z);
    const double e1 = std::exp(-p / z);

    // Gain/loss polynomials, grouped in powers of z = 1 + a^2.
    const double P1 = a2 * z + 2.0 * p;
    const double P2 = a2 * (2.0 * a2 - 1.0) * z + 2.0 * (2.0 * a2 + 1.0) * p;
    const double Q1 = (2.0 - a2) * z - 2.0 * p;
    const double Q2 = 3.0 * a2 * z2 + 4.0 * a2 * p * p +
                      2.0 * (a4 - 4.0 * a2 + 1.0) * z * p;
    const double R1 = 4.0 * (2.0 * a2 + 1.0) * p * p +
                      2.0 * (2.0 * a4 - 11.0 * a2 - 3.0) * z * p +
                      (-2.0 * a4 + 11.0 * a2 - 2.0) * z2;
    const double R2 = a2 * z2 * (2.0 * a2 - 1.0) +
                      2.0 * z * (-2.0 * a4 + 7.0 * a2 + 3.0) * p -
                      4.0 * (2.0 * a2 + 1.0) * p * p;

    const double z3 = z2 * z;
    const double z6 = z3 * z3;
    const double z92 = z3 * z * sz;   // z^{9/2}
    const double z132 = z6 * sz;      // z^{13/2}

    VariationalRhs r;
    r.x0_dd = -x0 + 2.0 * v0 * x0 * e1 / (z * sz) +
              w0 * w0 * x0 * P1 * P2 * e1 * e1 / (a2 * z6) +
              (w0 * e1 / (a * z92)) *
                  (2.0 * a * z * x0 * Q1 * v + b * Q2);

    const double lhs = 2.0 * w0 * w0 * p * P2 * P2 * e1 / (a * sz) +
                       2.0 * a * z * w0 * (a * x0 * b * R1 + z * R2 * v) -
                       4.0 * a2 * a * z2 * z2 * v0 * (z - 2.0 * p);
    r.a_dd = 1.0 / (a2 * a) + g_s / (sqrt_2pi * a2) - a -
             lhs * e1 / (2.0 * a2 * z132);
    return r;
}

double equilibrium_width(double g_s, double v0) {
    if (!(g_s >= 0.0))
        throw std::invalid_argument("equilibrium_width: g_s must be >= 0");
    const auto f = [g_s, v0](double a) {
        const double z = 1.0 + a * a;
        return -a + 1.0 / (a * a * a) + g_s / (sqrt_2pi * a * a) +
               2.0 * v0 * a / (z * std::sqrt(z));
    };
    // f -> +inf as a -> 0+ and -> -inf as a -> inf; scan for the first sign
    // change from the left, then bisect.
    double lo = 1e-3;
    double hi = lo;
    const double flo0 = f(lo);
    if (!(flo0 > 0.0))
        throw std::invalid_argument("equilibrium_width: no bracket at small a");
    bool bracketed = false;
    for (double step = 1e-3; hi < 1e6; step *= 1.5) {
        const double next = hi + step;
        if (f(next) < 0.0) {
            lo = hi;
            hi = next;
            bracketed = true;
            break;
        }
        hi = next;
    }
    if (!bracketed)
        throw std::invalid_argument("equilibrium_width: failed to bracket root");
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double variational_energy(const VariationalState& s, double g_s, double v0) {
    const double a = s.a;
    const double z = 1.0 + a * a;
    return 0.5 * s.v * s.v + 0.5 * s.x0 * s.x0 + 0.25 * s.b * s.b +
           1.0 / (4.0 * a * a) + 0.25 * a * a + g_s / (2.0 * sqrt_2pi * a) +
           v0 * std::exp(-s.x0 * s.x0 / z) / std::sqrt(z);
}

std::vector<VariationalState> integrate_ode(const VariationalState& s0,
                                            double v0, double w0, double g_s,
                                            double dt, double t_final,
                                            long sample_stride) {
    if (!(dt > 0.0) || dt > 1e-3)
        throw std::invalid_argument("integrate_ode: dt must be in (0, 1e-3]");
    if (!(t_final > 0.0))
        throw std::invalid_argument("integrate_ode: t_final must be positive");
    if (sample_stride < 1)
        throw std::invalid_argument("integrate_ode: sample_stride must be >= 1");

    struct Y {
        double x0, v, a, b;
    };
    const auto deriv = [&](const Y& y, long step) -> Y {
        VariationalState st{y.x0, y.v, y.a, y.b, 0.0};
        if (!(y.a > variational_min_width) || !std::isfinite(y.a) ||
            !std::isfinite(y.x0) || !std::isfinite(y.v) || !std::isfinite(y.b))
            throw NumericalError("variational width underflow or non-finite state",
                                 step, static_cast<double>(step) * dt);
        const VariationalRhs r = rhs_full(st, v0, w0, g_s);
        return {y.v, r.x0_dd, y.b, r.a_dd};
    };

    const long total = std::lround(t_final / dt);
    std::vector<VariationalState> out;
    out.reserve(static_cast<std::size_t>(total / sample_stride) + 2);

    Y y{s0.x0, s0.v, s0.a, s0.b};
    out.push_back({y.x0, y.v, y.a, y.b, 0.0});
    for (long step = 1; step <= total; ++step) {
        const Y k1 = deriv(y, step);
        const Y y2{y.x0 + 0.5 * dt * k1.x0, y.v + 0.5 * dt * k1.v,
                   y.a + 0.5 * dt * k1.a, y.b + 0.5 * dt * k1.b};
        const Y k2 = deriv(y2, step);
        const Y y3{y.x0 + 0.5 * dt * k2.x0, y.v + 0.5 * dt * k2.v,
                   y.a + 0.5 * dt * k2.a, y.b + 0.5 * dt * k2.b};
        const Y k3 = deriv(y3, step);
        const Y y4{y.x0 + dt * k3.x0, y.v + dt * k3.v, y.a + dt * k3.a,
                   y.b + dt * k3.b};
        const Y k4 = deriv(y4, step);
        y.x0 += dt / 6.0 * (k1.x0 + 2.0 * k2.x0 + 2.0 * k3.x0 + k4.x0);
        y.v += dt / 6.0 * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v);
        y.a += dt / 6.0 * (k1.a + 2.0 * k2.a + 2.0 * k3.a + k4.a);
        y.b += dt / 6.0 * (k1.b + 2.0 * k2.b + 2.0 * k3.b + k4.b);
        if (!(y.a > variational_min_width) || !std::isfinite(y.x0 + y.v + y.a + y.b))
            throw NumericalError("variational width underflow or non-finite state",
                                 step, static_cast<double>(step) * dt);
        if (step % sample_stride == 0 || step == total)
            out.push_back({y.x0, y.v, y.a, y.b, static_cast<double>(step) * dt});
    }
    return out;
}

Wavefunction ansatz_wavefunction(const VariationalState& s, const Grid& grid) {
    if (!(s.a > 0.0))
        throw std::invalid_argument("ansatz_wavefunction: width must be positive");
    const double alpha = s.v - s.x0 * s.b / s.a;
    const double beta = s.b / (2.0 * s.a);
    const double prefactor = 1.0 / std::sqrt(s.a * std::sqrt(std::numbers::pi));
    Wavefunction psi{grid, std::vector<Complex>(grid.size()), s.t};
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double x = grid.x(j);
        const double dx0 = x - s.x0;
        const double mag = prefactor * std::exp(-dx0 * dx0 / (2.0 * s.a * s.a));
        const double phase = x * alpha + x * x * beta;
        psi.amp[j] = mag * Complex{std::cos(phase), std::sin(phase)};
    }
    return psi;
}

} // namespace gpscatter
