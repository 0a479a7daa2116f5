#include "gpscatter/observables.hpp"

#include <cmath>
#include <stdexcept>

namespace gpscatter {

ObservableRecord record(const Wavefunction& psi, std::span<const double> v_real,
                        double g_s, const SpectralTransform* fft) {
    const std::size_t n = psi.grid.size();
    if (psi.amp.size() != n)
        throw std::invalid_argument("record: amplitude length mismatch");
    const double dx = psi.grid.dx();
    const double edge = 0.9 * psi.grid.half_extent();

    double left = 0.0, right = 0.0, m1 = 0.0, m2 = 0.0, edge_sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double rho = std::norm(psi.amp[j]);
        const double x = psi.grid.x(j);
        if (j < n / 2)
            left += rho;
        else
            right += rho;
        m1 += x * rho;
        m2 += x * x * rho;
        if (std::abs(x) > edge) edge_sum += rho;
    }
    ObservableRecord r;
    r.t = psi.t;
    r.p_left = left * dx;
    r.p_right = right * dx;
    r.norm = r.p_left + r.p_right;
    const double inv_norm = 1.0 / r.norm;
    r.mean_x = m1 * dx * inv_norm;
    const double var = m2 * dx * inv_norm - r.mean_x * r.mean_x;
    r.rms_width = std::sqrt(std::max(var, 0.0));
    r.energy = gp_energy(psi, v_real, g_s, fft);
    r.edge_mass = edge_sum * dx * inv_norm;
    return r;
}

ObservableRecord record(const Wavefunction& psi, const PhysicsParams& params) {
    const std::vector<Complex> v = eval_potential(params.spec, psi.grid);
    std::vector<double> vr(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) vr[j] = v[j].real();
    return record(psi, vr, params.g_s);
}

int count_density_peaks(const Wavefunction& psi, double rel_floor) {
    const std::size_t n = psi.amp.size();
    std::vector<double> rho(n);
    double peak = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        rho[j] = std::norm(psi.amp[j]);
        peak = std::max(peak, rho[j]);
    }
    if (peak <= 0.0) return 0;
    const double floor = rel_floor * peak;
    int count = 0;
    for (std::size_t j = 1; j + 1 < n; ++j)
        if (rho[j] > floor && rho[j] > rho[j - 1] && rho[j] > rho[j + 1]) ++count;
    return count;
}

ComparisonReport compare(std::span<const ObservableRecord> gpe,
                         std::span<const VariationalState> variational,
                         double center_threshold,
                         std::span<const int> peak_counts) {
    if (gpe.size() != variational.size() || gpe.empty())
        throw std::invalid_argument("compare: trajectories have different lengths");
    if (!peak_counts.empty() && peak_counts.size() != gpe.size())
        throw std::invalid_argument("compare: peak_counts length mismatch");

    ComparisonReport rep;
    rep.threshold = center_threshold;
    for (std::size_t i = 0; i < gpe.size(); ++i) {
        if (std::abs(gpe[i].t - variational[i].t) > 1e-9)
            throw std::invalid_argument("compare: time-grid mismatch");
        const double cgap = std::abs(gpe[i].mean_x - variational[i].x0);
        const double wgap =
            std::abs(std::sqrt(2.0) * gpe[i].rms_width - variational[i].a);
        rep.max_center_gap = std::max(rep.max_center_gap, cgap);
        rep.max_width_gap = std::max(rep.max_width_gap, wgap);
        if (!rep.t_divergence && cgap > center_threshold)
            rep.t_divergence = gpe[i].t;
        if (!peak_counts.empty() && !rep.t_first_non_gaussian && peak_counts[i] > 1)
            rep.t_first_non_gaussian = gpe[i].t;
    }
    rep.mismatch = rep.max_center_gap > center_threshold;
    return rep;
}

} // namespace gpscatter
