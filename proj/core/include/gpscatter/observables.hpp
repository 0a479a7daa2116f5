#pragma once

#include <optional>
#include <span>
#include <vector>

#include "gpscatter/grid.hpp"
#include "gpscatter/propagator.hpp"
#include "gpscatter/variational.hpp"

namespace gpscatter {

/// Per-snapshot scalar diagnostics. p_left integrates |psi|^2 over x < 0 and
/// p_right over x >= 0 (the x = 0 lattice sample belongs to the right half);
/// they partition the quadrature sum, so p_left + p_right == norm exactly.
/// mean_x and rms_width are norm-weighted moments; energy is the GP
/// functional of the raw (unnormalized) state using the real part of the
/// potential; edge_mass is the norm fraction at |x| > 0.9 * half_extent.
struct ObservableRecord {
    double t = 0.0;
    double norm = 0.0;
    double p_left = 0.0;
    double p_right = 0.0;
    double mean_x = 0.0;
    double rms_width = 0.0;
    double energy = 0.0;
    double edge_mass = 0.0;
};

ObservableRecord record(const Wavefunction& psi, const PhysicsParams& params);
/// Variant with a precomputed Re V sample and an optional cached transform,
/// for observers on the hot path.
ObservableRecord record(const Wavefunction& psi, std::span<const double> v_real,
                        double g_s, const SpectralTransform* fft = nullptr);

/// Number of local maxima of |psi|^2 above rel_floor * peak density. Values
/// above 1 flag a non-Gaussian (fragmented) profile.
int count_density_peaks(const Wavefunction& psi, double rel_floor = 0.05);

/// GPE-vs-variational trajectory comparison. The width gap compares the
/// ansatz width a against sqrt(2) * rms_width (exact for a Gaussian).
/// verdict is mismatch iff max_center_gap exceeds the threshold.
struct ComparisonReport {
    double max_center_gap = 0.0;
    double max_width_gap = 0.0;
    std::optional<double> t_divergence;        // first center gap > threshold
    std::optional<double> t_first_non_gaussian;
    bool mismatch = false;
    double threshold = 0.0;

    const char* verdict() const { return mismatch ? "mismatch" : "match"; }
};

/// Both trajectories must be sampled on the same time grid (pairwise |dt| <
/// 1e-9), else std::invalid_argument. peak_counts, when non-empty, must
/// parallel the GPE records and feeds t_first_non_gaussian.
ComparisonReport compare(std::span<const ObservableRecord> gpe,
                         std::span<const VariationalState> variational,
                         double center_threshold = 2.0,
                         std::span<const int> peak_counts = {});

} // namespace gpscatter
