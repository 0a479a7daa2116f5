#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

namespace gpscatter {

using Complex = std::complex<double>;

/// Uniform periodic 1D lattice, symmetric about x = 0, with FFT-ordered
/// wavenumbers.
///
/// The point count must be a power of two (and at least 16) so that x = 0
/// falls exactly on lattice index n/2 and transforms stay radix-2. Lattice
/// points are x_j = x_min + j*dx with x_min = -n*dx/2; wavenumbers follow the
/// standard DFT ordering (non-negative frequencies first) with spacing
/// 2*pi/(n*dx) and |k| <= pi/dx.
///
/// Grid is an immutable value: copies share one payload and are cheap.
class Grid {
public:
    /// Empty grid (size 0), usable only as a placeholder before assignment.
    Grid();

    /// Builds a grid; throws std::invalid_argument for non-power-of-two n,
    /// n < 16, or dx <= 0.
    static Grid make(std::size_t n, double dx);

    std::size_t size() const { return data_->n; }
    double dx() const { return data_->dx; }
    double dk() const { return data_->dk; }
    double x_min() const { return data_->x[0]; }
    /// Last lattice point, x_min + (n-1)*dx.
    double x_max() const { return data_->x[data_->n - 1]; }
    /// Half the periodic extent, n*dx/2 (= -x_min).
    double half_extent() const { return -data_->x[0]; }

    double x(std::size_t j) const { return data_->x[j]; }
    double k(std::size_t j) const { return data_->k[j]; }
    std::span<const double> xs() const { return data_->x; }
    std::span<const double> ks() const { return data_->k; }

    /// Lattice index of the reflection x -> -x: j <-> (n - j) mod n.
    std::size_t reflect(std::size_t j) const {
        return j == 0 ? 0 : data_->n - j;
    }

    friend bool operator==(const Grid& a, const Grid& b) {
        return a.data_->n == b.data_->n && a.data_->dx == b.data_->dx;
    }

private:
    struct Data {
        std::size_t n;
        double dx;
        double dk;
        std::vector<double> x;
        std::vector<double> k;
    };
    explicit Grid(std::shared_ptr<const Data> d) : data_(std::move(d)) {}
    std::shared_ptr<const Data> data_;
};

/// Complex field on a Grid at a given dimensionless time.
struct Wavefunction {
    Grid grid;
    std::vector<Complex> amp;
    double t = 0.0;
};

/// Rectangle-rule quadrature sum(f_j)*dx; spectrally accurate for smooth
/// periodic fields. Throws std::invalid_argument on length mismatch.
double integrate(const Grid& grid, std::span<const double> field);

/// sum |psi_j|^2 dx.
double norm_squared(const Wavefunction& psi);

/// Rescales to unit norm; pointwise phase unchanged. Throws
/// std::invalid_argument on zero norm.
Wavefunction normalize(Wavefunction psi);

/// Unit-norm Gaussian exp(-(x-center)^2/(2 width^2)) on the grid, t = 0.
Wavefunction gaussian_state(const Grid& grid, double center, double width);

/// Forward/inverse DFT pair for one grid size, backed by FFTW. Plans are
/// created deterministically (estimate mode) so results are reproducible
/// run to run. One instance per thread; not copyable.
///
/// Convention for the physical-space transforms: with raw DFT
/// R_m = sum_j psi_j e^{-2 pi i j m / n}, the spectral samples are
///   psihat_m = dx/sqrt(2 pi) * (-1)^m * R_m,
/// which equals dx/sqrt(2 pi) sum_j psi_j e^{-i k_m x_j} on the symmetric
/// domain. Parseval then reads sum |psi_j|^2 dx = sum |psihat_m|^2 dk.
class SpectralTransform {
public:
    explicit SpectralTransform(const Grid& grid);
    ~SpectralTransform();
    SpectralTransform(SpectralTransform&&) noexcept;
    SpectralTransform& operator=(SpectralTransform&&) noexcept;
    SpectralTransform(const SpectralTransform&) = delete;
    SpectralTransform& operator=(const SpectralTransform&) = delete;

    std::size_t size() const;

    /// Unnormalized in-place forward DFT (index convention).
    void forward_inplace(std::span<Complex> a) const;
    /// In-place inverse DFT including the 1/n factor.
    void inverse_inplace(std::span<Complex> a) const;
    /// In-place inverse DFT without the 1/n factor, for callers that fold
    /// the normalization into a spectral multiplier.
    void inverse_raw_inplace(std::span<Complex> a) const;

    /// psihat in the documented continuum convention.
    std::vector<Complex> to_spectral(const Wavefunction& psi) const;
    /// Inverse of to_spectral; returns physical-space amplitudes.
    std::vector<Complex> from_spectral(std::span<const Complex> psihat) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// One-shot wrappers around SpectralTransform for callers without a cached
/// instance.
std::vector<Complex> to_spectral(const Wavefunction& psi);
std::vector<Complex> from_spectral(const Grid& grid, std::span<const Complex> psihat);

} // namespace gpscatter
