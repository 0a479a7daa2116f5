#include "gpscatter/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace gpscatter {

namespace {

// FFTW plan creation/destruction is not thread-safe; execution is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

} // namespace

Grid::Grid() {
    static const std::shared_ptr<const Data> empty =
        std::make_shared<Data>(Data{0, 0.0, 0.0, {0.0}, {0.0}});
    data_ = empty;
}

Grid Grid::make(std::size_t n, double dx) {
    if (!is_power_of_two(n) || n < 16)
        throw std::invalid_argument("Grid: n must be a power of two >= 16");
    if (!(dx > 0.0) || !std::isfinite(dx))
        throw std::invalid_argument("Grid: dx must be positive and finite");

    auto d = std::make_shared<Data>();
    d->n = n;
    d->dx = dx;
    d->dk = 2.0 * std::numbers::pi / (static_cast<double>(n) * dx);
    d->x.resize(n);
    d->k.resize(n);
    const auto half = static_cast<std::ptrdiff_t>(n / 2);
    for (std::size_t j = 0; j < n; ++j) {
        const auto m = static_cast<std::ptrdiff_t>(j);
        // x_j = (j - n/2) dx makes lattice reflection exact in floating
        // point: x_{n-j} == -x_j bit for bit.
        d->x[j] = static_cast<double>(m - half) * dx;
        // FFT ordering: 0, 1, ..., n/2-1, -n/2, ..., -1 in units of dk.
        const auto freq = (m < half) ? m : m - static_cast<std::ptrdiff_t>(n);
        d->k[j] = static_cast<double>(freq) * d->dk;
    }
    return Grid(std::move(d));
}

double integrate(const Grid& grid, std::span<const double> field) {
    if (field.size() != grid.size())
        throw std::invalid_argument("integrate: field length does not match grid");
    double sum = 0.0;
    for (double f : field) sum += f;
    return sum * grid.dx();
}

double norm_squared(const Wavefunction& psi) {
    double sum = 0.0;
    for (const Complex& c : psi.amp) sum += std::norm(c);
    return sum * psi.grid.dx();
}

Wavefunction normalize(Wavefunction psi) {
    const double n2 = norm_squared(psi);
    if (!(n2 > 0.0))
        throw std::invalid_argument("normalize: zero-norm wavefunction");
    const double s = 1.0 / std::sqrt(n2);
    for (Complex& c : psi.amp) c *= s;
    return psi;
}

Wavefunction gaussian_state(const Grid& grid, double center, double width) {
    if (!(width > 0.0))
        throw std::invalid_argument("gaussian_state: width must be positive");
    Wavefunction psi{grid, std::vector<Complex>(grid.size()), 0.0};
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double u = (grid.x(j) - center) / width;
        psi.amp[j] = std::exp(-0.5 * u * u);
    }
    return normalize(std::move(psi));
}

struct SpectralTransform::Impl {
    std::size_t n = 0;
    double dx = 0.0;
    fftw_plan fwd = nullptr;
    fftw_plan inv = nullptr;

    ~Impl() {
        std::lock_guard lock(planner_mutex());
        if (fwd) fftw_destroy_plan(fwd);
        if (inv) fftw_destroy_plan(inv);
    }
};

SpectralTransform::SpectralTransform(const Grid& grid)
    : impl_(std::make_unique<Impl>()) {
    impl_->n = grid.size();
    impl_->dx = grid.dx();
    // Planning with ESTIMATE keeps plan selection deterministic (no runtime
    // timing), and UNALIGNED lets one plan serve any caller buffer.
    std::vector<Complex> scratch(impl_->n);
    auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
    std::lock_guard lock(planner_mutex());
    impl_->fwd = fftw_plan_dft_1d(static_cast<int>(impl_->n), p, p,
                                  FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    impl_->inv = fftw_plan_dft_1d(static_cast<int>(impl_->n), p, p,
                                  FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!impl_->fwd || !impl_->inv)
        throw std::runtime_error("SpectralTransform: FFTW planning failed");
}

SpectralTransform::~SpectralTransform() = default;
SpectralTransform::SpectralTransform(SpectralTransform&&) noexcept = default;
SpectralTransform& SpectralTransform::operator=(SpectralTransform&&) noexcept = default;

std::size_t SpectralTransform::size() const { return impl_->n; }

void SpectralTransform::forward_inplace(std::span<Complex> a) const {
    if (a.size() != impl_->n)
        throw std::invalid_argument("SpectralTransform: length mismatch");
    auto* p = reinterpret_cast<fftw_complex*>(a.data());
    fftw_execute_dft(impl_->fwd, p, p);
}

void SpectralTransform::inverse_inplace(std::span<Complex> a) const {
    inverse_raw_inplace(a);
    const double s = 1.0 / static_cast<double>(impl_->n);
    for (Complex& c : a) c *= s;
}

void SpectralTransform::inverse_raw_inplace(std::span<Complex> a) const {
    if (a.size() != impl_->n)
        throw std::invalid_argument("SpectralTransform: length mismatch");
    auto* p = reinterpret_cast<fftw_complex*>(a.data());
    fftw_execute_dft(impl_->inv, p, p);
}

std::vector<Complex> SpectralTransform::to_spectral(const Wavefunction& psi) const {
    if (psi.amp.size() != impl_->n)
        throw std::invalid_argument("to_spectral: length mismatch");
    std::vector<Complex> out(psi.amp.begin(), psi.amp.end());
    forward_inplace(out);
    // e^{-i k_m x_min} = (-1)^m on the symmetric domain.
    const double scale = impl_->dx / std::sqrt(2.0 * std::numbers::pi);
    for (std::size_t m = 0; m < impl_->n; ++m)
        out[m] *= (m % 2 == 0) ? scale : -scale;
    return out;
}

std::vector<Complex> SpectralTransform::from_spectral(std::span<const Complex> psihat) const {
    if (psihat.size() != impl_->n)
        throw std::invalid_argument("from_spectral: length mismatch");
    std::vector<Complex> out(psihat.begin(), psihat.end());
    const double scale = std::sqrt(2.0 * std::numbers::pi) / impl_->dx;
    for (std::size_t m = 0; m < impl_->n; ++m)
        out[m] *= (m % 2 == 0) ? scale : -scale;
    inverse_inplace(out);
    return out;
}

std::vector<Complex> to_spectral(const Wavefunction& psi) {
    return SpectralTransform(psi.grid).to_spectral(psi);
}

std::vector<Complex> from_spectral(const Grid& grid, std::span<const Complex> psihat) {
    return SpectralTransform(grid).from_spectral(psihat);
}

} // namespace gpscatter
