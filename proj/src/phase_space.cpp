#include "hermite/phase_space.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>
#include <numbers>

#include <fftw3.h>

#include <fmt/format.h>

#include "hermite/errors.hpp"
#include "stft_rows.hpp"
#include "tensor_ops.hpp"

namespace hermite {

namespace {

std::vector<double> uniform_axis(double extent, int n) {
    std::vector<double> axis(static_cast<std::size_t>(n));
    const double h = 2.0 * extent / (n - 1);
    for (int i = 0; i < n; ++i)
        axis[static_cast<std::size_t>(i)] = -extent + h * i;
    // exact symmetry, including an exact 0 for odd n
    for (int i = 0; i < n / 2; ++i)
        axis[static_cast<std::size_t>(n - 1 - i)] = -axis[static_cast<std::size_t>(i)];
    if (n % 2 == 1)
        axis[static_cast<std::size_t>(n / 2)] = 0.0;
    return axis;
}

std::vector<double> trapezoid_weights(double extent, int n) {
    std::vector<double> w(static_cast<std::size_t>(n), 2.0 * extent / (n - 1));
    w.front() *= 0.5;
    w.back() *= 0.5;
    return w;
}

std::size_t ipow(std::size_t base, int e) {
    std::size_t out = 1;
    for (int i = 0; i < e; ++i)
        out *= base;
    return out;
}

int nyquist_points(double extent_a, double extent_b) {
    // h_a · L_b ≤ π with h_a = 2 L_a / (n − 1)
    return static_cast<int>(std::ceil(2.0 * extent_a * extent_b / std::numbers::pi)) + 1;
}

} // namespace

PhaseSpaceGrid PhaseSpaceGrid::default_for(int degree, int dim) {
    if (dim < 1 || dim > max_dimension)
        throw ValidationError("dimension must be in [1, 3]");
    const double extent = std::sqrt(2.0 * degree + dim) + 4.0;
    const int base = dim == 1 ? 129 : dim == 2 ? 33 : 17;
    int n = std::max(base, nyquist_points(extent, extent));
    if (n % 2 == 0)
        ++n;
    return {dim, extent, extent, n, n};
}

PhaseSpaceGrid PhaseSpaceGrid::covering(double radius, double bandwidth, int dim, double margin, double oversample) {
    if (dim < 1 || dim > max_dimension)
        throw ValidationError("dimension must be in [1, 3]");
    if (!(radius >= 0.0) || !(bandwidth >= 0.0) || !(margin > 0.0) || !(oversample >= 1.0))
        throw ValidationError("grid covering needs non-negative extents and oversample >= 1");
    const double lx = radius + margin;
    const double lxi = bandwidth + margin;
    int n = static_cast<int>(std::ceil(oversample * 2.0 * lx * lxi / std::numbers::pi)) + 1;
    n = std::max(n, 33);
    if (n % 2 == 0)
        ++n;
    return {dim, lx, lxi, n, n};
}

void PhaseSpaceGrid::validate() const {
    if (dim < 1 || dim > max_dimension)
        throw ValidationError("phase-space grid dimension must be in [1, 3]");
    if (!(x_extent > 0.0) || !(xi_extent > 0.0))
        throw ValidationError("phase-space grid extents must be positive");
    if (nx < 2 || nxi < 2)
        throw ValidationError("phase-space grid needs at least two points per axis");
}

std::vector<double> PhaseSpaceGrid::x_axis() const { return uniform_axis(x_extent, nx); }
std::vector<double> PhaseSpaceGrid::xi_axis() const { return uniform_axis(xi_extent, nxi); }
std::vector<double> PhaseSpaceGrid::x_cell_weights() const { return trapezoid_weights(x_extent, nx); }
std::vector<double> PhaseSpaceGrid::xi_cell_weights() const { return trapezoid_weights(xi_extent, nxi); }
std::size_t PhaseSpaceGrid::x_count() const { return ipow(static_cast<std::size_t>(nx), dim); }
std::size_t PhaseSpaceGrid::xi_count() const { return ipow(static_cast<std::size_t>(nxi), dim); }

PhaseSpaceGrid PhaseSpaceGrid::refined() const {
    return {dim, x_extent, xi_extent, 2 * nx - 1, 2 * nxi - 1};
}

std::string PhaseSpaceGrid::hash() const {
    const auto text = fmt::format("d={};Lx={:.17g};Lxi={:.17g};nx={};nxi={}", dim, x_extent, xi_extent, nx, nxi);
    std::uint64_t h = 1469598103934665603ull; // FNV-1a
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return fmt::format("{:016x}", h);
}

Window Window::gaussian() { return {"gaussian", HermiteExpansion::basis(MultiIndex{0}, 0)}; }
Window Window::hermite1() { return {"hermite1", HermiteExpansion::basis(MultiIndex{1}, 1)}; }

Window Window::by_name(const std::string& name) {
    if (name == "gaussian")
        return gaussian();
    if (name == "hermite1")
        return hermite1();
    throw ValidationError("unknown window '" + name + "' (expected gaussian or hermite1)");
}

double Window::l2_norm(int dim) const { return std::pow(profile.l2_norm(), dim); }

void NormSpec::validate() const {
    if (!(p > 0.0) || !(q > 0.0))
        throw ValidationError("norm exponents must lie in (0, inf]");
    if (!std::isfinite(s))
        throw ValidationError("weight exponent must be finite");
}

std::string to_string(InnerVariable inner) { return inner == InnerVariable::x ? "modulation" : "amalgam"; }

InnerVariable inner_variable_from_string(const std::string& s) {
    if (s == "modulation" || s == "x")
        return InnerVariable::x;
    if (s == "amalgam" || s == "xi")
        return InnerVariable::xi;
    throw ValidationError("unknown norm order '" + s + "' (expected modulation or amalgam)");
}

namespace detail {

void check_stft_inputs(const Window& window, const PhaseSpaceGrid& grid) {
    grid.validate();
    if (window.profile.dim() != 1)
        throw ValidationError("window profile must be one-dimensional");
    if (window.profile.l2_norm() == 0.0)
        throw ValidationError("window must not vanish identically");
    constexpr double slack = 1e-12;
    if (grid.xi_spacing() * grid.x_extent > std::numbers::pi + slack)
        throw GridResolutionError(fmt::format("frequency spacing {:.4g} under-samples position extent {:.4g} "
                                              "(h_xi * L_x > pi); increase nxi",
                                              grid.xi_spacing(), grid.x_extent));
    if (grid.x_spacing() * grid.xi_extent > std::numbers::pi + slack)
        throw GridResolutionError(fmt::format("position spacing {:.4g} under-samples frequency extent {:.4g} "
                                              "(h_x * L_xi > pi); increase nx",
                                              grid.x_spacing(), grid.xi_extent));
}

namespace {

std::mutex fftw_planner_mutex; // FFTW planning is not thread-safe

constexpr std::size_t chirp_threshold = 256; // nξ at which chirp-z beats direct sums

std::size_t next_power_of_two(std::size_t n) {
    std::size_t p = 1;
    while (p < n)
        p <<= 1;
    return p;
}

} // namespace

// Bluestein: with c = h_ξ h_y and jm = (j² + m² − (j − m)²)/2,
//   Σ_m a_m e^{-iξ_j y_m} = post_j Σ_m (a_m pre_m) e^{ic(j−m)²/2},
// a linear convolution computed with zero-padded FFTs of length P.
struct StftRows::Chirp {
    std::size_t length;
    std::vector<cdouble> pre;
    std::vector<cdouble> post;
    std::vector<cdouble> kernel_hat;
    fftw_complex* buffer = nullptr;
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;

    Chirp(const PhaseSpaceGrid& grid, std::size_t ny, std::size_t nxi) {
        length = next_power_of_two(ny + nxi - 1);
        const double hy = grid.x_spacing();
        const double hxi = grid.xi_spacing();
        const double y0 = -grid.x_extent;
        const double xi0 = -grid.xi_extent;
        const double c = hy * hxi;

        pre.resize(ny);
        for (std::size_t m = 0; m < ny; ++m) {
            const double md = static_cast<double>(m);
            pre[m] = std::polar(1.0, -xi0 * md * hy - 0.5 * c * md * md);
        }
        post.resize(nxi);
        for (std::size_t j = 0; j < nxi; ++j) {
            const double jd = static_cast<double>(j);
            post[j] = std::polar(1.0 / static_cast<double>(length), -xi0 * y0 - jd * hxi * y0 - 0.5 * c * jd * jd);
        }

        buffer = fftw_alloc_complex(length);
        {
            std::lock_guard lock(fftw_planner_mutex);
            forward = fftw_plan_dft_1d(static_cast<int>(length), buffer, buffer, FFTW_FORWARD, FFTW_ESTIMATE);
            backward = fftw_plan_dft_1d(static_cast<int>(length), buffer, buffer, FFTW_BACKWARD, FFTW_ESTIMATE);
        }
        if (forward == nullptr || backward == nullptr)
            throw NumericalError("FFT planning failed");

        // kernel e^{icℓ²/2} for ℓ = −(ny−1) .. nξ−1, stored cyclically
        auto* data = reinterpret_cast<cdouble*>(buffer);
        std::fill(data, data + length, cdouble{});
        for (std::size_t l = 0; l < nxi; ++l) {
            const double ld = static_cast<double>(l);
            data[l] = std::polar(1.0, 0.5 * c * ld * ld);
        }
        for (std::size_t l = 1; l < ny; ++l) {
            const double ld = static_cast<double>(l);
            data[length - l] = std::polar(1.0, 0.5 * c * ld * ld);
        }
        fftw_execute(forward);
        kernel_hat.assign(data, data + length);
    }

    ~Chirp() {
        std::lock_guard lock(fftw_planner_mutex);
        if (forward != nullptr)
            fftw_destroy_plan(forward);
        if (backward != nullptr)
            fftw_destroy_plan(backward);
        fftw_free(buffer);
    }

    Chirp(const Chirp&) = delete;
    Chirp& operator=(const Chirp&) = delete;
};

StftRows::StftRows(const Window& window, const PhaseSpaceGrid& grid, StftAlgorithm algorithm)
    : nx_(static_cast<std::size_t>(grid.nx)), nxi_(static_cast<std::size_t>(grid.nxi)), weights_(grid.x_cell_weights()) {
    check_stft_inputs(window, grid);
    if (grid.dim != 1)
        throw ValidationError("row-wise STFT is one-dimensional");

    const double h = grid.x_spacing();
    std::vector<double> offsets(2 * nx_ - 1);
    for (std::size_t k = 0; k < offsets.size(); ++k)
        offsets[k] = (static_cast<double>(k) - static_cast<double>(nx_ - 1)) * h;
    const auto g = synthesize(window.profile, offsets);
    window_conj_.resize(g.size());
    double peak = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        window_conj_[k] = std::conj(g[k]);
        peak = std::max(peak, std::abs(g[k]));
    }
    // Windows are Hermite expansions, so they decay like a Gaussian; trim the
    // offsets where |g| stays below 1e-18 of its peak.
    support_ = nx_ - 1;
    while (support_ > 0 && std::abs(g[nx_ - 1 + support_]) < 1e-18 * peak &&
           std::abs(g[nx_ - 1 - support_]) < 1e-18 * peak)
        --support_;

    const bool chirp = algorithm == StftAlgorithm::chirp_z ||
                       (algorithm == StftAlgorithm::automatic && nxi_ >= chirp_threshold);
    if (chirp) {
        chirp_ = std::make_unique<Chirp>(grid, nx_, nxi_);
    } else {
        const auto y = grid.x_axis();
        const auto xi = grid.xi_axis();
        phase_.resize(nxi_ * nx_);
        for (std::size_t j = 0; j < nxi_; ++j)
            for (std::size_t m = 0; m < nx_; ++m)
                phase_[j * nx_ + m] = std::polar(1.0, -xi[j] * y[m]);
    }
    scratch_.resize(nx_);
}

StftRows::~StftRows() = default;

void StftRows::row(std::span<const cdouble> samples, std::size_t i, std::span<cdouble> out) {
    const std::size_t lo = i > support_ ? i - support_ : 0;
    const std::size_t hi = std::min(nx_ - 1, i + support_);
    for (std::size_t m = lo; m <= hi; ++m)
        scratch_[m] = weights_[m] * samples[m] * window_conj_[m + nx_ - 1 - i];

    if (!chirp_) {
        for (std::size_t j = 0; j < nxi_; ++j) {
            const cdouble* phase = phase_.data() + j * nx_;
            cdouble acc{};
            for (std::size_t m = lo; m <= hi; ++m)
                acc += scratch_[m] * phase[m];
            out[j] = acc;
        }
        return;
    }

    auto* data = reinterpret_cast<cdouble*>(chirp_->buffer);
    std::fill(data, data + chirp_->length, cdouble{});
    for (std::size_t m = lo; m <= hi; ++m)
        data[m] = scratch_[m] * chirp_->pre[m];
    fftw_execute(chirp_->forward);
    for (std::size_t l = 0; l < chirp_->length; ++l)
        data[l] *= chirp_->kernel_hat[l];
    fftw_execute(chirp_->backward);
    for (std::size_t j = 0; j < nxi_; ++j)
        out[j] = data[j] * chirp_->post[j];
}

} // namespace detail

namespace {

// Per-axis kernel K[(ix·nxi + iξ)][iy] = w_y e^{-iξ y} conj(g₁(y − x)).
std::vector<cdouble> stft_kernel(const Window& window, const PhaseSpaceGrid& grid) {
    const auto x = grid.x_axis();
    const auto xi = grid.xi_axis();
    const auto w = grid.x_cell_weights();
    const std::size_t nx = x.size(), nxi = xi.size(), ny = x.size();

    std::vector<double> offsets(nx * ny);
    for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t j = 0; j < ny; ++j)
            offsets[i * ny + j] = x[j] - x[i];
    const auto g = synthesize(window.profile, offsets);

    std::vector<cdouble> phase(nxi * ny);
    for (std::size_t k = 0; k < nxi; ++k)
        for (std::size_t j = 0; j < ny; ++j)
            phase[k * ny + j] = std::polar(w[j], -xi[k] * x[j]);

    std::vector<cdouble> kernel(nx * nxi * ny);
    for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t k = 0; k < nxi; ++k)
            for (std::size_t j = 0; j < ny; ++j)
                kernel[(i * nxi + k) * ny + j] = phase[k * ny + j] * std::conj(g[i * ny + j]);
    return kernel;
}

PhaseSpaceMatrix stft_from_samples(std::vector<cdouble> samples, const Window& window, const PhaseSpaceGrid& grid,
                                   StftAlgorithm algorithm) {
    detail::check_stft_inputs(window, grid);
    const auto nx = static_cast<std::size_t>(grid.nx);
    const auto nxi = static_cast<std::size_t>(grid.nxi);
    const auto d = static_cast<std::size_t>(grid.dim);

    if (d == 1) {
        detail::StftRows rows(window, grid, algorithm);
        PhaseSpaceMatrix out{grid, std::vector<cdouble>(nx * nxi)};
        for (std::size_t i = 0; i < nx; ++i)
            rows.row(samples, i, std::span<cdouble>(out.values.data() + i * nxi, nxi));
        return out;
    }

    const auto kernel = stft_kernel(window, grid);
    std::vector<std::size_t> shape(d, nx);
    for (std::size_t a = 0; a < d; ++a)
        samples = detail::contract_axis<cdouble, cdouble>(samples, shape, a, kernel, nx * nxi);

    // (x1 ξ1, ..., xd ξd) → (x1..xd, ξ1..ξd)
    PhaseSpaceMatrix out{grid, std::vector<cdouble>(samples.size())};
    const std::size_t xi_count = grid.xi_count();
    for (std::size_t src = 0; src < samples.size(); ++src) {
        std::size_t rest = src, ix = 0, ixi = 0, xs = 1, xis = 1;
        for (std::size_t a = d; a-- > 0;) {
            const std::size_t pair = rest % (nx * nxi);
            rest /= nx * nxi;
            ix += (pair / nxi) * xs;
            ixi += (pair % nxi) * xis;
            xs *= nx;
            xis *= nxi;
        }
        out.values[ix * xi_count + ixi] = samples[src];
    }
    return out;
}

} // namespace

std::vector<cdouble> sample_on_grid(const HermiteExpansion& f, const PhaseSpaceGrid& grid) {
    if (f.dim() != grid.dim)
        throw ValidationError("function and grid dimensions differ");
    return synthesize_on_tensor_grid(f, grid.x_axis());
}

std::vector<cdouble> sample_on_grid(const GridFunction& f, const PhaseSpaceGrid& grid) {
    const auto points = tensor_points(grid.x_axis(), grid.dim);
    const auto d = static_cast<std::size_t>(grid.dim);
    std::vector<cdouble> samples(points.size() / d);
    for (std::size_t p = 0; p < samples.size(); ++p)
        samples[p] = f(std::span<const double>(points.data() + p * d, d));
    return samples;
}

PhaseSpaceMatrix stft(const HermiteExpansion& f, const Window& window, const PhaseSpaceGrid& grid,
                      StftAlgorithm algorithm) {
    detail::check_stft_inputs(window, grid);
    return stft_from_samples(sample_on_grid(f, grid), window, grid, algorithm);
}

PhaseSpaceMatrix stft(const GridFunction& f, const Window& window, const PhaseSpaceGrid& grid,
                      StftAlgorithm algorithm) {
    detail::check_stft_inputs(window, grid);
    return stft_from_samples(sample_on_grid(f, grid), window, grid, algorithm);
}

HermiteExpansion fourier_transform(const HermiteExpansion& e, int direction) {
    if (direction != 1 && direction != -1)
        throw ValidationError("Fourier direction must be +1 or -1");
    // (∓i)^k cycles through four exact values; no pow() on complex numbers.
    const cdouble unit = direction == 1 ? cdouble(0.0, -1.0) : cdouble(0.0, 1.0);
    const std::array<cdouble, 4> powers{cdouble(1.0, 0.0), unit, cdouble(-1.0, 0.0), -unit};
    HermiteExpansion out = e;
    const auto& idx = e.indices();
    for (int k = 0; k <= e.degree(); ++k) {
        const cdouble factor = powers[static_cast<std::size_t>(k % 4)];
        for (std::size_t i = idx.shell_begin(k); i < idx.shell_end(k); ++i)
            out.coeffs()[i] *= factor;
    }
    return out;
}

} // namespace hermite
