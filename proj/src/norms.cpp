#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <ostream>
#include <istream>

#include <fmt/format.h>

#include "hermite/errors.hpp"
#include "hermite/phase_space.hpp"
#include "hermite/serialization.hpp"
#include "stft_rows.hpp"
#include "tensor_ops.hpp"

namespace hermite {

namespace {

// Product of per-axis trapezoid weights for each flattened multi-index.
std::vector<double> tensor_weights(const std::vector<double>& axis_weights, int dim) {
    const std::size_t n = axis_weights.size();
    std::size_t count = 1;
    for (int i = 0; i < dim; ++i)
        count *= n;
    std::vector<double> out(count, 1.0);
    for (std::size_t p = 0; p < count; ++p) {
        std::size_t rest = p;
        for (int i = 0; i < dim; ++i) {
            out[p] *= axis_weights[rest % n];
            rest /= n;
        }
    }
    return out;
}

std::vector<double> tensor_radii(const std::vector<double>& axis, int dim) {
    const auto pts = tensor_points(axis, dim);
    std::vector<double> r(pts.size() / static_cast<std::size_t>(dim));
    for (std::size_t p = 0; p < r.size(); ++p) {
        double sq = 0.0;
        for (int i = 0; i < dim; ++i) {
            const double v = pts[p * static_cast<std::size_t>(dim) + static_cast<std::size_t>(i)];
            sq += v * v;
        }
        r[p] = std::sqrt(sq);
    }
    return r;
}

double power(double a, double p) {
    if (p == 1.0)
        return a;
    if (p == 2.0)
        return a * a;
    return a == 0.0 ? 0.0 : std::pow(a, p);
}

double root(double s, double p) {
    if (p == 1.0)
        return s;
    if (p == 2.0)
        return std::sqrt(s);
    return std::pow(s, 1.0 / p);
}

// (Σ w_i a_i^p)^{1/p}, or max a_i for p = ∞.
double lp_reduce(std::span<const double> a, std::span<const double> w, double p, std::vector<double>& scratch) {
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : a)
            m = std::max(m, v);
        return m;
    }
    scratch.resize(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        scratch[i] = w[i] * power(a[i], p);
    return root(detail::pairwise_sum<double>(scratch), p);
}

} // namespace

double mixed_norm(const PhaseSpaceMatrix& m, const NormSpec& spec) {
    spec.validate();
    const auto& grid = m.grid;
    const std::size_t nx = grid.x_count(), nxi = grid.xi_count();
    if (m.values.size() != nx * nxi)
        throw ValidationError("phase-space matrix size does not match its grid");

    const auto wx = tensor_weights(grid.x_cell_weights(), grid.dim);
    const auto wxi = tensor_weights(grid.xi_cell_weights(), grid.dim);
    std::vector<double> rx, rxi;
    if (spec.s != 0.0) {
        rx = tensor_radii(grid.x_axis(), grid.dim);
        rxi = tensor_radii(grid.xi_axis(), grid.dim);
    }
    auto magnitude = [&](std::size_t ix, std::size_t ixi) {
        const double a = std::abs(m.values[ix * nxi + ixi]);
        return spec.s == 0.0 ? a : a * std::pow(1.0 + rx[ix] + rxi[ixi], spec.s);
    };

    std::vector<double> scratch, inner_vals, outer_vals;
    if (spec.inner == InnerVariable::x) {
        inner_vals.resize(nx);
        outer_vals.resize(nxi);
        for (std::size_t ixi = 0; ixi < nxi; ++ixi) {
            for (std::size_t ix = 0; ix < nx; ++ix)
                inner_vals[ix] = magnitude(ix, ixi);
            outer_vals[ixi] = lp_reduce(inner_vals, wx, spec.p, scratch);
        }
        return lp_reduce(outer_vals, wxi, spec.q, scratch);
    }
    inner_vals.resize(nxi);
    outer_vals.resize(nx);
    for (std::size_t ix = 0; ix < nx; ++ix) {
        for (std::size_t ixi = 0; ixi < nxi; ++ixi)
            inner_vals[ixi] = magnitude(ix, ixi);
        outer_vals[ix] = lp_reduce(inner_vals, wxi, spec.p, scratch);
    }
    return lp_reduce(outer_vals, wx, spec.q, scratch);
}

namespace {

// d = 1: one STFT row per position, reduced on the fly.
std::vector<double> streamed_norms(std::span<const cdouble> samples, const Window& window, const PhaseSpaceGrid& grid,
                                   std::span<const NormSpec> specs) {
    for (const auto& spec : specs)
        spec.validate();
    detail::StftRows rows(window, grid, StftAlgorithm::automatic);
    const std::size_t nx = grid.x_count(), nxi = grid.xi_count();
    const auto wx = grid.x_cell_weights();
    const auto wxi = grid.xi_cell_weights();
    const auto x = grid.x_axis();
    const auto xi = grid.xi_axis();

    // x-inner specs accumulate Σ_x w_x a^p (or max) per ξ; ξ-inner specs reduce each row.
    std::vector<std::vector<double>> partial(specs.size());
    for (std::size_t s = 0; s < specs.size(); ++s)
        partial[s].assign(specs[s].inner == InnerVariable::x ? nxi : nx, 0.0);

    std::vector<cdouble> values(nxi);
    std::vector<double> magnitude(nxi), scratch;
    for (std::size_t i = 0; i < nx; ++i) {
        rows.row(samples, i, values);
        for (std::size_t s = 0; s < specs.size(); ++s) {
            const auto& spec = specs[s];
            for (std::size_t j = 0; j < nxi; ++j) {
                const double a = std::abs(values[j]);
                magnitude[j] = spec.s == 0.0 ? a : a * std::pow(1.0 + std::abs(x[i]) + std::abs(xi[j]), spec.s);
            }
            auto& acc = partial[s];
            if (spec.inner == InnerVariable::xi) {
                acc[i] = lp_reduce(magnitude, wxi, spec.p, scratch);
            } else if (std::isinf(spec.p)) {
                for (std::size_t j = 0; j < nxi; ++j)
                    acc[j] = std::max(acc[j], magnitude[j]);
            } else {
                for (std::size_t j = 0; j < nxi; ++j)
                    acc[j] += wx[i] * power(magnitude[j], spec.p);
            }
        }
    }

    std::vector<double> out(specs.size());
    for (std::size_t s = 0; s < specs.size(); ++s) {
        const auto& spec = specs[s];
        auto& acc = partial[s];
        if (spec.inner == InnerVariable::xi) {
            out[s] = lp_reduce(acc, wx, spec.q, scratch);
            continue;
        }
        if (!std::isinf(spec.p))
            for (auto& v : acc)
                v = root(v, spec.p);
        out[s] = lp_reduce(acc, wxi, spec.q, scratch);
    }
    return out;
}

template <typename F>
std::vector<double> norms_of(const F& f, const Window& window, const PhaseSpaceGrid& grid,
                             std::span<const NormSpec> specs) {
    if (grid.dim == 1)
        return streamed_norms(sample_on_grid(f, grid), window, grid, specs);
    const auto m = stft(f, window, grid);
    std::vector<double> out;
    for (const auto& spec : specs)
        out.push_back(mixed_norm(m, spec));
    return out;
}

} // namespace

std::vector<double> phase_space_norms(const HermiteExpansion& f, const Window& window, const PhaseSpaceGrid& grid,
                                      std::span<const NormSpec> specs) {
    return norms_of(f, window, grid, specs);
}

std::vector<double> phase_space_norms(const GridFunction& f, const Window& window, const PhaseSpaceGrid& grid,
                                      std::span<const NormSpec> specs) {
    return norms_of(f, window, grid, specs);
}

namespace {

void require_order(const NormSpec& spec, InnerVariable expected) {
    if (spec.inner != expected)
        throw ValidationError(expected == InnerVariable::x ? "modulation norm needs the x-inner order"
                                                           : "amalgam norm needs the xi-inner order");
}

} // namespace

double modulation_norm(const HermiteExpansion& f, const NormSpec& spec, const PhaseSpaceGrid& grid,
                       const Window& window) {
    require_order(spec, InnerVariable::x);
    return norms_of(f, window, grid, std::span(&spec, 1))[0];
}

double modulation_norm(const GridFunction& f, const NormSpec& spec, const PhaseSpaceGrid& grid, const Window& window) {
    require_order(spec, InnerVariable::x);
    return norms_of(f, window, grid, std::span(&spec, 1))[0];
}

double amalgam_norm(const HermiteExpansion& f, const NormSpec& spec, const PhaseSpaceGrid& grid,
                    const Window& window) {
    require_order(spec, InnerVariable::xi);
    return norms_of(f, window, grid, std::span(&spec, 1))[0];
}

double amalgam_norm(const GridFunction& f, const NormSpec& spec, const PhaseSpaceGrid& grid, const Window& window) {
    require_order(spec, InnerVariable::xi);
    return norms_of(f, window, grid, std::span(&spec, 1))[0];
}

double fourier_duality_constant(const Window& window, const PhaseSpaceGrid& grid) {
    static std::mutex mutex;
    static std::map<std::string, double> cache;
    const std::string key = window.name + "/" + grid.hash();
    {
        std::lock_guard lock(mutex);
        if (auto it = cache.find(key); it != cache.end())
            return it->second;
    }
    const auto ground = HermiteExpansion::basis(MultiIndex(std::vector<int>(static_cast<std::size_t>(grid.dim), 0)), 0);
    const double amalgam = amalgam_norm(ground, {2.0, 2.0, 0.0, InnerVariable::xi}, grid, window);
    const double modulation = modulation_norm(fourier_transform(ground, 1), {2.0, 2.0, 0.0, InnerVariable::x}, grid, window);
    const double constant = amalgam / modulation;
    std::lock_guard lock(mutex);
    cache.emplace(key, constant);
    return constant;
}

namespace {

constexpr std::size_t basis_budget_bytes = std::size_t{256} << 20;

} // namespace

ModulationNormEvaluator::ModulationNormEvaluator(int dim, int degree, PhaseSpaceGrid grid, Window window)
    : dim_(dim), degree_(degree), grid_(grid), window_(std::move(window)) {
    if (grid_.dim != dim)
        throw ValidationError("evaluator grid dimension does not match");
    const auto indices = IndexSet::get(dim, degree);
    const std::size_t entries = grid_.x_count() * grid_.xi_count();
    if (indices->size() * entries * sizeof(cdouble) > basis_budget_bytes)
        return;
    basis_.resize(indices->size() * entries);
    for (std::size_t mode = 0; mode < indices->size(); ++mode) {
        const auto m = stft(HermiteExpansion::basis((*indices)[mode], degree), window_, grid_);
        std::copy(m.values.begin(), m.values.end(), basis_.begin() + static_cast<std::ptrdiff_t>(mode * entries));
    }
}

PhaseSpaceMatrix ModulationNormEvaluator::transform(const HermiteExpansion& e) const {
    if (e.dim() != dim_ || e.degree() != degree_)
        throw ValidationError("expansion shape does not match the evaluator");
    if (basis_.empty())
        return stft(e, window_, grid_);
    const std::size_t entries = grid_.x_count() * grid_.xi_count();
    PhaseSpaceMatrix out{grid_, std::vector<cdouble>(entries)};
    for (std::size_t mode = 0; mode < e.size(); ++mode) {
        const cdouble c = e.coeffs()[mode];
        if (c == cdouble{})
            continue;
        const cdouble* src = basis_.data() + mode * entries;
        for (std::size_t i = 0; i < entries; ++i)
            out.values[i] += c * src[i];
    }
    return out;
}

double ModulationNormEvaluator::norm(const HermiteExpansion& e, const NormSpec& spec) const {
    return mixed_norm(transform(e), spec);
}

void write_phase_space_csv(std::ostream& out, const PhaseSpaceMatrix& m) {
    const auto& grid = m.grid;
    const auto d = static_cast<std::size_t>(grid.dim);
    std::string header;
    for (std::size_t i = 1; i <= d; ++i)
        header += fmt::format("x{},", i);
    for (std::size_t i = 1; i <= d; ++i)
        header += fmt::format("xi{},", i);
    out << header << "re,im\n";
    const auto xs = tensor_points(grid.x_axis(), grid.dim);
    const auto xis = tensor_points(grid.xi_axis(), grid.dim);
    const std::size_t nxi = grid.xi_count();
    for (std::size_t ix = 0; ix < grid.x_count(); ++ix) {
        for (std::size_t ixi = 0; ixi < nxi; ++ixi) {
            std::string row;
            for (std::size_t i = 0; i < d; ++i)
                row += fmt::format("{:.17g},", xs[ix * d + i]);
            for (std::size_t i = 0; i < d; ++i)
                row += fmt::format("{:.17g},", xis[ixi * d + i]);
            const cdouble v = m.values[ix * nxi + ixi];
            row += fmt::format("{:.17g},{:.17g}\n", v.real(), v.imag());
            out << row;
        }
    }
    if (!out)
        throw IoError("failed to write phase-space CSV");
}

namespace {

constexpr std::array<char, 4> matrix_magic{'H', 'P', 'S', 'M'};

} // namespace

void write_phase_space_binary(std::ostream& out, const PhaseSpaceMatrix& m) {
    out.write(matrix_magic.data(), matrix_magic.size());
    detail::write_u32(out, 1);
    detail::write_u32(out, static_cast<std::uint32_t>(m.grid.dim));
    detail::write_u32(out, static_cast<std::uint32_t>(m.grid.nx));
    detail::write_u32(out, static_cast<std::uint32_t>(m.grid.nxi));
    detail::write_f64(out, m.grid.x_extent);
    detail::write_f64(out, m.grid.xi_extent);
    detail::write_u64(out, m.values.size());
    for (const auto& v : m.values) {
        detail::write_f64(out, v.real());
        detail::write_f64(out, v.imag());
    }
    if (!out)
        throw IoError("failed to write phase-space container");
}

PhaseSpaceMatrix read_phase_space_binary(std::istream& in) {
    std::array<char, 4> magic{};
    in.read(magic.data(), magic.size());
    if (!in || magic != matrix_magic)
        throw IoError("not a phase-space container (bad magic)");
    if (detail::read_u32(in) != 1)
        throw IoError("unsupported phase-space container version");
    PhaseSpaceMatrix m;
    m.grid.dim = static_cast<int>(detail::read_u32(in));
    m.grid.nx = static_cast<int>(detail::read_u32(in));
    m.grid.nxi = static_cast<int>(detail::read_u32(in));
    m.grid.x_extent = detail::read_f64(in);
    m.grid.xi_extent = detail::read_f64(in);
    m.grid.validate();
    const auto count = detail::read_u64(in);
    if (count != m.grid.x_count() * m.grid.xi_count())
        throw IoError("phase-space value count does not match grid");
    m.values.resize(count);
    for (auto& v : m.values) {
        const double re = detail::read_f64(in);
        const double im = detail::read_f64(in);
        v = {re, im};
    }
    return m;
}

} // namespace hermite
