#include "hermite/estimator.hpp"

#include <algorithm>
#include <cmath>

#include "hermite/errors.hpp"

namespace hermite {

namespace {

constexpr double underflow_cut = 1e-12;

// Fills the scalar fields of a report whose times, ratios and theory are set.
void summarize(DecayReport& r) {
    const double sigma = r.exponents.sigma(r.dim, r.beta);
    std::vector<double> large_t, large_log, small_log_t, small_log;
    double first_large = 0.0;
    r.sup_bounded_constant = 0.0;
    for (std::size_t i = 0; i < r.times.size(); ++i) {
        const double t = r.times[i];
        const double ratio = r.ratios[i];
        if (t > 0.0)
            r.sup_bounded_constant = std::max(r.sup_bounded_constant, ratio / r.theory[i]);
        if (t > 0.0 && t <= 1.0) {
            r.sup_scaled_ratio = std::max(std::isnan(r.sup_scaled_ratio) ? 0.0 : r.sup_scaled_ratio,
                                          std::pow(t, sigma) * ratio);
            small_log_t.push_back(std::log(t));
            small_log.push_back(std::log(ratio));
        }
        if (t >= 1.0) {
            if (large_t.empty())
                first_large = ratio;
            if (ratio >= underflow_cut * first_large && ratio > 0.0) {
                large_t.push_back(t);
                large_log.push_back(std::log(ratio));
            }
        }
    }
    if (large_t.size() >= 2)
        r.fitted_large_time_rate = -least_squares_slope(large_t, large_log);
    if (small_log_t.size() >= 2)
        r.fitted_small_time_slope = least_squares_slope(small_log_t, small_log);
}

double single_norm(const auto& f, const Window& window, const PhaseSpaceGrid& grid, const NormSpec& spec) {
    const NormSpec specs[] = {spec};
    const double v = phase_space_norms(f, window, grid, specs)[0];
    if (!std::isfinite(v))
        throw NumericalError("non-finite phase-space norm");
    return v;
}

void require_positive(double denominator) {
    if (!(denominator > 0.0))
        throw NumericalError("initial datum has zero norm on the grid; the ratio is undefined");
}

DecayReport start_report(const ExponentSet& x, double beta, int dim) {
    x.validate();
    if (!(beta > 0.0))
        throw ValidationError("beta must be positive");
    DecayReport r;
    r.exponents = x;
    r.beta = beta;
    r.dim = dim;
    return r;
}

double theory_at(double t, double beta, int dim, const ExponentSet& x) {
    return t > 0.0 ? theoretical_constant({beta, t, dim}, x, 1.0) : 1.0;
}

} // namespace

NormSpec modulation_spec(double p, double q) {
    NormSpec s;
    s.p = p;
    s.q = q;
    s.inner = InnerVariable::x;
    return s;
}

std::vector<double> arithmetic_times(double t0, double t1, int samples) {
    if (samples < 2 || !(t1 > t0) || t0 < 0.0)
        throw ValidationError("time sweep needs 0 ≤ t0 < t1 and at least two samples");
    std::vector<double> out(static_cast<std::size_t>(samples));
    for (int i = 0; i < samples; ++i)
        out[static_cast<std::size_t>(i)] = t0 + (t1 - t0) * i / (samples - 1);
    return out;
}

std::vector<double> geometric_times(double t0, double t1, int samples) {
    if (samples < 2 || !(t1 > t0) || !(t0 > 0.0))
        throw ValidationError("geometric sweep needs 0 < t0 < t1 and at least two samples");
    std::vector<double> out(static_cast<std::size_t>(samples));
    const double a = std::log(t0);
    const double b = std::log(t1);
    for (int i = 0; i < samples; ++i)
        out[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * i / (samples - 1));
    out.front() = t0;
    out.back() = t1;
    return out;
}

double least_squares_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw ValidationError("least squares needs two or more paired samples");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    if (!(sxx > 0.0))
        throw ValidationError("least squares needs distinct abscissae");
    return sxy / sxx;
}

double measure_ratio(const HermiteExpansion& f, const FlowParams& params, const ExponentSet& x,
                     const PhaseSpaceGrid& grid, const Window& window) {
    params.validate();
    x.validate();
    const double den = single_norm(f, window, grid, modulation_spec(x.p1, x.q1));
    require_positive(den);
    return single_norm(apply_semigroup(f, params), window, grid, modulation_spec(x.p2, x.q2)) / den;
}

DecayReport measure_decay(const HermiteExpansion& f, double beta, const ExponentSet& x,
                          std::span<const double> times, const PhaseSpaceGrid& grid, const Window& window) {
    auto r = start_report(x, beta, f.dim());
    const double den = single_norm(f, window, grid, modulation_spec(x.p1, x.q1));
    require_positive(den);
    const auto num_spec = modulation_spec(x.p2, x.q2);
    for (double t : times) {
        const auto flowed = apply_semigroup(f, {beta, t, f.dim()});
        r.times.push_back(t);
        r.ratios.push_back(single_norm(flowed, window, grid, num_spec) / den);
        r.theory.push_back(theory_at(t, beta, f.dim(), x));
    }
    summarize(r);
    return r;
}

bool is_generic(const HermiteExpansion& f) {
    const double total = f.l2_norm();
    return total > 0.0 && std::abs(f.coeffs()[0]) >= 0.1 * total;
}

DecayReport fit_large_time(const HermiteExpansion& f, double beta, const ExponentSet& x, double t_max,
                           const PhaseSpaceGrid& grid, const Window& window, int samples) {
    if (samples < 5)
        throw ValidationError("large-time fit needs at least five time samples");
    if (!(t_max > 1.0))
        throw ValidationError("large-time fit needs t_max > 1");
    auto r = measure_decay(f, beta, x, arithmetic_times(1.0, t_max, samples), grid, window);
    const double first = r.ratios.front();
    const auto kept = std::count_if(r.ratios.begin(), r.ratios.end(),
                                    [&](double v) { return v > 0.0 && v >= underflow_cut * first; });
    if (kept < 5)
        throw NumericalError("ratios underflow before t_max; reduce t_max");
    return r;
}

DecayReport fit_small_time(const TestFunction& f, double beta, const ExponentSet& x, const SmallTimeOptions& options) {
    auto r = start_report(x, beta, f.dim);
    if (f.dim != 1)
        throw ValidationError("small-time sweeps of grid functions are one-dimensional");
    if (x.p2 > x.p1 || x.q2 > x.q1)
        throw ValidationError("small-time fit expects p2 ≤ p1 and q2 ≤ q1; apply ExponentSet::reduced() first");
    if (options.refinement < 0 || !(options.damping > 0.0))
        throw ValidationError("refinement must be non-negative and damping positive");
    const auto times = geometric_times(options.t_min, options.t_max, options.samples);

    auto refine = [&](PhaseSpaceGrid g) {
        for (int i = 0; i < options.refinement; ++i)
            g = g.refined();
        return g;
    };

    const double den =
        single_norm(f.f, options.window, refine(PhaseSpaceGrid::covering(f.radius, f.bandwidth, 1)),
                    modulation_spec(x.p1, x.q1));
    require_positive(den);

    // Highest mode that survives the damping threshold at t_min.
    const double top_eigen = std::pow(options.damping / options.t_min, 1.0 / beta);
    const double box_degree = 0.5 * (f.radius * f.radius + f.bandwidth * f.bandwidth);
    const int degree = static_cast<int>(std::ceil(std::min(0.5 * (top_eigen - 1.0), box_degree)));
    const auto projected = expand(f, std::max(degree, 0), options.refinement);

    const auto num_spec = modulation_spec(x.p2, x.q2);
    for (double t : times) {
        const double band = std::min(f.bandwidth, std::pow(options.damping / t, 0.5 / beta));
        const auto grid = refine(PhaseSpaceGrid::covering(f.radius, band, 1));
        const auto flowed = apply_semigroup(projected, {beta, t, 1});
        r.times.push_back(t);
        r.ratios.push_back(single_norm(flowed, options.window, grid, num_spec) / den);
        r.theory.push_back(theory_at(t, beta, 1, x));
    }
    summarize(r);
    return r;
}

DecayReport fit_small_time(const HermiteExpansion& f, double beta, const ExponentSet& x, double t_min, double t_max,
                           int samples, const PhaseSpaceGrid& grid, const Window& window) {
    if (t_max > 1.0)
        throw ValidationError("small-time sweep must stay within (0, 1]");
    return measure_decay(f, beta, x, geometric_times(t_min, t_max, samples), grid, window);
}

double damping_model_norm(double t, double beta, const ExponentSet& x, const PhaseSpaceGrid& grid) {
    if (grid.dim != 1)
        throw ValidationError("damping model norm is evaluated for d = 1");
    if (!(t > 0.0) || !(beta > 0.0))
        throw ValidationError("damping model needs t > 0 and beta > 0");
    grid.validate();
    PhaseSpaceMatrix m{grid, {}};
    const auto xs = grid.x_axis();
    const auto xis = grid.xi_axis();
    m.values.reserve(xs.size() * xis.size());
    for (double a : xs)
        for (double b : xis)
            m.values.emplace_back(std::exp(-t * std::pow(a * a + b * b, beta)));
    NormSpec spec = modulation_spec(x.ptilde(), x.qtilde());
    return mixed_norm(m, spec);
}

DampingModelFit fit_damping_model(double beta, const ExponentSet& x, double t_min, double t_max, int samples) {
    x.validate();
    DampingModelFit fit;
    fit.sigma = x.sigma(1, beta);
    fit.times = geometric_times(t_min, t_max, samples);
    // F_{t_min} drops below e^{-25} outside radius (25 / t_min)^{1/2β}; the
    // narrowest profile (t_max) has width about t_max^{-1/2β}.
    const double extent = std::pow(25.0 / t_min, 0.5 / beta) + 1.0;
    const double step = 0.25 * std::min(1.0, std::pow(t_max, -0.5 / beta));
    int n = static_cast<int>(std::ceil(2.0 * extent / step)) + 1;
    n += 1 - n % 2;
    const PhaseSpaceGrid grid{1, extent, extent, n, n};
    std::vector<double> log_t, log_norm;
    for (double t : fit.times) {
        const double v = damping_model_norm(t, beta, x, grid);
        fit.norms.push_back(v);
        log_t.push_back(std::log(t));
        log_norm.push_back(std::log(v));
    }
    fit.slope = least_squares_slope(log_t, log_norm);
    return fit;
}

} // namespace hermite
