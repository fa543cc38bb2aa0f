#include "hermite/heat_solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "hermite/errors.hpp"
#include "hermite/semigroup.hpp"

namespace hermite {

namespace {

void require_finite(const HermiteExpansion& e, double threshold) {
    const double n = e.l2_norm();
    if (!std::isfinite(n))
        throw NumericalError("Picard iterate became non-finite");
    if (n > threshold)
        throw NumericalError(fmt::format("Picard iterate exceeded the blow-up threshold {:g}", threshold));
}

std::vector<double> mesh_times(const SolverConfig& cfg) {
    const int m = cfg.steps();
    std::vector<double> t(static_cast<std::size_t>(m) + 1);
    for (int j = 0; j <= m; ++j)
        t[static_cast<std::size_t>(j)] = cfg.horizon * j / m;
    return t;
}

// One global Picard solve on the cfg mesh; fills times, states and diagnostics.
Trajectory picard_global(const HermiteExpansion& u0, const SolverConfig& cfg, const SolutionNorm& norm) {
    Trajectory tr;
    tr.times = mesh_times(cfg);
    tr.states.reserve(tr.times.size());
    for (double t : tr.times)
        tr.states.push_back(apply_semigroup(u0, {cfg.beta, t, cfg.dim}));

    for (int it = 1; it <= cfg.picard_max_iters; ++it) {
        auto next = duhamel_map(tr.states, u0, cfg);
        double increment = 0.0;
        for (std::size_t j = 0; j < next.size(); ++j) {
            require_finite(next[j], cfg.blowup_threshold);
            increment = std::max(increment, norm(next[j] - tr.states[j]));
        }
        if (!std::isfinite(increment))
            throw NumericalError("Picard increment became non-finite");
        auto& diag = tr.picard;
        if (!diag.increments.empty())
            diag.contraction_ratios.push_back(diag.increments.back() > 0.0 ? increment / diag.increments.back() : 0.0);
        diag.increments.push_back(increment);
        diag.iterations = it;
        tr.states = std::move(next);
        if (increment < cfg.picard_tol)
            return tr;
    }
    throw ConvergenceError(fmt::format("Picard iteration did not reach {:g} within {} iterations", cfg.picard_tol,
                                       cfg.picard_max_iters));
}

void fill_norms(Trajectory& tr, const SolverConfig& cfg, const SolutionNorm& norm) {
    tr.norms.clear();
    tr.xnorm_running = 0.0;
    const double rate = std::pow(static_cast<double>(cfg.dim), cfg.beta);
    for (std::size_t j = 0; j < tr.states.size(); ++j) {
        const double n = norm(tr.states[j]);
        tr.norms.push_back(n);
        tr.xnorm_running = std::max(tr.xnorm_running, std::exp(rate * tr.times[j]) * n);
    }
}

} // namespace

void SolverConfig::validate(const NormSpec& norm) const {
    if (!(beta > 0.0))
        throw ValidationError("beta must be positive");
    if (k < 1)
        throw ValidationError("k must be a positive integer");
    if (dim < 1 || dim > max_dimension)
        throw ValidationError("dimension must be 1, 2 or 3");
    if (degree < 0)
        throw ValidationError("truncation degree must be non-negative");
    if (!(dt > 0.0) || !(horizon > 0.0))
        throw ValidationError("dt and T must be positive");
    if (!(picard_tol > 0.0) || picard_max_iters < 1)
        throw ValidationError("picard_tol must be positive and picard_max_iters at least 1");
    if (!(eps > 0.0) || !(blowup_threshold > 0.0))
        throw ValidationError("eps and blowup_threshold must be positive");
    if (!std::isfinite(lambda.real()) || !std::isfinite(lambda.imag()))
        throw ValidationError("lambda must be finite");
    Window::by_name(window);
    check_admissible(*this, norm);
}

int SolverConfig::steps() const { return std::max(1, static_cast<int>(std::lround(horizon / dt))); }

void check_admissible(const SolverConfig& cfg, const NormSpec& norm) {
    norm.validate();
    if (norm.p < 1.0 || norm.q < 1.0)
        throw ValidationError("the solver works in Banach spaces only (p, q ≥ 1)");
    if (norm.s != 0.0)
        throw ValidationError("the solver does not support weighted norms (s must be 0)");
    if (cfg.allow_out_of_theory)
        return;
    const double q = norm.inner == InnerVariable::x ? norm.q : norm.p;
    const double q_max = (2.0 * cfg.k + 1.0) / (2.0 * cfg.k);
    if (q > q_max)
        throw ValidationError(fmt::format(
            "exponent q = {:g} violates the hypothesis q ≤ (2k+1)/2k = {:g}; set allow_out_of_theory to run anyway", q,
            q_max));
    if (!(1.0 / q + cfg.beta / (cfg.k * cfg.dim) > 1.0))
        throw ValidationError(fmt::format("exponents violate the hypothesis 1/q + β/(kd) > 1 (value {:g}); set "
                                          "allow_out_of_theory to run anyway",
                                          1.0 / q + cfg.beta / (cfg.k * cfg.dim)));
}

QuadratureRule nonlinearity_rule(int k, int degree) {
    if (k < 1 || degree < 0)
        throw ValidationError("nonlinearity rule needs k ≥ 1 and N ≥ 0");
    return gauss_hermite_rule((k + 1) * degree + 1).rescaled(k + 1.0);
}

HermiteExpansion nonlinearity(const HermiteExpansion& e, int k, cdouble lambda, const QuadratureRule& rule) {
    if (k < 1)
        throw ValidationError("k must be a positive integer");
    if (rule.order() < (k + 1) * e.degree() + 1)
        throw ValidationError(fmt::format("nonlinearity needs at least {} quadrature nodes, got {}",
                                          (k + 1) * e.degree() + 1, rule.order()));
    auto samples = synthesize_on_tensor_grid(e, rule.nodes);
    for (auto& u : samples) {
        const double mod2 = std::norm(u);
        double power = 1.0;
        for (int i = 0; i < k; ++i)
            power *= mod2;
        u = lambda * u * power;
    }
    return analyze(samples, e.dim(), e.degree(), rule);
}

SolutionNorm::SolutionNorm(int dim, int degree, const NormSpec& spec, const std::string& window)
    : spec_(spec), evaluator_(dim, degree, PhaseSpaceGrid::default_for(degree, dim), Window::by_name(window)) {
    spec_.validate();
}

double SolutionNorm::operator()(const HermiteExpansion& e) const { return evaluator_.norm(e, spec_); }

std::vector<HermiteExpansion> duhamel_map(const std::vector<HermiteExpansion>& u, const HermiteExpansion& u0,
                                          const SolverConfig& cfg) {
    const int m = cfg.steps();
    if (u.size() != static_cast<std::size_t>(m) + 1)
        throw ValidationError("trajectory is not sampled on the configuration mesh");
    if (u0.dim() != cfg.dim || u0.degree() != cfg.degree)
        throw ValidationError("initial datum does not match the configured dimension and degree");
    const double h = cfg.horizon / m;
    const auto rule = nonlinearity_rule(cfg.k, cfg.degree);
    const auto& idx = u0.indices();

    std::vector<double> step(static_cast<std::size_t>(cfg.degree) + 1);
    for (int k = 0; k <= cfg.degree; ++k)
        step[static_cast<std::size_t>(k)] = decay_factor(k, cfg.dim, cfg.beta, h);

    std::vector<HermiteExpansion> out;
    out.reserve(u.size());
    HermiteExpansion integral(cfg.dim, cfg.degree);
    HermiteExpansion previous = nonlinearity(u[0], cfg.k, cfg.lambda, rule);
    out.push_back(u0);
    for (int j = 1; j <= m; ++j) {
        const auto current = nonlinearity(u[static_cast<std::size_t>(j)], cfg.k, cfg.lambda, rule);
        auto c = integral.coeffs();
        const auto np = previous.coeffs();
        const auto nc = current.coeffs();
        for (int k = 0; k <= cfg.degree; ++k) {
            const double f = step[static_cast<std::size_t>(k)];
            for (std::size_t a = idx.shell_begin(k); a < idx.shell_end(k); ++a)
                c[a] = f * c[a] + 0.5 * h * (f * np[a] + nc[a]);
        }
        out.push_back(apply_semigroup(u0, {cfg.beta, cfg.horizon * j / m, cfg.dim}) + integral);
        previous = current;
    }
    return out;
}

Trajectory picard_solve(const HermiteExpansion& u0, const SolverConfig& cfg, const NormSpec& norm) {
    cfg.validate(norm);
    if (u0.dim() != cfg.dim || u0.degree() != cfg.degree)
        throw ValidationError("initial datum does not match the configured dimension and degree");
    const SolutionNorm measure(cfg.dim, cfg.degree, norm, cfg.window);

    if (measure(u0) <= cfg.eps) {
        auto tr = picard_global(u0, cfg, measure);
        tr.picard.chunk = cfg.horizon;
        fill_norms(tr, cfg, measure);
        return tr;
    }

    // Local mode: march sub-horizons, halving the chunk when a solve fails.
    Trajectory tr;
    tr.times.push_back(0.0);
    tr.states.push_back(u0);
    tr.picard.local_mode = true;
    double chunk = cfg.horizon;
    double t0 = 0.0;
    while (t0 < cfg.horizon * (1.0 - 1e-12)) {
        SolverConfig sub = cfg;
        sub.horizon = std::min(chunk, cfg.horizon - t0);
        sub.dt = std::min(cfg.dt, sub.horizon);
        Trajectory part;
        try {
            part = picard_global(tr.states.back(), sub, measure);
        } catch (const NumericalError& err) {
            if (++tr.picard.horizon_halvings > 6)
                throw ConvergenceError(fmt::format("local solve failed after 6 horizon halvings: {}", err.what()));
            chunk *= 0.5;
            continue;
        }
        for (std::size_t j = 1; j < part.times.size(); ++j) {
            tr.times.push_back(t0 + part.times[j]);
            tr.states.push_back(std::move(part.states[j]));
        }
        auto& diag = tr.picard;
        diag.iterations = std::max(diag.iterations, part.picard.iterations);
        diag.increments.insert(diag.increments.end(), part.picard.increments.begin(), part.picard.increments.end());
        diag.contraction_ratios.insert(diag.contraction_ratios.end(), part.picard.contraction_ratios.begin(),
                                       part.picard.contraction_ratios.end());
        t0 += sub.horizon;
    }
    tr.picard.chunk = chunk;
    fill_norms(tr, cfg, measure);
    return tr;
}

double fixed_point_residual(const Trajectory& tr, const HermiteExpansion& u0, const SolverConfig& cfg,
                            const NormSpec& norm) {
    if (tr.picard.local_mode)
        throw ValidationError("the fixed-point residual is defined for a single global mesh");
    const SolutionNorm measure(cfg.dim, cfg.degree, norm, cfg.window);
    const auto image = duhamel_map(tr.states, u0, cfg);
    double worst = 0.0;
    for (std::size_t j = 0; j < image.size(); ++j)
        worst = std::max(worst, measure(image[j] - tr.states[j]));
    return worst;
}

double decay_monitor(const Trajectory& tr, const SolverConfig& cfg, const NormSpec& norm) {
    if (tr.states.empty())
        return 0.0;
    const SolutionNorm measure(cfg.dim, tr.states.front().degree(), norm, cfg.window);
    const double rate = std::pow(static_cast<double>(cfg.dim), cfg.beta);
    double sup = 0.0;
    for (std::size_t j = 0; j < tr.states.size(); ++j)
        sup = std::max(sup, std::exp(rate * tr.times[j]) * measure(tr.states[j]));
    return sup;
}

double mesh_modulus(const Trajectory& tr) {
    double worst = 0.0;
    for (std::size_t j = 1; j < tr.norms.size(); ++j)
        worst = std::max(worst, std::abs(tr.norms[j] - tr.norms[j - 1]));
    return worst;
}

HermiteExpansion constant_expansion(double a, int dim, int degree) {
    if (degree < 0 || dim < 1 || dim > max_dimension)
        throw ValidationError("constant expansion needs N ≥ 0 and d ∈ {1, 2, 3}");
    // One-dimensional coefficients of 1 by the ratio c_{2m} / c_{2m-2} = √((2m−1)/2m).
    std::vector<double> line(static_cast<std::size_t>(degree) + 1, 0.0);
    line[0] = std::sqrt(2.0) * std::pow(std::numbers::pi, 0.25);
    for (int n = 2; n <= degree; n += 2)
        line[static_cast<std::size_t>(n)] = line[static_cast<std::size_t>(n) - 2] * std::sqrt((n - 1.0) / n);
    HermiteExpansion e(dim, degree);
    const auto& idx = e.indices();
    for (std::size_t i = 0; i < e.size(); ++i) {
        double c = a;
        for (int axis = 0; axis < dim; ++axis)
            c *= line[static_cast<std::size_t>(idx[i][axis])];
        e.coeffs()[i] = c;
    }
    return e;
}

double constant_truncation_error(const HermiteExpansion& truncated, double a, double radius) {
    if (a == 0.0)
        return truncated.l2_norm() == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    const int samples = 201;
    std::vector<double> pts;
    for (int i = 0; i < samples; ++i) {
        const double x = -radius + 2.0 * radius * i / (samples - 1);
        for (int axis = 0; axis < truncated.dim(); ++axis)
            pts.push_back(axis == 0 ? x : 0.0);
    }
    const auto values = synthesize(truncated, pts);
    double worst = 0.0;
    for (const auto& v : values)
        worst = std::max(worst, std::abs(v - a) / std::abs(a));
    return worst;
}

EpsCalibration calibrate_eps(const HermiteExpansion& profile, SolverConfig cfg, const NormSpec& norm,
                             double amplitude_max, int steps) {
    if (!(amplitude_max > 0.0) || steps < 1)
        throw ValidationError("calibration needs a positive amplitude bound and at least one step");
    cfg.eps = std::numeric_limits<double>::infinity();
    cfg.validate(norm);
    const SolutionNorm measure(cfg.dim, cfg.degree, norm, cfg.window);

    auto decays = [&](double amplitude) {
        const auto u0 = cdouble(amplitude) * profile;
        try {
            const auto tr = picard_solve(u0, cfg, norm);
            return std::isfinite(tr.xnorm_running) && tr.norms.back() < tr.norms.front();
        } catch (const NumericalError&) {
            return false;
        }
    };

    EpsCalibration out;
    double lo = 0.0, hi = amplitude_max;
    if (decays(hi)) {
        lo = hi;
    } else {
        for (int i = 0; i < steps; ++i) {
            const double mid = 0.5 * (lo + hi);
            (decays(mid) ? lo : hi) = mid;
            ++out.bisection_steps;
        }
    }
    out.amplitude = lo;
    out.eps = measure(cdouble(lo) * profile);
    return out;
}

} // namespace hermite
