#include "hermite/corpus.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <random>
#include <tuple>

#include <fmt/format.h>

#include "hermite/errors.hpp"

namespace hermite {

namespace {

double radial(std::span<const double> x) {
    double sq = 0.0;
    for (double v : x)
        sq += v * v;
    return std::sqrt(sq);
}

double psi(double z) { return z > 0.0 ? std::exp(-1.0 / z) : 0.0; }

// Default phase-space box for smooth truncations (the C^∞ transitions have
// sub-exponentially decaying spectra).
constexpr double truncation_bandwidth = 100.0;
constexpr double cusp_bandwidth = 400.0;
constexpr double cusp_step = 0.003;

TestFunction from_expansion(std::string name, HermiteExpansion e) {
    const double extent = std::sqrt(2.0 * e.degree() + e.dim()) + 6.0;
    TestFunction t;
    t.name = std::move(name);
    t.dim = e.dim();
    t.f = [e](std::span<const double> x) { return synthesize(e, x)[0]; };
    t.radius = extent;
    t.bandwidth = extent;
    t.step = 0.05;
    t.expansion = std::move(e);
    return t;
}

TestFunction from_function(std::string name, GridFunction f, double radius, double bandwidth, double step) {
    TestFunction t;
    t.name = std::move(name);
    t.f = std::move(f);
    t.radius = radius;
    t.bandwidth = bandwidth;
    t.step = step;
    return t;
}

TestFunction power_law_entry(const std::string& prefix, double alpha, double radius) {
    return from_function(fmt::format("{}f_alpha_{:g}", prefix, alpha), power_law(alpha, mollifier_scale, radius),
                         radius, cusp_bandwidth, cusp_step);
}

} // namespace

double smooth_cutoff(double r, double radius, double width) {
    const double u = (std::abs(r) - (radius - width)) / width;
    if (u <= 0.0)
        return 1.0;
    if (u >= 1.0)
        return 0.0;
    const double a = psi(1.0 - u);
    return a / (a + psi(u));
}

double bump(double x, double half_width) {
    const double s = x / half_width;
    if (std::abs(s) >= 1.0)
        return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - s * s));
}

GridFunction power_law(double alpha, double delta, double radius, int dim) {
    if (!(alpha > 0.0) || !(delta > 0.0) || !(radius > 2.0))
        throw ValidationError("power law needs alpha > 0, delta > 0 and radius > 2");
    return [=](std::span<const double> x) {
        if (static_cast<int>(x.size()) != dim)
            throw ValidationError("power law evaluated at a point of the wrong dimension");
        const double r = radial(x);
        return cdouble(std::pow(r * r + delta * delta, -0.5 * alpha) * smooth_cutoff(r, radius, 2.0));
    };
}

std::vector<TestFunction> corpus() {
    std::vector<TestFunction> out;
    out.push_back(from_expansion("phi0", HermiteExpansion::basis(MultiIndex{0}, 0)));
    out.push_back(from_expansion("phi1", HermiteExpansion::basis(MultiIndex{1}, 1)));
    out.push_back(from_expansion("phi2", HermiteExpansion::basis(MultiIndex{2}, 2)));
    out.push_back(from_expansion("phi5", HermiteExpansion::basis(MultiIndex{5}, 5)));
    out.push_back(from_expansion("phi0_plus_phi1",
                                 HermiteExpansion::basis(MultiIndex{0}, 1) + HermiteExpansion::basis(MultiIndex{1}, 1)));
    out.push_back(from_expansion("hermite_mix", random_generic_expansions(1, 1, 7, 20240611).front()));

    const double g = std::pow(std::numbers::pi, -0.25);
    out.push_back(from_function("gauss_shifted", [g](std::span<const double> x) {
        return cdouble(g * std::exp(-0.5 * (x[0] - 1.5) * (x[0] - 1.5)));
    }, 9.5, 8.0, 0.05));
    out.push_back(from_function("gauss_modulated", [g](std::span<const double> x) {
        return std::polar(g * std::exp(-0.5 * x[0] * x[0]), 2.0 * x[0]);
    }, 8.0, 10.0, 0.05));
    out.push_back(from_function("gauss_wide", [](std::span<const double> x) {
        return cdouble(std::exp(-x[0] * x[0] / 8.0));
    }, 16.0, 4.0, 0.05));
    out.push_back(from_function("gauss_narrow", [](std::span<const double> x) {
        return cdouble(std::exp(-2.0 * x[0] * x[0]));
    }, 4.0, 14.0, 0.05));
    out.push_back(from_function("sech", [](std::span<const double> x) {
        return cdouble(1.0 / std::cosh(x[0]));
    }, 35.0, 23.0, 0.05));
    out.push_back(from_function("lorentzian", [](std::span<const double> x) {
        return cdouble(smooth_cutoff(x[0], 12.0, 2.0) / (1.0 + x[0] * x[0]));
    }, 12.0, truncation_bandwidth, 0.02));

    for (double alpha : {0.2, 0.3, 0.45})
        out.push_back(power_law_entry("", alpha, 8.0));

    const auto base = power_law(0.3, mollifier_scale, 8.0);
    out.push_back(from_function("chirp_f_alpha_0.3", [base](std::span<const double> x) {
        return base(x) * (1.0 + 0.5 * std::cos(x[0] * x[0]));
    }, 8.0, cusp_bandwidth, cusp_step));

    const auto unbounded = power_law(0.3, mollifier_scale, 1e6);
    out.push_back(from_function("lattice_f_alpha_0.3", [unbounded](std::span<const double> x) {
        cdouble acc{};
        for (int mu = -6; mu <= 6; ++mu) {
            const double y = x[0] - mu;
            const double chi = bump(y, 0.45);
            if (chi != 0.0) {
                const double shifted[] = {y};
                acc += unbounded(shifted) * chi;
            }
        }
        return acc;
    }, 6.5, cusp_bandwidth, cusp_step));

    out.push_back(from_function("constant", [](std::span<const double> x) {
        return cdouble(smooth_cutoff(x[0], 8.0, 2.0));
    }, 8.0, truncation_bandwidth, 0.02));
    out.push_back(from_function("cos_chirp", [](std::span<const double> x) {
        return cdouble(std::cos(x[0] * x[0]) * smooth_cutoff(x[0], 8.0, 2.0));
    }, 8.0, truncation_bandwidth, 0.01));
    out.push_back(from_function("bump", [](std::span<const double> x) {
        return cdouble(bump(x[0], 2.0));
    }, 2.0, truncation_bandwidth, 0.01));
    return out;
}

std::vector<TestFunction> stress_family() {
    std::vector<TestFunction> out;
    for (double alpha : {0.2, 0.3, 0.45})
        out.push_back(power_law_entry("stress_", alpha, 10.0));
    return out;
}

TestFunction corpus_entry(const std::string& name) {
    for (auto& entry : corpus())
        if (entry.name == name)
            return entry;
    for (auto& entry : stress_family())
        if (entry.name == name)
            return entry;
    throw ValidationError("unknown corpus function '" + name + "'");
}

QuadratureRule trapezoid_rule(double extent, int points) {
    if (!(extent > 0.0) || points < 2)
        throw ValidationError("trapezoid rule needs a positive extent and at least two points");
    QuadratureRule rule;
    const double h = 2.0 * extent / (points - 1);
    for (int i = 0; i < points; ++i) {
        const double x = -extent + h * i;
        const double w = (i == 0 || i == points - 1) ? 0.5 * h : h;
        rule.nodes.push_back(x);
        rule.flat_weights.push_back(w);
        rule.weights.push_back(w * std::exp(-x * x));
    }
    return rule;
}

HermiteExpansion expand(const TestFunction& f, int degree, int refinement) {
    if (degree < 0 || refinement < 0)
        throw ValidationError("expansion degree and refinement must be non-negative");
    if (f.expansion)
        return f.expansion->with_degree(degree);

    static std::mutex mutex;
    static std::map<std::tuple<std::string, int, int>, HermiteExpansion> cache;
    const auto key = std::make_tuple(f.name, degree, refinement);
    {
        std::lock_guard lock(mutex);
        if (auto it = cache.find(key); it != cache.end())
            return it->second;
    }
    const double step = std::ldexp(f.step, -refinement);
    int points = static_cast<int>(std::ceil(2.0 * f.radius / step)) + 1;
    points = std::max(points, degree + 1);
    auto e = analyze(f.f, f.dim, degree, trapezoid_rule(f.radius, points));
    std::lock_guard lock(mutex);
    cache.emplace(key, e);
    return e;
}

std::vector<HermiteExpansion> random_generic_expansions(int dim, int count, int modes, std::uint64_t seed) {
    if (modes < 1 || count < 0)
        throw ValidationError("random expansions need at least one mode");
    int degree = 0;
    while (IndexSet::get(dim, degree)->size() < static_cast<std::size_t>(modes))
        ++degree;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 0.2);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    std::vector<HermiteExpansion> out;
    for (int c = 0; c < count; ++c) {
        HermiteExpansion e(dim, degree);
        e.coeffs()[0] = std::polar(1.0, angle(rng));
        for (int m = 1; m < modes; ++m) {
            const double re = normal(rng);
            const double im = normal(rng);
            e.coeffs()[static_cast<std::size_t>(m)] = {re, im};
        }
        out.push_back(std::move(e));
    }
    return out;
}

} // namespace hermite
