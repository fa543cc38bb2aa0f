#include "hermite/semigroup.hpp"

#include <algorithm>
#include <cmath>

#include "hermite/errors.hpp"

namespace hermite {

namespace {

constexpr double underflow_floor = 1e-300;

bool valid_exponent(double p) { return p > 0.0; } // (0, ∞], NaN rejected

} // namespace

void FlowParams::validate() const {
    if (!(beta > 0.0))
        throw ValidationError("beta must be positive");
    if (!(t >= 0.0))
        throw ValidationError("time must be non-negative");
    if (dim < 1 || dim > max_dimension)
        throw ValidationError("dimension must be in [1, 3]");
}

void ExponentSet::validate() const {
    if (!valid_exponent(p1) || !valid_exponent(q1) || !valid_exponent(p2) || !valid_exponent(q2))
        throw ValidationError("exponents must lie in (0, inf]");
}

double ExponentSet::inv_ptilde() const { return std::max(1.0 / p2 - 1.0 / p1, 0.0); }
double ExponentSet::inv_qtilde() const { return std::max(1.0 / q2 - 1.0 / q1, 0.0); }

double ExponentSet::sigma(int dim, double beta) const {
    return dim / (2.0 * beta) * (inv_ptilde() + inv_qtilde());
}

ExponentSet ExponentSet::reduced() const {
    return {p1, q1, std::min(p1, p2), std::min(q1, q2)};
}

double eigenvalue(int k, int dim, double beta) {
    return std::exp(beta * std::log(2.0 * k + dim));
}

double decay_factor(int k, int dim, double beta, double t) {
    const double factor = std::exp(-t * eigenvalue(k, dim, beta));
    return factor < underflow_floor ? 0.0 : factor;
}

HermiteExpansion apply_fractional_power(const HermiteExpansion& e, double beta) {
    HermiteExpansion out = e;
    const auto& idx = e.indices();
    for (int k = 0; k <= e.degree(); ++k) {
        const double lambda = eigenvalue(k, e.dim(), beta);
        for (std::size_t i = idx.shell_begin(k); i < idx.shell_end(k); ++i)
            out.coeffs()[i] *= lambda;
    }
    return out;
}

HermiteExpansion apply_semigroup(const HermiteExpansion& e, const FlowParams& params) {
    params.validate();
    if (params.dim != e.dim())
        throw ValidationError("flow dimension does not match the expansion");
    HermiteExpansion out = e;
    if (params.t == 0.0)
        return out;
    const auto& idx = e.indices();
    for (int k = 0; k <= e.degree(); ++k) {
        const double factor = decay_factor(k, e.dim(), params.beta, params.t);
        for (std::size_t i = idx.shell_begin(k); i < idx.shell_end(k); ++i)
            out.coeffs()[i] *= factor;
    }
    return out;
}

double theoretical_constant(const FlowParams& params, const ExponentSet& exponents, double c0) {
    params.validate();
    exponents.validate();
    if (!(params.t > 0.0))
        throw ValidationError("theoretical constant needs t > 0");
    if (!(c0 > 0.0))
        throw ValidationError("C0 must be positive");
    if (params.t >= 1.0)
        return c0 * std::exp(-params.t * std::pow(static_cast<double>(params.dim), params.beta));
    return c0 * std::pow(params.t, -exponents.sigma(params.dim, params.beta));
}

// Per axis, with A = (coth 2t + 1)/2 the Gaussian in y of K_t(x,y) e^{-y²/2} is
// exp(−A (y − c)² − x²/2) up to the kernel prefactor, where
//   c = x / (2A sinh 2t) = x e^{-2t},   (2π sinh 2t · A)^{-1/2} = π^{-1/2} e^{-t}.
// Substituting y = c + z/√A turns the integral into a Gauss-Hermite sum over z
// of g(y) = f(y) e^{y²/2}, which is polynomial for Hermite expansions.
std::vector<cdouble> mehler_apply(const GridFunction& f, int dim, double t, const QuadratureRule& rule,
                                  std::span<const double> points) {
    if (!(t > 0.0))
        throw ValidationError("Mehler kernel is singular at t = 0");
    if (dim < 1 || dim > 2)
        throw ValidationError("Mehler oracle supports d in {1, 2}");
    if (rule.gaussian_scale != 1.0)
        throw ValidationError("Mehler oracle expects a standard Gauss-Hermite rule");
    const auto d = static_cast<std::size_t>(dim);
    if (points.size() % d != 0)
        throw ValidationError("point buffer is not a multiple of the dimension");

    const double shift = std::exp(-2.0 * t);
    const double width = std::sqrt(-std::expm1(-4.0 * t)); // 1/√A
    const double prefactor = std::exp(-t) / std::sqrt(std::acos(-1.0));

    const std::size_t n = static_cast<std::size_t>(rule.order());
    std::size_t nodes_total = 1;
    for (std::size_t i = 0; i < d; ++i)
        nodes_total *= n;

    const std::size_t count = points.size() / d;
    std::vector<cdouble> out(count);
    std::vector<double> y(d);
    for (std::size_t p = 0; p < count; ++p) {
        const double* x = points.data() + p * d;
        double x_sq = 0.0;
        for (std::size_t i = 0; i < d; ++i)
            x_sq += x[i] * x[i];
        cdouble acc{};
        for (std::size_t node = 0; node < nodes_total; ++node) {
            std::size_t rest = node;
            double weight = 1.0;
            double y_sq = 0.0;
            for (std::size_t i = d; i-- > 0;) {
                const std::size_t j = rest % n;
                rest /= n;
                y[i] = shift * x[i] + width * rule.nodes[j];
                weight *= rule.weights[j];
                y_sq += y[i] * y[i];
            }
            acc += weight * std::exp(0.5 * y_sq) * f(y);
        }
        out[p] = std::pow(prefactor, static_cast<double>(dim)) * std::exp(-0.5 * x_sq) * acc;
    }
    return out;
}

} // namespace hermite
