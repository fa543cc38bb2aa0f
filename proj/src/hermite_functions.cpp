#include "hermite/hermite_functions.hpp"

#include <cmath>
#include <numbers>

#include "hermite/errors.hpp"

namespace hermite {

namespace {

constexpr double rescale_threshold = 1e150;
constexpr double rescale_factor = 1e-150;
const double rescale_log = std::log(rescale_threshold);

// value * e^{log_scale} without losing results whose two factors would
// separately underflow.
double combine(double value, double log_scale, double factor) {
    if (log_scale > -700.0 || value == 0.0)
        return value * factor;
    return std::copysign(std::exp(log_scale + std::log(std::abs(value))), value);
}

} // namespace

// The recurrence runs on h_n(x) e^{x²/2} (the Gaussian is kept in log_scale),
// renormalizing whenever the running value exceeds 1e150.
//   h_{m+1} = sqrt(2/(m+1)) x h_m - sqrt(m/(m+1)) h_{m-1}
double hermite_eval(int n, double x) {
    if (n < 0)
        throw ValidationError("Hermite order must be non-negative");
    double log_scale = -0.5 * x * x;
    double prev = 0.0;
    double cur = 1.0 / std::sqrt(std::sqrt(std::numbers::pi));
    for (int m = 0; m < n; ++m) {
        const double next = std::sqrt(2.0 / (m + 1)) * x * cur - std::sqrt(static_cast<double>(m) / (m + 1)) * prev;
        prev = cur;
        cur = next;
        if (std::abs(cur) > rescale_threshold) {
            cur *= rescale_factor;
            prev *= rescale_factor;
            log_scale += rescale_log;
        }
    }
    return combine(cur, log_scale, std::exp(log_scale));
}

void hermite_eval_all(int max_order, double x, std::span<double> out) {
    if (max_order < 0)
        throw ValidationError("Hermite order must be non-negative");
    if (out.size() < static_cast<std::size_t>(max_order) + 1)
        throw ValidationError("output span too small for requested orders");
    double log_scale = -0.5 * x * x;
    double factor = std::exp(log_scale);
    double prev = 0.0;
    double cur = 1.0 / std::sqrt(std::sqrt(std::numbers::pi));
    out[0] = combine(cur, log_scale, factor);
    for (int m = 0; m < max_order; ++m) {
        const double next = std::sqrt(2.0 / (m + 1)) * x * cur - std::sqrt(static_cast<double>(m) / (m + 1)) * prev;
        prev = cur;
        cur = next;
        if (std::abs(cur) > rescale_threshold) {
            cur *= rescale_factor;
            prev *= rescale_factor;
            log_scale += rescale_log;
            factor = std::exp(log_scale);
        }
        out[static_cast<std::size_t>(m) + 1] = combine(cur, log_scale, factor);
    }
}

double hermite_eval_multi(const MultiIndex& alpha, std::span<const double> x) {
    if (static_cast<std::size_t>(alpha.dim()) != x.size())
        throw ValidationError("multi-index and point have different dimensions");
    double value = 1.0;
    for (int i = 0; i < alpha.dim(); ++i)
        value *= hermite_eval(alpha[i], x[static_cast<std::size_t>(i)]);
    return value;
}

} // namespace hermite
