#include "hermite/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "hermite/errors.hpp"

namespace hermite {

namespace {

// Ratio h_n(x) / h_{n-1}(x) via the normalized recurrence. Scale-free, so
// the Gaussian factor is dropped entirely.
struct RecurrenceTail {
    double last;     // ∝ h_n(x)
    double previous; // ∝ h_{n-1}(x), same proportionality constant
};

RecurrenceTail recurrence_tail(int n, double x) {
    double prev = 0.0;
    double cur = 1.0;
    for (int m = 0; m < n; ++m) {
        const double next = std::sqrt(2.0 / (m + 1)) * x * cur - std::sqrt(static_cast<double>(m) / (m + 1)) * prev;
        prev = cur;
        cur = next;
        const double mag = std::max(std::abs(cur), std::abs(prev));
        if (mag > 1e150) {
            cur /= mag;
            prev /= mag;
        }
    }
    return {cur, prev};
}

} // namespace

QuadratureRule QuadratureRule::rescaled(double c) const {
    if (!(c > 0.0))
        throw ValidationError("Gaussian scale must be positive");
    const double ratio = c / gaussian_scale;
    const double inv_sqrt = 1.0 / std::sqrt(ratio);
    QuadratureRule out;
    out.gaussian_scale = c;
    out.nodes.reserve(nodes.size());
    for (double x : nodes)
        out.nodes.push_back(x * inv_sqrt);
    for (double w : weights)
        out.weights.push_back(w * inv_sqrt);
    for (double w : flat_weights)
        out.flat_weights.push_back(w * inv_sqrt);
    return out;
}

QuadratureRule gauss_hermite_rule(int n) {
    if (n < 1)
        throw ValidationError("Gauss-Hermite rule needs at least one node");

    const auto size = static_cast<Eigen::Index>(n);
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(size);
    Eigen::VectorXd sub(std::max<Eigen::Index>(size - 1, 0));
    for (Eigen::Index k = 1; k < size; ++k)
        sub(k - 1) = std::sqrt(static_cast<double>(k) / 2.0);

    std::vector<double> x(static_cast<std::size_t>(n), 0.0);
    if (n > 1) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
        solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
        for (Eigen::Index i = 0; i < size; ++i)
            x[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
    }

    // Newton on h_n: h_n' = sqrt(2n) h_{n-1} - x h_n.
    const double sqrt_2n = std::sqrt(2.0 * n);
    for (double& node : x) {
        for (int iter = 0; iter < 3; ++iter) {
            const auto tail = recurrence_tail(n, node);
            const double derivative = sqrt_2n * tail.previous - node * tail.last;
            if (derivative == 0.0)
                break;
            node -= tail.last / derivative;
        }
    }
    std::sort(x.begin(), x.end());

    // Enforce exact symmetry about the origin.
    for (std::size_t i = 0; i < x.size() / 2; ++i) {
        const std::size_t j = x.size() - 1 - i;
        const double half = 0.5 * (x[j] - x[i]);
        x[i] = -half;
        x[j] = half;
    }
    if (x.size() % 2 == 1)
        x[x.size() / 2] = 0.0;

    QuadratureRule rule;
    rule.gaussian_scale = 1.0;
    rule.nodes = x;
    rule.weights.resize(x.size());
    rule.flat_weights.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        // flat weight = 1 / (n h_{n-1}(x)²); h_{n-1} evaluated without its Gaussian
        // by tracking the log of the normalization explicitly.
        double log_norm = 0.0;
        double prev = 0.0;
        double cur = 1.0;
        for (int m = 0; m < n - 1; ++m) {
            const double next = std::sqrt(2.0 / (m + 1)) * x[i] * cur - std::sqrt(static_cast<double>(m) / (m + 1)) * prev;
            prev = cur;
            cur = next;
            const double mag = std::max(std::abs(cur), std::abs(prev));
            if (mag > 1e150) {
                cur /= mag;
                prev /= mag;
                log_norm += std::log(mag);
            }
        }
        // h_{n-1}(x) e^{x²/2} = π^{-1/4} cur e^{log_norm}
        const double log_poly_sq = 2.0 * (std::log(std::abs(cur)) + log_norm) - 0.5 * std::log(std::acos(-1.0));
        rule.flat_weights[i] = std::exp(x[i] * x[i] - log_poly_sq - std::log(static_cast<double>(n)));
        rule.weights[i] = std::exp(-log_poly_sq - std::log(static_cast<double>(n)));
    }
    for (std::size_t i = 0; i < x.size() / 2; ++i) {
        const std::size_t j = x.size() - 1 - i;
        const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
        const double fw = 0.5 * (rule.flat_weights[i] + rule.flat_weights[j]);
        rule.weights[i] = rule.weights[j] = w;
        rule.flat_weights[i] = rule.flat_weights[j] = fw;
    }
    return rule;
}

std::vector<double> tensor_points(const std::vector<double>& axis, int dim) {
    if (dim < 1)
        throw ValidationError("dimension must be positive");
    const std::size_t n = axis.size();
    std::size_t count = 1;
    for (int i = 0; i < dim; ++i)
        count *= n;
    std::vector<double> out(count * static_cast<std::size_t>(dim));
    for (std::size_t p = 0; p < count; ++p) {
        std::size_t rest = p;
        for (int i = dim - 1; i >= 0; --i) {
            out[p * static_cast<std::size_t>(dim) + static_cast<std::size_t>(i)] = axis[rest % n];
            rest /= n;
        }
    }
    return out;
}

} // namespace hermite
