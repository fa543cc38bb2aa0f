#pragma once

#include <cstddef>
#include <vector>

namespace hermite {

/// Gauss-Hermite rule for integrals of the form  ∫ p(x) e^{-c x²} dx.
///
/// `weights` integrate against the Gaussian weight; `flat_weights` are the same
/// weights multiplied by e^{c x_i²}, so that Σ flat_weights[i] f(x_i) ≈ ∫ f(x) dx
/// for functions that carry their own Gaussian decay. The flat weights are
/// computed directly (never as w·e^{c x²}) so they stay finite at high order.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    std::vector<double> flat_weights;
    double gaussian_scale = 1.0; // c

    int order() const noexcept { return static_cast<int>(nodes.size()); }

    /// Same rule mapped to the weight e^{-c x²} (nodes x/√c, weights w/√c).
    QuadratureRule rescaled(double c) const;
};

/// Golub-Welsch nodes refined by Newton iteration on h_n; weights from the
/// Christoffel formula 1 / (n h_{n-1}(x_i)²). Throws ValidationError for n < 1.
QuadratureRule gauss_hermite_rule(int n);

/// Points of the d-fold tensor product of `axis` in row-major order, flattened
/// as [point][coordinate].
std::vector<double> tensor_points(const std::vector<double>& axis, int dim);

} // namespace hermite
