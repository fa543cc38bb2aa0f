#pragma once

#include <span>

#include "hermite/multi_index.hpp"

namespace hermite {

/// L²-normalized Hermite function h_n(x) = (2^n n! √π)^{-1/2} H_n(x) e^{-x²/2}.
///
/// Three-term recurrence on the normalized values with a running log-scale,
/// so that neither the polynomial part nor the Gaussian over/underflows on
/// its own. Stable for n in the thousands and |x| well past the turning point.
double hermite_eval(int n, double x);

/// h_0(x), ..., h_{max_order}(x) written to `out` (size max_order + 1).
void hermite_eval_all(int max_order, double x, std::span<double> out);

/// Tensor product Φ_α(x) = Π h_{α_i}(x_i). Throws ValidationError on a
/// dimension mismatch.
double hermite_eval_multi(const MultiIndex& alpha, std::span<const double> x);

} // namespace hermite
