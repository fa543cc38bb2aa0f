#pragma once

#include <limits>
#include <span>
#include <vector>

#include "hermite/expansion.hpp"

namespace hermite {

inline constexpr double infinity = std::numeric_limits<double>::infinity();

/// β > 0 and t ≥ 0 for the flow e^{-tH^β} on R^d.
struct FlowParams {
    double beta = 1.0;
    double t = 0.0;
    int dim = 1;

    void validate() const;
};

/// Exponents of an M^{p1,q1} → M^{p2,q2} estimate, each in (0, ∞].
struct ExponentSet {
    double p1 = 2.0;
    double q1 = 2.0;
    double p2 = 2.0;
    double q2 = 2.0;

    void validate() const;

    /// 1/p̃ = max(1/p2 − 1/p1, 0)
    double inv_ptilde() const;
    /// 1/q̃ = max(1/q2 − 1/q1, 0)
    double inv_qtilde() const;
    double ptilde() const { return 1.0 / inv_ptilde(); }
    double qtilde() const { return 1.0 / inv_qtilde(); }

    /// σ = (d / 2β)(1/p̃ + 1/q̃)
    double sigma(int dim, double beta) const;

    /// Target exponents replaced by min(p1, p2), min(q1, q2). The embeddings
    /// M^{p,q} ⊂ M^{p',q'} (p ≤ p', q ≤ q') make this the harder estimate.
    ExponentSet reduced() const;
};

/// (2k + d)^β
double eigenvalue(int k, int dim, double beta);

/// e^{-t(2k+d)^β}, flushed to exactly zero below 1e-300.
double decay_factor(int k, int dim, double beta, double t);

/// c_α ↦ (2|α| + d)^β c_α
HermiteExpansion apply_fractional_power(const HermiteExpansion& e, double beta);

/// c_α ↦ e^{-t(2|α|+d)^β} c_α
HermiteExpansion apply_semigroup(const HermiteExpansion& e, const FlowParams& params);

/// Two-regime constant: C0 e^{-t d^β} for t ≥ 1, C0 t^{-σ} for 0 < t < 1.
double theoretical_constant(const FlowParams& params, const ExponentSet& exponents, double c0);

/// (e^{-tH} f)(x) for β = 1 by Gauss-Hermite quadrature against the Mehler
/// kernel
///   K_t(x,y) = (2π sinh 2t)^{-d/2} exp(−coth(2t)(|x|²+|y|²)/2 + x·y / sinh 2t).
/// The Gaussian part of K_t(x,·) e^{-|y|²/2} is integrated exactly by shifting
/// and scaling the rule, so `f` is sampled away from the grid. Expects d ∈ {1,2}
/// and t > 0; `points` is flattened [point][coordinate].
std::vector<cdouble> mehler_apply(const GridFunction& f, int dim, double t, const QuadratureRule& rule,
                                  std::span<const double> points);

} // namespace hermite
