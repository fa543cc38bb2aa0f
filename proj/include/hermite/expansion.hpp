#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "hermite/multi_index.hpp"
#include "hermite/quadrature.hpp"

namespace hermite {

using cdouble = std::complex<double>;

/// A function on R^d given by point evaluation.
using GridFunction = std::function<cdouble(std::span<const double>)>;

/// Truncated coefficient tensor c_α = ⟨f, Φ_α⟩, |α| ≤ N, stored densely in
/// graded lexicographic order (see IndexSet).
class HermiteExpansion {
public:
    HermiteExpansion(int dim, int degree);
    HermiteExpansion(int dim, int degree, std::vector<cdouble> coeffs);

    /// Φ_α as an expansion of the given degree.
    static HermiteExpansion basis(const MultiIndex& alpha, int degree);

    int dim() const noexcept { return indices_->dim(); }
    int degree() const noexcept { return indices_->degree(); }
    std::size_t size() const noexcept { return coeffs_.size(); }
    const IndexSet& indices() const noexcept { return *indices_; }

    std::span<const cdouble> coeffs() const noexcept { return coeffs_; }
    std::span<cdouble> coeffs() noexcept { return coeffs_; }

    cdouble coefficient(const MultiIndex& alpha) const;
    void set_coefficient(const MultiIndex& alpha, cdouble value);

    /// ℓ² norm of the coefficients, i.e. the L² norm of the represented function.
    double l2_norm() const;

    /// Same coefficients embedded in (or truncated to) another degree.
    HermiteExpansion with_degree(int degree) const;

    HermiteExpansion& operator+=(const HermiteExpansion& other);
    HermiteExpansion& operator-=(const HermiteExpansion& other);
    HermiteExpansion& operator*=(cdouble scalar);

    friend HermiteExpansion operator+(HermiteExpansion a, const HermiteExpansion& b) { return a += b; }
    friend HermiteExpansion operator-(HermiteExpansion a, const HermiteExpansion& b) { return a -= b; }
    friend HermiteExpansion operator*(cdouble s, HermiteExpansion a) { return a *= s; }

    bool operator==(const HermiteExpansion& other) const;

private:
    void require_same_shape(const HermiteExpansion& other) const;

    std::shared_ptr<const IndexSet> indices_;
    std::vector<cdouble> coeffs_;
};

/// Coefficients from samples of f on the d-fold tensor grid of `rule`
/// (row-major, see tensor_points). The rule's Gaussian weight is absorbed
/// through its flat weights. Requires rule.order() ≥ degree + 1.
HermiteExpansion analyze(std::span<const cdouble> samples, int dim, int degree, const QuadratureRule& rule);
HermiteExpansion analyze(const GridFunction& f, int dim, int degree, const QuadratureRule& rule);

/// Σ_α c_α Φ_α(x) at each point; `points` is flattened [point][coordinate].
std::vector<cdouble> synthesize(const HermiteExpansion& e, std::span<const double> points);

/// Values on the d-fold tensor product of `axis`, row-major.
std::vector<cdouble> synthesize_on_tensor_grid(const HermiteExpansion& e, std::span<const double> axis);

/// P_k: keeps the coefficients with |α| = k. Throws for k outside [0, N].
HermiteExpansion project(const HermiteExpansion& e, int k);

/// (Σ_k ‖P_k e‖² (2k+d)^s)^{1/2}.
double shubin_norm(const HermiteExpansion& e, double s);

} // namespace hermite
