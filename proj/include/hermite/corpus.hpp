#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hermite/expansion.hpp"

namespace hermite {

/// A named test function together with the phase-space box outside which it
/// is negligible, used to size grids and projections.
struct TestFunction {
    std::string name;
    int dim = 1;
    GridFunction f;
    std::optional<HermiteExpansion> expansion; // set when f is a finite Hermite sum
    double radius = 0.0;                       // |x| beyond which f vanishes or is negligible
    double bandwidth = 0.0;                    // |ξ| beyond which f̂ is negligible
    double step = 0.05;                        // trapezoid step resolving f's sharpest feature
};

/// Mollification scale of the power-law corpus functions at the origin.
inline constexpr double mollifier_scale = 1.0 / 64.0;

/// Smooth cutoff: 1 for |x| ≤ radius − width, 0 for |x| ≥ radius, C^∞ in between.
double smooth_cutoff(double r, double radius, double width);

/// C^∞ bump supported in [−half_width, half_width] with value 1 at the origin.
double bump(double x, double half_width);

/// (|x|² + δ²)^{-α/2} with a smooth cutoff over [radius − 2, radius].
GridFunction power_law(double alpha, double delta, double radius, int dim = 1);

/// The deterministic one-dimensional corpus (20 functions): Hermite functions
/// and sums, Gaussians (shifted, modulated, dilated), sech and Lorentzian
/// profiles, mollified power laws α ∈ {0.2, 0.3, 0.45}, the chirp-modulated
/// power law f_{0.3}(1 + ½cos|x|²), the lattice sum Σ_μ f_{0.3}(x−μ)χ(x−μ)
/// over μ ∈ Z with χ supported in [−0.45, 0.45], a truncated constant, a
/// truncated cos|x|² chirp and a compact bump. Truncations are smooth.
std::vector<TestFunction> corpus();

/// Mollified power laws used to stress the small-time bound (d = 1), named
/// stress_f_alpha_<α> and cut off at radius 10.
std::vector<TestFunction> stress_family();

/// Looks a corpus entry up by name; throws ValidationError if absent.
TestFunction corpus_entry(const std::string& name);

/// Uniform trapezoid rule on [−extent, extent] packaged as a quadrature rule
/// (flat weights = trapezoid weights), for projecting non-Gaussian data.
QuadratureRule trapezoid_rule(double extent, int points);

/// Degree-N Hermite coefficients of f. Exact for expansions; otherwise by the
/// trapezoid rule on [−radius, radius] with spacing step / 2^refinement.
/// Results are cached per (name, degree, step).
HermiteExpansion expand(const TestFunction& f, int degree, int refinement = 0);

/// `count` random expansions over the first `modes` basis functions (grlex
/// order) with a dominant ground mode: c_0 has modulus 1 and a random phase,
/// the others are complex Gaussian with standard deviation 0.2 per part.
std::vector<HermiteExpansion> random_generic_expansions(int dim, int count, int modes, std::uint64_t seed);

} // namespace hermite
