#pragma once

#include <limits>
#include <span>
#include <vector>

#include "hermite/corpus.hpp"
#include "hermite/phase_space.hpp"
#include "hermite/semigroup.hpp"

namespace hermite {

/// Measured ‖S(t)f‖_{M^{p2,q2}} / ‖f‖_{M^{p1,q1}} over a time sweep.
/// Fields that a particular fit does not produce are NaN.
struct DecayReport {
    ExponentSet exponents;
    double beta = 1.0;
    int dim = 1;
    std::vector<double> times;
    std::vector<double> ratios;
    std::vector<double> theory; // theoretical_constant(t) with C0 = 1
    double fitted_large_time_rate = nan;
    double fitted_small_time_slope = nan;
    double sup_scaled_ratio = nan;     // sup_t t^σ · ratio(t)
    double sup_bounded_constant = nan; // sup_t ratio(t) / theory(t), the fitted C0

    static constexpr double nan = std::numeric_limits<double>::quiet_NaN();
};

/// Modulation-order NormSpec (x inner) for exponents (p, q).
NormSpec modulation_spec(double p, double q);

std::vector<double> arithmetic_times(double t0, double t1, int samples);
/// Logarithmically spaced, t0 > 0.
std::vector<double> geometric_times(double t0, double t1, int samples);

/// Ordinary least-squares slope of y against x.
double least_squares_slope(std::span<const double> x, std::span<const double> y);

/// ‖S(t)f‖_{M^{p2,q2}} / ‖f‖_{M^{p1,q1}} on one grid and window. Throws
/// NumericalError when the denominator vanishes.
double measure_ratio(const HermiteExpansion& f, const FlowParams& params, const ExponentSet& x,
                     const PhaseSpaceGrid& grid, const Window& window);

/// Ratios at each time together with the two-regime theory curve.
/// The report's scalar fields are filled from the sweep: sup ratio/theory,
/// sup t^σ ratio, and both slopes over the times in the matching regime.
DecayReport measure_decay(const HermiteExpansion& f, double beta, const ExponentSet& x,
                          std::span<const double> times, const PhaseSpaceGrid& grid, const Window& window);

/// True when |c_0| ≥ 0.1 ‖c‖, the condition under which the ground mode
/// governs the large-time rate.
bool is_generic(const HermiteExpansion& f);

/// Rate −d log(ratio)/dt by least squares over `samples` equally spaced
/// times in [1, t_max]. Times where the ratio falls below 1e-12 of its first
/// value are dropped; fewer than five remaining samples throws NumericalError.
DecayReport fit_large_time(const HermiteExpansion& f, double beta, const ExponentSet& x, double t_max,
                           const PhaseSpaceGrid& grid, const Window& window, int samples = 11);

struct SmallTimeOptions {
    double t_min = 1e-3;
    double t_max = 1.0;
    int samples = 12;
    /// Phase grids refined n → 2n − 1 and the projection step halved this many times.
    int refinement = 0;
    /// Modes with t_min·λ_k^β above this are dropped before the flow (e^{-23} ≈ 1e-10).
    double damping = 23.0;
    Window window = Window::gaussian();
};

/// Small-time sweep for a grid-defined function (d = 1). The denominator is
/// measured on the function itself over PhaseSpaceGrid::covering; the
/// numerator S(t)P_N f uses N from the damping threshold at t_min and a grid
/// covering the surviving band |ξ| ≲ (damping / t)^{1/2β}. Requires
/// p2 ≤ p1 and q2 ≤ q1.
DecayReport fit_small_time(const TestFunction& f, double beta, const ExponentSet& x, const SmallTimeOptions& options);

/// Small-time sweep for an expansion on a fixed grid.
DecayReport fit_small_time(const HermiteExpansion& f, double beta, const ExponentSet& x, double t_min, double t_max,
                           int samples, const PhaseSpaceGrid& grid, const Window& window);

/// ‖F_t‖_{L^{p̃,q̃}} for the damping model F_t(x, ξ) = e^{-t(|x|²+|ξ|²)^β},
/// by mixed-norm quadrature on `grid`.
double damping_model_norm(double t, double beta, const ExponentSet& x, const PhaseSpaceGrid& grid);

struct DampingModelFit {
    std::vector<double> times;
    std::vector<double> norms;
    double slope = 0.0; // log-log least squares, expected −σ
    double sigma = 0.0;
};

/// Damping-model norms over a geometric sweep of [t_min, t_max] on one grid
/// wide enough for t_min and fine enough for t_max (d = 1).
DampingModelFit fit_damping_model(double beta, const ExponentSet& x, double t_min, double t_max,
                                  int samples);

} // namespace hermite
