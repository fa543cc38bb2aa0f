#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "hermite/expansion.hpp"
#include "hermite/phase_space.hpp"

namespace hermite {

/// Parameters of ∂_t u + H^β u = λ|u|^{2k}u on [0, T] with Hermite truncation N.
struct SolverConfig {
    double beta = 1.0;
    cdouble lambda = 1.0;
    int k = 1;
    int dim = 1;
    int degree = 16;     // N
    double dt = 0.01;    // rounded so that T / dt is an integer
    double horizon = 1.0; // T
    double picard_tol = 1e-11;
    int picard_max_iters = 30;
    double eps = 0.5; // smallness radius in the solver norm; larger data run in local mode
    double blowup_threshold = 1e6;
    /// Accept exponents outside the well-posedness hypotheses.
    bool allow_out_of_theory = false;
    std::string window = "gaussian";

    /// Throws ValidationError on a malformed configuration, including an
    /// inadmissible norm (see check_admissible) unless overridden.
    void validate(const NormSpec& norm) const;
    int steps() const; // number of mesh intervals
};

/// Throws ValidationError when `norm` is outside the range the small-data
/// theory covers: q ≤ (2k+1)/2k and 1/q + β/(kd) > 1, where q is the outer
/// exponent of M^{p,q} or the inner exponent of W^{q,p}. Quasi-norms (p or
/// q below 1) and weighted norms are refused in every mode.
void check_admissible(const SolverConfig& cfg, const NormSpec& norm);

/// Picard bookkeeping: increments[n] = sup_t ‖u_{n+1} − u_n‖ and
/// contraction_ratios[n] = increments[n+1] / increments[n].
struct PicardDiagnostics {
    int iterations = 0;
    std::vector<double> increments;
    std::vector<double> contraction_ratios;
    bool local_mode = false;
    int horizon_halvings = 0;
    double chunk = 0.0; // sub-horizon length used by local mode
};

struct Trajectory {
    std::vector<double> times;
    std::vector<HermiteExpansion> states;
    std::vector<double> norms;
    double xnorm_running = 0.0; // sup_t e^{t d^β} norms(t)
    PicardDiagnostics picard;
};

/// Gauss-Hermite rule with weight e^{-(k+1)x²} and (k+1)N + 1 nodes, on which
/// the projection of |u|^{2k}u for degree-N data is exact.
QuadratureRule nonlinearity_rule(int k, int degree);

/// λ|u|^{2k}u projected back to degree N by collocation on the tensor grid of
/// `rule`, with |u|^{2k}u = u (u ū)^k. Throws ValidationError when the rule has
/// fewer than (k+1)N + 1 nodes.
HermiteExpansion nonlinearity(const HermiteExpansion& e, int k, cdouble lambda, const QuadratureRule& rule);

/// Phase-space norms of degree-N expansions on the default grid, with the
/// basis transforms cached.
class SolutionNorm {
public:
    SolutionNorm(int dim, int degree, const NormSpec& spec, const std::string& window = "gaussian");
    double operator()(const HermiteExpansion& e) const;
    const NormSpec& spec() const noexcept { return spec_; }
    const PhaseSpaceGrid& grid() const noexcept { return evaluator_.grid(); }

private:
    NormSpec spec_;
    ModulationNormEvaluator evaluator_;
};

/// J(u)(t_j) = S(t_j)u0 + ∫₀^{t_j} S(t_j − τ) λ|u|^{2k}u(τ) dτ with the
/// integral by composite trapezoid on the mesh and the semigroup exact:
///   I_j = e^{-Δt μ} I_{j-1} + Δt/2 (e^{-Δt μ} n_{j-1} + n_j)
/// per eigenvalue μ. `u` holds the states on the cfg mesh.
std::vector<HermiteExpansion> duhamel_map(const std::vector<HermiteExpansion>& u, const HermiteExpansion& u0,
                                          const SolverConfig& cfg);

/// Picard iteration u_{n+1} = J(u_n) from S(t)u0 over the whole horizon.
/// When the solver norm of u0 exceeds cfg.eps the horizon is marched in
/// chunks instead; a chunk that fails to converge is halved, at most six
/// times. Throws ConvergenceError on failure and NumericalError when the
/// iterates exceed cfg.blowup_threshold or become non-finite.
Trajectory picard_solve(const HermiteExpansion& u0, const SolverConfig& cfg, const NormSpec& norm);

/// sup over mesh times of ‖J(u) − u‖ in the solver norm.
double fixed_point_residual(const Trajectory& tr, const HermiteExpansion& u0, const SolverConfig& cfg,
                            const NormSpec& norm);

/// sup over mesh times of e^{t d^β} ‖u(t)‖.
double decay_monitor(const Trajectory& tr, const SolverConfig& cfg, const NormSpec& norm);

/// max over adjacent mesh times of |‖u(t_{j+1})‖ − ‖u(t_j)‖|.
double mesh_modulus(const Trajectory& tr);

/// Degree-N truncation of the constant function a on R^d:
/// c_{2m} = a √2 π^{1/4} √((2m)!) / (2^m m!) per axis.
HermiteExpansion constant_expansion(double a, int dim, int degree);

/// max over |x| ≤ radius of |P_N a − a| / |a| (d = 1 slice).
double constant_truncation_error(const HermiteExpansion& truncated, double a, double radius = 1.0);

struct EpsCalibration {
    double eps = 0.0;       // largest tested solver-norm size that decays
    double amplitude = 0.0; // corresponding multiple of the profile
    int bisection_steps = 0;
};

/// Bisects the amplitude of `profile` in [0, amplitude_max] for the largest
/// datum whose global run converges with ‖u(T)‖ < ‖u0‖ and a finite X-norm.
EpsCalibration calibrate_eps(const HermiteExpansion& profile, SolverConfig cfg, const NormSpec& norm,
                             double amplitude_max, int steps = 12);

/// T* = 1 / (2kλa^{2k}) for u' = λu^{2k+1}, u(0) = a.
double blowup_ode_oracle(double a, int k, double lambda);

struct BlowupVerdict {
    bool blew_up = false;
    std::optional<double> t_star_numeric;
    double t_star_ode = std::numeric_limits<double>::infinity();
    double relative_gap = std::numeric_limits<double>::quiet_NaN();
    // Hermite run only
    bool converged = false;
    bool decays = false;
    double x_estimate = std::numeric_limits<double>::quiet_NaN();
    double initial_norm = 0.0;
    double final_norm = 0.0;
    double truncation_error = 0.0;
    std::string message;
};

/// Integrates u' = λu^{2k+1} from the constant a with adaptive Dormand-Prince
/// steps until |u| exceeds `threshold` or t reaches `horizon`.
BlowupVerdict free_constant_run(double a, int k, double lambda, double threshold, double horizon);

struct BlowupContrast {
    BlowupVerdict free_run;
    BlowupVerdict hermite_run;
};

/// Free equation vs Hermite flow from the constant datum a ≥ 0 with λ = 1.
/// The free run is integrated for up to twice the ODE blow-up time. The
/// Hermite run solves from the degree-N truncation of a in `norm` (global or
/// local mode per cfg.eps); divergence is reported in the verdict.
BlowupContrast blowup_contrast(double a, SolverConfig cfg, const NormSpec& norm);

} // namespace hermite
