#include <array>
#include <cmath>

#include <boost/numeric/odeint.hpp>

#include "hermite/errors.hpp"
#include "hermite/heat_solver.hpp"

namespace hermite {

double blowup_ode_oracle(double a, int k, double lambda) {
    if (!(a > 0.0) || k < 1 || !(lambda > 0.0))
        throw ValidationError("blow-up time needs a > 0, k ≥ 1 and lambda > 0");
    return 1.0 / (2.0 * k * lambda * std::pow(a, 2 * k));
}

BlowupVerdict free_constant_run(double a, int k, double lambda, double threshold, double horizon) {
    if (!(a >= 0.0) || k < 1 || !(lambda > 0.0) || !(threshold > 0.0) || !(horizon > 0.0))
        throw ValidationError("free run needs a ≥ 0, k ≥ 1, lambda > 0 and positive threshold and horizon");
    BlowupVerdict v;
    v.initial_norm = a;
    if (a == 0.0) {
        v.converged = true;
        v.message = "zero datum stays zero";
        return v;
    }
    v.t_star_ode = blowup_ode_oracle(a, k, lambda);

    namespace ode = boost::numeric::odeint;
    using State = std::array<double, 1>;
    const auto rhs = [&](const State& u, State& du, double) { du[0] = lambda * std::pow(u[0], 2 * k + 1); };
    auto stepper = ode::make_controlled(1e-12, 1e-12, ode::runge_kutta_dopri5<State>());

    State u{a};
    double t = 0.0;
    double dt = 1e-3 * std::min(horizon, v.t_star_ode);
    constexpr long max_attempts = 1'000'000;
    for (long attempt = 0; attempt < max_attempts && t < horizon; ++attempt) {
        dt = std::min(dt, horizon - t);
        if (stepper.try_step(rhs, u, t, dt) != ode::success)
            continue;
        if (!std::isfinite(u[0]) || std::abs(u[0]) > threshold) {
            v.blew_up = true;
            v.t_star_numeric = t;
            v.relative_gap = std::abs(t - v.t_star_ode) / v.t_star_ode;
            v.final_norm = std::abs(u[0]);
            return v;
        }
    }
    v.converged = t >= horizon;
    v.final_norm = std::abs(u[0]);
    v.message = v.converged ? "no blow-up before the horizon" : "step budget exhausted";
    return v;
}

BlowupContrast blowup_contrast(double a, SolverConfig cfg, const NormSpec& norm) {
    if (!(a >= 0.0))
        throw ValidationError("constant datum must be non-negative");
    cfg.lambda = 1.0;
    cfg.validate(norm);
    BlowupContrast out;
    const double horizon = a > 0.0 ? 2.0 * blowup_ode_oracle(a, cfg.k, 1.0) : cfg.horizon;
    out.free_run = free_constant_run(a, cfg.k, 1.0, cfg.blowup_threshold, horizon);

    auto& h = out.hermite_run;
    const auto u0 = constant_expansion(a, cfg.dim, cfg.degree);
    h.t_star_ode = out.free_run.t_star_ode;
    h.truncation_error = constant_truncation_error(u0, a);
    h.initial_norm = SolutionNorm(cfg.dim, cfg.degree, norm, cfg.window)(u0);
    try {
        const auto tr = picard_solve(u0, cfg, norm);
        h.converged = true;
        h.x_estimate = tr.xnorm_running;
        h.final_norm = tr.norms.back();
        h.decays = std::isfinite(h.x_estimate) && h.final_norm < h.initial_norm;
        h.message = a == 0.0 ? "zero datum stays zero" : (h.decays ? "decays" : "does not decay");
    } catch (const ConvergenceError& err) {
        h.message = err.what();
    } catch (const NumericalError& err) {
        h.blew_up = true;
        h.message = err.what();
    }
    return out;
}

} // namespace hermite
