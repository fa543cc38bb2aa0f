#include <cmath>
#include <numbers>
#include <string>

#include "doctest.h"
#include "hermite/errors.hpp"
#include "hermite/estimator.hpp"
#include "hermite/heat_solver.hpp"
#include "hermite/semigroup.hpp"
#include "oracles.hpp"

using namespace hermite;

namespace {

SolverConfig small_config(int degree = 8, double horizon = 1.0, double dt = 0.02) {
    SolverConfig c;
    c.degree = degree;
    c.horizon = horizon;
    c.dt = dt;
    c.allow_out_of_theory = true; // (2,2) lies outside q ≤ (2k+1)/2k
    return c;
}

const NormSpec l2 = modulation_spec(2, 2);

HermiteExpansion ground(double a, int degree, int dim = 1) {
    return cdouble(a) * HermiteExpansion::basis(MultiIndex(std::vector<int>(static_cast<std::size_t>(dim), 0)), degree);
}

// ∫ π^{-3/4} e^{-3x²/2} h_n(x) dx by a dense trapezoid rule.
double cubic_ground_coefficient(int n) {
    const double c = std::pow(std::numbers::pi, -0.75);
    return oracle::trapezoid([&](double x) { return c * std::exp(-1.5 * x * x) * oracle::hermite_function(n, x); },
                             12.0, 6001)
        .real();
}

} // namespace

TEST_CASE("nonlinearity against dense quadrature") {
    const int degree = 10;
    const auto rule = nonlinearity_rule(1, degree);
    CHECK(rule.order() == 2 * degree + 1);
    CHECK(nonlinearity(HermiteExpansion(1, degree), 1, 1.0, rule) == HermiteExpansion(1, degree));

    const auto out = nonlinearity(ground(1.0, degree), 1, 1.0, rule);
    for (int n = 0; n <= degree; ++n)
        CHECK(std::abs(out.coeffs()[static_cast<std::size_t>(n)] - cubic_ground_coefficient(n)) < 1e-9);

    // Product structure in two dimensions.
    const auto out2 = nonlinearity(ground(1.0, 6, 2), 1, cdouble(0.0, 2.0), nonlinearity_rule(1, 6));
    const auto& idx = out2.indices();
    for (std::size_t i = 0; i < out2.size(); ++i) {
        const cdouble expected = cdouble(0.0, 2.0) * cubic_ground_coefficient(idx[i][0]) * cubic_ground_coefficient(idx[i][1]);
        CHECK(std::abs(out2.coeffs()[i] - expected) < 1e-9);
    }
    CHECK_THROWS_AS(nonlinearity(ground(1.0, degree), 1, 1.0, nonlinearity_rule(1, degree - 1)), ValidationError);
}

TEST_CASE("nonlinearity rule is exact for the projected product") {
    for (int k : {1, 2})
        for (int degree : {4, 9}) {
            const auto e = oracle::random_expansion(1, degree, static_cast<std::uint64_t>(10 * k + degree));
            const auto exact = nonlinearity(e, k, 1.0, nonlinearity_rule(k, degree));
            const auto over = nonlinearity(e, k, 1.0, nonlinearity_rule(k, degree + 12));
            CHECK(oracle::relative_distance(exact, over) < 1e-12);
        }
}

TEST_CASE("multilinear estimate spot check") {
    // 1/r = (2k+1)/q − 2k with k = 1, q = 1.2 gives r = 2.
    const int degree = 8;
    const auto grid = PhaseSpaceGrid::default_for(3 * degree, 1);
    const auto rule = nonlinearity_rule(1, 3 * degree);
    double constant = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto e = cdouble(0.1) * oracle::random_expansion(1, degree, 700 + seed);
        const auto wide = e.with_degree(3 * degree); // room for the full product
        const double in = modulation_norm(wide, modulation_spec(2, 1.2), grid, Window::gaussian());
        const double out =
            modulation_norm(nonlinearity(wide, 1, 1.0, rule), modulation_spec(2, 2), grid, Window::gaussian());
        constant = std::max(constant, out / std::pow(in, 3));
    }
    CHECK(std::isfinite(constant));
    CHECK(constant > 0.0);
}

TEST_CASE("Duhamel map identities") {
    auto cfg = small_config();
    const auto u0 = oracle::random_expansion(1, cfg.degree, 3);
    std::vector<HermiteExpansion> zero(static_cast<std::size_t>(cfg.steps()) + 1, HermiteExpansion(1, cfg.degree));
    std::vector<HermiteExpansion> noise;
    for (int j = 0; j <= cfg.steps(); ++j)
        noise.push_back(oracle::random_expansion(1, cfg.degree, 100 + static_cast<std::uint64_t>(j)));

    // First Picard iterate from zero is the linear flow, exactly.
    const auto first = duhamel_map(zero, u0, cfg);
    for (int j = 0; j <= cfg.steps(); ++j)
        CHECK(first[static_cast<std::size_t>(j)] == apply_semigroup(u0, {1.0, j * cfg.horizon / cfg.steps(), 1}));

    cfg.lambda = 0.0;
    const auto linear = duhamel_map(noise, u0, cfg);
    for (int j = 0; j <= cfg.steps(); ++j)
        CHECK(linear[static_cast<std::size_t>(j)] == apply_semigroup(u0, {1.0, j * cfg.horizon / cfg.steps(), 1}));

    noise.pop_back();
    CHECK_THROWS_AS(duhamel_map(noise, u0, cfg), ValidationError);
}

TEST_CASE("Picard solve: linear flow and small data") {
    auto cfg = small_config();
    cfg.lambda = 0.0;
    const auto u0 = ground(0.3, cfg.degree);
    const auto lin = picard_solve(u0, cfg, l2);
    CHECK(lin.picard.iterations == 1);
    CHECK(lin.states.back() == apply_semigroup(u0, {1.0, 1.0, 1}));
    CHECK(decay_monitor(lin, cfg, l2) == doctest::Approx(lin.norms.front()).epsilon(1e-12));

    cfg.lambda = 1.0;
    const auto small = ground(0.05, cfg.degree);
    const auto tr = picard_solve(small, cfg, l2);
    CHECK_FALSE(tr.picard.local_mode);
    CHECK(tr.picard.iterations <= 10);
    for (double r : tr.picard.contraction_ratios)
        CHECK(r <= 0.55);
    CHECK(fixed_point_residual(tr, small, cfg, l2) < 1e-10);
    for (double n : tr.norms)
        CHECK(n <= cfg.eps);
    CHECK(tr.xnorm_running == doctest::Approx(decay_monitor(tr, cfg, l2)).epsilon(1e-14));
}

TEST_CASE("defocusing runs stay below focusing runs") {
    auto cfg = small_config(8, 2.0, 0.02);
    const auto u0 = ground(0.2, cfg.degree) + cdouble(0.05) * HermiteExpansion::basis(MultiIndex{2}, cfg.degree);
    cfg.lambda = 1.0;
    const double focusing = picard_solve(u0, cfg, l2).xnorm_running;
    cfg.lambda = -1.0;
    const double defocusing = picard_solve(u0, cfg, l2).xnorm_running;
    CHECK(defocusing <= focusing);
}

TEST_CASE("mesh continuity improves under refinement") {
    auto cfg = small_config(8, 1.0, 0.01);
    const auto u0 = ground(0.1, cfg.degree) + cdouble(0.05) * HermiteExpansion::basis(MultiIndex{4}, cfg.degree);
    double previous = 0.0;
    for (int level = 0; level < 3; ++level) {
        const double modulus = mesh_modulus(picard_solve(u0, cfg, l2));
        if (level > 0)
            CHECK(std::log2(previous / modulus) >= 0.9);
        previous = modulus;
        cfg.dt *= 0.5;
    }
}

TEST_CASE("admissibility guard") {
    SolverConfig cfg;
    CHECK_NOTHROW(check_admissible(cfg, modulation_spec(infinity, 1)));
    try {
        check_admissible(cfg, l2);
        FAIL("expected a validation error");
    } catch (const ValidationError& err) {
        CHECK(std::string(err.what()).find("(2k+1)/2k") != std::string::npos);
    }
    cfg.allow_out_of_theory = true;
    CHECK_NOTHROW(check_admissible(cfg, l2));
    CHECK_THROWS_AS(check_admissible(cfg, modulation_spec(0.5, 1)), ValidationError);
    NormSpec weighted = modulation_spec(2, 1);
    weighted.s = 1.0;
    CHECK_THROWS_AS(check_admissible(cfg, weighted), ValidationError);

    SolverConfig thin;
    thin.dim = 3;
    thin.beta = 0.2;
    try {
        check_admissible(thin, modulation_spec(2, 1.25));
        FAIL("expected a validation error");
    } catch (const ValidationError& err) {
        CHECK(std::string(err.what()).find("1/q + β/(kd) > 1") != std::string::npos);
    }
    // Amalgam order: the constrained exponent is the inner one.
    NormSpec amalgam = modulation_spec(2, 1);
    amalgam.inner = InnerVariable::xi;
    CHECK_THROWS_AS(check_admissible(SolverConfig{}, amalgam), ValidationError);

    SolverConfig bad;
    bad.dt = 0.0;
    CHECK_THROWS_AS(bad.validate(modulation_spec(infinity, 1)), ValidationError);
    bad = SolverConfig{};
    bad.k = 0;
    CHECK_THROWS_AS(bad.validate(modulation_spec(infinity, 1)), ValidationError);
}

TEST_CASE("local mode marches large data") {
    auto cfg = small_config(8, 1.0, 0.02);
    cfg.eps = 0.01;
    cfg.lambda = -1.0;
    const auto u0 = ground(1.0, cfg.degree);
    const auto tr = picard_solve(u0, cfg, l2);
    CHECK(tr.picard.local_mode);
    CHECK(tr.times.back() == doctest::Approx(1.0));
    for (std::size_t j = 1; j < tr.times.size(); ++j)
        CHECK(tr.times[j] > tr.times[j - 1]);
    CHECK(tr.norms.back() < tr.norms.front());

    cfg.lambda = 1.0;
    cfg.blowup_threshold = 1e3;
    cfg.picard_max_iters = 8;
    CHECK_THROWS_AS(picard_solve(ground(6.0, cfg.degree), cfg, l2), NumericalError);
}

TEST_CASE("constant data") {
    const auto c = constant_expansion(1.0, 1, 20);
    for (int n = 0; n <= 20; ++n) {
        const double ref =
            oracle::trapezoid([n](double x) { return cdouble(oracle::hermite_function(n, x)); }, 30.0, 12001).real();
        CHECK(std::abs(c.coeffs()[static_cast<std::size_t>(n)].real() - ref) < 1e-10);
    }
    CHECK(constant_truncation_error(constant_expansion(0.5, 1, 64), 0.5) <
          constant_truncation_error(constant_expansion(0.5, 1, 16), 0.5));
    const auto c2 = constant_expansion(2.0, 2, 4);
    CHECK(c2.coefficient(MultiIndex{2, 2}).real() ==
          doctest::Approx(2.0 * c.coeffs()[2].real() * c.coeffs()[2].real()));
    CHECK(c2.coefficient(MultiIndex{1, 0}) == cdouble(0.0));
}

TEST_CASE("blow-up oracle and free run") {
    CHECK(blowup_ode_oracle(1.0, 1, 1.0) == 0.5);
    CHECK(blowup_ode_oracle(2.0, 1, 1.0) == 0.125);
    CHECK(blowup_ode_oracle(1e-3, 1, 1.0) > 1e5);
    CHECK_THROWS_AS(blowup_ode_oracle(0.0, 1, 1.0), ValidationError);
    CHECK_THROWS_AS(blowup_ode_oracle(1.0, 1, -1.0), ValidationError);

    const auto v = free_constant_run(1.0, 1, 1.0, 1e6, 1.0);
    REQUIRE(v.blew_up);
    CHECK(*v.t_star_numeric == doctest::Approx(0.5).epsilon(1e-6));
    const auto quiet = free_constant_run(0.1, 1, 1.0, 1e6, 1.0);
    CHECK_FALSE(quiet.blew_up);
    CHECK(quiet.final_norm == doctest::Approx(0.1 / std::sqrt(1.0 - 2.0 * 0.01)).epsilon(1e-8));
}

TEST_CASE("blow-up contrast") {
    SolverConfig cfg;
    cfg.degree = 16;
    cfg.horizon = 1.0;
    cfg.dt = 0.02;
    const auto zero = blowup_contrast(0.0, cfg, modulation_spec(infinity, 1));
    CHECK_FALSE(zero.free_run.blew_up);
    CHECK_FALSE(zero.hermite_run.blew_up);
    CHECK(zero.hermite_run.final_norm == 0.0);
    CHECK(std::isinf(zero.free_run.t_star_ode));

    const auto small = blowup_contrast(0.05, cfg, modulation_spec(infinity, 1));
    CHECK(small.free_run.blew_up);
    CHECK(small.free_run.relative_gap < 0.05);
    CHECK(small.hermite_run.decays);
    CHECK(std::isfinite(small.hermite_run.x_estimate));
}

TEST_CASE("eps calibration") {
    auto cfg = small_config(6, 1.0, 0.05);
    cfg.lambda = -1.0;
    const auto profile = ground(1.0, cfg.degree);
    const auto easy = calibrate_eps(profile, cfg, l2, 0.5, 6);
    CHECK(easy.amplitude == 0.5);
    CHECK(easy.eps > 0.0);

    cfg.lambda = 1.0;
    cfg.blowup_threshold = 1e3;
    cfg.picard_max_iters = 12;
    const auto hard = calibrate_eps(profile, cfg, l2, 8.0, 6);
    CHECK(hard.amplitude < 8.0);
    CHECK(hard.amplitude > 0.0);
    CHECK(hard.bisection_steps == 6);
}
