#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "doctest.h"
#include "hermite/corpus.hpp"
#include "hermite/errors.hpp"
#include "hermite/estimator.hpp"
#include "oracles.hpp"

using namespace hermite;

namespace {

const std::vector<std::pair<double, double>> exponent_pairs = {{1, 1}, {2, 2}, {infinity, infinity}, {1, infinity},
                                                                {infinity, 1}, {4, 2}, {0.5, 1}};

} // namespace

TEST_CASE("ground state ratio is the eigenfactor") {
    for (int dim : {1, 2}) {
        const auto phi0 = HermiteExpansion::basis(MultiIndex(std::vector<int>(static_cast<std::size_t>(dim), 0)), 2);
        const auto grid = PhaseSpaceGrid::default_for(2, dim);
        for (auto [p, q] : exponent_pairs)
            for (double beta : {0.5, 2.0})
                for (double t : {0.0, 0.3, 2.0}) {
                    const double r = measure_ratio(phi0, {beta, t, dim}, {p, q, p, q}, grid, Window::gaussian());
                    CHECK(std::abs(r - std::exp(-t * std::pow(dim, beta))) < 1e-8);
                }
    }
}

TEST_CASE("two-mode closed form") {
    const auto f = HermiteExpansion::basis(MultiIndex{0}, 1) + cdouble(0.5, 0.5) * HermiteExpansion::basis(MultiIndex{1}, 1);
    const auto grid = PhaseSpaceGrid::default_for(8, 1);
    for (double t : {0.1, 0.7, 2.5}) {
        const double c0 = 1.0, c1 = 0.5;
        const double expected =
            std::sqrt((std::exp(-2 * t) * c0 + std::exp(-6 * t) * c1) / (c0 + c1));
        CHECK(measure_ratio(f, {1.0, t, 1}, {2, 2, 2, 2}, grid, Window::hermite1()) ==
              doctest::Approx(expected).epsilon(1e-6));
    }
    CHECK_THROWS_AS(measure_ratio(HermiteExpansion(1, 3), {1.0, 1.0, 1}, {2, 2, 2, 2}, grid, Window::gaussian()),
                    NumericalError);
}

TEST_CASE("time sweeps and least squares") {
    const auto a = arithmetic_times(1.0, 6.0, 6);
    CHECK(a == std::vector<double>{1, 2, 3, 4, 5, 6});
    const auto g = geometric_times(1e-3, 1.0, 4);
    CHECK(g.front() == 1e-3);
    CHECK(g[1] == doctest::Approx(1e-2));
    CHECK(g.back() == 1.0);
    const double xs[] = {0, 1, 2, 3};
    const double ys[] = {1, 3.5, 6, 8.5};
    CHECK(least_squares_slope(xs, ys) == doctest::Approx(2.5));
    CHECK_THROWS_AS(geometric_times(0.0, 1.0, 3), ValidationError);
    CHECK_THROWS_AS(arithmetic_times(1.0, 1.0, 3), ValidationError);
}

TEST_CASE("large-time rate") {
    const ExponentSet l2{2, 2, 2, 2};
    for (int dim : {1, 2})
        for (double beta : {0.5, 1.0, 2.0}) {
            const auto phi0 = HermiteExpansion::basis(MultiIndex(std::vector<int>(static_cast<std::size_t>(dim), 0)), 3);
            const auto grid = PhaseSpaceGrid::default_for(3, dim);
            const double tmax = 6.0 / std::pow(dim, beta);
            const auto r = fit_large_time(phi0, beta, l2, tmax, grid, Window::gaussian());
            CHECK(std::abs(r.fitted_large_time_rate - std::pow(dim, beta)) < 1e-10);
        }
    // Without a ground mode the next eigenvalue takes over.
    const auto phi1 = HermiteExpansion::basis(MultiIndex{1}, 3);
    const auto r1 = fit_large_time(phi1, 1.0, l2, 6.0, PhaseSpaceGrid::default_for(3, 1), Window::gaussian());
    CHECK(r1.fitted_large_time_rate == doctest::Approx(3.0).epsilon(1e-8));
    CHECK_FALSE(is_generic(phi1));

    const auto random = random_generic_expansions(2, 1, 10, 5).front();
    CHECK(is_generic(random));
    const auto r2 = fit_large_time(random, 1.0, l2, 3.0, PhaseSpaceGrid::default_for(3, 2), Window::gaussian());
    CHECK(std::abs(r2.fitted_large_time_rate / 2.0 - 1.0) < 0.02);

    CHECK_THROWS_AS(fit_large_time(phi1, 1.0, l2, 6.0, PhaseSpaceGrid::default_for(3, 1), Window::gaussian(), 4),
                    ValidationError);
    // Φ_40 decays like e^{-81t}: gone below the cut after the first sample.
    const auto fast = HermiteExpansion::basis(MultiIndex{40}, 40);
    CHECK_THROWS_AS(fit_large_time(fast, 1.0, l2, 6.0, PhaseSpaceGrid::default_for(40, 1), Window::gaussian()),
                    NumericalError);
}

TEST_CASE("no smoothing requested gives a flat small-time profile") {
    const auto f = random_generic_expansions(1, 1, 8, 11).front();
    const auto grid = PhaseSpaceGrid::default_for(7, 1);
    for (auto [p, q] : exponent_pairs) {
        const auto r = fit_small_time(f, 1.0, {p, q, p, q}, 1e-3, 1.0, 8, grid, Window::gaussian());
        CHECK(std::abs(r.fitted_small_time_slope) < 0.5);
        CHECK(std::isfinite(r.sup_scaled_ratio));
        CHECK(*std::max_element(r.ratios.begin(), r.ratios.end()) <= 1.5);
    }
}

TEST_CASE("reduced exponents carry the same sigma") {
    const ExponentSet upward{1.0, 2.0, 2.0, 4.0};
    CHECK(upward.sigma(1, 1.0) == upward.reduced().sigma(1, 1.0));
    const auto f = HermiteExpansion::basis(MultiIndex{0}, 2);
    const auto grid = PhaseSpaceGrid::default_for(2, 1);
    CHECK_THROWS_AS(fit_small_time(corpus_entry("gauss_wide"), 1.0, upward, {}), ValidationError);
    CHECK(measure_ratio(f, {1.0, 0.5, 1}, upward, grid, Window::gaussian()) > 0.0);
}

TEST_CASE("damping model reproduces the smoothing exponent") {
    for (double beta : {1.0, 2.0})
        for (const ExponentSet& x : {ExponentSet{infinity, infinity, 2, 2}, ExponentSet{infinity, 1, 1, 1}}) {
            const auto fit = fit_damping_model(beta, x, 1e-3, 1.0, 8);
            CHECK(fit.sigma == doctest::Approx(0.5 / beta));
            CHECK(std::abs(fit.slope / -fit.sigma - 1.0) < 0.02);
        }
    const auto flat = fit_damping_model(1.0, {2, 2, 2, 2}, 1e-2, 1.0, 4);
    CHECK(flat.slope == doctest::Approx(0.0));
}

TEST_CASE("damping model closed forms") {
    const PhaseSpaceGrid grid{1, 12.0, 12.0, 481, 481};
    // ∫∫ e^{-2t(x²+ξ²)} = π / 2t
    CHECK(damping_model_norm(0.5, 1.0, {infinity, infinity, 2, 2}, grid) ==
          doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-10));
    // sup_ξ ∫ e^{-t(x²+ξ²)} dx = √(π/t)
    CHECK(damping_model_norm(0.25, 1.0, {infinity, 1, 1, 1}, grid) ==
          doctest::Approx(std::sqrt(4.0 * std::numbers::pi)).epsilon(1e-10));
}

TEST_CASE("corpus contents") {
    const auto c = corpus();
    CHECK(c.size() == 20);
    std::set<std::string> names;
    for (const auto& f : c) {
        names.insert(f.name);
        CHECK(f.radius > 0.0);
        CHECK(f.bandwidth > 0.0);
        const double origin[] = {0.0};
        CHECK(std::isfinite(std::abs(f.f(origin))));
    }
    CHECK(names.size() == c.size());
    for (const char* required : {"phi0", "phi1", "f_alpha_0.3", "lattice_f_alpha_0.3", "chirp_f_alpha_0.3", "constant"})
        CHECK(names.count(required) == 1);

    const auto lattice = corpus_entry("lattice_f_alpha_0.3");
    const double gap[] = {0.5};
    const double centre[] = {3.0};
    CHECK(lattice.f(gap) == cdouble(0.0));
    CHECK(std::abs(lattice.f(centre)) == doctest::Approx(std::pow(mollifier_scale, -0.3)));
    CHECK_THROWS_AS(corpus_entry("nope"), ValidationError);

    CHECK(smooth_cutoff(5.0, 8.0, 2.0) == 1.0);
    CHECK(smooth_cutoff(-8.0, 8.0, 2.0) == 0.0);
    CHECK(smooth_cutoff(7.0, 8.0, 2.0) == doctest::Approx(0.5));
    CHECK(bump(0.0, 0.45) == 1.0);
    CHECK(bump(0.45, 0.45) == 0.0);
    CHECK_THROWS_AS(power_law(0.0, 0.1, 8.0), ValidationError);

    const auto stress = stress_family();
    CHECK(stress.size() == 3);
}

TEST_CASE("projection of sampled functions") {
    const auto rule = trapezoid_rule(3.0, 7);
    CHECK(rule.flat_weights.front() == doctest::Approx(0.5));
    double total = 0.0;
    for (double w : rule.flat_weights)
        total += w;
    CHECK(total == doctest::Approx(6.0));

    // Φ_0 sampled and projected recovers its coefficient.
    TestFunction g{"sampled_phi0", 1,
                   [](std::span<const double> x) { return cdouble(oracle::hermite_function(0, x[0])); },
                   std::nullopt, 9.0, 9.0, 0.1};
    const auto e = expand(g, 6);
    CHECK(std::abs(e.coeffs()[0] - 1.0) < 1e-12);
    for (std::size_t i = 1; i < e.size(); ++i)
        CHECK(std::abs(e.coeffs()[i]) < 1e-12);
    CHECK(expand(g, 6) == e);
    CHECK(expand(corpus_entry("phi2"), 4) == HermiteExpansion::basis(MultiIndex{2}, 4));

    // e^{-x²/8} against a dense trapezoid oracle.
    const auto wide = corpus_entry("gauss_wide");
    const auto w = expand(wide, 10, 1);
    for (int n : {0, 2, 4, 10}) {
        const auto ref = oracle::trapezoid(
            [n](double x) { return std::exp(-x * x / 8.0) * oracle::hermite_function(n, x); }, 20.0, 8001);
        CHECK(std::abs(w.coeffs()[static_cast<std::size_t>(n)] - ref) < 1e-10);
    }
}

TEST_CASE("random generic expansions") {
    const auto a = random_generic_expansions(2, 3, 10, 9);
    const auto b = random_generic_expansions(2, 3, 10, 9);
    REQUIRE(a.size() == 3);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i] == b[i]);
        CHECK(a[i].degree() == 3);
        CHECK(std::abs(a[i].coeffs()[0]) == doctest::Approx(1.0));
        CHECK(is_generic(a[i]));
    }
    CHECK_FALSE(a[0] == a[1]);
}

TEST_CASE("window choice changes norms by bounded factors") {
    const auto grid = PhaseSpaceGrid::default_for(12, 1);
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        const auto f = oracle::random_expansion(1, 12, seed);
        for (auto [p, q] : exponent_pairs) {
            const auto spec = modulation_spec(p, q);
            const double g0 = modulation_norm(f, spec, grid, Window::gaussian());
            const double g1 = modulation_norm(f, spec, grid, Window::hermite1());
            CHECK(g0 / g1 > 0.1);
            CHECK(g0 / g1 < 10.0);
        }
        // M^{2,2} is (2π)^{1/2}‖f‖‖g‖ for every window: no dependence at all.
        const double a = modulation_norm(f, modulation_spec(2, 2), grid, Window::gaussian());
        const double b = modulation_norm(f, modulation_spec(2, 2), grid, Window::hermite1());
        CHECK(a == doctest::Approx(b).epsilon(1e-6));
    }
}

TEST_CASE("inclusions between modulation spaces") {
    // ‖V_g f‖_∞ ≤ ‖f‖‖g‖ = ‖V_g f‖_2 / √(2π), and ‖F‖_4 ≤ ‖F‖_∞^{1/2}‖F‖_2^{1/2}.
    const auto grid = PhaseSpaceGrid::default_for(10, 1);
    const double root = std::sqrt(2.0 * std::numbers::pi);
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        const auto f = oracle::random_expansion(1, 10, 100 + seed);
        const double l2 = modulation_norm(f, modulation_spec(2, 2), grid, Window::gaussian());
        const double sup = modulation_norm(f, modulation_spec(infinity, infinity), grid, Window::gaussian());
        const double four = modulation_norm(f, modulation_spec(4, 4), grid, Window::gaussian());
        const double one = modulation_norm(f, modulation_spec(1, 1), grid, Window::gaussian());
        CHECK(sup <= l2 / root * (1 + 1e-9));
        CHECK(four <= std::sqrt(sup * l2) * (1 + 1e-9));
        CHECK(l2 <= std::sqrt(sup * one) * (1 + 1e-9));
    }
}

TEST_CASE("quasi-norms below one") {
    const auto grid = PhaseSpaceGrid::default_for(6, 1);
    const auto f = stft(oracle::random_expansion(1, 6, 3), Window::gaussian(), grid);
    const auto g = stft(oracle::random_expansion(1, 6, 4), Window::gaussian(), grid);
    PhaseSpaceMatrix sum = f;
    for (std::size_t i = 0; i < sum.values.size(); ++i)
        sum.values[i] += g.values[i];
    for (double p : {0.5, 0.8}) {
        const NormSpec spec = modulation_spec(p, p);
        const double nf = mixed_norm(f, spec), ng = mixed_norm(g, spec), ns = mixed_norm(sum, spec);
        // ‖F + G‖_p^p ≤ ‖F‖_p^p + ‖G‖_p^p for p ≤ 1
        CHECK(std::pow(ns, p) <= (std::pow(nf, p) + std::pow(ng, p)) * (1 + 1e-12));
        PhaseSpaceMatrix scaled = f;
        for (auto& v : scaled.values)
            v *= 3.0;
        CHECK(mixed_norm(scaled, spec) == doctest::Approx(3.0 * nf).epsilon(1e-12));
    }
}

TEST_CASE("weighted M^{2,2} is comparable to the Shubin norm") {
    for (double s : {1.0, 2.0}) {
        double lo = infinity, hi = 0.0;
        for (int degree : {4, 10, 16}) {
            const auto grid = PhaseSpaceGrid::default_for(degree, 1);
            for (std::uint64_t seed = 1; seed <= 4; ++seed) {
                const auto f = oracle::random_expansion(1, degree, seed * 31 + static_cast<std::uint64_t>(degree));
                NormSpec spec = modulation_spec(2, 2);
                spec.s = s;
                const double r = modulation_norm(f, spec, grid, Window::gaussian()) / shubin_norm(f, s);
                lo = std::min(lo, r);
                hi = std::max(hi, r);
            }
        }
        CHECK(hi / lo < 4.0);
    }
}

TEST_CASE("corpus ratios stay below a fitted multiple of the theory curve") {
    const ExponentSet x{infinity, infinity, 2, 2};
    double k_fit = 0.0;
    for (const char* name : {"phi0", "phi1", "phi5", "hermite_mix", "gauss_shifted", "gauss_modulated"}) {
        const auto entry = corpus_entry(name);
        const auto f = expand(entry, 24);
        const auto grid = PhaseSpaceGrid::default_for(24, 1);
        const auto times = geometric_times(0.01, 4.0, 9);
        const auto r = measure_decay(f, 1.0, x, times, grid, Window::gaussian());
        REQUIRE(std::isfinite(r.sup_bounded_constant));
        k_fit = std::max(k_fit, r.sup_bounded_constant);
        for (std::size_t i = 0; i < times.size(); ++i)
            CHECK(r.ratios[i] <= r.sup_bounded_constant * r.theory[i] * (1 + 1e-12));
    }
    CHECK(k_fit > 0.0);
    CHECK(k_fit < 100.0);
}
