#include <cmath>

#include "doctest.h"
#include "hermite/errors.hpp"
#include "hermite/phase_space.hpp"
#include "hermite/semigroup.hpp"
#include "oracles.hpp"

using namespace hermite;

TEST_CASE("eigenvalues") {
    CHECK(eigenvalue(0, 1, 1.0) == 1.0);
    CHECK(eigenvalue(1, 2, 0.5) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(eigenvalue(0, 3, 2.0) == doctest::Approx(9.0).epsilon(1e-15));
    CHECK(decay_factor(2000, 1, 1.0, 1.0) == 0.0);
}

TEST_CASE("fractional powers") {
    const auto phi0 = HermiteExpansion::basis(MultiIndex{0}, 3);
    CHECK(apply_fractional_power(phi0, 1.0) == phi0);
    const auto r = oracle::random_expansion(2, 10, 1);
    CHECK(apply_fractional_power(r, 0.0) == r);
    const auto half = apply_fractional_power(apply_fractional_power(r, 0.5), 0.5);
    CHECK(oracle::relative_distance(half, apply_fractional_power(r, 1.0)) < 1e-12);
}

TEST_CASE("semigroup on the ground state and identity at t = 0") {
    for (int dim : {1, 2, 3})
        for (double beta : {0.5, 1.0, 2.0})
            for (double t : {0.1, 1.0, 5.0}) {
                const auto g = HermiteExpansion::basis(MultiIndex(std::vector<int>(static_cast<std::size_t>(dim), 0)), 4);
                const auto out = apply_semigroup(g, {beta, t, dim});
                const double expected = std::exp(-t * std::pow(dim, beta));
                CHECK(std::abs(out.l2_norm() - expected) <= 1e-14 * expected);
            }
    const auto r = oracle::random_expansion(1, 6, 2);
    CHECK(apply_semigroup(r, {0.7, 0.0, 1}) == r);
    CHECK_THROWS_AS(apply_semigroup(r, {0.7, -1.0, 1}), ValidationError);
    CHECK_THROWS_AS(apply_semigroup(r, {0.0, 1.0, 1}), ValidationError);
    CHECK_THROWS_AS(apply_semigroup(r, {1.0, 1.0, 2}), ValidationError);
}

TEST_CASE("semigroup law, contraction and commutation") {
    for (double beta : {0.5, 1.0, 2.0}) {
        const auto r = oracle::random_expansion(2, 10, 3);
        const auto two_steps = apply_semigroup(apply_semigroup(r, {beta, 0.3, 2}), {beta, 0.7, 2});
        const auto one_step = apply_semigroup(r, {beta, 1.0, 2});
        CHECK(oracle::relative_distance(two_steps, one_step) < 1e-13);

        for (double t : {0.0, 0.2, 1.5})
            CHECK(apply_semigroup(r, {beta, t, 2}).l2_norm() <= std::exp(-t * std::pow(2.0, beta)) * r.l2_norm() * (1 + 1e-15));

        for (int k = 0; k <= 10; ++k)
            CHECK(apply_semigroup(project(r, k), {beta, 0.4, 2}) == project(apply_semigroup(r, {beta, 0.4, 2}), k));

        const auto finv = fourier_transform(apply_semigroup(r, {beta, 0.4, 2}), -1);
        CHECK(finv == apply_semigroup(fourier_transform(r, -1), {beta, 0.4, 2}));
    }
}

TEST_CASE("eigen-decay exactness for single modes") {
    for (int a = 0; a <= 8; ++a)
        for (double beta : {0.5, 1.0, 2.0}) {
            const auto phi = HermiteExpansion::basis(MultiIndex{a, 1}, 9);
            const double expected = std::exp(-0.3 * std::pow(2.0 * (a + 1) + 2.0, beta));
            CHECK(apply_semigroup(phi, {beta, 0.3, 2}).l2_norm() == doctest::Approx(expected).epsilon(1e-14));
        }
}

TEST_CASE("exponent set and theoretical constant") {
    const ExponentSet sup_to_l2{infinity, infinity, 2.0, 2.0};
    CHECK(sup_to_l2.sigma(2, 1.0) == doctest::Approx(1.0));
    CHECK(sup_to_l2.sigma(1, 1.0) == doctest::Approx(0.5));
    const ExponentSet same{3.0, 1.5, 3.0, 1.5};
    CHECK(same.sigma(2, 0.5) == 0.0);
    CHECK(theoretical_constant({1.0, 0.01, 2}, same, 2.5) == doctest::Approx(2.5));
    CHECK(theoretical_constant({2.0, 2.0, 1}, same, 1.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-15));
    CHECK(theoretical_constant({1.0, 0.25, 2}, sup_to_l2, 1.0) == doctest::Approx(4.0));
    CHECK_THROWS_AS(theoretical_constant({1.0, 0.0, 1}, same, 1.0), ValidationError);
    CHECK_THROWS_AS(theoretical_constant({1.0, 1.0, 1}, same, 0.0), ValidationError);

    const ExponentSet upward{1.0, 1.0, 2.0, 4.0};
    const auto reduced = upward.reduced();
    CHECK(reduced.p2 == 1.0);
    CHECK(reduced.q2 == 1.0);
    CHECK(upward.sigma(1, 1.0) == 0.0);
    CHECK_THROWS_AS((ExponentSet{0.0, 1.0, 1.0, 1.0}.validate()), ValidationError);
}

namespace {

GridFunction as_function(const HermiteExpansion& e) {
    return [e](std::span<const double> x) { return synthesize(e, x)[0]; };
}

double mehler_relative_error(const HermiteExpansion& e, double t) {
    const int dim = e.dim();
    const auto rule = gauss_hermite_rule(e.degree() + 1);
    const auto points = tensor_points(rule.nodes, dim);
    const auto kernel = mehler_apply(as_function(e), dim, t, rule, points);
    const auto spectral = apply_semigroup(e, {1.0, t, dim});
    // Both sides are degree-N expansions, so the analysis on the same rule is exact
    // and the L² distance is the coefficient distance.
    const auto kernel_coeffs = analyze(kernel, dim, e.degree(), rule);
    return (kernel_coeffs - spectral).l2_norm() / spectral.l2_norm();
}

} // namespace

TEST_CASE("Mehler kernel on eigenfunctions") {
    const auto rule = gauss_hermite_rule(12);
    const double pts[] = {-2.0, -0.5, 0.0, 0.3, 1.7, 3.0};
    for (double t : {0.05, 0.5, 2.0}) {
        const auto phi0 = mehler_apply(as_function(HermiteExpansion::basis(MultiIndex{0}, 0)), 1, t, rule, pts);
        const auto phi1 = mehler_apply(as_function(HermiteExpansion::basis(MultiIndex{1}, 1)), 1, t, rule, pts);
        for (std::size_t i = 0; i < std::size(pts); ++i) {
            CHECK(std::abs(phi0[i] - std::exp(-t) * oracle::hermite_function(0, pts[i])) < 1e-12);
            CHECK(std::abs(phi1[i] - std::exp(-3 * t) * oracle::hermite_function(1, pts[i])) < 1e-12);
        }
    }
    const double pts2[] = {0.4, -1.1, 2.0, 0.0};
    const auto g2 = mehler_apply(as_function(HermiteExpansion::basis(MultiIndex{0, 0}, 0)), 2, 0.7, rule, pts2);
    CHECK(std::abs(g2[0] - std::exp(-1.4) * oracle::hermite_function(0, 0.4) * oracle::hermite_function(0, -1.1)) <
          1e-12);
}

TEST_CASE("Mehler kernel agrees with the spectral flow") {
    CHECK(mehler_relative_error(oracle::random_expansion(1, 12, 7), 0.5) < 1e-8);
    for (int degree : {4, 20})
        for (double t : {0.05, 1.0, 3.0})
            CHECK(mehler_relative_error(oracle::random_expansion(1, degree, 40 + static_cast<std::uint64_t>(degree)), t) < 1e-8);
    CHECK(mehler_relative_error(oracle::random_expansion(2, 10, 8), 0.05) < 1e-8);
}

TEST_CASE("Mehler preconditions") {
    const auto rule = gauss_hermite_rule(4);
    const double pts[] = {0.0};
    const auto f = as_function(HermiteExpansion::basis(MultiIndex{0}, 0));
    CHECK_THROWS_AS(mehler_apply(f, 1, 0.0, rule, pts), ValidationError);
    CHECK_THROWS_AS(mehler_apply(f, 3, 1.0, rule, pts), ValidationError);
    CHECK_THROWS_AS(mehler_apply(f, 1, 1.0, rule.rescaled(2.0), pts), ValidationError);
}
