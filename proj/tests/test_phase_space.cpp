#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "hermite/errors.hpp"
#include "hermite/phase_space.hpp"
#include "hermite/semigroup.hpp"
#include "oracles.hpp"

using namespace hermite;

namespace {

const double two_pi = 2.0 * std::numbers::pi;

HermiteExpansion phi(int n, int degree = -1) { return HermiteExpansion::basis(MultiIndex{n}, degree < 0 ? n : degree); }

PhaseSpaceGrid wide_grid(int dim = 1, double extent = 8.0, int n = 129) { return {dim, extent, extent, n, n}; }

} // namespace

TEST_CASE("STFT of the Gaussian against its closed form") {
    const auto grid = wide_grid();
    const auto m = stft(phi(0), Window::gaussian(), grid);
    const auto x = grid.x_axis();
    const auto xi = grid.xi_axis();
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < xi.size(); ++j) {
            // V_g g(x, ξ) = e^{-iξx/2} e^{-(x²+ξ²)/4}
            const cdouble ref = std::polar(std::exp(-(x[i] * x[i] + xi[j] * xi[j]) / 4.0), -xi[j] * x[i] / 2.0);
            worst = std::max(worst, std::abs(m.at(i, j) - ref));
        }
    CHECK(worst < 1e-10);
}

TEST_CASE("STFT basic identities") {
    const auto grid = wide_grid(1, 7.0, 97);
    for (auto v : stft(HermiteExpansion(1, 4), Window::gaussian(), grid).values)
        CHECK(v == cdouble{});

    // V_g f(0, 0) = ⟨f, g⟩ for a real window
    const auto f = oracle::random_expansion(1, 4, 17);
    const auto m = stft(f, Window::gaussian(), grid);
    CHECK(std::abs(m.at(48, 48) - f.coeffs()[0]) < 1e-12);

    // conjugate symmetry for real f and real g
    auto real_f = f;
    for (auto& c : real_f.coeffs())
        c = c.real();
    const auto mr = stft(real_f, Window::hermite1(), grid);
    double worst = 0.0;
    for (std::size_t i = 0; i < 97; ++i)
        for (std::size_t j = 0; j < 97; ++j)
            worst = std::max(worst, std::abs(mr.at(i, 96 - j) - std::conj(mr.at(i, j))));
    CHECK(worst < 1e-10);
}

TEST_CASE("STFT from a grid function equals the expansion path") {
    const auto grid = wide_grid(2, 6.0, 33);
    const auto e = oracle::random_expansion(2, 3, 4);
    const auto a = stft(e, Window::gaussian(), grid);
    const auto b = stft([&](std::span<const double> x) { return synthesize(e, x)[0]; }, Window::gaussian(), grid);
    double worst = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i)
        worst = std::max(worst, std::abs(a.values[i] - b.values[i]));
    CHECK(worst < 1e-12);
}

TEST_CASE("STFT preconditions") {
    CHECK_THROWS_AS(stft(phi(0), Window{"zero", HermiteExpansion(1, 0)}, wide_grid()), ValidationError);
    CHECK_THROWS_AS(stft(phi(0), Window::gaussian(), PhaseSpaceGrid{1, 8.0, 8.0, 129, 9}), GridResolutionError);
    CHECK_THROWS_AS(stft(phi(0), Window::gaussian(), PhaseSpaceGrid{1, 8.0, 8.0, 9, 129}), GridResolutionError);
    CHECK_THROWS_AS(stft(phi(0), Window::gaussian(), PhaseSpaceGrid{2, 8.0, 8.0, 129, 129}), ValidationError);
    CHECK_THROWS_AS(Window::by_name("box"), ValidationError);
}

TEST_CASE("mixed norm closed forms") {
    // constant 1 on [−1, 1]²
    PhaseSpaceGrid unit{1, 1.0, 1.0, 11, 21};
    PhaseSpaceMatrix ones{unit, std::vector<cdouble>(11 * 21, 1.0)};
    CHECK(mixed_norm(ones, {1.0, 1.0, 0.0, InnerVariable::x}) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(mixed_norm(ones, {2.0, 2.0, 0.0, InnerVariable::xi}) == doctest::Approx(2.0).epsilon(1e-14));

    auto spiky = ones;
    spiky.values[37] = 5.0;
    CHECK(mixed_norm(spiky, {infinity, infinity, 0.0, InnerVariable::x}) == 5.0);
    // weight at the spike: ix = 1, ixi = 16 → x = −0.8, ξ = 0.6
    CHECK(mixed_norm(spiky, {infinity, infinity, 1.0, InnerVariable::x}) == doctest::Approx(5.0 * 2.4));

    const auto grid = wide_grid();
    const auto m = stft(phi(0), Window::gaussian(), grid);
    // ‖V_g f‖_{L²} = (2π)^{d/2} ‖f‖ ‖g‖
    CHECK(mixed_norm(m, {2.0, 2.0, 0.0, InnerVariable::x}) == doctest::Approx(std::sqrt(two_pi)).epsilon(1e-6));
    CHECK_THROWS_AS(mixed_norm(m, {0.0, 1.0, 0.0, InnerVariable::x}), ValidationError);
}

TEST_CASE("M^{2,2} norm is a fixed multiple of the L² norm") {
    const auto grid = wide_grid(1, 9.0, 161);
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto f = oracle::random_expansion(1, 6, seed);
        const double norm = modulation_norm(f, {2.0, 2.0, 0.0, InnerVariable::x}, grid, Window::gaussian());
        CHECK(norm / f.l2_norm() == doctest::Approx(std::sqrt(two_pi)).epsilon(1e-6));
    }
    const auto f = oracle::random_expansion(1, 6, 5);
    const NormSpec spec{3.0, 1.5, 0.5, InnerVariable::x};
    CHECK(modulation_norm(2.0 * f, spec, grid, Window::gaussian()) ==
          doctest::Approx(2.0 * modulation_norm(f, spec, grid, Window::gaussian())).epsilon(1e-13));
}

TEST_CASE("order flags and Fubini on equal exponents") {
    const auto grid = wide_grid(1, 7.0, 97);
    const auto f = oracle::random_expansion(1, 5, 12);
    for (double p : {0.5, 1.0, 2.0, 3.0, infinity}) {
        const double mod = modulation_norm(f, {p, p, 0.0, InnerVariable::x}, grid, Window::gaussian());
        const double am = amalgam_norm(f, {p, p, 0.0, InnerVariable::xi}, grid, Window::gaussian());
        CHECK(mod == doctest::Approx(am).epsilon(1e-12));
    }
    CHECK_THROWS_AS(modulation_norm(f, {1.0, 2.0, 0.0, InnerVariable::xi}, grid, Window::gaussian()), ValidationError);
    CHECK_THROWS_AS(amalgam_norm(f, {1.0, 2.0, 0.0, InnerVariable::x}, grid, Window::gaussian()), ValidationError);
}

TEST_CASE("diagonal Fourier transform") {
    const auto r = oracle::random_expansion(2, 7, 9);
    auto four = r;
    for (int i = 0; i < 4; ++i)
        four = fourier_transform(four, 1);
    CHECK(four == r);
    CHECK(fourier_transform(fourier_transform(r, 1), -1) == r);
    CHECK(fourier_transform(phi(0, 3), 1) == phi(0, 3));
    CHECK(fourier_transform(phi(2), 1) == -1.0 * phi(2));
    CHECK(fourier_transform(phi(1), -1) == cdouble(0.0, 1.0) * phi(1));
    CHECK_THROWS_AS(fourier_transform(r, 2), ValidationError);
}

TEST_CASE("amalgam norm equals the modulation norm of the Fourier transform") {
    for (const auto& window : {Window::gaussian(), Window::hermite1()}) {
        const auto grid = PhaseSpaceGrid::default_for(2, 1);
        const double c = fourier_duality_constant(window, grid);
        CHECK(c == doctest::Approx(1.0).epsilon(1e-6));
        for (int n : {0, 1, 2})
            for (const auto& [p, q] : {std::pair{1.0, 2.0}, std::pair{2.0, infinity}, std::pair{4.0, 1.0}}) {
                const double am = amalgam_norm(phi(n, 2), {p, q, 0.0, InnerVariable::xi}, grid, window);
                const double mod = modulation_norm(fourier_transform(phi(n, 2), -1), {p, q, 0.0, InnerVariable::x}, grid, window);
                CHECK(am / (c * mod) == doctest::Approx(1.0).epsilon(1e-6));
            }
    }
}

TEST_CASE("evaluator reuses basis transforms") {
    const auto grid = wide_grid(1, 7.0, 97);
    ModulationNormEvaluator eval(1, 5, grid, Window::hermite1());
    const auto f = oracle::random_expansion(1, 5, 33);
    const NormSpec spec{1.0, infinity, 1.0, InnerVariable::x};
    CHECK(eval.norm(f, spec) == doctest::Approx(modulation_norm(f, spec, grid, Window::hermite1())).epsilon(1e-12));
    CHECK_THROWS_AS(eval.norm(oracle::random_expansion(1, 4, 1), spec), ValidationError);
}

TEST_CASE("default grids") {
    const auto g1 = PhaseSpaceGrid::default_for(10, 1);
    CHECK(g1.nx == 129);
    CHECK(g1.x_extent == doctest::Approx(std::sqrt(21.0) + 4.0));
    const auto g2 = PhaseSpaceGrid::default_for(10, 2);
    CHECK(g2.nx % 2 == 1);
    CHECK(g2.x_spacing() * g2.xi_extent <= std::numbers::pi);
    CHECK(g1.hash() != g2.hash());
    CHECK(g1.hash().size() == 16);
    CHECK(g1.refined().nx == 257);
}

TEST_CASE("phase-space exports") {
    PhaseSpaceGrid grid{2, 1.0, 2.0, 3, 2};
    PhaseSpaceMatrix m{grid, std::vector<cdouble>(36)};
    for (std::size_t i = 0; i < m.values.size(); ++i)
        m.values[i] = {0.5 * static_cast<double>(i), -1.0};
    std::stringstream bin;
    write_phase_space_binary(bin, m);
    const auto back = read_phase_space_binary(bin);
    CHECK(back.values == m.values);
    CHECK(back.grid.hash() == grid.hash());

    std::ostringstream csv;
    write_phase_space_csv(csv, m);
    const auto text = csv.str();
    CHECK(text.substr(0, text.find('\n')) == "x1,x2,xi1,xi2,re,im");
    CHECK(std::count(text.begin(), text.end(), '\n') == 37);
    CHECK(text.find("-1,-1,-2,-2,0,-1\n") != std::string::npos);
}

TEST_CASE("chirp-z rows agree with direct sums") {
    for (const auto& grid : {PhaseSpaceGrid{1, 7.0, 7.0, 97, 97}, PhaseSpaceGrid{1, 9.0, 20.0, 301, 181}}) {
        const auto f = oracle::random_expansion(1, 10, 77);
        const auto direct = stft(f, Window::hermite1(), grid, StftAlgorithm::direct);
        const auto chirp = stft(f, Window::hermite1(), grid, StftAlgorithm::chirp_z);
        double worst = 0.0, peak = 0.0;
        for (std::size_t i = 0; i < direct.values.size(); ++i) {
            worst = std::max(worst, std::abs(direct.values[i] - chirp.values[i]));
            peak = std::max(peak, std::abs(direct.values[i]));
        }
        CHECK(worst < 1e-13 * peak);
    }
}

TEST_CASE("streamed norms match the stored matrix") {
    const PhaseSpaceGrid grid{1, 8.0, 12.0, 301, 301};
    const auto f = oracle::random_expansion(1, 12, 5);
    const std::vector<NormSpec> specs{{2.0, 2.0, 0.0, InnerVariable::x},
                                      {infinity, 1.0, 0.0, InnerVariable::x},
                                      {1.0, infinity, 2.0, InnerVariable::xi},
                                      {0.5, 3.0, -1.0, InnerVariable::x}};
    const auto streamed = phase_space_norms(f, Window::gaussian(), grid, specs);
    const auto m = stft(f, Window::gaussian(), grid);
    for (std::size_t s = 0; s < specs.size(); ++s)
        CHECK(streamed[s] == doctest::Approx(mixed_norm(m, specs[s])).epsilon(1e-12));
}
