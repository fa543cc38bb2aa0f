#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "hermite/expansion.hpp"

namespace hermite {

/// Uniform grids over [−L_x, L_x]^d (positions) and [−L_ξ, L_ξ]^d (frequencies).
struct PhaseSpaceGrid {
    int dim = 1;
    double x_extent = 5.0;
    double xi_extent = 5.0;
    int nx = 129;
    int nxi = 129;

    /// L = √(2N+d) + 4 in both variables. Points per axis: 129 for d = 1,
    /// 33 for d = 2, 17 for d = 3, raised when needed to satisfy the
    /// Nyquist condition checked by stft().
    static PhaseSpaceGrid default_for(int degree, int dim);

    /// Grid for a function negligible beyond |x| = radius and |ξ| = bandwidth:
    /// extents radius + margin and bandwidth + margin (room for the window),
    /// with `oversample` times the Nyquist point count, odd, at least 33.
    static PhaseSpaceGrid covering(double radius, double bandwidth, int dim, double margin = 8.0,
                                   double oversample = 1.1);

    void validate() const;
    double x_spacing() const { return 2.0 * x_extent / (nx - 1); }
    double xi_spacing() const { return 2.0 * xi_extent / (nxi - 1); }
    std::vector<double> x_axis() const;
    std::vector<double> xi_axis() const;

    /// Trapezoid cell weights along one axis.
    std::vector<double> x_cell_weights() const;
    std::vector<double> xi_cell_weights() const;

    std::size_t x_count() const;  // nx^d
    std::size_t xi_count() const; // nxi^d

    /// Same extents with twice the resolution (n ↦ 2n − 1).
    PhaseSpaceGrid refined() const;

    /// Short stable identifier of the grid parameters.
    std::string hash() const;
};

/// Sampled V_g f. values[ix * xi_count() + ixi], where ix and ixi are the
/// row-major flattenings of the d position and d frequency indices.
struct PhaseSpaceMatrix {
    PhaseSpaceGrid grid;
    std::vector<cdouble> values;

    cdouble at(std::size_t ix, std::size_t ixi) const { return values[ix * grid.xi_count() + ixi]; }
};

/// Separable window g(y) = Π_i g₁(y_i) with a one-dimensional profile g₁.
struct Window {
    std::string name;
    HermiteExpansion profile; // d = 1

    /// Unit L²-normalized Gaussian g₁ = Φ_0.
    static Window gaussian();
    /// Odd Hermite window g₁ = Φ_1.
    static Window hermite1();
    static Window by_name(const std::string& name);

    double l2_norm(int dim) const;
};

enum class InnerVariable { x, xi };

/// Mixed quasi-norm selector: exponents p (inner) and q (outer) in (0, ∞],
/// weight v_s = (1 + |x| + |ξ|)^s, and which variable is integrated first.
/// x-inner is the modulation order M^{p,q}; ξ-inner is the Wiener amalgam W^{p,q}.
struct NormSpec {
    double p = 2.0;
    double q = 2.0;
    double s = 0.0;
    InnerVariable inner = InnerVariable::x;

    void validate() const;
};

std::string to_string(InnerVariable inner);
InnerVariable inner_variable_from_string(const std::string& s);

/// How one-dimensional STFT rows are summed. `direct` forms every
/// e^{-iξy} product; `chirp_z` evaluates each row as a convolution with FFTs
/// (O(n log n) per row). `automatic` switches to chirp-z on large grids.
/// Grids with d ≥ 2 always use the direct tensor contraction.
enum class StftAlgorithm { automatic, direct, chirp_z };

/// V_g f(x, ξ) = ∫ e^{-iξ·y} f(y) conj(g(y − x)) dy by the trapezoid rule on
/// the position grid. Throws ValidationError for a zero window and
/// GridResolutionError when h_ξ·L_x > π or h_x·L_ξ > π.
PhaseSpaceMatrix stft(const HermiteExpansion& f, const Window& window, const PhaseSpaceGrid& grid,
                      StftAlgorithm algorithm = StftAlgorithm::automatic);
PhaseSpaceMatrix stft(const GridFunction& f, const Window& window, const PhaseSpaceGrid& grid,
                      StftAlgorithm algorithm = StftAlgorithm::automatic);

/// f on the d-fold position grid, row-major (the STFT's input samples).
std::vector<cdouble> sample_on_grid(const HermiteExpansion& f, const PhaseSpaceGrid& grid);
std::vector<cdouble> sample_on_grid(const GridFunction& f, const PhaseSpaceGrid& grid);

/// mixed_norm(stft(f), spec) for each spec from a single transform. For d = 1
/// the transform is streamed row by row and never stored, which keeps large
/// grids (thousands of points per axis) within memory.
std::vector<double> phase_space_norms(const HermiteExpansion& f, const Window& window, const PhaseSpaceGrid& grid,
                                      std::span<const NormSpec> specs);
std::vector<double> phase_space_norms(const GridFunction& f, const Window& window, const PhaseSpaceGrid& grid,
                                      std::span<const NormSpec> specs);

/// Iterated Riemann (trapezoid-weighted) quasi-norm of |m|·v_s. Infinite
/// exponents take grid maxima with no volume factor.
double mixed_norm(const PhaseSpaceMatrix& m, const NormSpec& spec);

/// mixed_norm(stft(f)) with spec.inner == x; throws otherwise.
double modulation_norm(const HermiteExpansion& f, const NormSpec& spec, const PhaseSpaceGrid& grid,
                       const Window& window);
double modulation_norm(const GridFunction& f, const NormSpec& spec, const PhaseSpaceGrid& grid, const Window& window);

/// mixed_norm(stft(f)) with spec.inner == ξ; throws otherwise.
double amalgam_norm(const HermiteExpansion& f, const NormSpec& spec, const PhaseSpaceGrid& grid,
                    const Window& window);
double amalgam_norm(const GridFunction& f, const NormSpec& spec, const PhaseSpaceGrid& grid, const Window& window);

/// Diagonal Fourier transform: direction +1 maps c_α ↦ (−i)^{|α|} c_α (F),
/// direction −1 maps c_α ↦ i^{|α|} c_α (F^{-1}).
HermiteExpansion fourier_transform(const HermiteExpansion& e, int direction);

/// amalgam_norm(Φ_0, 2, 2) / modulation_norm(F Φ_0, 2, 2), measured once per
/// (window, grid) and cached.
double fourier_duality_constant(const Window& window, const PhaseSpaceGrid& grid);

/// Evaluates phase-space norms of many expansions sharing (d, N): the STFT is
/// linear, so V_g Φ_α is computed once per basis function and recombined.
/// Falls back to a direct transform when the basis table would be too large.
class ModulationNormEvaluator {
public:
    ModulationNormEvaluator(int dim, int degree, PhaseSpaceGrid grid, Window window);

    PhaseSpaceMatrix transform(const HermiteExpansion& e) const;
    /// Norm in the variable order selected by spec.inner.
    double norm(const HermiteExpansion& e, const NormSpec& spec) const;

    const PhaseSpaceGrid& grid() const noexcept { return grid_; }
    const Window& window() const noexcept { return window_; }

private:
    int dim_;
    int degree_;
    PhaseSpaceGrid grid_;
    Window window_;
    std::vector<cdouble> basis_; // [mode][entry], empty when using the direct path
};

/// CSV with header x1..xd, xi1..xid, re, im (one row per grid pair).
void write_phase_space_csv(std::ostream& out, const PhaseSpaceMatrix& m);

/// Binary tensor container mirroring the expansion format:
///   "HPSM", u32 version, u32 d, u32 nx, u32 nxi, f64 L_x, f64 L_ξ,
///   u64 count, then interleaved (re, im) f64 pairs in PhaseSpaceMatrix order.
void write_phase_space_binary(std::ostream& out, const PhaseSpaceMatrix& m);
PhaseSpaceMatrix read_phase_space_binary(std::istream& in);

} // namespace hermite
