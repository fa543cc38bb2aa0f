#pragma once

#include <memory>
#include <span>
#include <vector>

#include "hermite/phase_space.hpp"

namespace hermite::detail {

/// One-dimensional STFT evaluated one position at a time:
///   out[j] = Σ_m w_m f(y_m) conj(g(y_m − x_i)) e^{-iξ_j y_m}
/// with the y-grid equal to the x-grid. Not thread-safe; use one per thread.
class StftRows {
public:
    StftRows(const Window& window, const PhaseSpaceGrid& grid, StftAlgorithm algorithm);
    ~StftRows();
    StftRows(const StftRows&) = delete;
    StftRows& operator=(const StftRows&) = delete;

    /// `samples` holds f on the x-grid; `out` has grid.nxi entries.
    void row(std::span<const cdouble> samples, std::size_t i, std::span<cdouble> out);

    bool uses_chirp_z() const noexcept { return chirp_ != nullptr; }

private:
    struct Chirp;

    std::size_t nx_;
    std::size_t nxi_;
    std::vector<double> weights_;
    std::vector<cdouble> window_conj_; // conj g((k − (nx−1)) h), k = 0 .. 2nx−2
    std::size_t support_;              // |m − i| beyond which the window is negligible
    std::vector<cdouble> phase_;       // direct path: e^{-iξ_j y_m}, [j][m]
    std::unique_ptr<Chirp> chirp_;
    std::vector<cdouble> scratch_;
};

/// Throws on a zero window or an under-resolved grid (see stft()).
void check_stft_inputs(const Window& window, const PhaseSpaceGrid& grid);

} // namespace hermite::detail
