#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "hermite/config.hpp"

namespace hermite {

enum ExitStatus : int { exit_ok = 0, exit_validation = 2, exit_numerical = 3, exit_io = 4 };

struct RunResult {
    int status = exit_ok;
    std::string message;                      // error text for non-zero status
    std::vector<std::filesystem::path> files; // artifacts written, manifest last
};

/// Validates the configuration against the target module, runs the command
/// and writes its artifacts plus manifest.json into config.output_dir().
/// Never throws: failures map to exit_validation, exit_numerical or exit_io.
///
/// Artifacts per command (all CSV files have a header row):
///   transform  stft.csv (x1.., xi1.., re, im) or stft.bin; coefficients.bin
///   semigroup  semigroup.csv (alpha, order, re, im, re_t, im_t); semigroup.bin
///   norm       norm.csv (function, p, q, s, inner, value)
///   decay      decay.csv (function, t, ratio, theory, ratio/theory, fitted_rate); decay.json
///   smoothing  smoothing.csv (function, t, ratio, theory, ratio/theory, scaled_ratio); smoothing.json
///   solve      trajectory.csv (t, norm, exp(t*d^beta)*norm); solve.json; snapshots/state_<j>.bin
///   blowup     blowup.json
RunResult run(const ExperimentConfig& config);

/// parse_config + run on a file's contents; unreadable files give exit_io and
/// configuration errors exit_validation.
RunResult run_config_file(const std::filesystem::path& path);

} // namespace hermite
