#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "hermite/errors.hpp"

namespace hermite {

/// Malformed configuration document; the message carries line and column
/// when the problem can be located in the text.
class ConfigError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

enum class ConfigType { string, integer, number, exponent, boolean };

/// One row of the configuration reference table.
struct ConfigKey {
    std::string name;
    ConfigType type;
    nlohmann::json fallback;           // default; an object maps command → default; null means required
    std::vector<std::string> commands; // commands that accept the key
    std::string help;
};

/// The complete reference table (also rendered in the README).
const std::vector<ConfigKey>& config_keys();

/// Command names accepted by the runner.
const std::vector<std::string>& config_commands();

/// A parsed, fully defaulted experiment configuration.
class ExperimentConfig {
public:
    const std::string& command() const { return command_; }
    const std::string& output_dir() const { return output_dir_; }

    std::string string(const std::string& key) const;
    long integer(const std::string& key) const;
    double number(const std::string& key) const;   // exponents map "inf" to +∞
    bool boolean(const std::string& key) const;

    /// Canonical document: every key the command accepts, defaults filled,
    /// keys sorted, exponents written as numbers or "inf".
    const nlohmann::json& canonical() const noexcept { return values_; }

private:
    friend ExperimentConfig parse_config(std::string_view text);
    const nlohmann::json& lookup(const std::string& key) const;

    std::string command_;
    std::string output_dir_;
    nlohmann::json values_;
};

/// Strict JSON parsing: syntax errors report line and column, unknown keys,
/// keys the command does not use and type mismatches are rejected, and an
/// empty document lists the required keys. Throws ConfigError.
ExperimentConfig parse_config(std::string_view text);

/// Pretty-printed canonical form; parse_config(emit_config(c)) reproduces c.
std::string emit_config(const ExperimentConfig& config);

/// Markdown table of config_keys().
std::string config_reference_markdown();

} // namespace hermite
