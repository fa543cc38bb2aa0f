#include "hermite/config.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace hermite {

namespace {

using nlohmann::json;

const std::vector<std::string> all = {"transform", "semigroup", "norm", "decay", "smoothing", "solve", "blowup"};
const std::vector<std::string> with_function = {"transform", "semigroup", "norm", "decay", "smoothing", "solve"};
const std::vector<std::string> sweeps = {"decay", "smoothing"};
const std::vector<std::string> solver = {"solve", "blowup"};
const std::vector<std::string> gridded = {"transform", "norm", "decay", "smoothing"};

std::vector<ConfigKey> build_table() {
    const json inf = "inf";
    return {
        {"command", ConfigType::string, nullptr, all, "transform, semigroup, norm, decay, smoothing, solve or blowup"},
        {"output_dir", ConfigType::string, nullptr, all, "directory for CSV/JSON artifacts (created if missing)"},
        {"seed", ConfigType::integer, 0, all, "seed for random corpus draws"},
        {"dim", ConfigType::integer, 1, all, "spatial dimension d (1 to 3)"},
        {"degree", ConfigType::integer, 16, all, "truncation degree N"},
        {"function", ConfigType::string, "ground", with_function,
         "ground (Φ_0), random (generic expansions) or a corpus name (d = 1)"},
        {"modes", ConfigType::integer, 10, with_function, "basis functions in a random expansion"},
        {"count", ConfigType::integer, 1, sweeps, "number of random expansions"},
        {"window", ConfigType::string, "gaussian", all, "STFT window: gaussian or hermite1"},
        {"beta", ConfigType::number, 1.0, {"semigroup", "decay", "smoothing", "solve", "blowup"}, "fractional power β"},
        {"t", ConfigType::number, 1.0, {"semigroup"}, "flow time"},
        {"p", ConfigType::exponent, inf, {"norm", "solve", "blowup"}, "inner exponent of the norm"},
        {"q", ConfigType::exponent, 1.0, {"norm", "solve", "blowup"}, "outer exponent of the norm"},
        {"s", ConfigType::number, 0.0, {"norm"}, "weight exponent of (1 + |x| + |ξ|)^s"},
        {"inner", ConfigType::string, "x", {"norm", "solve", "blowup"},
         "variable integrated first: x (modulation) or xi (amalgam)"},
        {"p1", ConfigType::exponent, 2.0, sweeps, "source exponent p1"},
        {"q1", ConfigType::exponent, 2.0, sweeps, "source exponent q1"},
        {"p2", ConfigType::exponent, 2.0, sweeps, "target exponent p2"},
        {"q2", ConfigType::exponent, 2.0, sweeps, "target exponent q2"},
        {"t_min", ConfigType::number, json{{"decay", 1.0}, {"smoothing", 1e-3}}, sweeps, "first sampled time"},
        {"t_max", ConfigType::number, json{{"decay", 6.0}, {"smoothing", 1.0}}, sweeps, "last sampled time"},
        {"samples", ConfigType::integer, json{{"decay", 11}, {"smoothing", 12}}, sweeps, "number of sampled times"},
        {"refinement", ConfigType::integer, 0, {"smoothing"}, "grid refinements n → 2n − 1 for corpus functions"},
        {"nx", ConfigType::integer, 0, gridded, "position points per axis (0: automatic)"},
        {"nxi", ConfigType::integer, 0, gridded, "frequency points per axis (0: automatic)"},
        {"x_extent", ConfigType::number, 0.0, gridded, "position half-width L_x (0: automatic)"},
        {"xi_extent", ConfigType::number, 0.0, gridded, "frequency half-width L_ξ (0: automatic)"},
        {"format", ConfigType::string, "csv", {"transform"}, "phase-space export: csv or binary"},
        {"k", ConfigType::integer, 1, solver, "nonlinearity power |u|^{2k}u"},
        {"lambda", ConfigType::number, 1.0, {"solve"}, "real part of λ"},
        {"lambda_im", ConfigType::number, 0.0, {"solve"}, "imaginary part of λ"},
        {"amplitude", ConfigType::number, 0.01, {"solve"}, "initial datum is amplitude · function"},
        {"dt", ConfigType::number, 0.01, solver, "time step"},
        {"T", ConfigType::number, 1.0, solver, "horizon (the blow-up free run uses twice the ODE time)"},
        {"picard_tol", ConfigType::number, 1e-11, solver, "sup-in-time Picard increment tolerance"},
        {"picard_max_iters", ConfigType::integer, 30, solver, "Picard iteration cap"},
        {"eps", ConfigType::number, 0.5, solver, "smallness radius; larger data run in local mode"},
        {"blowup_threshold", ConfigType::number, 1e6, solver, "|u| treated as blown up"},
        {"allow_out_of_theory", ConfigType::boolean, false, solver, "accept exponents outside the hypotheses"},
        {"snapshot_stride", ConfigType::integer, 0, {"solve"}, "write every n-th state as a binary expansion (0: none)"},
        {"a", ConfigType::number, 1.0, {"blowup"}, "constant initial value"},
    };
}

const ConfigKey* find_key(const std::string& name) {
    for (const auto& k : config_keys())
        if (k.name == name)
            return &k;
    return nullptr;
}

bool accepts(const ConfigKey& key, const std::string& command) {
    return std::find(key.commands.begin(), key.commands.end(), command) != key.commands.end();
}

// Line and column (1-based) of the first occurrence of "key" in the text.
std::string locate(std::string_view text, const std::string& key) {
    const auto quoted = "\"" + key + "\"";
    const auto pos = text.find(quoted);
    if (pos == std::string_view::npos)
        return {};
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i < pos; ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return fmt::format("line {}, column {}: ", line, column);
}

std::string type_name(ConfigType t) {
    switch (t) {
    case ConfigType::string: return "a string";
    case ConfigType::integer: return "an integer";
    case ConfigType::number: return "a number";
    case ConfigType::exponent: return "a positive number or \"inf\"";
    case ConfigType::boolean: return "a boolean";
    }
    return "";
}

bool type_matches(ConfigType t, const json& v) {
    switch (t) {
    case ConfigType::string: return v.is_string();
    case ConfigType::integer: return v.is_number_integer();
    case ConfigType::number: return v.is_number() && std::isfinite(v.get<double>());
    case ConfigType::exponent:
        return (v.is_string() && v.get<std::string>() == "inf") || (v.is_number() && v.get<double>() > 0.0);
    case ConfigType::boolean: return v.is_boolean();
    }
    return false;
}

// Numbers are stored as doubles so that 2 and 2.0 have one canonical form.
json normalise(ConfigType t, const json& v) {
    if ((t == ConfigType::number || t == ConfigType::exponent) && v.is_number())
        return v.get<double>();
    return v;
}

json default_for(const ConfigKey& key, const std::string& command) {
    if (key.fallback.is_object())
        return key.fallback.at(command);
    return key.fallback;
}

std::string required_list() {
    std::string out;
    for (const auto& k : config_keys())
        if (k.fallback.is_null())
            out += (out.empty() ? "" : ", ") + k.name;
    return out;
}

} // namespace

const std::vector<ConfigKey>& config_keys() {
    static const auto table = build_table();
    return table;
}

const std::vector<std::string>& config_commands() { return all; }

const nlohmann::json& ExperimentConfig::lookup(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end())
        throw ConfigError(fmt::format("key '{}' is not used by command '{}'", key, command_));
    return *it;
}

std::string ExperimentConfig::string(const std::string& key) const { return lookup(key).get<std::string>(); }
long ExperimentConfig::integer(const std::string& key) const { return lookup(key).get<long>(); }
bool ExperimentConfig::boolean(const std::string& key) const { return lookup(key).get<bool>(); }

double ExperimentConfig::number(const std::string& key) const {
    const auto& v = lookup(key);
    if (v.is_string())
        return std::numeric_limits<double>::infinity();
    return v.get<double>();
}

ExperimentConfig parse_config(std::string_view text) {
    if (text.find_first_not_of(" \t\r\n") == std::string_view::npos)
        throw ConfigError("empty configuration; required keys: " + required_list());

    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& err) {
        std::size_t line = 1, column = 1;
        const std::size_t end = std::min<std::size_t>(err.byte == 0 ? 0 : err.byte - 1, text.size());
        for (std::size_t i = 0; i < end; ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw ConfigError(fmt::format("line {}, column {}: syntax error: {}", line, column, err.what()));
    }
    if (!doc.is_object())
        throw ConfigError("configuration must be a JSON object");

    std::vector<std::string> missing;
    for (const auto& k : config_keys())
        if (k.fallback.is_null() && !doc.contains(k.name))
            missing.push_back(k.name);
    if (!missing.empty()) {
        std::string list;
        for (const auto& m : missing)
            list += (list.empty() ? "" : ", ") + m;
        throw ConfigError("missing required keys: " + list);
    }
    if (!doc["command"].is_string())
        throw ConfigError(locate(text, "command") + "'command' must be a string");
    const auto command = doc["command"].get<std::string>();
    if (std::find(all.begin(), all.end(), command) == all.end())
        throw ConfigError(fmt::format("{}unknown command '{}'", locate(text, "command"), command));

    ExperimentConfig cfg;
    cfg.command_ = command;
    cfg.values_ = json::object();
    for (const auto& [name, value] : doc.items()) {
        const ConfigKey* key = find_key(name);
        if (key == nullptr)
            throw ConfigError(fmt::format("{}unknown key '{}'", locate(text, name), name));
        if (!accepts(*key, command))
            throw ConfigError(fmt::format("{}key '{}' is not used by command '{}'", locate(text, name), name, command));
        if (!type_matches(key->type, value))
            throw ConfigError(
                fmt::format("{}key '{}' must be {}", locate(text, name), name, type_name(key->type)));
        cfg.values_[name] = normalise(key->type, value);
    }
    for (const auto& key : config_keys())
        if (accepts(key, command) && !cfg.values_.contains(key.name))
            cfg.values_[key.name] = normalise(key.type, default_for(key, command));
    cfg.output_dir_ = cfg.values_["output_dir"].get<std::string>();
    return cfg;
}

std::string emit_config(const ExperimentConfig& config) { return config.canonical().dump(2) + "\n"; }

std::string config_reference_markdown() {
    std::string out = "| key | type | default | commands | meaning |\n|---|---|---|---|---|\n";
    for (const auto& k : config_keys()) {
        std::string fallback;
        if (k.fallback.is_null()) {
            fallback = "required";
        } else if (k.fallback.is_object()) {
            for (const auto& [c, v] : k.fallback.items())
                fallback += (fallback.empty() ? "" : "; ") + c + ": " + v.dump();
        } else {
            fallback = k.fallback.dump();
        }
        std::string commands;
        if (k.commands.size() == all.size())
            commands = "all";
        else
            for (const auto& c : k.commands)
                commands += (commands.empty() ? "" : ", ") + c;
        out += fmt::format("| `{}` | {} | `{}` | {} | {} |\n", k.name, type_name(k.type), fallback, commands, k.help);
    }
    return out;
}

} // namespace hermite
