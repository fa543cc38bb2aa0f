#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "hermite/config.hpp"
#include "hermite/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Hermite flow experiments: phase-space norms, fractional heat semigroup, Picard solver"};
    std::string config_path;
    bool reference = false;
    auto* config_opt = app.add_option("-c,--config", config_path, "JSON experiment configuration");
    app.add_flag("--reference", reference, "print the configuration key table as Markdown and exit");
    config_opt->excludes(app.get_option("--reference"));
    CLI11_PARSE(app, argc, argv);

    if (reference) {
        std::cout << hermite::config_reference_markdown();
        return 0;
    }
    if (config_path.empty()) {
        std::cerr << "error: --config is required\n" << app.help();
        return hermite::exit_validation;
    }

    const auto result = hermite::run_config_file(config_path);
    if (result.status != hermite::exit_ok) {
        std::cerr << "error: " << result.message << '\n';
        return result.status;
    }
    for (const auto& f : result.files)
        std::cout << f.string() << '\n';
    return 0;
}
