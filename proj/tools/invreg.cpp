#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "invreg/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Filter-based regularization of linear inverse problems: simulations and rate tests"};
    app.set_version_flag("--version", invreg::kVersion);
    app.require_subcommand(1, 1);

    std::string config_path;
    std::string output_dir;
    std::optional<std::uint64_t> seed;
    unsigned workers = 1;

    const char* commands[] = {"simulate-rates", "simulate-efficiency", "rate-test", "score-curve", "filters-check"};
    for (const char* name : commands) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "JSON run configuration")->required();
        sub->add_option("--out", output_dir, "output directory")->required();
        sub->add_option("--seed", seed, "override master_seed");
        sub->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : invreg::kExitConfig;
    }

    invreg::RunManifest manifest;
    manifest.command = invreg::parse_command(app.get_subcommands().front()->get_name());
    manifest.config_path = config_path;
    manifest.output_dir = output_dir;
    manifest.master_seed_override = seed;
    manifest.workers = workers;
    return invreg::run_config(manifest, std::cerr);
}
