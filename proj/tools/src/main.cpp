// SPDX-License-Identifier: Apache-2.0
//
// xcorr: simulate, image, analyze, sweep-noise.
// Exit codes: 0 success, 1 other failure, 2 configuration error,
// 3 eigensolver non-convergence.
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "commands.hpp"
#include "config.hpp"
#include "xcorr/errors.hpp"
#include "xcorr/parallel.hpp"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitConvergence = 3;

struct CommonOptions {
    std::optional<std::filesystem::path> config;
    std::optional<std::string> preset;
    std::optional<std::filesystem::path> out;
    int threads = 1;
    std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("--config", o.config, "YAML run configuration")->check(CLI::ExistingFile);
    cmd->add_option("--preset", o.preset, "named preset, used as the base of --config");
    cmd->add_option("--out", o.out, "output directory (default: output.directory of the config)");
    cmd->add_option("--threads", o.threads, "worker threads; results do not depend on it")->check(CLI::Range(1, 1024));
    cmd->add_option("--seed", o.seed, "replaces every seed in the configuration");
}

xcorr::cli::RunConfig resolve(const CommonOptions& o) {
    xcorr::cli::RunConfig cfg = xcorr::cli::load_config(o.config, o.preset);
    if (o.seed) cfg.override_seeds(*o.seed);
    xcorr::set_thread_count(o.threads);
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Correlation imaging of fast-moving scatterers"};
    app.require_subcommand(1);
    app.set_version_flag("--version", XCORR_VERSION_STRING);

    CommonOptions opts;
    std::filesystem::path data;

    auto* simulate = app.add_subcommand("simulate", "synthesize frequency-domain data");
    add_common(simulate, opts);
    auto* image = app.add_subcommand("image", "form images from a signal file");
    add_common(image, opts);
    image->add_option("--data", data, "signal file written by simulate")->required()->check(CLI::ExistingFile);
    auto* analyze = app.add_subcommand("analyze", "PSF and kernel oracles");
    add_common(analyze, opts);
    auto* sweep = app.add_subcommand("sweep-noise", "rank-1 image similarity against added noise");
    add_common(sweep, opts);
    sweep->add_option("--data", data, "noiseless signal file written by simulate")->required()->check(CLI::ExistingFile);
    app.add_subcommand("presets", "list preset names")->callback([] {
        for (const auto& name : xcorr::cli::preset_names()) std::cout << name << '\n';
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (app.got_subcommand("presets")) return 0;
        const xcorr::cli::RunConfig cfg = resolve(opts);
        const std::filesystem::path out = opts.out.value_or(cfg.output_directory);
        if (*simulate) xcorr::cli::run_simulate(cfg, out);
        else if (*image) xcorr::cli::run_image(cfg, data, out);
        else if (*analyze) xcorr::cli::run_analyze(cfg, out);
        else if (*sweep) xcorr::cli::run_sweep_noise(cfg, data, out);
        return 0;
    } catch (const xcorr::cli::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const xcorr::ConvergenceError& e) {
        std::cerr << "not converged: " << e.what() << '\n';
        return kExitConvergence;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}
