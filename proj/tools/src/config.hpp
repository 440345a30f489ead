// SPDX-License-Identifier: Apache-2.0
//
// Run configuration: a YAML key tree in SI units, optionally layered over a
// named preset. Every key is checked against the schema in docs/config.md and
// unknown keys are rejected with their line and column.
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "xcorr/analysis.hpp"
#include "xcorr/forward.hpp"
#include "xcorr/scene.hpp"

namespace xcorr::cli {

// Anything wrong with the configuration; maps to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ReceiverConfig {
    ReceiverLayout layout = ReceiverLayout::uniform_random;
    int count = 400;            // uniform_random
    double side = 2e5;          // uniform_random, m
    int per_side = 20;          // cartesian_grid
    double spacing = 1e4;       // cartesian_grid, m
    double altitude = 1.5e4;    // m
    std::uint64_t seed = 7;
    std::vector<Vec3> positions;  // explicit_list

    ReceiverArray build() const;
};

struct TargetConfig {
    // Exactly one of these is used: offset from the window center at s = 0,
    // or an absolute position.
    std::optional<Vec3> offset;
    std::optional<Vec3> position;
    std::optional<Vec3> velocity;  // defaults to the window velocity
    double reflectivity = 1.0;
};

struct ImagingConfig {
    std::vector<std::string> methods{"km", "cc", "refcc", "rank1"};
    std::optional<std::pair<int, int>> reference_point;  // (iu, iv); default window center
    double downsample_fraction = 0.1;
    std::uint64_t downsample_seed = 11;
    double tol = 1e-10;
    int max_iter = 5000;
    int spectrum_count = 25;
};

struct NoiseConfig {
    double snr_db = std::numeric_limits<double>::infinity();
    std::uint64_t seed = 5;
    std::vector<double> sweep_snr_db{-14.0, -15.5, -17.0};
    std::vector<std::uint64_t> sweep_seeds{5};
};

struct KernelCase {
    KernelFamily family = KernelFamily::gaussian;
    double alpha = 1.0;
    double beta = 1.0;
};

struct AnalysisConfig {
    bool psf = true;
    double psf_pulse_time = 0.0;
    std::vector<KernelCase> kernels;
};

struct RunConfig {
    std::string preset;  // empty when none

    Emitter emitter;
    ReceiverConfig receivers;
    std::vector<TargetConfig> targets;
    double c0 = kSpeedOfLight;

    double carrier_hz = 9.6e9;
    double bandwidth_hz = 3e8;
    double pulse_interval = 0.015;
    int pulse_count = 100;
    int freq_index_min = -30;
    int freq_index_max = 30;
    std::optional<double> frequency_step;  // rad/s; default B/30
    AmplitudeMode amplitude = AmplitudeMode::unit;

    ImageWindow window;
    ImagingConfig imaging;
    NoiseConfig noise;
    AnalysisConfig analysis;
    std::filesystem::path output_directory = "out";

    // Replaces every seed in the configuration.
    void override_seeds(std::uint64_t seed);
    Scene scene() const;
    // Canonical resolved form; also the input of config_digest().
    nlohmann::ordered_json to_json() const;
    std::string digest() const;
};

std::vector<std::string> preset_names();
// Throws ConfigError for an unknown name.
RunConfig preset(const std::string& name);

// Reads a YAML file. A top-level `preset` key selects the base configuration
// that the rest of the file overrides; `preset_override` wins over that key.
RunConfig load_config(const std::optional<std::filesystem::path>& path,
                      const std::optional<std::string>& preset_override);

}  // namespace xcorr::cli
