// SPDX-License-Identifier: Apache-2.0
#include "manifest.hpp"

#include <fstream>

#include "xcorr/errors.hpp"
#include "xcorr/io.hpp"
#include "xcorr/parallel.hpp"

namespace xcorr::cli {

Manifest::Manifest(std::string command, nlohmann::ordered_json config, std::string config_digest)
    : command_(std::move(command)), config_(std::move(config)), config_digest_(std::move(config_digest)) {}

Manifest::Stage::Stage(Manifest& m, std::string name)
    : manifest_(m), name_(std::move(name)), start_(std::chrono::steady_clock::now()) {}

Manifest::Stage::~Stage() {
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    manifest_.stages_.push_back({{"stage", name_}, {"seconds", seconds}});
}

void Manifest::add_output(const std::filesystem::path& file) {
    outputs_[file.filename().string()] = io::sha256_file(file);
    const auto meta = io::sidecar_path(file);
    if (std::filesystem::exists(meta)) outputs_[meta.filename().string()] = io::sha256_file(meta);
}

void Manifest::write(const std::filesystem::path& directory) const {
    nlohmann::ordered_json j;
    j["command"] = command_;
    j["version"] = XCORR_VERSION_STRING;
    j["config_digest"] = config_digest_;
    j["config"] = config_;
    j["seeds"] = {{"receivers", config_["scene"]["receivers"].value("seed", std::uint64_t{0})},
                  {"noise", config_["noise"]["seed"]},
                  {"noise_sweep", config_["noise"]["sweep_seeds"]},
                  {"downsample", config_["imaging"]["downsample_seed"]}};
    j["threads"] = thread_count();
    for (const auto& [k, v] : extra_.items()) j[k] = v;
    j["stages"] = stages_;
    j["outputs"] = outputs_;
    std::ofstream out(directory / "manifest.json");
    out << j.dump(2) << '\n';
    if (!out) throw FormatError("cannot write " + (directory / "manifest.json").string());
}

}  // namespace xcorr::cli
