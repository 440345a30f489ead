// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace xcorr::cli {

// manifest.json of one run: the resolved config, seeds, per-stage wall-clock
// times and the SHA-256 of every file the run wrote.
class Manifest {
public:
    Manifest(std::string command, nlohmann::ordered_json config, std::string config_digest);

    // Times the enclosing scope as one named stage.
    class Stage {
    public:
        Stage(Manifest& m, std::string name);
        ~Stage();
        Stage(const Stage&) = delete;
        Stage& operator=(const Stage&) = delete;

    private:
        Manifest& manifest_;
        std::string name_;
        std::chrono::steady_clock::time_point start_;
    };

    void set(const std::string& key, nlohmann::ordered_json value) { extra_[key] = std::move(value); }
    // Records the digest of a file already written, and of its sidecar if any.
    void add_output(const std::filesystem::path& file);
    void write(const std::filesystem::path& directory) const;

private:
    std::string command_;
    nlohmann::ordered_json config_;
    std::string config_digest_;
    nlohmann::ordered_json stages_ = nlohmann::ordered_json::array();
    nlohmann::ordered_json outputs_ = nlohmann::ordered_json::object();
    nlohmann::ordered_json extra_ = nlohmann::ordered_json::object();
};

}  // namespace xcorr::cli
