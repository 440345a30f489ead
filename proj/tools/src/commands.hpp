// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>

#include "config.hpp"

namespace xcorr::cli {

void run_simulate(const RunConfig& cfg, const std::filesystem::path& out);
void run_image(const RunConfig& cfg, const std::filesystem::path& data, const std::filesystem::path& out);
void run_analyze(const RunConfig& cfg, const std::filesystem::path& out);
void run_sweep_noise(const RunConfig& cfg, const std::filesystem::path& data, const std::filesystem::path& out);

}  // namespace xcorr::cli
