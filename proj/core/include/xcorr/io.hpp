// SPDX-License-Identifier: Apache-2.0
//
// On-disk formats.
//
// XCOR binary matrix: "XCOR", u32 version = 1, u64 rows, u64 cols, then
// rows * cols (real, imag) pairs of little-endian IEEE doubles, row-major.
// Every binary file has a "<file>.meta" sidecar of "key: value" lines with at
// least the shape semantics, the producing config digest and the SHA-256 of
// the binary file; readers check that digest.
//
// Image CSV: header "x_m,y_m,value", one line per grid point, x fastest.
#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "xcorr/forward.hpp"
#include "xcorr/imaging.hpp"

namespace xcorr::io {

inline constexpr std::uint32_t kFormatVersion = 1;

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

void write_matrix(const std::filesystem::path& path, const Eigen::MatrixXcd& m);
Eigen::MatrixXcd read_matrix(const std::filesystem::path& path);

// Ordered key/value pairs; keys may repeat.
struct Sidecar {
    std::vector<std::pair<std::string, std::string>> entries;

    void set(std::string key, std::string value);
    // First value for key; throws FormatError when missing.
    const std::string& get(std::string_view key) const;
    std::vector<std::string> all(std::string_view key) const;
};

std::filesystem::path sidecar_path(const std::filesystem::path& data_path);
void write_sidecar(const std::filesystem::path& path, const Sidecar& meta);
Sidecar read_sidecar(const std::filesystem::path& path);

// Doubles as hexadecimal floating point, which round-trips bit-exactly.
std::string hex_double(double x);
double parse_double(const std::string& text);

// Writes the samples as an XCOR matrix of (N_s N_R) rows by N_omega columns
// and the geometry, pulse times and frequencies into the sidecar.
void write_signal_set(const std::filesystem::path& path, const SignalSet& data,
                      const std::string& config_digest);
// Throws FormatError on a malformed file or a digest mismatch.
SignalSet read_signal_set(const std::filesystem::path& path);

void write_image_csv(const std::filesystem::path& path, const ImageGrid& image);

struct CsvImage {
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> values;
};
CsvImage read_image_csv(const std::filesystem::path& path);

}  // namespace xcorr::io
