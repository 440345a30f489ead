// SPDX-License-Identifier: Apache-2.0
#include "xcorr/io.hpp"

#include <array>
#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

#include "xcorr/errors.hpp"

namespace xcorr::io {

namespace fs = std::filesystem;

namespace {

constexpr std::array<char, 4> kMagic{'X', 'C', 'O', 'R'};

template <typename U>
void put_le(std::string& out, U v) {
    for (std::size_t i = 0; i < sizeof(U); ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

template <typename U>
U get_le(const std::string& in, std::size_t& pos) {
    if (pos + sizeof(U) > in.size()) throw FormatError("XCOR file truncated");
    U v = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) {
        v |= static_cast<U>(static_cast<unsigned char>(in[pos + i])) << (8 * i);
    }
    pos += sizeof(U);
    return v;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return std::move(ss).str();
}

void spit(const fs::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot write " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw FormatError("write failed for " + path.string());
}

std::string join_doubles(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ' ';
        s += hex_double(v[i]);
    }
    return s;
}

std::vector<double> split_doubles(const std::string& s) {
    std::istringstream in(s);
    std::vector<double> out;
    std::string tok;
    while (in >> tok) out.push_back(parse_double(tok));
    return out;
}

Vec3 parse_vec3(const std::string& s) {
    const auto v = split_doubles(s);
    if (v.size() != 3) throw FormatError("expected 3 components, got '" + s + "'");
    return {v[0], v[1], v[2]};
}

std::string format_vec3(const Vec3& v) { return join_doubles({v.x, v.y, v.z}); }

std::string encode_matrix(const Eigen::MatrixXcd& m) {
    std::string out;
    out.reserve(24 + static_cast<std::size_t>(m.size()) * 16);
    out.append(kMagic.data(), kMagic.size());
    put_le<std::uint32_t>(out, kFormatVersion);
    put_le<std::uint64_t>(out, static_cast<std::uint64_t>(m.rows()));
    put_le<std::uint64_t>(out, static_cast<std::uint64_t>(m.cols()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            put_le(out, std::bit_cast<std::uint64_t>(m(i, j).real()));
            put_le(out, std::bit_cast<std::uint64_t>(m(i, j).imag()));
        }
    }
    return out;
}

Eigen::MatrixXcd decode_matrix(const std::string& in, const std::string& name) {
    if (in.size() < 24 || std::memcmp(in.data(), kMagic.data(), kMagic.size()) != 0) {
        throw FormatError(name + " is not an XCOR file");
    }
    std::size_t pos = 4;
    const auto version = get_le<std::uint32_t>(in, pos);
    if (version != kFormatVersion) throw FormatError(name + ": unsupported XCOR version " + std::to_string(version));
    const auto rows = get_le<std::uint64_t>(in, pos);
    const auto cols = get_le<std::uint64_t>(in, pos);
    if (cols != 0 && rows > (in.size() - pos) / 16 / cols) throw FormatError(name + ": XCOR payload truncated");
    if (in.size() - pos != rows * cols * 16) throw FormatError(name + ": XCOR payload size does not match its shape");
    Eigen::MatrixXcd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            const double re = std::bit_cast<double>(get_le<std::uint64_t>(in, pos));
            const double im = std::bit_cast<double>(get_le<std::uint64_t>(in, pos));
            m(i, j) = {re, im};
        }
    }
    return m;
}

}  // namespace

std::string sha256_hex(std::string_view bytes) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
        throw Error("SHA-256 computation failed");
    }
    std::ostringstream hex;
    hex << std::hex << std::setfill('0');
    for (unsigned int i = 0; i < len; ++i) hex << std::setw(2) << static_cast<int>(md[i]);
    return hex.str();
}

std::string sha256_file(const fs::path& path) { return sha256_hex(slurp(path)); }

void write_matrix(const fs::path& path, const Eigen::MatrixXcd& m) { spit(path, encode_matrix(m)); }

Eigen::MatrixXcd read_matrix(const fs::path& path) { return decode_matrix(slurp(path), path.string()); }

void Sidecar::set(std::string key, std::string value) {
    for (auto& [k, v] : entries) {
        if (k == key) {
            v = std::move(value);
            return;
        }
    }
    entries.emplace_back(std::move(key), std::move(value));
}

const std::string& Sidecar::get(std::string_view key) const {
    for (const auto& [k, v] : entries) {
        if (k == key) return v;
    }
    throw FormatError("metadata key '" + std::string(key) + "' missing");
}

std::vector<std::string> Sidecar::all(std::string_view key) const {
    std::vector<std::string> out;
    for (const auto& [k, v] : entries) {
        if (k == key) out.push_back(v);
    }
    return out;
}

fs::path sidecar_path(const fs::path& data_path) {
    fs::path p = data_path;
    p += ".meta";
    return p;
}

void write_sidecar(const fs::path& path, const Sidecar& meta) {
    std::string out;
    for (const auto& [k, v] : meta.entries) {
        if (k.find(':') != std::string::npos || k.find('\n') != std::string::npos || v.find('\n') != std::string::npos) {
            throw FormatError("metadata entry '" + k + "' cannot be written on one line");
        }
        out += k + ": " + v + "\n";
    }
    spit(path, out);
}

Sidecar read_sidecar(const fs::path& path) {
    std::istringstream in(slurp(path));
    Sidecar meta;
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (line.empty()) continue;
        const auto colon = line.find(": ");
        if (colon == std::string::npos) {
            throw FormatError(path.string() + ":" + std::to_string(number) + ": expected 'key: value'");
        }
        meta.entries.emplace_back(line.substr(0, colon), line.substr(colon + 2));
    }
    return meta;
}

std::string hex_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%a", x);
    return buf;
}

double parse_double(const std::string& text) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw FormatError("not a number: '" + text + "'");
    }
    if (used != text.size()) throw FormatError("trailing characters in number '" + text + "'");
    return v;
}

void write_signal_set(const fs::path& path, const SignalSet& data, const std::string& config_digest) {
    const auto rows = static_cast<Eigen::Index>(data.pulse_count() * data.receiver_count());
    const auto cols = static_cast<Eigen::Index>(data.frequency_count());
    Eigen::MatrixXcd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = data.data()[static_cast<std::size_t>(i * cols + j)];
    }
    const std::string bytes = encode_matrix(m);
    spit(path, bytes);

    Sidecar meta;
    meta.set("format", "xcor-signal-set");
    meta.set("version", std::to_string(kFormatVersion));
    meta.set("rows", "pulse-major (pulse, receiver) pairs, row = pulse * receivers + receiver");
    meta.set("cols", "frequencies, ascending as listed under 'frequencies'");
    meta.set("pulses", std::to_string(data.pulse_count()));
    meta.set("receivers", std::to_string(data.receiver_count()));
    meta.set("frequency_count", std::to_string(data.frequency_count()));
    meta.set("config_digest", config_digest);
    meta.set("sha256", sha256_hex(bytes));
    meta.set("c0", hex_double(data.geometry().c0));
    meta.set("emitter", format_vec3(data.geometry().emitter.position));
    for (const auto& r : data.geometry().receivers) meta.entries.emplace_back("receiver", format_vec3(r));
    meta.set("pulse_times", join_doubles(data.pulse_times()));
    meta.set("frequencies", join_doubles(data.frequencies()));
    for (const auto& w : data.warnings) meta.entries.emplace_back("warning", w);
    write_sidecar(sidecar_path(path), meta);
}

SignalSet read_signal_set(const fs::path& path) {
    const Sidecar meta = read_sidecar(sidecar_path(path));
    if (meta.get("format") != "xcor-signal-set") throw FormatError(path.string() + " is not a signal set");
    const std::string bytes = slurp(path);
    if (sha256_hex(bytes) != meta.get("sha256")) throw FormatError(path.string() + ": digest mismatch, file is corrupt");
    const Eigen::MatrixXcd m = decode_matrix(bytes, path.string());

    AcquisitionGeometry geo;
    geo.c0 = parse_double(meta.get("c0"));
    geo.emitter.position = parse_vec3(meta.get("emitter"));
    for (const auto& r : meta.all("receiver")) geo.receivers.push_back(parse_vec3(r));
    const auto pulses = split_doubles(meta.get("pulse_times"));
    const auto freqs = split_doubles(meta.get("frequencies"));
    if (std::to_string(geo.receivers.size()) != meta.get("receivers") ||
        std::to_string(pulses.size()) != meta.get("pulses") ||
        std::to_string(freqs.size()) != meta.get("frequency_count")) {
        throw FormatError(path.string() + ": sidecar counts are inconsistent");
    }
    if (m.rows() != static_cast<Eigen::Index>(pulses.size() * geo.receivers.size()) ||
        m.cols() != static_cast<Eigen::Index>(freqs.size())) {
        throw FormatError(path.string() + ": matrix shape does not match the sidecar");
    }
    SignalSet data(std::move(geo), pulses, freqs);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) data.data()[static_cast<std::size_t>(i * m.cols() + j)] = m(i, j);
    }
    data.warnings = meta.all("warning");
    data.validate();
    return data;
}

void write_image_csv(const fs::path& path, const ImageGrid& image) {
    std::string out = "x_m,y_m,value\n";
    char buf[96];
    const ImageWindow& w = image.window;
    for (int iv = 0; iv < w.count_v; ++iv) {
        for (int iu = 0; iu < w.count_u; ++iu) {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", w.coord_u(iu), w.coord_v(iv), image.at(iu, iv));
            out += buf;
        }
    }
    spit(path, out);
}

CsvImage read_image_csv(const fs::path& path) {
    std::istringstream in(slurp(path));
    std::string line;
    if (!std::getline(in, line) || line != "x_m,y_m,value") throw FormatError(path.string() + ": bad image CSV header");
    CsvImage img;
    int number = 1;
    while (std::getline(in, line)) {
        ++number;
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string a, b, c;
        if (!std::getline(row, a, ',') || !std::getline(row, b, ',') || !std::getline(row, c)) {
            throw FormatError(path.string() + ":" + std::to_string(number) + ": expected 3 columns");
        }
        img.x.push_back(parse_double(a));
        img.y.push_back(parse_double(b));
        img.values.push_back(parse_double(c));
    }
    return img;
}

}  // namespace xcorr::io
