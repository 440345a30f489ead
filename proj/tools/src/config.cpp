// SPDX-License-Identifier: Apache-2.0
#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <numbers>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "xcorr/errors.hpp"
#include "xcorr/io.hpp"

namespace xcorr::cli {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// ---- YAML access with positioned diagnostics --------------------------------

class Doc {
public:
    explicit Doc(std::string source) : source_(std::move(source)) {}

    [[noreturn]] void fail(const YAML::Node& node, const std::string& what) const {
        std::ostringstream os;
        os << source_;
        const YAML::Mark mark = node.Mark();
        if (!mark.is_null()) os << ':' << mark.line + 1 << ':' << mark.column + 1;
        os << ": " << what;
        throw ConfigError(os.str());
    }

    void require_map(const YAML::Node& node, const std::string& path) const {
        if (!node.IsMap()) fail(node, "'" + path + "' must be a mapping");
    }

    void check_keys(const YAML::Node& node, const std::string& path,
                    std::initializer_list<const char*> allowed) const {
        require_map(node, path);
        for (const auto& kv : node) {
            const auto key = kv.first.as<std::string>();
            const bool known = std::any_of(allowed.begin(), allowed.end(),
                                           [&](const char* a) { return key == a; });
            if (!known) fail(kv.first, "unknown key '" + key + "' in '" + path + "'");
        }
    }

    template <class T>
    T scalar(const YAML::Node& node, const std::string& path) const {
        if (!node.IsScalar()) fail(node, "'" + path + "' must be a scalar");
        try {
            return node.as<T>();
        } catch (const YAML::Exception&) {
            fail(node, "'" + path + "' has an invalid value '" + node.Scalar() + "'");
        }
    }

    // Reads node[key] into out when present.
    template <class T>
    void read(const YAML::Node& parent, const char* key, const std::string& path, T& out) const {
        const YAML::Node n = parent[key];
        if (n) out = scalar<T>(n, path + "." + key);
    }

    double number(const YAML::Node& node, const std::string& path) const {
        const double v = scalar<double>(node, path);
        if (std::isnan(v)) fail(node, "'" + path + "' is not a number");
        return v;
    }

    void read_number(const YAML::Node& parent, const char* key, const std::string& path, double& out) const {
        const YAML::Node n = parent[key];
        if (n) out = number(n, path + "." + key);
    }

    Vec3 vec3(const YAML::Node& node, const std::string& path) const {
        if (!node.IsSequence() || node.size() != 3) fail(node, "'" + path + "' must be a list of 3 numbers");
        return {number(node[0], path + "[0]"), number(node[1], path + "[1]"), number(node[2], path + "[2]")};
    }

    void read_vec3(const YAML::Node& parent, const char* key, const std::string& path, Vec3& out) const {
        const YAML::Node n = parent[key];
        if (n) out = vec3(n, path + "." + key);
    }

    const std::string& source() const { return source_; }

private:
    std::string source_;
};

ReceiverLayout parse_layout(const Doc& doc, const YAML::Node& node, const std::string& path) {
    const auto name = doc.scalar<std::string>(node, path);
    try {
        return receiver_layout_from_string(name);
    } catch (const Error&) {
        doc.fail(node, "'" + path + "' must be cartesian_grid, uniform_random or explicit_list, not '" + name + "'");
    }
}

void parse_scene(const Doc& doc, const YAML::Node& node, RunConfig& cfg) {
    doc.check_keys(node, "scene", {"emitter_m", "receivers", "targets", "c0_mps"});
    doc.read_vec3(node, "emitter_m", "scene", cfg.emitter.position);
    doc.read_number(node, "c0_mps", "scene", cfg.c0);

    if (const YAML::Node r = node["receivers"]) {
        const std::string path = "scene.receivers";
        doc.check_keys(r, path, {"layout", "count", "side_m", "per_side", "spacing_m", "altitude_m", "seed", "positions_m"});
        ReceiverConfig& rc = cfg.receivers;
        if (r["layout"]) rc.layout = parse_layout(doc, r["layout"], path + ".layout");
        doc.read(r, "count", path, rc.count);
        doc.read_number(r, "side_m", path, rc.side);
        doc.read(r, "per_side", path, rc.per_side);
        doc.read_number(r, "spacing_m", path, rc.spacing);
        doc.read_number(r, "altitude_m", path, rc.altitude);
        doc.read(r, "seed", path, rc.seed);
        if (const YAML::Node p = r["positions_m"]) {
            if (!p.IsSequence()) doc.fail(p, "'" + path + ".positions_m' must be a list");
            rc.positions.clear();
            for (std::size_t i = 0; i < p.size(); ++i)
                rc.positions.push_back(doc.vec3(p[i], path + ".positions_m[" + std::to_string(i) + "]"));
        }
    }

    if (const YAML::Node t = node["targets"]) {
        if (!t.IsSequence()) doc.fail(t, "'scene.targets' must be a list");
        cfg.targets.clear();
        for (std::size_t i = 0; i < t.size(); ++i) {
            const std::string path = "scene.targets[" + std::to_string(i) + "]";
            const YAML::Node e = t[i];
            doc.check_keys(e, path, {"offset_m", "position_m", "velocity_mps", "reflectivity"});
            TargetConfig tc;
            if (e["offset_m"]) tc.offset = doc.vec3(e["offset_m"], path + ".offset_m");
            if (e["position_m"]) tc.position = doc.vec3(e["position_m"], path + ".position_m");
            if (tc.offset.has_value() == tc.position.has_value())
                doc.fail(e, "'" + path + "' needs exactly one of offset_m and position_m");
            if (e["velocity_mps"]) tc.velocity = doc.vec3(e["velocity_mps"], path + ".velocity_mps");
            doc.read_number(e, "reflectivity", path, tc.reflectivity);
            cfg.targets.push_back(tc);
        }
    }
}

void parse_acquisition(const Doc& doc, const YAML::Node& node, RunConfig& cfg) {
    const std::string path = "acquisition";
    doc.check_keys(node, path, {"carrier_hz", "bandwidth_hz", "pulse_interval_s", "pulse_count",
                                "freq_index_min", "freq_index_max", "frequency_step_rad_s", "amplitude"});
    doc.read_number(node, "carrier_hz", path, cfg.carrier_hz);
    doc.read_number(node, "bandwidth_hz", path, cfg.bandwidth_hz);
    doc.read_number(node, "pulse_interval_s", path, cfg.pulse_interval);
    doc.read(node, "pulse_count", path, cfg.pulse_count);
    doc.read(node, "freq_index_min", path, cfg.freq_index_min);
    doc.read(node, "freq_index_max", path, cfg.freq_index_max);
    if (node["frequency_step_rad_s"]) cfg.frequency_step = doc.number(node["frequency_step_rad_s"], path + ".frequency_step_rad_s");
    if (const YAML::Node a = node["amplitude"]) {
        const auto name = doc.scalar<std::string>(a, path + ".amplitude");
        try {
            cfg.amplitude = amplitude_mode_from_string(name);
        } catch (const Error&) {
            doc.fail(a, "'acquisition.amplitude' must be unit, spectral or full, not '" + name + "'");
        }
    }
}

void parse_window(const Doc& doc, const YAML::Node& node, RunConfig& cfg) {
    const std::string path = "window";
    doc.check_keys(node, path, {"center_m", "velocity_mps", "axis_u", "axis_v", "half_extent_m",
                                "half_thickness_m", "counts"});
    ImageWindow& w = cfg.window;
    doc.read_vec3(node, "center_m", path, w.center_at_reference);
    doc.read_vec3(node, "velocity_mps", path, w.center_velocity);
    doc.read_vec3(node, "axis_u", path, w.axis_u);
    doc.read_vec3(node, "axis_v", path, w.axis_v);
    doc.read_number(node, "half_thickness_m", path, w.half_extent_normal);
    if (const YAML::Node e = node["half_extent_m"]) {
        if (!e.IsSequence() || e.size() != 2) doc.fail(e, "'window.half_extent_m' must be [u, v]");
        w.half_extent_u = doc.number(e[0], "window.half_extent_m[0]");
        w.half_extent_v = doc.number(e[1], "window.half_extent_m[1]");
    }
    if (const YAML::Node c = node["counts"]) {
        if (!c.IsSequence() || c.size() != 2) doc.fail(c, "'window.counts' must be [u, v]");
        w.count_u = doc.scalar<int>(c[0], "window.counts[0]");
        w.count_v = doc.scalar<int>(c[1], "window.counts[1]");
    }
}

const std::vector<std::string> kMethods{"km", "cc", "refcc", "rank1", "rank1-downsampled"};

void parse_imaging(const Doc& doc, const YAML::Node& node, RunConfig& cfg) {
    const std::string path = "imaging";
    doc.check_keys(node, path, {"methods", "reference_point", "downsample_fraction", "downsample_seed",
                                "tol", "max_iter", "spectrum_count"});
    ImagingConfig& im = cfg.imaging;
    if (const YAML::Node m = node["methods"]) {
        if (!m.IsSequence()) doc.fail(m, "'imaging.methods' must be a list");
        im.methods.clear();
        for (std::size_t i = 0; i < m.size(); ++i) {
            const auto name = doc.scalar<std::string>(m[i], "imaging.methods");
            if (std::find(kMethods.begin(), kMethods.end(), name) == kMethods.end())
                doc.fail(m[i], "unknown imaging method '" + name + "' (km, cc, refcc, rank1, rank1-downsampled)");
            im.methods.push_back(name);
        }
    }
    if (const YAML::Node r = node["reference_point"]) {
        if (!r.IsSequence() || r.size() != 2) doc.fail(r, "'imaging.reference_point' must be [iu, iv]");
        im.reference_point = std::pair{doc.scalar<int>(r[0], "imaging.reference_point[0]"),
                                       doc.scalar<int>(r[1], "imaging.reference_point[1]")};
    }
    doc.read_number(node, "downsample_fraction", path, im.downsample_fraction);
    doc.read(node, "downsample_seed", path, im.downsample_seed);
    doc.read_number(node, "tol", path, im.tol);
    doc.read(node, "max_iter", path, im.max_iter);
    doc.read(node, "spectrum_count", path, im.spectrum_count);
}

double parse_snr(const Doc& doc, const YAML::Node& node, const std::string& path) {
    if (node.IsScalar()) {
        const std::string& s = node.Scalar();
        if (s == "inf" || s == "none" || s == "noiseless") return std::numeric_limits<double>::infinity();
    }
    const double v = doc.number(node, path);
    if (v == -std::numeric_limits<double>::infinity()) doc.fail(node, "'" + path + "' may not be -inf");
    return v;
}

void parse_noise(const Doc& doc, const YAML::Node& node, RunConfig& cfg) {
    const std::string path = "noise";
    doc.check_keys(node, path, {"snr_db", "seed", "sweep_snr_db", "sweep_seeds"});
    NoiseConfig& nc = cfg.noise;
    if (node["snr_db"]) nc.snr_db = parse_snr(doc, node["snr_db"], path + ".snr_db");
    doc.read(node, "seed", path, nc.seed);
    if (const YAML::Node s = node["sweep_snr_db"]) {
        if (!s.IsSequence()) doc.fail(s, "'noise.sweep_snr_db' must be a list");
        nc.sweep_snr_db.clear();
        for (std::size_t i = 0; i < s.size(); ++i) nc.sweep_snr_db.push_back(parse_snr(doc, s[i], path + ".sweep_snr_db"));
    }
    if (const YAML::Node s = node["sweep_seeds"]) {
        if (!s.IsSequence()) doc.fail(s, "'noise.sweep_seeds' must be a list");
        nc.sweep_seeds.clear();
        for (std::size_t i = 0; i < s.size(); ++i) nc.sweep_seeds.push_back(doc.scalar<std::uint64_t>(s[i], path + ".sweep_seeds"));
    }
}

void parse_analysis(const Doc& doc, const YAML::Node& node, RunConfig& cfg) {
    const std::string path = "analysis";
    doc.check_keys(node, path, {"psf", "psf_pulse_time_s", "kernels"});
    doc.read(node, "psf", path, cfg.analysis.psf);
    doc.read_number(node, "psf_pulse_time_s", path, cfg.analysis.psf_pulse_time);
    if (const YAML::Node k = node["kernels"]) {
        if (!k.IsSequence()) doc.fail(k, "'analysis.kernels' must be a list");
        cfg.analysis.kernels.clear();
        for (std::size_t i = 0; i < k.size(); ++i) {
            const std::string kp = path + ".kernels[" + std::to_string(i) + "]";
            doc.check_keys(k[i], kp, {"family", "alpha", "beta"});
            KernelCase kc;
            if (const YAML::Node f = k[i]["family"]) {
                const auto name = doc.scalar<std::string>(f, kp + ".family");
                if (name == "gaussian") kc.family = KernelFamily::gaussian;
                else if (name == "sinc") kc.family = KernelFamily::sinc;
                else doc.fail(f, "'" + kp + ".family' must be gaussian or sinc");
            }
            doc.read_number(k[i], "alpha", kp, kc.alpha);
            doc.read_number(k[i], "beta", kp, kc.beta);
            cfg.analysis.kernels.push_back(kc);
        }
    }
}

void parse_output(const Doc& doc, const YAML::Node& node, RunConfig& cfg) {
    doc.check_keys(node, "output", {"directory"});
    if (node["directory"]) cfg.output_directory = doc.scalar<std::string>(node["directory"], "output.directory");
}

// Checks that need the whole configuration; the scene's own validate() then
// covers the physics.
void validate(const RunConfig& cfg) {
    if (cfg.targets.empty()) throw ConfigError("scene.targets: at least one target is required");
    if (!(cfg.carrier_hz > 0.0)) throw ConfigError("acquisition.carrier_hz must be positive");
    if (!(cfg.bandwidth_hz > 0.0 && cfg.bandwidth_hz < cfg.carrier_hz))
        throw ConfigError("acquisition.bandwidth_hz must lie in (0, carrier_hz)");
    if (cfg.imaging.methods.empty()) throw ConfigError("imaging.methods must not be empty");
    if (!(cfg.imaging.downsample_fraction > 0.0 && cfg.imaging.downsample_fraction <= 1.0))
        throw ConfigError("imaging.downsample_fraction must lie in (0, 1]");
    if (cfg.imaging.spectrum_count < 1) throw ConfigError("imaging.spectrum_count must be at least 1");
    if (cfg.imaging.reference_point) {
        const auto [iu, iv] = *cfg.imaging.reference_point;
        if (iu < 0 || iv < 0 || iu >= cfg.window.count_u || iv >= cfg.window.count_v)
            throw ConfigError("imaging.reference_point lies outside the window grid");
    }
    for (const KernelCase& k : cfg.analysis.kernels) {
        if (!(k.alpha > 0.0 && k.beta > 0.0)) throw ConfigError("analysis.kernels: alpha and beta must be positive");
        if (k.family == KernelFamily::sinc && !(k.alpha > k.beta))
            throw ConfigError("analysis.kernels: the sinc family needs alpha > beta");
    }
    try {
        cfg.scene().validate();
    } catch (const Error& e) {
        throw ConfigError(std::string("invalid scene: ") + e.what());
    }
}

// ---- presets ----------------------------------------------------------------

RunConfig base_desk() {
    RunConfig cfg;
    cfg.emitter.position = {-80e3, 0.0, 0.0};
    cfg.receivers.layout = ReceiverLayout::uniform_random;
    cfg.receivers.count = 100;
    cfg.receivers.side = 2e5;
    cfg.receivers.altitude = 1.5e4;
    cfg.receivers.seed = 7;
    cfg.window.center_at_reference = {0.0, 0.0, 5e5};
    cfg.window.center_velocity = {0.0, 7000.0, 0.0};
    return cfg;
}

RunConfig cluster(std::vector<Vec3> offsets, std::vector<double> reflectivity) {
    RunConfig cfg = base_desk();
    cfg.pulse_count = 3000;
    for (std::size_t i = 0; i < offsets.size(); ++i) {
        TargetConfig t;
        t.offset = offsets[i];
        t.reflectivity = reflectivity[i];
        cfg.targets.push_back(t);
    }
    cfg.imaging.methods = {"km", "cc", "refcc", "rank1", "rank1-downsampled"};
    return cfg;
}

RunConfig make_preset(const std::string& name) {
    if (name == "single" || name == "aperture-100" || name == "aperture-1000" || name == "aperture-3000") {
        RunConfig cfg = base_desk();
        cfg.targets.push_back(TargetConfig{Vec3{}, {}, {}, 1.0});
        cfg.pulse_count = name == "aperture-1000" ? 1000 : name == "aperture-3000" ? 3000 : 100;
        return cfg;
    }
    if (name == "quad") return cluster({{-0.05, -0.03, 0}, {0.05, -0.03, 0}, {-0.05, 0.03, 0}, {0.05, 0.03, 0}}, {1, 1, 1, 1});
    if (name == "contrast") return cluster({{-0.05, -0.03, 0}, {0.05, -0.03, 0}, {-0.05, 0.03, 0}, {0.05, 0.03, 0}}, {0.8, 0.8, 1, 1});
    if (name == "double") return cluster({{-0.055, -0.03, 0}, {0.055, 0.03, 0}}, {1, 1});
    if (name == "psf" || name == "psf-random") {
        RunConfig cfg = base_desk();
        cfg.targets.push_back(TargetConfig{Vec3{}, {}, {}, 1.0});
        cfg.receivers.layout = name == "psf" ? ReceiverLayout::cartesian_grid : ReceiverLayout::uniform_random;
        cfg.receivers.per_side = 20;
        cfg.receivers.spacing = 1e4;
        cfg.receivers.count = 400;
        cfg.analysis.psf = true;
        cfg.analysis.kernels.clear();
        return cfg;
    }
    if (name == "kernel" || name == "kernel-trivial") {
        RunConfig cfg = base_desk();
        cfg.targets.push_back(TargetConfig{Vec3{}, {}, {}, 1.0});
        cfg.analysis.psf = false;
        if (name == "kernel") {
            cfg.analysis.kernels = {{KernelFamily::sinc, 8, 2}, {KernelFamily::gaussian, 8, 2},
                                    {KernelFamily::gaussian, 4, 1}, {KernelFamily::gaussian, 2, 2}};
        } else {
            cfg.analysis.kernels = {{KernelFamily::gaussian, 2, 2}};
        }
        return cfg;
    }
    throw ConfigError("unknown preset '" + name + "'");
}

// nlohmann writes the shortest representation that reads back to the same
// double, so the echo is exact. JSON has no infinity.
nlohmann::ordered_json num(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

nlohmann::ordered_json vec_json(const Vec3& v) {
    return nlohmann::ordered_json::array({v.x, v.y, v.z});
}

std::string family_name(KernelFamily f) { return f == KernelFamily::gaussian ? "gaussian" : "sinc"; }

}  // namespace

ReceiverArray ReceiverConfig::build() const {
    switch (layout) {
    case ReceiverLayout::cartesian_grid:
        return ReceiverArray::cartesian_grid(per_side, spacing, altitude);
    case ReceiverLayout::uniform_random:
        return ReceiverArray::uniform_random(count, side, altitude, seed);
    case ReceiverLayout::explicit_list: {
        ReceiverArray a;
        a.positions = positions;
        return a;
    }
    }
    throw ConfigError("unhandled receiver layout");
}

void RunConfig::override_seeds(std::uint64_t seed) {
    receivers.seed = seed;
    noise.seed = seed;
    imaging.downsample_seed = seed;
    for (auto& s : noise.sweep_seeds) s = seed;
}

Scene RunConfig::scene() const {
    Scene s;
    s.emitter = emitter;
    s.receivers = receivers.build();
    s.constants.c0 = c0;
    s.pulse = {kTwoPi * carrier_hz, kTwoPi * bandwidth_hz};
    s.acquisition.pulse_interval = pulse_interval;
    s.acquisition.pulse_count = pulse_count;
    s.acquisition.freq_index_min = freq_index_min;
    s.acquisition.freq_index_max = freq_index_max;
    s.acquisition.frequency_step = frequency_step.value_or(s.pulse.envelope_width / 30.0);
    s.window = window;
    for (const TargetConfig& t : targets) {
        TargetTrajectory tr;
        tr.position_at_reference = t.position ? *t.position : window.center_at_reference + *t.offset;
        tr.velocity = t.velocity.value_or(window.center_velocity);
        tr.reflectivity = t.reflectivity;
        s.targets.push_back(tr);
    }
    return s;
}

nlohmann::ordered_json RunConfig::to_json() const {
    using json = nlohmann::ordered_json;
    json j;
    j["preset"] = preset;
    json rec{{"layout", to_string(receivers.layout)}};
    switch (receivers.layout) {
    case ReceiverLayout::uniform_random:
        rec["count"] = receivers.count;
        rec["side_m"] = num(receivers.side);
        rec["seed"] = receivers.seed;
        break;
    case ReceiverLayout::cartesian_grid:
        rec["per_side"] = receivers.per_side;
        rec["spacing_m"] = num(receivers.spacing);
        break;
    case ReceiverLayout::explicit_list: {
        json p = json::array();
        for (const Vec3& v : receivers.positions) p.push_back(vec_json(v));
        rec["positions_m"] = p;
        break;
    }
    }
    if (receivers.layout != ReceiverLayout::explicit_list) rec["altitude_m"] = num(receivers.altitude);
    json targets_json = json::array();
    for (const TargetConfig& t : targets) {
        json tj;
        if (t.offset) tj["offset_m"] = vec_json(*t.offset);
        if (t.position) tj["position_m"] = vec_json(*t.position);
        tj["velocity_mps"] = vec_json(t.velocity.value_or(window.center_velocity));
        tj["reflectivity"] = num(t.reflectivity);
        targets_json.push_back(tj);
    }
    j["scene"] = {{"emitter_m", vec_json(emitter.position)}, {"receivers", rec},
                  {"targets", targets_json}, {"c0_mps", num(c0)}};
    j["acquisition"] = {{"carrier_hz", num(carrier_hz)},
                        {"bandwidth_hz", num(bandwidth_hz)},
                        {"pulse_interval_s", num(pulse_interval)},
                        {"pulse_count", pulse_count},
                        {"freq_index_min", freq_index_min},
                        {"freq_index_max", freq_index_max},
                        {"frequency_step_rad_s", num(frequency_step.value_or(kTwoPi * bandwidth_hz / 30.0))},
                        {"amplitude", to_string(amplitude)}};
    j["window"] = {{"center_m", vec_json(window.center_at_reference)},
                   {"velocity_mps", vec_json(window.center_velocity)},
                   {"axis_u", vec_json(window.axis_u)},
                   {"axis_v", vec_json(window.axis_v)},
                   {"half_extent_m", {num(window.half_extent_u), num(window.half_extent_v)}},
                   {"half_thickness_m", num(window.half_extent_normal)},
                   {"counts", {window.count_u, window.count_v}}};
    json ref = nullptr;
    if (imaging.reference_point) ref = {imaging.reference_point->first, imaging.reference_point->second};
    j["imaging"] = {{"methods", imaging.methods},
                    {"reference_point", ref},
                    {"downsample_fraction", num(imaging.downsample_fraction)},
                    {"downsample_seed", imaging.downsample_seed},
                    {"tol", num(imaging.tol)},
                    {"max_iter", imaging.max_iter},
                    {"spectrum_count", imaging.spectrum_count}};
    json sweep = json::array();
    for (double s : noise.sweep_snr_db) sweep.push_back(num(s));
    j["noise"] = {{"snr_db", num(noise.snr_db)}, {"seed", noise.seed},
                  {"sweep_snr_db", sweep}, {"sweep_seeds", noise.sweep_seeds}};
    json kernels = json::array();
    for (const KernelCase& k : analysis.kernels)
        kernels.push_back({{"family", family_name(k.family)}, {"alpha", num(k.alpha)}, {"beta", num(k.beta)}});
    j["analysis"] = {{"psf", analysis.psf}, {"psf_pulse_time_s", num(analysis.psf_pulse_time)},
                     {"kernels", kernels}};
    j["output"] = {{"directory", output_directory.string()}};
    return j;
}

std::string RunConfig::digest() const {
    nlohmann::ordered_json j = to_json();
    // Where results are written does not change what they are.
    j.erase("output");
    return io::sha256_hex(j.dump());
}

std::vector<std::string> preset_names() {
    return {"single", "aperture-100", "aperture-1000", "aperture-3000", "quad", "double",
            "contrast", "psf", "psf-random", "kernel", "kernel-trivial"};
}

RunConfig preset(const std::string& name) {
    RunConfig cfg = make_preset(name);
    cfg.preset = name;
    return cfg;
}

RunConfig load_config(const std::optional<std::filesystem::path>& path,
                      const std::optional<std::string>& preset_override) {
    if (!path) {
        if (!preset_override) throw ConfigError("either --config or --preset is required");
        RunConfig cfg = preset(*preset_override);
        validate(cfg);
        return cfg;
    }

    const Doc doc(path->string());
    YAML::Node root;
    try {
        root = YAML::LoadFile(path->string());
    } catch (const YAML::BadFile&) {
        throw ConfigError(path->string() + ": cannot read file");
    } catch (const YAML::ParserException& e) {
        std::ostringstream os;
        os << path->string() << ':' << e.mark.line + 1 << ':' << e.mark.column + 1 << ": " << e.msg;
        throw ConfigError(os.str());
    }
    if (!root || root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
    doc.check_keys(root, "<root>", {"preset", "scene", "acquisition", "window", "imaging", "noise", "analysis", "output"});

    std::string base = preset_override.value_or("");
    if (!preset_override && root["preset"]) base = doc.scalar<std::string>(root["preset"], "preset");
    RunConfig cfg;
    if (!base.empty()) {
        try {
            cfg = preset(base);
        } catch (const ConfigError&) {
            if (root["preset"] && !preset_override) doc.fail(root["preset"], "unknown preset '" + base + "'");
            throw;
        }
    } else {
        cfg = base_desk();
    }

    if (root["scene"]) parse_scene(doc, root["scene"], cfg);
    if (root["acquisition"]) parse_acquisition(doc, root["acquisition"], cfg);
    if (root["window"]) parse_window(doc, root["window"], cfg);
    if (root["imaging"]) parse_imaging(doc, root["imaging"], cfg);
    if (root["noise"]) parse_noise(doc, root["noise"], cfg);
    if (root["analysis"]) parse_analysis(doc, root["analysis"], cfg);
    if (root["output"]) parse_output(doc, root["output"], cfg);
    validate(cfg);
    return cfg;
}

}  // namespace xcorr::cli
