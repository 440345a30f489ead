// SPDX-License-Identifier: Apache-2.0
#include "commands.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <string>

#include "manifest.hpp"
#include "xcorr/analysis.hpp"
#include "xcorr/errors.hpp"
#include "xcorr/imaging.hpp"
#include "xcorr/io.hpp"
#include "xcorr/metrics.hpp"

namespace xcorr::cli {

namespace fs = std::filesystem;

namespace {

bool wants(const RunConfig& cfg, const std::string& method) {
    const auto& m = cfg.imaging.methods;
    return std::find(m.begin(), m.end(), method) != m.end();
}

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::ofstream open_text(const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot open " + path.string() + " for writing");
    return out;
}

void finish_text(std::ofstream& out, const fs::path& path) {
    out.close();
    if (!out) throw FormatError("write to " + path.string() + " failed");
}

// Image CSV plus a sidecar with how it was made.
void write_image(const fs::path& path, const ImageGrid& image, const std::string& method,
                 const std::string& config_digest, Manifest& manifest, const io::Sidecar& extra = {}) {
    io::write_image_csv(path, image);
    io::Sidecar meta;
    meta.set("format", "image-csv");
    meta.set("method", method);
    meta.set("config_digest", config_digest);
    meta.set("grid", std::to_string(image.count_u()) + "x" + std::to_string(image.count_v()));
    meta.set("peak_before_normalization", io::hex_double(image.peak));
    meta.set("degenerate", image.degenerate ? "true" : "false");
    for (const auto& [k, v] : extra.entries) meta.set(k, v);
    io::write_sidecar(io::sidecar_path(path), meta);
    manifest.add_output(path);
}

io::Sidecar rank1_meta(const Rank1Result& r) {
    io::Sidecar m;
    m.set("lambda", io::hex_double(r.lambda));
    m.set("residual", io::hex_double(r.residual));
    m.set("iterations", std::to_string(r.iterations));
    return m;
}

SolverOptions solver_options(const RunConfig& cfg) {
    return {cfg.imaging.tol, cfg.imaging.max_iter};
}

std::string snr_label(double snr) {
    if (snr == std::numeric_limits<double>::infinity()) return "inf";
    return fmt("%+.1f", snr);
}

double array_diameter(const ReceiverConfig& rc, const std::vector<Vec3>& positions) {
    switch (rc.layout) {
    case ReceiverLayout::cartesian_grid:
        return rc.per_side * rc.spacing;
    case ReceiverLayout::uniform_random:
        return rc.side;
    case ReceiverLayout::explicit_list:
        break;
    }
    double lo_x = positions.front().x, hi_x = lo_x, lo_y = positions.front().y, hi_y = lo_y;
    for (const Vec3& p : positions) {
        lo_x = std::min(lo_x, p.x);
        hi_x = std::max(hi_x, p.x);
        lo_y = std::min(lo_y, p.y);
        hi_y = std::max(hi_y, p.y);
    }
    return std::max(hi_x - lo_x, hi_y - lo_y);
}

}  // namespace

void run_simulate(const RunConfig& cfg, const fs::path& out) {
    fs::create_directories(out);
    const std::string digest = cfg.digest();
    Manifest manifest("simulate", cfg.to_json(), digest);
    const Scene scene = cfg.scene();

    SignalSet data;
    {
        Manifest::Stage stage(manifest, "synthesize");
        data = synthesize_frequency_data(scene, cfg.amplitude);
    }
    if (!NoiseSpec{cfg.noise.snr_db, cfg.noise.seed}.noiseless()) {
        Manifest::Stage stage(manifest, "noise");
        data = add_noise(data, {cfg.noise.snr_db, cfg.noise.seed});
    }
    {
        Manifest::Stage stage(manifest, "write");
        io::write_signal_set(out / "signals.xcor", data, digest);
    }
    manifest.add_output(out / "signals.xcor");
    manifest.set("warnings", data.warnings);
    manifest.write(out);
}

void run_image(const RunConfig& cfg, const fs::path& data_path, const fs::path& out) {
    fs::create_directories(out);
    const std::string digest = cfg.digest();
    Manifest manifest("image", cfg.to_json(), digest);
    manifest.set("input", {{"file", data_path.string()}, {"sha256", io::sha256_file(data_path)}});

    SignalSet data;
    {
        Manifest::Stage stage(manifest, "read");
        data = io::read_signal_set(data_path);
    }
    const ImageWindow& window = cfg.window;
    const SolverOptions opts = solver_options(cfg);

    const bool need_pattern = wants(cfg, "cc") || wants(cfg, "refcc") || wants(cfg, "rank1");
    AccumulateOptions acc;
    acc.full_pattern = need_pattern;
    if (wants(cfg, "rank1-downsampled")) {
        acc.column_subset = random_column_subset(static_cast<Eigen::Index>(window.size()),
                                                 cfg.imaging.downsample_fraction, cfg.imaging.downsample_seed);
    }
    ImagingProducts products;
    {
        Manifest::Stage stage(manifest, "accumulate");
        products = accumulate_products(data, window, acc);
    }

    if (wants(cfg, "km")) {
        Manifest::Stage stage(manifest, "km");
        write_image(out / "image_km.csv", km_image(products.km_preimage, window), "km", digest, manifest);
    }
    if (wants(cfg, "cc")) {
        Manifest::Stage stage(manifest, "cc");
        write_image(out / "image_cc.csv", single_point_image(*products.pattern), "cc", digest, manifest);
    }
    if (wants(cfg, "refcc")) {
        Manifest::Stage stage(manifest, "refcc");
        const auto [iu, iv] = cfg.imaging.reference_point.value_or(std::pair{window.count_u / 2, window.count_v / 2});
        const auto k_ref = static_cast<Eigen::Index>(window.index(iu, iv));
        io::Sidecar extra;
        extra.set("reference_point", std::to_string(iu) + "," + std::to_string(iv));
        write_image(out / "image_refcc.csv", reference_point_image(*products.pattern, k_ref), "refcc", digest,
                    manifest, extra);
    }
    if (wants(cfg, "rank1")) {
        Rank1Result r;
        {
            Manifest::Stage stage(manifest, "rank1");
            r = rank1_image(*products.pattern, opts);
        }
        write_image(out / "image_rank1.csv", r.image, "rank1", digest, manifest, rank1_meta(r));
        io::write_matrix(out / "rank1_vector.xcor", Eigen::MatrixXcd(r.vector));
        io::Sidecar vmeta;
        vmeta.set("format", "xcor");
        vmeta.set("rows", "grid points k = iv * count_u + iu");
        vmeta.set("cols", "1");
        vmeta.set("config_digest", digest);
        vmeta.set("sha256", io::sha256_file(out / "rank1_vector.xcor"));
        io::write_sidecar(io::sidecar_path(out / "rank1_vector.xcor"), vmeta);
        manifest.add_output(out / "rank1_vector.xcor");

        std::vector<double> spectrum;
        {
            Manifest::Stage stage(manifest, "spectrum");
            const int n = std::min<int>(cfg.imaging.spectrum_count, static_cast<int>(window.size()));
            spectrum = eigen_spectrum(*products.pattern, n, opts);
        }
        const fs::path sp = out / "spectrum.csv";
        std::ofstream f = open_text(sp);
        f << "index,normalized_eigenvalue\n";
        for (std::size_t i = 0; i < spectrum.size(); ++i) f << i + 1 << ',' << fmt("%.17g", spectrum[i]) << '\n';
        finish_text(f, sp);
        manifest.add_output(sp);
    }
    if (wants(cfg, "rank1-downsampled")) {
        Rank1Result r;
        {
            Manifest::Stage stage(manifest, "rank1-downsampled");
            r = rank1_image(*products.downsampled, opts);
        }
        io::Sidecar extra = rank1_meta(r);
        extra.set("keep_fraction", io::hex_double(cfg.imaging.downsample_fraction));
        extra.set("seed", std::to_string(cfg.imaging.downsample_seed));
        write_image(out / "image_rank1-downsampled.csv", r.image, "rank1-downsampled", digest, manifest, extra);
    }
    manifest.write(out);
}

void run_analyze(const RunConfig& cfg, const fs::path& out) {
    fs::create_directories(out);
    const std::string digest = cfg.digest();
    Manifest manifest("analyze", cfg.to_json(), digest);
    const Scene scene = cfg.scene();

    if (cfg.analysis.psf) {
        Manifest::Stage stage(manifest, "psf");
        const double a = array_diameter(cfg.receivers, scene.receivers.positions);
        const PsfModel model = psf_model_for(scene.window, scene.emitter, scene.receivers.positions, a,
                                             scene.pulse.carrier, scene.constants.c0);
        const PsfComparison cmp = compare_psf(scene.window, scene.receivers.positions, scene.emitter, model,
                                              cfg.analysis.psf_pulse_time);
        write_image(out / "psf_exact.csv", make_image(scene.window, cmp.exact), "psf-exact", digest, manifest);
        write_image(out / "psf_approx.csv", make_image(scene.window, cmp.approx), "psf-approx", digest, manifest);

        const fs::path cut = out / "psf_cut_u.csv";
        std::ofstream f = open_text(cut);
        f << "x_m,exact,approx\n";
        const int iv = scene.window.count_v / 2;
        for (int iu = 0; iu < scene.window.count_u; ++iu) {
            const auto k = static_cast<Eigen::Index>(scene.window.index(iu, iv));
            f << fmt("%.17g", scene.window.coord_u(iu)) << ',' << fmt("%.17g", cmp.exact[k]) << ','
              << fmt("%.17g", cmp.approx[k]) << '\n';
        }
        finish_text(f, cut);
        manifest.add_output(cut);

        const fs::path summary = out / "psf_summary.csv";
        std::ofstream g = open_text(summary);
        g << "quantity,value\n"
          << "array_diameter_m," << fmt("%.17g", a) << '\n'
          << "target_range_m," << fmt("%.17g", model.target_height) << '\n'
          << "predicted_null_m," << fmt("%.17g", cmp.predicted_null) << '\n'
          << "exact_null_u_m," << fmt("%.17g", cmp.exact_null_u) << '\n'
          << "exact_null_v_m," << fmt("%.17g", cmp.exact_null_v) << '\n'
          << "main_lobe_max_abs_difference," << fmt("%.17g", cmp.main_lobe_discrepancy) << '\n'
          << "main_lobe_points," << cmp.main_lobe_points << '\n';
        finish_text(g, summary);
        manifest.add_output(summary);
    }

    if (!cfg.analysis.kernels.empty()) {
        Manifest::Stage stage(manifest, "kernels");
        const fs::path table = out / "kernels.csv";
        std::ofstream t = open_text(table);
        t << "family,alpha,beta,width_kind,predicted,numeric,ratio\n";
        for (std::size_t i = 0; i < cfg.analysis.kernels.size(); ++i) {
            const KernelCase& kc = cfg.analysis.kernels[i];
            const std::string name = std::string(kc.family == KernelFamily::gaussian ? "gaussian" : "sinc") + "_" +
                                     fmt("%g", kc.alpha) + "_" + fmt("%g", kc.beta);
            const fs::path curve = out / ("kernel_" + name + ".csv");
            std::ofstream c = open_text(curve);
            if (kc.family == KernelFamily::gaussian) {
                const GaussianKernelResult r = gaussian_kernel_top_eig(kc.alpha, kc.beta);
                t << "gaussian," << fmt("%g", kc.alpha) << ',' << fmt("%g", kc.beta) << ",gamma,"
                  << fmt("%.17g", r.predicted_gamma) << ',' << fmt("%.17g", r.fitted_gamma) << ','
                  << fmt("%.17g", r.fitted_gamma / r.predicted_gamma) << '\n';
                c << "x,numeric\n";
                for (std::size_t j = 0; j < r.numeric.x.size(); ++j)
                    c << fmt("%.17g", r.numeric.x[j]) << ',' << fmt("%.17g", r.numeric.u[j]) << '\n';
            } else {
                const SincKernelResult r = sinc_kernel_top_eig(kc.alpha, kc.beta);
                t << "sinc," << fmt("%g", kc.alpha) << ',' << fmt("%g", kc.beta) << ",first_zero,"
                  << fmt("%.17g", r.predicted_first_zero) << ',' << fmt("%.17g", r.numeric_first_zero) << ','
                  << fmt("%.17g", r.numeric_first_zero / r.predicted_first_zero) << '\n';
                c << "x,numeric,approximate\n";
                for (std::size_t j = 0; j < r.numeric.x.size(); ++j)
                    c << fmt("%.17g", r.numeric.x[j]) << ',' << fmt("%.17g", r.numeric.u[j]) << ','
                      << fmt("%.17g", r.approximate[j]) << '\n';
            }
            finish_text(c, curve);
            manifest.add_output(curve);
        }
        finish_text(t, table);
        manifest.add_output(table);
    }
    manifest.write(out);
}

void run_sweep_noise(const RunConfig& cfg, const fs::path& data_path, const fs::path& out) {
    fs::create_directories(out);
    const std::string digest = cfg.digest();
    Manifest manifest("sweep-noise", cfg.to_json(), digest);
    manifest.set("input", {{"file", data_path.string()}, {"sha256", io::sha256_file(data_path)}});
    const SolverOptions opts = solver_options(cfg);
    const ImageWindow& window = cfg.window;

    SignalSet clean;
    {
        Manifest::Stage stage(manifest, "read");
        clean = io::read_signal_set(data_path);
    }
    Rank1Result reference;
    {
        Manifest::Stage stage(manifest, "noiseless");
        reference = rank1_image(*accumulate_products(clean, window).pattern, opts);
    }
    write_image(out / "image_rank1_snr_inf.csv", reference.image, "rank1", digest, manifest, rank1_meta(reference));

    const fs::path table = out / "similarity.csv";
    std::ofstream t = open_text(table);
    t << "snr_db,seed,similarity\n";
    for (const double snr : cfg.noise.sweep_snr_db) {
        for (const std::uint64_t seed : cfg.noise.sweep_seeds) {
            const std::string label = "snr_" + snr_label(snr) + "_seed_" + std::to_string(seed);
            Manifest::Stage stage(manifest, label);
            const SignalSet noisy = add_noise(clean, {snr, seed});
            const Rank1Result r = rank1_image(*accumulate_products(noisy, window).pattern, opts);
            io::Sidecar extra = rank1_meta(r);
            extra.set("snr_db", io::hex_double(snr));
            extra.set("noise_seed", std::to_string(seed));
            write_image(out / ("image_rank1_" + label + ".csv"), r.image, "rank1", digest, manifest, extra);
            t << snr_label(snr) << ',' << seed << ',' << fmt("%.17g", similarity(r.image, reference.image)) << '\n';
        }
    }
    finish_text(t, table);
    manifest.add_output(table);
    manifest.write(out);
}

}  // namespace xcorr::cli
