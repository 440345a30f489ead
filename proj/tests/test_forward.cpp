// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstring>
#include <limits>
#include <numbers>

#include "oracles.hpp"
#include "scenes.hpp"
#include "xcorr/correlation.hpp"
#include "xcorr/errors.hpp"
#include "xcorr/forward.hpp"
#include "xcorr/time_domain.hpp"

using namespace xcorr;
using Catch::Approx;

namespace {

AcquisitionGeometry geometry_of(const Scene& s) {
    return {s.emitter, s.receivers.positions, s.constants.c0};
}

Eigen::VectorXcd flatten(const SignalSet& d) {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(d.sample_count()));
    for (std::size_t i = 0; i < d.sample_count(); ++i) v[static_cast<Eigen::Index>(i)] = d.data()[i];
    return v;
}

}  // namespace

TEST_CASE("pulse spectrum", "[forward]") {
    const Pulse p{testing::kCarrier, testing::kBandwidth};
    const double peak = std::sqrt(2.0 * std::numbers::pi) / p.envelope_width;
    // The image term at -omega_0 is far below double precision at the carrier.
    CHECK(pulse_spectrum(p, p.carrier) == Approx(0.5 * peak).epsilon(1e-14));
    CHECK(pulse_spectrum(p, p.carrier + p.envelope_width) ==
          Approx(0.5 * peak * std::exp(-0.5)).epsilon(1e-14));
    CHECK(pulse_spectrum(p, p.carrier - 3.0 * p.envelope_width) ==
          Approx(0.5 * peak * std::exp(-4.5)).epsilon(1e-14));
    CHECK(pulse_spectrum(p, 0.3 * p.carrier) == pulse_spectrum(p, -0.3 * p.carrier));

    // Against a direct quadrature of the transform on a small pulse.
    const Pulse slow{2.0 * std::numbers::pi * 5.0, 2.0 * std::numbers::pi * 1.5};
    for (double w : {0.0, 20.0, 31.4, 45.0}) {
        double re = 0.0;
        const double dt = 1e-4;
        for (double t = -3.0; t <= 3.0; t += dt) re += std::cos(slow.carrier * t) *
            std::exp(-0.5 * slow.envelope_width * slow.envelope_width * t * t) * std::cos(w * t) * dt;
        CHECK(pulse_spectrum(slow, w) == Approx(re).margin(1e-9));
    }
}

TEST_CASE("model matrix examples", "[forward]") {
    Scene s = testing::desk_scene({Vec3{}}, 1);
    const double w = s.pulse.carrier;
    const auto a = model_matrix(s.window, 0.0, w, s.receivers.positions, s.emitter, s.window.center_velocity);
    REQUIRE(a.rows() == 100);
    REQUIRE(a.cols() == 41 * 41);

    const auto center = static_cast<Eigen::Index>(s.window.index(20, 20));
    for (Eigen::Index r = 0; r < a.rows(); ++r) CHECK(a(r, center) == std::complex<double>(1.0, 0.0));
    CHECK((a.cwiseAbs().array() - 1.0).abs().maxCoeff() <= 1e-14);

    // Phase of the column at y = (0.1, 0, 0) against the linear form
    // (omega/c0) y . (u_TE + gamma u_TR).
    const auto k = static_cast<Eigen::Index>(s.window.index(30, 20));
    const Vec3 c = s.window.center_at(0.0);
    const Vec3 y = s.window.offset(static_cast<std::size_t>(k));
    REQUIRE(y.x == Approx(0.1));
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
        const Vec3& rx = s.receivers.positions[static_cast<std::size_t>(r)];
        const double g = doppler_factor(c, s.emitter.position, rx, s.window.center_velocity);
        const Vec3 ute = (c - s.emitter.position) / norm(c - s.emitter.position);
        const Vec3 utr = (c - rx) / norm(c - rx);
        const double lin = w / kSpeedOfLight * dot(y, ute + g * utr);
        CHECK(std::abs(std::arg(a(r, k) * std::polar(1.0, -lin))) <= 1e-4);
    }
}

TEST_CASE("model matrix agrees with the long double oracle", "[forward]") {
    Scene s = testing::desk_scene({Vec3{}}, 1, 12);
    for (double t : {0.0, 0.75}) {
        for (double w : {s.pulse.carrier - s.pulse.envelope_width, s.pulse.carrier + 0.5 * s.pulse.envelope_width}) {
            const auto a = model_matrix(s.window, t, w, s.receivers.positions, s.emitter, s.window.center_velocity);
            const auto ref = testing::model_matrix_oracle(s, t, w);
            // Phases reach ~10 rad at the window corners; 1e-9 leaves room for
            // the rounding of omega times a 1e-9 s delay.
            CHECK((a - ref).cwiseAbs().maxCoeff() <= 1e-9);
        }
    }
}

TEST_CASE("synthesized data for a grid-point target is the model column", "[forward]") {
    Scene s = testing::tiny_scene(6, 9, 3, 5);
    ImageWindow& w = s.window;
    const std::size_t k = w.index(6, 2);
    s.targets[0].position_at_reference = w.center_at_reference + w.offset(k);
    s.targets[0].reflectivity = 0.7;
    const SignalSet d = synthesize_frequency_data(s, AmplitudeMode::unit);
    for (std::size_t p = 0; p < d.pulse_count(); ++p) {
        for (std::size_t f = 0; f < d.frequency_count(); ++f) {
            const auto a = model_matrix(w, d.pulse_times()[p], d.frequencies()[f], s.receivers.positions,
                                        s.emitter, w.center_velocity);
            const Eigen::VectorXcd expected = 0.7 * a.col(static_cast<Eigen::Index>(k));
            CHECK((d.receiver_vector(p, f) - expected).norm() <= 1e-12);
        }
    }
}

TEST_CASE("synthesis is linear in the reflectivities", "[forward][property]") {
    const auto offsets = testing::quad_offsets();
    Scene both = testing::tiny_scene(5, 5, 4, 7, {offsets[0], offsets[3]});
    both.targets[0].reflectivity = 0.8;
    both.targets[1].reflectivity = -1.3;
    Scene first = both, second = both;
    first.targets.resize(1);
    second.targets.erase(second.targets.begin());

    for (AmplitudeMode mode : {AmplitudeMode::unit, AmplitudeMode::spectral, AmplitudeMode::full}) {
        const auto sum = flatten(synthesize_frequency_data(both, mode));
        const auto parts = flatten(synthesize_frequency_data(first, mode)) + flatten(synthesize_frequency_data(second, mode));
        CHECK((sum - parts).norm() <= 1e-13 * sum.norm());

        Scene doubled = both;
        for (auto& t : doubled.targets) t.reflectivity *= 2.5;
        const auto scaled = flatten(synthesize_frequency_data(doubled, mode));
        CHECK((scaled - 2.5 * sum).norm() <= 1e-13 * scaled.norm());
    }
}

TEST_CASE("synthesis warns about targets outside the window", "[forward]") {
    Scene s = testing::tiny_scene(3, 5, 2, 3, {{0.3, 0.0, 0.0}});
    const SignalSet d = synthesize_frequency_data(s);
    CHECK_FALSE(d.warnings.empty());
    Scene inside = testing::tiny_scene(3, 5, 2, 3);
    CHECK(synthesize_frequency_data(inside).warnings.empty());
}

TEST_CASE("frequency data matches the transformed time-domain echo", "[forward][time]") {
    // 3 receivers, 1 target off center, 5 frequencies, one pulse. Each trace
    // is rescaled by the window-center Doppler factor, aligned by the
    // window-center travel time and transformed. The frequency model with full
    // amplitudes should agree after each receiver is scaled to unit norm and
    // one global phase is removed. The exact model carries a second-order
    // phase of ~0.1 rad that is constant over a pulse but drifts with s, so
    // the comparison is per pulse.
    Scene s = testing::tiny_scene(3, 5, 1, 5, {{0.02, -0.01, 0.0}});
    const SignalSet model = synthesize_frequency_data(s, AmplitudeMode::full);
    const auto& omegas = model.frequencies();
    const double t = model.pulse_times()[0];
    const Vec3 c = s.window.center_at(t);

    Eigen::VectorXcd from_time(static_cast<Eigen::Index>(model.sample_count()));
    Eigen::VectorXcd from_model(from_time.size());
    Eigen::Index n = 0;
    for (std::size_t r = 0; r < model.receiver_count(); ++r) {
        const Vec3& rx = s.receivers.positions[r];
        const TimeSeries raw = synthesize_time_signal(s, t, rx, default_time_grid(s, t, rx));
        const double g = doppler_factor(c, s.emitter.position, rx, s.window.center_velocity);
        TimeSeries aligned = rescale_signal(raw, g);
        aligned.grid.t0 -= travel_time(c, s.emitter.position, rx, s.window.center_velocity) - t;
        const auto spec = fourier_samples(aligned, omegas);

        Eigen::VectorXcd a(static_cast<Eigen::Index>(omegas.size())), b(a.size());
        for (std::size_t f = 0; f < omegas.size(); ++f) {
            a[static_cast<Eigen::Index>(f)] = spec[f];
            b[static_cast<Eigen::Index>(f)] = model.at(0, r, f);
        }
        from_time.segment(n, a.size()) = a / a.norm();
        from_model.segment(n, b.size()) = b / b.norm();
        n += a.size();
    }
    const std::complex<double> overlap = from_model.dot(from_time);
    const Eigen::VectorXcd rotated = from_time * std::polar(1.0, -std::arg(overlap));
    CHECK((rotated - from_model).norm() / from_model.norm() <= 0.01);
    for (Eigen::Index i = 0; i < rotated.size(); ++i)
        CHECK(std::abs(std::arg(rotated[i] / from_model[i])) <= 5e-3);
}

TEST_CASE("noise: infinite SNR is the identity", "[forward][noise]") {
    Scene s = testing::tiny_scene(4, 5, 3, 5);
    const SignalSet d = synthesize_frequency_data(s);
    const SignalSet same = add_noise(d, NoiseSpec{});
    CHECK(same.data() == d.data());
}

TEST_CASE("noise: empirical SNR and determinism", "[forward][noise]") {
    Scene s = testing::tiny_scene(1, 3, 1, 1);
    AcquisitionGeometry g = geometry_of(s);
    g.receivers.clear();
    for (int i = 0; i < 100; ++i) g.receivers.push_back({1e3 * i, 0.0, 1.5e4});
    std::vector<double> times(100), freqs(100);
    for (int i = 0; i < 100; ++i) {
        times[static_cast<std::size_t>(i)] = 0.015 * i;
        freqs[static_cast<std::size_t>(i)] = testing::kCarrier + 1e6 * i;
    }
    SignalSet d(g, times, freqs);
    for (std::size_t i = 0; i < d.sample_count(); ++i) d.data()[i] = std::polar(1.0 + 0.5 * std::sin(0.001 * i), 0.37 * i);
    REQUIRE(d.sample_count() == 1000000);

    double signal = 0.0;
    for (const auto& x : d.data()) signal += std::norm(x);
    for (double snr : {-17.0, 0.0, 10.0}) {
        const SignalSet noisy = add_noise(d, {snr, 5});
        double noise = 0.0;
        for (std::size_t i = 0; i < d.sample_count(); ++i) noise += std::norm(noisy.data()[i] - d.data()[i]);
        CHECK(std::abs(10.0 * std::log10(signal / noise) - snr) <= 0.1);
    }

    const SignalSet a = add_noise(d, {-15.5, 5});
    const SignalSet b = add_noise(d, {-15.5, 5});
    const SignalSet c = add_noise(d, {-15.5, 6});
    CHECK(std::memcmp(a.data().data(), b.data().data(), a.sample_count() * sizeof(cplx)) == 0);
    CHECK(a.data() != c.data());
}

TEST_CASE("amplitude mode names round-trip", "[forward]") {
    for (AmplitudeMode m : {AmplitudeMode::unit, AmplitudeMode::spectral, AmplitudeMode::full})
        CHECK(amplitude_mode_from_string(to_string(m)) == m);
    CHECK_THROWS_AS(amplitude_mode_from_string("loud"), DomainError);
}
