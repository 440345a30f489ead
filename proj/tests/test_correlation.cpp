// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "scenes.hpp"
#include "xcorr/correlation.hpp"
#include "xcorr/errors.hpp"

using namespace xcorr;
using Catch::Approx;

namespace {

TimeRecord record_for(const Scene& s, double pulse_time) {
    TimeRecord rec;
    rec.pulse_time = pulse_time;
    for (const Vec3& rx : s.receivers.positions)
        rec.traces.push_back(synthesize_time_signal(s, pulse_time, rx, default_time_grid(s, pulse_time, rx)));
    return rec;
}

// Odd count so that one lag sits exactly on zero.
TauGrid centred_grid(const Pulse& p) {
    TauGrid g;
    g.count = 1025;
    g.spacing = 16.0 / p.envelope_width / 1024.0;
    return g;
}

TimeSeries gaussian_series(double center, double width, double dt, std::size_t count, double t0) {
    TimeSeries x;
    x.grid = {t0, dt, count};
    for (std::size_t n = 0; n < count; ++n) {
        const double z = (x.time(n) - center) / width;
        x.samples.push_back(std::exp(-0.5 * z * z));
    }
    return x;
}

}  // namespace

TEST_CASE("frequency correlation sample is the rank-1 outer product", "[correlation]") {
    Scene s = testing::tiny_scene(6, 5, 2, 3);
    const SignalSet d = synthesize_frequency_data(s, AmplitudeMode::spectral);
    const CorrelationSample c = cross_correlation_freq(d, 1, 2);
    const Eigen::VectorXcd u = d.receiver_vector(1, 2);
    const Eigen::MatrixXcd m = c.dense();
    CHECK((m - u * u.adjoint()).norm() == 0.0);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(m);
    const auto& ev = eig.eigenvalues();
    CHECK(ev.minCoeff() >= -1e-12 * ev.maxCoeff());
    CHECK(ev[ev.size() - 2] <= 1e-12 * ev.maxCoeff());
    CHECK(ev.maxCoeff() == Approx(u.squaredNorm()).epsilon(1e-12));

    CHECK_THROWS_AS(cross_correlation_freq(d, 2, 0), DomainError);
    CHECK_THROWS_AS(cross_correlation_freq(d, 0, 3), DomainError);
}

TEST_CASE("single receiver correlation is the power", "[correlation]") {
    AcquisitionGeometry g;
    g.receivers = {{0.0, 0.0, 1.5e4}};
    SignalSet d(g, {0.0}, {testing::kCarrier, testing::kCarrier + 1e7});
    d.at(0, 0, 0) = {0.3, -1.1};
    d.at(0, 0, 1) = {2.0, 0.5};
    const auto m = cross_correlation_freq(d, 0, 1).dense();
    REQUIRE(m.rows() == 1);
    CHECK(m(0, 0).real() == Approx(4.25).epsilon(1e-15));
    CHECK(m(0, 0).imag() == 0.0);
}

TEST_CASE("correlation is blind to a common phase", "[correlation][property]") {
    Scene s = testing::tiny_scene(5, 5, 1, 3);
    const SignalSet d = synthesize_frequency_data(s);
    SignalSet rotated = d;
    for (auto& x : rotated.data()) x *= std::polar(1.0, 1.234);
    for (std::size_t w = 0; w < d.frequency_count(); ++w) {
        const auto a = cross_correlation_freq(d, 0, w).dense();
        const auto b = cross_correlation_freq(rotated, 0, w).dense();
        CHECK((a - b).norm() <= 1e-14 * a.norm());
    }
}

TEST_CASE("interpolation reproduces samples and band-limited signals", "[correlation]") {
    const TimeSeries x = gaussian_series(0.0, 4.0, 1.0, 121, -60.0);
    CHECK(interpolate(x, x.time(37)) == x.samples[37]);
    CHECK(interpolate(x, -1e6) == 0.0);
    for (double t : {-3.3, 0.5, 7.25}) CHECK(interpolate(x, t) == Approx(std::exp(-t * t / 32.0)).margin(1e-9));
}

TEST_CASE("rescaling", "[correlation]") {
    const double dt = 1.0;
    const TimeSeries x = gaussian_series(10.0, 5.0, dt, 241, -110.0);

    SECTION("gamma = 1 is the identity") {
        const TimeSeries y = rescale_signal(x, 1.0);
        REQUIRE(y.size() == x.size());
        CHECK(y.grid.t0 == x.grid.t0);
        CHECK(y.samples == x.samples);
    }
    SECTION("a pulse at t_0 moves to gamma t_0") {
        const double g = 1.0 + 5e-5;
        const TimeSeries y = rescale_signal(x, g);
        CHECK(y.grid.dt == dt);
        // x(t / g) peaks at g * 10; its samples match the stretched Gaussian.
        double worst = 0.0;
        for (std::size_t n = 0; n < y.size(); ++n) {
            const double z = (y.time(n) / g - 10.0) / 5.0;
            worst = std::max(worst, std::abs(y.samples[n] - std::exp(-0.5 * z * z)));
        }
        CHECK(worst <= 1e-9);
    }
    SECTION("round trip") {
        const double g = 1.0 - 7e-5;
        const TimeSeries back = rescale_signal(rescale_signal(x, g), 1.0 / g);
        double worst = 0.0;
        for (std::size_t n = 20; n + 20 < back.size(); ++n)
            worst = std::max(worst, std::abs(back.samples[n] - interpolate(x, back.time(n))));
        CHECK(worst <= 1e-6);
    }
    SECTION("implausible Doppler factors are rejected") {
        CHECK_THROWS_AS(rescale_signal(x, 1.0 + 1e-3), DomainError);
        CHECK_THROWS_AS(rescale_signal(x, -1.0), DomainError);
        TimeSeries one;
        one.grid = {0.0, 1.0, 1};
        one.samples = {1.0};
        CHECK_THROWS_AS(rescale_signal(one, 1.0), DomainError);
    }
}

TEST_CASE("time-domain correlation", "[correlation][time]") {
    Scene s = testing::desk_scene({Vec3{}}, 1, 3);
    const TimeRecord rec = record_for(s, 0.0);
    const TauGrid tau = centred_grid(s.pulse);
    const std::size_t zero = tau.count / 2;
    REQUIRE(tau.lag(zero) == 0.0);

    SECTION("autocorrelation at zero lag is the rescaled energy") {
        const Vec3 c = s.window.center_at(0.0);
        const double g = doppler_factor(c, s.emitter.position, s.receivers.positions[0], s.window.center_velocity);
        const TimeSeries a = rescale_signal(rec.traces[0], g);
        double energy = 0.0;
        for (double v : a.samples) energy += v * v * a.grid.dt;
        const auto c00 = cross_correlation_time(rec, 0, 0, s, tau);
        CHECK(c00.values[zero] == Approx(energy).epsilon(1e-12));
        CHECK(*std::max_element(c00.values.begin(), c00.values.end()) == c00.values[zero]);
    }
    SECTION("a centred target correlates at zero lag") {
        const auto c01 = cross_correlation_time(rec, 0, 1, s, tau);
        const auto peak = std::max_element(c01.values.begin(), c01.values.end()) - c01.values.begin();
        CHECK(std::abs(tau.lag(static_cast<std::size_t>(peak))) <= 2.0 * tau.spacing);
    }
    SECTION("swapping receivers reverses the lag") {
        const auto ab = cross_correlation_time(rec, 1, 2, s, tau);
        const auto ba = cross_correlation_time(rec, 2, 1, s, tau);
        const double scale = *std::max_element(ab.values.begin(), ab.values.end());
        for (std::size_t j = 0; j < tau.count; ++j)
            CHECK(std::abs(ab.values[j] - ba.values[tau.count - 1 - j]) <= 1e-9 * scale);
    }
    SECTION("argument checks") {
        CHECK_THROWS_AS(cross_correlation_time(rec, 0, 3, s, tau), DomainError);
        TauGrid narrow = tau;
        narrow.spacing *= 0.1;
        CHECK_THROWS_AS(cross_correlation_time(rec, 0, 1, s, narrow), DomainError);
    }
}

TEST_CASE("one-sided Parseval identity for a received trace", "[correlation][time][property]") {
    // For real x, int x^2 dt = (1/pi) int_0^inf |xhat(omega)|^2 d omega; the
    // spectrum is negligible outside omega_0 +- 8B.
    Scene s = testing::desk_scene({Vec3{}}, 1, 2);
    for (const Vec3& rx : s.receivers.positions) {
        const TimeSeries x = synthesize_time_signal(s, 0.0, rx, default_time_grid(s, 0.0, rx));
        double energy = 0.0;
        for (double v : x.samples) energy += v * v * x.grid.dt;

        const double step = s.pulse.envelope_width / 50.0;
        std::vector<double> omegas;
        for (double w = s.pulse.carrier - 8.0 * s.pulse.envelope_width; w <= s.pulse.carrier + 8.0 * s.pulse.envelope_width; w += step)
            omegas.push_back(w);
        const auto spec = fourier_samples(x, omegas);
        double spectral = 0.0;
        for (const auto& v : spec) spectral += std::norm(v) * step;
        CHECK(spectral / std::numbers::pi == Approx(energy).epsilon(0.01));
    }
}
