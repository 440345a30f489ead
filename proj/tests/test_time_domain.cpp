// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "scenes.hpp"
#include "xcorr/correlation.hpp"
#include "xcorr/errors.hpp"
#include "xcorr/random.hpp"
#include "xcorr/time_domain.hpp"

using namespace xcorr;
using Catch::Approx;

namespace {

using ld = long double;

// Root of t - tau - |x_T + (s + tau) v - x_R| / c0 by bisection in long double.
ld delay_oracle(double t, double s, const TargetTrajectory& target, const Vec3& rx, ld c0) {
    auto phi = [&](ld tau) {
        const ld dx = target.position_at_reference.x + (s + tau) * target.velocity.x - rx.x;
        const ld dy = target.position_at_reference.y + (s + tau) * target.velocity.y - rx.y;
        const ld dz = target.position_at_reference.z + (s + tau) * target.velocity.z - rx.z;
        return static_cast<ld>(t) - tau - std::sqrt(dx * dx + dy * dy + dz * dz) / c0;
    };
    // Phi decreases in tau and changes sign on [t - 2 t, t].
    ld lo = -static_cast<ld>(t), hi = t;
    for (int i = 0; i < 200; ++i) {
        const ld mid = 0.5L * (lo + hi);
        (phi(mid) > 0 ? lo : hi) = mid;
    }
    return 0.5L * (lo + hi);
}

// Monostatic-like scene at range L with the target moving with the window.
Scene short_range_scene(double range) {
    Scene s = testing::desk_scene({Vec3{}}, 1, 1);
    s.emitter.position = {-0.3 * range, 0.0, 0.0};
    s.receivers.positions = {{0.2 * range, 0.1 * range, 0.03 * range}};
    s.window.center_at_reference = {0.0, 0.0, range};
    s.targets[0].position_at_reference = s.window.center_at_reference;
    return s;
}

// Relative L2 distance after the best real scaling of a onto b; the exact
// and first-order models differ in their amplitude convention.
double fitted_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double ab = 0.0, aa = 0.0, bb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ab += a[i] * b[i];
        aa += a[i] * a[i];
        bb += b[i] * b[i];
    }
    const double c = ab / aa;
    double e = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) e += (c * a[i] - b[i]) * (c * a[i] - b[i]);
    return std::sqrt(e / bb);
}

}  // namespace

TEST_CASE("pulse waveform", "[time]") {
    const Pulse p{testing::kCarrier, testing::kBandwidth};
    CHECK(pulse_waveform(p, 0.0) == 1.0);
    CHECK(pulse_second_derivative(p, 0.0) == Approx(-(p.carrier * p.carrier + p.envelope_width * p.envelope_width)));
    const double h = 1e-13, t = 1.3e-10;
    const double fd = (pulse_waveform(p, t + h) - 2.0 * pulse_waveform(p, t) + pulse_waveform(p, t - h)) / (h * h);
    CHECK(pulse_second_derivative(p, t) == Approx(fd).epsilon(1e-4));
}

TEST_CASE("exact delay for a static target", "[time]") {
    TargetTrajectory tgt;
    tgt.position_at_reference = {0.0, 0.0, 5e5};
    const Vec3 rx{1e4, -2e4, 1.5e4};
    const double range = norm(tgt.position_at_reference - rx);
    for (double t : {range / kSpeedOfLight, 4e-3, 1e-2}) {
        CHECK(exact_delay(t, 0.7, tgt, rx) == Approx(t - range / kSpeedOfLight).margin(1e-18));
    }
}

TEST_CASE("exact delay is a root and agrees with the oracle", "[time][property]") {
    random::Stream rng(21, 1);
    for (int i = 0; i < 100; ++i) {
        TargetTrajectory tgt;
        tgt.position_at_reference = {rng.uniform(-1e4, 1e4), rng.uniform(-1e4, 1e4), rng.uniform(3e5, 6e5)};
        tgt.velocity = {rng.uniform(-8e3, 8e3), rng.uniform(-8e3, 8e3), rng.uniform(-8e3, 8e3)};
        const Vec3 rx{rng.uniform(-1e5, 1e5), rng.uniform(-1e5, 1e5), 1.5e4};
        const double s = rng.uniform(-0.5, 0.5);
        const double t = rng.uniform(2e-3, 6e-3);
        const double tau = exact_delay(t, s, tgt, rx);
        CHECK(std::abs(delay_residual(tau, t, s, tgt, rx)) <= 1e-12 * t);
        CHECK(std::abs(static_cast<ld>(tau) - delay_oracle(t, s, tgt, rx, kSpeedOfLight)) <= 1e-17L);
    }
}

TEST_CASE("exact delay with velocity orthogonal to the line of sight", "[time]") {
    // With x_T(s + tau) - x_R = d + (s + tau) v and d . v = 0, the root satisfies
    // c0^2 (t - tau)^2 = |d|^2 + (s + tau)^2 |v|^2. For s = 0 the leading terms
    // in beta = |v| / c0 are tau = t - |d|/c0 - beta^2 (t - |d|/c0)^2 c0 / (2 |d|).
    TargetTrajectory tgt;
    tgt.position_at_reference = {0.0, 0.0, 5e5};
    tgt.velocity = {0.0, 7000.0, 0.0};
    const Vec3 rx{0.0, 0.0, 0.0};
    const double d = 5e5;
    const double t = 2.0 * d / kSpeedOfLight;
    const double tau0 = t - d / kSpeedOfLight;
    const double beta = 7000.0 / kSpeedOfLight;
    const double series = tau0 - beta * beta * tau0 * tau0 * kSpeedOfLight / (2.0 * d);
    CHECK(exact_delay(t, 0.0, tgt, rx) == Approx(series).epsilon(1e-15));
    CHECK_THROWS_AS(exact_delay(-1.0, 0.0, tgt, rx), DomainError);
}

TEST_CASE("zero reflectivity gives a zero trace", "[time]") {
    Scene s = testing::desk_scene({Vec3{}}, 1, 3);
    s.targets[0].reflectivity = 0.0;
    const Vec3& rx = s.receivers.positions[1];
    for (TimeModel m : {TimeModel::exact, TimeModel::first_order}) {
        const TimeSeries x = synthesize_time_signal(s, 0.0, rx, default_time_grid(s, 0.0, rx), m);
        CHECK(std::all_of(x.samples.begin(), x.samples.end(), [](double v) { return v == 0.0; }));
    }
}

TEST_CASE("echo energy is centred on the predicted arrival", "[time]") {
    Scene s = testing::desk_scene({Vec3{}}, 1, 4);
    for (const Vec3& rx : s.receivers.positions) {
        for (double pulse : {-1e-3, 0.0, 1e-3}) {
            const TimeGrid g = default_time_grid(s, pulse, rx);
            const TimeSeries x = synthesize_time_signal(s, pulse, rx, g);
            double m0 = 0.0, m1 = 0.0;
            for (std::size_t n = 0; n < x.size(); ++n) {
                const double e = x.samples[n] * x.samples[n];
                m0 += e;
                m1 += e * x.time(n);
            }
            CHECK(std::abs(m1 / m0 - predicted_arrival(s, pulse, rx)) <= g.dt);
        }
    }
}

TEST_CASE("grid that misses the echo is rejected", "[time]") {
    Scene s = testing::desk_scene({Vec3{}}, 1, 1);
    const Vec3& rx = s.receivers.positions[0];
    TimeGrid g = default_time_grid(s, 0.0, rx);
    g.t0 += 1e-6;
    CHECK_THROWS_AS(synthesize_time_signal(s, 0.0, rx, g), DomainError);
}

TEST_CASE("exact and first-order models agree at short range", "[time]") {
    // The models differ by second-order terms of size ~ omega_0 (v/c0)^2 L / c0,
    // about 1.2e-7 per metre of range here, so the check sits at 5 m.
    const Scene s = short_range_scene(5.0);
    const Vec3& rx = s.receivers.positions[0];
    const TimeGrid g = default_time_grid(s, 0.0, rx);
    const auto exact = synthesize_time_signal(s, 0.0, rx, g, TimeModel::exact);
    const auto first = synthesize_time_signal(s, 0.0, rx, g, TimeModel::first_order);
    CHECK(fitted_distance(exact.samples, first.samples) <= 1e-6);

    // At orbital range the gap is real and large.
    const Scene far = short_range_scene(5e5);
    const Vec3& frx = far.receivers.positions[0];
    const TimeGrid fg = default_time_grid(far, 0.0, frx);
    CHECK(fitted_distance(synthesize_time_signal(far, 0.0, frx, fg, TimeModel::exact).samples,
                          synthesize_time_signal(far, 0.0, frx, fg, TimeModel::first_order).samples) > 1e-2);
}

TEST_CASE("Doppler rescaling removes the time compression", "[time][property]") {
    // Rescaling the exact echo by gamma at the target gives f''(s + t - t_R)
    // up to the second-order terms, which stay below 1e-4 at 500 m.
    Scene s = short_range_scene(500.0);
    s.targets[0].velocity = {0.0, 5000.0, -5000.0};  // receding, so gamma - 1 ~ 3e-5
    const Vec3& rx = s.receivers.positions[0];
    const Vec3 x = s.targets[0].position_at(0.0);
    const double g = doppler_factor(x, s.emitter.position, rx, s.targets[0].velocity);
    REQUIRE(std::abs(g - 1.0) > 1e-5);
    const double tr = travel_time(x, s.emitter.position, rx, s.targets[0].velocity);

    const TimeSeries raw = synthesize_time_signal(s, 0.0, rx, default_time_grid(s, 0.0, rx));
    const TimeSeries scaled = rescale_signal(raw, g);
    std::vector<double> expected(scaled.size()), inner_a, inner_b;
    for (std::size_t n = 0; n < scaled.size(); ++n) expected[n] = pulse_second_derivative(s.pulse, scaled.time(n) - tr);
    // Skip the interpolation edge effects of the first and last 10%.
    const std::size_t cut = scaled.size() / 10;
    for (std::size_t n = cut; n + cut < scaled.size(); ++n) {
        inner_a.push_back(scaled.samples[n]);
        inner_b.push_back(expected[n]);
    }
    CHECK(fitted_distance(inner_a, inner_b) <= 1e-4);

    // Without the rescaling the mismatch is orders of magnitude larger.
    std::vector<double> raw_expected(raw.size());
    for (std::size_t n = 0; n < raw.size(); ++n) raw_expected[n] = pulse_second_derivative(s.pulse, raw.time(n) - tr);
    CHECK(fitted_distance(raw.samples, raw_expected) > 1e-2);
}

TEST_CASE("fourier samples of a Gaussian", "[time]") {
    TimeSeries x;
    x.grid = {-10.0, 0.01, 2001};
    for (std::size_t n = 0; n < x.grid.count; ++n) x.samples.push_back(std::exp(-0.5 * x.time(n) * x.time(n)));
    const auto f = fourier_samples(x, {0.0, 1.0, 2.5});
    const double root = std::sqrt(2.0 * std::numbers::pi);
    CHECK(f[0].real() == Approx(root).epsilon(1e-12));
    CHECK(f[1].real() == Approx(root * std::exp(-0.5)).epsilon(1e-12));
    CHECK(f[2].real() == Approx(root * std::exp(-3.125)).epsilon(1e-12));
    CHECK(std::abs(f[1].imag()) <= 1e-12);
}
