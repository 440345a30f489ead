// SPDX-License-Identifier: Apache-2.0
#include "xcorr/time_domain.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "xcorr/errors.hpp"

namespace xcorr {

double pulse_waveform(const Pulse& pulse, double t) {
    const double b = pulse.envelope_width;
    return std::cos(pulse.carrier * t) * std::exp(-0.5 * b * b * t * t);
}

double pulse_second_derivative(const Pulse& pulse, double t) {
    const double w0 = pulse.carrier;
    const double b2 = pulse.envelope_width * pulse.envelope_width;
    const double g = std::exp(-0.5 * b2 * t * t);
    return g * ((b2 * b2 * t * t - b2 - w0 * w0) * std::cos(w0 * t) +
                2.0 * w0 * b2 * t * std::sin(w0 * t));
}

double delay_residual(double tau, double t, double pulse_time, const TargetTrajectory& target,
                      const Vec3& receiver, double c0) {
    const Vec3 p = target.position_at(pulse_time + tau);
    return t - tau - norm(p - receiver) / c0;
}

double exact_delay(double t, double pulse_time, const TargetTrajectory& target,
                   const Vec3& receiver, double c0) {
    if (norm(target.velocity) >= c0) throw GeometryError("superluminal target velocity");
    if (t < 0.0) throw DomainError("fast time must be non-negative");
    // D(t) = x_T + s v - x_R + t v; the retarded time solves a quadratic in
    // (t - tau) whose admissible root is taken here.
    const Vec3 d = target.position_at(pulse_time + t) - receiver;
    const double dn = norm(d);
    if (dn == 0.0) return t;
    const Vec3 beta = target.velocity / c0;
    const double b2 = dot(beta, beta);
    const double bd = dot(beta, d) / dn;
    return t - dn / (c0 * (1.0 - b2)) * (std::sqrt(1.0 - b2 + bd * bd) - bd);
}

double predicted_arrival(const Scene& scene, double pulse_time, const Vec3& receiver) {
    const Vec3 center = scene.window.center_at(pulse_time);
    const double c0 = scene.constants.c0;
    const Vec3& v = scene.window.center_velocity;
    const double gamma = doppler_factor(center, scene.emitter.position, receiver, v, c0);
    return (travel_time(center, scene.emitter.position, receiver, v, c0) - pulse_time) / gamma;
}

TimeGrid default_time_grid(const Scene& scene, double pulse_time, const Vec3& receiver) {
    const double dt = 2.0 * std::numbers::pi / (16.0 * scene.pulse.carrier);
    const double extent = std::hypot(scene.window.half_extent_u, scene.window.half_extent_v,
                                     scene.window.half_extent_normal);
    const double half = 6.0 / scene.pulse.envelope_width + 4.0 * extent / scene.constants.c0;
    const double center = predicted_arrival(scene, pulse_time, receiver);
    TimeGrid grid;
    grid.dt = dt;
    grid.count = static_cast<std::size_t>(std::ceil(2.0 * half / dt)) + 1;
    grid.t0 = center - 0.5 * dt * static_cast<double>(grid.count - 1);
    return grid;
}

namespace {

double target_arrival(const Scene& scene, const TargetTrajectory& target, double pulse_time,
                      const Vec3& receiver) {
    const Vec3 p = target.position_at(pulse_time);
    const double c0 = scene.constants.c0;
    const double gamma = doppler_factor(p, scene.emitter.position, receiver, target.velocity, c0);
    return (travel_time(p, scene.emitter.position, receiver, target.velocity, c0) - pulse_time) / gamma;
}

double exact_sample(const Scene& scene, const TargetTrajectory& target, double s, double t,
                    const Vec3& receiver) {
    const double c0 = scene.constants.c0;
    const double tau = exact_delay(t, s, target, receiver, c0);
    const Vec3 xt = target.position_at(s + tau);
    const double de = norm(xt - scene.emitter.position);
    const Vec3 d = xt - receiver;
    const double dr = norm(d);
    const double jac = std::abs(1.0 + dot(target.velocity / c0, d / dr));
    constexpr double four_pi = 4.0 * std::numbers::pi;
    const double amp = target.reflectivity / (four_pi * four_pi * c0 * c0 * de * dr * jac);
    return -amp * pulse_second_derivative(scene.pulse, s + tau - de / c0);
}

double first_order_sample(const Scene& scene, const TargetTrajectory& target, double s, double t,
                          const Vec3& receiver) {
    const double c0 = scene.constants.c0;
    const Vec3 p = target.position_at(s);
    const double gamma = doppler_factor(p, scene.emitter.position, receiver, target.velocity, c0);
    const double tr = travel_time(p, scene.emitter.position, receiver, target.velocity, c0);
    const double r = 4.0 * std::numbers::pi * norm(p - receiver);
    return -target.reflectivity * pulse_second_derivative(scene.pulse, s + gamma * t - tr) / (r * r);
}

}  // namespace

TimeSeries synthesize_time_signal(const Scene& scene, double pulse_time, const Vec3& receiver,
                                  const TimeGrid& grid, TimeModel model) {
    if (grid.count < 2 || !(grid.dt > 0.0)) throw DomainError("time grid needs >= 2 samples and dt > 0");
    const double margin = 6.0 / scene.pulse.envelope_width;
    for (const auto& target : scene.targets) {
        if (target.reflectivity == 0.0) continue;
        const double ta = target_arrival(scene, target, pulse_time, receiver);
        if (ta - margin < grid.t0 || ta + margin > grid.end()) {
            throw DomainError("time grid [" + std::to_string(grid.t0) + ", " +
                              std::to_string(grid.end()) + "] does not cover the echo support around t = " +
                              std::to_string(ta));
        }
    }
    TimeSeries out;
    out.grid = grid;
    out.samples.assign(grid.count, 0.0);
    for (const auto& target : scene.targets) {
        if (target.reflectivity == 0.0) continue;
        for (std::size_t n = 0; n < grid.count; ++n) {
            const double t = grid.time(n);
            out.samples[n] += model == TimeModel::exact
                                  ? exact_sample(scene, target, pulse_time, t, receiver)
                                  : first_order_sample(scene, target, pulse_time, t, receiver);
        }
    }
    return out;
}

std::vector<std::complex<double>> fourier_samples(const TimeSeries& x,
                                                  const std::vector<double>& omegas) {
    std::vector<std::complex<double>> out(omegas.size());
    for (std::size_t i = 0; i < omegas.size(); ++i) {
        std::complex<double> acc{0.0, 0.0};
        for (std::size_t n = 0; n < x.size(); ++n) {
            acc += x.samples[n] * std::polar(1.0, omegas[i] * x.time(n));
        }
        out[i] = acc * x.grid.dt;
    }
    return out;
}

}  // namespace xcorr
