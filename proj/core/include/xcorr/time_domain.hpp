// SPDX-License-Identifier: Apache-2.0
//
// Exact time-domain Born model for a point scatterer on a straight
// trajectory, and its first-order (constant Doppler factor) approximation.
// This path is only used to validate the frequency-domain pipeline.
#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "xcorr/scene.hpp"

namespace xcorr {

struct TimeGrid {
    double t0 = 0.0;
    double dt = 0.0;
    std::size_t count = 0;

    double time(std::size_t n) const { return t0 + static_cast<double>(n) * dt; }
    double end() const { return count ? time(count - 1) : t0; }
};

struct TimeSeries {
    TimeGrid grid;
    std::vector<double> samples;

    std::size_t size() const { return samples.size(); }
    double time(std::size_t n) const { return grid.time(n); }
};

enum class TimeModel {
    exact,        // closed-form retarded time of the moving scatterer
    first_order,  // f''(s + gamma_R t - t_R), gamma_R and t_R at x_T(s)
};

// Pulse f(t) = cos(omega_0 t) exp(-B^2 t^2 / 2) and its second derivative.
double pulse_waveform(const Pulse& pulse, double t);
double pulse_second_derivative(const Pulse& pulse, double t);

// Phi(tau; t) = t - tau - |x_T + (s + tau) v - x_R| / c0
double delay_residual(double tau, double t, double pulse_time, const TargetTrajectory& target,
                      const Vec3& receiver, double c0 = kSpeedOfLight);

// The root tau(t) of Phi(. ; t), in closed form.
double exact_delay(double t, double pulse_time, const TargetTrajectory& target,
                   const Vec3& receiver, double c0 = kSpeedOfLight);

// Fast time at which the echo from the window center peaks, (t_R - s) / gamma_R.
double predicted_arrival(const Scene& scene, double pulse_time, const Vec3& receiver);

// 16 samples per carrier period over +-6/B around predicted_arrival(), widened
// by the light time across the window so off-center targets stay covered.
TimeGrid default_time_grid(const Scene& scene, double pulse_time, const Vec3& receiver);

// u_R(s, t) on `grid`, summed over all targets. Throws DomainError when a
// target's echo support is not inside the grid.
TimeSeries synthesize_time_signal(const Scene& scene, double pulse_time, const Vec3& receiver,
                                  const TimeGrid& grid, TimeModel model = TimeModel::exact);

// int x(t) exp(i omega t) dt by the rectangle rule, for a list of frequencies.
// Spectrally accurate for band-limited signals that vanish at the grid ends.
std::vector<std::complex<double>> fourier_samples(const TimeSeries& x,
                                                  const std::vector<double>& omegas);

}  // namespace xcorr
