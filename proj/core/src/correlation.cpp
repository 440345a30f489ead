// SPDX-License-Identifier: Apache-2.0
#include "xcorr/correlation.hpp"

#include <cmath>
#include <numbers>

#include "xcorr/errors.hpp"

namespace xcorr {

CorrelationSample cross_correlation_freq(const SignalSet& data, std::size_t pulse,
                                         std::size_t frequency) {
    if (pulse >= data.pulse_count() || frequency >= data.frequency_count()) {
        throw DomainError("correlation sample index out of range");
    }
    return CorrelationSample{data.receiver_vector(pulse, frequency)};
}

TauGrid TauGrid::default_for(const Pulse& pulse) {
    TauGrid g;
    g.count = 1024;
    g.spacing = 16.0 / pulse.envelope_width / static_cast<double>(g.count - 1);
    return g;
}

double interpolate(const TimeSeries& x, double t) {
    const double xi = (t - x.grid.t0) / x.grid.dt;
    const double m0 = std::floor(xi);
    const double frac = xi - m0;
    const auto n = static_cast<long long>(x.size());
    if (frac == 0.0) {
        const auto i = static_cast<long long>(m0);
        return (i >= 0 && i < n) ? x.samples[static_cast<std::size_t>(i)] : 0.0;
    }
    // sinc(xi - m) = (-1)^(m0 - m) sin(pi frac) / (pi (xi - m))
    double acc = 0.0;
    const auto base = static_cast<long long>(m0);
    for (long long m = 0; m < n; ++m) {
        const double term = x.samples[static_cast<std::size_t>(m)] / (xi - static_cast<double>(m));
        acc += ((base - m) & 1) ? -term : term;
    }
    return acc * std::sin(std::numbers::pi * frac) / std::numbers::pi;
}

TimeSeries rescale_signal(const TimeSeries& x, double gamma, double max_speed, double c0) {
    if (!(gamma > 0.0) || std::abs(gamma - 1.0) > 2.0 * max_speed / c0 * (1.0 + 1e-12)) {
        throw DomainError("Doppler factor " + std::to_string(gamma) + " outside the plausible range");
    }
    if (x.size() < 2) throw DomainError("cannot rescale a series with fewer than 2 samples");
    TimeSeries out;
    out.grid.dt = x.grid.dt;
    out.grid.t0 = gamma * x.grid.t0;
    out.grid.count = static_cast<std::size_t>(std::floor(static_cast<double>(x.size() - 1) * gamma)) + 1;
    out.samples.resize(out.grid.count);
    for (std::size_t n = 0; n < out.grid.count; ++n) {
        out.samples[n] = interpolate(x, out.grid.time(n) / gamma);
    }
    return out;
}

TimeCorrelation cross_correlation_time(const TimeRecord& record, std::size_t receiver_a,
                                       std::size_t receiver_b, const Scene& scene,
                                       const TauGrid& tau) {
    const auto& rx = scene.receivers.positions;
    if (receiver_a >= rx.size() || receiver_b >= rx.size() || receiver_a >= record.traces.size() ||
        receiver_b >= record.traces.size()) {
        throw DomainError("receiver index out of range");
    }
    if (tau.count < 2 || !(tau.spacing > 0.0)) throw DomainError("tau grid needs >= 2 lags");
    if (tau.half_span() < 6.0 / scene.pulse.envelope_width) {
        throw DomainError("tau grid narrower than the correlation support");
    }
    const TimeSeries& ua = record.traces[receiver_a];
    const TimeSeries& ub = record.traces[receiver_b];
    if (ua.grid.dt != ub.grid.dt) throw DomainError("traces must share one sampling interval");
    const double dt = ua.grid.dt;

    const double c0 = scene.constants.c0;
    const Vec3 x0 = scene.window.center_at(record.pulse_time);
    const Vec3& v = scene.window.center_velocity;
    const Vec3& xe = scene.emitter.position;
    const double ga = doppler_factor(x0, xe, rx[receiver_a], v, c0);
    const double gb = doppler_factor(x0, xe, rx[receiver_b], v, c0);
    const TimeSeries a = rescale_signal(ua, ga, kMaxPlausibleSpeed, c0);
    const TimeSeries b = rescale_signal(ub, gb, kMaxPlausibleSpeed, c0);
    // Aligned start times: the rescaled traces shifted left by t_R(x_0(s)).
    const double a0 = a.grid.t0 - travel_time(x0, xe, rx[receiver_a], v, c0);
    const double b0 = b.grid.t0 - travel_time(x0, xe, rx[receiver_b], v, c0);

    // With both traces on grids of step dt the lag sum collapses onto the
    // discrete correlation R[k] = sum_n a_n b_{n-k}; the fractional grid
    // offset is then bridged by one band-limited interpolation per lag.
    const auto na = static_cast<long long>(a.size());
    const auto nb = static_cast<long long>(b.size());
    const long long kmin = -(nb - 1);
    std::vector<double> r(static_cast<std::size_t>(na + nb - 1), 0.0);
    for (long long n = 0; n < na; ++n) {
        const double an = a.samples[static_cast<std::size_t>(n)];
        if (an == 0.0) continue;
        for (long long m = 0; m < nb; ++m) {
            r[static_cast<std::size_t>(n - m - kmin)] += an * b.samples[static_cast<std::size_t>(m)];
        }
    }

    TimeCorrelation out;
    out.receiver_a = receiver_a;
    out.receiver_b = receiver_b;
    out.pulse_time = record.pulse_time;
    out.tau = tau;
    out.values.resize(tau.count);
    for (std::size_t j = 0; j < tau.count; ++j) {
        // b(t_n + tau) = sum_m b_m sinc(n - m + delta)
        const double delta = (a0 - b0 + tau.lag(j)) / dt;
        const double d0 = std::floor(delta);
        const double frac = delta - d0;
        double acc = 0.0;
        if (frac == 0.0) {
            const long long k = -static_cast<long long>(d0);
            if (k >= kmin && k < na) acc = r[static_cast<std::size_t>(k - kmin)];
        } else {
            const auto base = static_cast<long long>(d0);
            for (long long k = kmin; k < na; ++k) {
                const double term = r[static_cast<std::size_t>(k - kmin)] / (static_cast<double>(k) + delta);
                acc += ((k + base) & 1) ? -term : term;
            }
            acc *= std::sin(std::numbers::pi * frac) / std::numbers::pi;
        }
        out.values[j] = dt * acc;
    }
    return out;
}

}  // namespace xcorr
