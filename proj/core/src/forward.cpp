// SPDX-License-Identifier: Apache-2.0
#include "xcorr/forward.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "xcorr/errors.hpp"
#include "xcorr/parallel.hpp"

namespace xcorr {

std::string to_string(AmplitudeMode mode) {
    switch (mode) {
        case AmplitudeMode::unit: return "unit";
        case AmplitudeMode::spectral: return "spectral";
        case AmplitudeMode::full: return "full";
    }
    return "unit";
}

AmplitudeMode amplitude_mode_from_string(const std::string& name) {
    if (name == "unit") return AmplitudeMode::unit;
    if (name == "spectral") return AmplitudeMode::spectral;
    if (name == "full") return AmplitudeMode::full;
    throw DomainError("unknown amplitude mode '" + name + "'");
}

SignalSet::SignalSet(AcquisitionGeometry geometry, std::vector<double> pulse_times,
                     std::vector<double> frequencies)
    : geometry_(std::move(geometry)),
      pulse_times_(std::move(pulse_times)),
      frequencies_(std::move(frequencies)) {
    data_.assign(pulse_times_.size() * geometry_.receivers.size() * frequencies_.size(), cplx{});
}

Eigen::VectorXcd SignalSet::receiver_vector(std::size_t s, std::size_t w) const {
    Eigen::VectorXcd u(static_cast<Eigen::Index>(receiver_count()));
    for (std::size_t r = 0; r < receiver_count(); ++r) u[static_cast<Eigen::Index>(r)] = at(s, r, w);
    return u;
}

void SignalSet::validate() const {
    if (data_.size() != pulse_count() * receiver_count() * frequency_count()) {
        throw FormatError("signal set storage does not match its shape");
    }
    for (const auto& z : data_) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            throw FormatError("signal set contains non-finite samples");
        }
    }
}

double pulse_spectrum(const Pulse& pulse, double omega) {
    const double b = pulse.envelope_width;
    const double a = (omega - pulse.carrier) / b;
    const double c = (omega + pulse.carrier) / b;
    return std::sqrt(2.0 * std::numbers::pi) / (2.0 * b) *
           (std::exp(-0.5 * a * a) + std::exp(-0.5 * c * c));
}

Eigen::MatrixXd offset_delays(const ImageWindow& window, double pulse_time,
                              const std::vector<Vec3>& receivers, const Emitter& emitter,
                              const Vec3& velocity, double c0) {
    const Vec3 center = window.center_at(pulse_time);
    const auto K = static_cast<Eigen::Index>(window.size());
    const auto NR = static_cast<Eigen::Index>(receivers.size());
    std::vector<Vec3> y(window.size());
    Eigen::VectorXd emitter_leg(K);
    for (Eigen::Index k = 0; k < K; ++k) {
        y[static_cast<std::size_t>(k)] = window.offset(static_cast<std::size_t>(k));
        emitter_leg[k] = distance_increment(center - emitter.position, y[static_cast<std::size_t>(k)]);
    }
    Eigen::MatrixXd d(NR, K);
    for (Eigen::Index r = 0; r < NR; ++r) {
        const Vec3& xr = receivers[static_cast<std::size_t>(r)];
        const double gamma = doppler_factor(center, emitter.position, xr, velocity, c0);
        const Vec3 a = center - xr;
        for (Eigen::Index k = 0; k < K; ++k) {
            d(r, k) = (emitter_leg[k] + gamma * distance_increment(a, y[static_cast<std::size_t>(k)])) / c0;
        }
    }
    return d;
}

Eigen::MatrixXcd model_matrix(const ImageWindow& window, double pulse_time, double omega,
                              const std::vector<Vec3>& receivers, const Emitter& emitter,
                              const Vec3& velocity, double c0) {
    const Eigen::MatrixXd d = offset_delays(window, pulse_time, receivers, emitter, velocity, c0);
    Eigen::MatrixXcd a(d.rows(), d.cols());
    for (Eigen::Index k = 0; k < d.cols(); ++k) {
        for (Eigen::Index r = 0; r < d.rows(); ++r) a(r, k) = std::polar(1.0, omega * d(r, k));
    }
    return a;
}

namespace {

double amplitude_factor(AmplitudeMode mode, const Pulse& pulse, double omega, double range) {
    switch (mode) {
        case AmplitudeMode::unit: return 1.0;
        case AmplitudeMode::spectral: return omega * omega * pulse_spectrum(pulse, omega);
        case AmplitudeMode::full: {
            const double r = 4.0 * std::numbers::pi * range;
            return omega * omega * pulse_spectrum(pulse, omega) / (r * r);
        }
    }
    return 1.0;
}

bool inside_window(const ImageWindow& window, const Vec3& y) {
    // A little slack so targets placed exactly on the border count as inside.
    const double slack = 1e-9;
    return std::abs(dot(y, window.axis_u)) <= window.half_extent_u + slack &&
           std::abs(dot(y, window.axis_v)) <= window.half_extent_v + slack &&
           std::abs(dot(y, window.normal())) <= window.half_extent_normal + slack;
}

// x_T(s) - x_L(s), grouped so that a target sharing the window velocity keeps
// its offset bit-exactly instead of losing it to cancellation at orbit range.
Vec3 in_frame_offset(const TargetTrajectory& target, const ImageWindow& window, double s) {
    return (target.position_at_reference - window.center_at_reference) +
           s * (target.velocity - window.center_velocity);
}

}  // namespace

SignalSet synthesize_frequency_data(const Scene& scene, AmplitudeMode amplitude) {
    scene.validate();
    AcquisitionGeometry geometry{scene.emitter, scene.receivers.positions, scene.constants.c0};
    SignalSet out(std::move(geometry), scene.acquisition.pulse_times(),
                  frequency_grid(scene.pulse, scene.acquisition));
    const auto& window = scene.window;
    const auto& freqs = out.frequencies();
    const double c0 = scene.constants.c0;

    std::vector<std::size_t> outside_per_pulse(out.pulse_count(), 0);
    parallel_for(out.pulse_count(), [&](std::size_t s) {
        const double ts = out.pulse_times()[s];
        const Vec3 center = window.center_at(ts);
        for (const auto& target : scene.targets) {
            if (!inside_window(window, in_frame_offset(target, window, ts))) ++outside_per_pulse[s];
        }
        for (std::size_t r = 0; r < out.receiver_count(); ++r) {
            const Vec3& xr = scene.receivers.positions[r];
            cplx* u = out.trace(s, r);
            const double range = norm(center - xr);
            for (const auto& target : scene.targets) {
                if (target.reflectivity == 0.0) continue;
                const Vec3 y = in_frame_offset(target, window, ts);
                const double d = offset_delay(center, y, xr, scene.emitter.position,
                                              window.center_velocity, c0);
                for (std::size_t w = 0; w < freqs.size(); ++w) {
                    const double xi = amplitude_factor(amplitude, scene.pulse, freqs[w], range);
                    u[w] += xi * target.reflectivity * std::polar(1.0, freqs[w] * d);
                }
            }
        }
    });
    std::size_t outside = 0;
    for (auto n : outside_per_pulse) outside += n;
    if (outside > 0) {
        std::ostringstream msg;
        msg << outside << " (pulse, target) pairs fall outside the image window";
        out.warnings.push_back(msg.str());
    }
    return out;
}

}  // namespace xcorr
