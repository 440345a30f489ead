// SPDX-License-Identifier: Apache-2.0
//
// Doppler-scaled cross-correlation data. In the frequency domain a sample is
// the rank-1 outer product u u^H and is kept in factored form; the time-domain
// correlation C_RR'(s, tau) exists for inspection and validation.
#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "xcorr/forward.hpp"
#include "xcorr/time_domain.hpp"

namespace xcorr {

struct CorrelationSample {
    Eigen::VectorXcd factor;  // u(s, omega); the sample is factor * factor^H

    Eigen::MatrixXcd dense() const { return factor * factor.adjoint(); }
};

CorrelationSample cross_correlation_freq(const SignalSet& data, std::size_t pulse,
                                         std::size_t frequency);

// Lags tau_j = (j - (count - 1) / 2) * spacing, centered on zero.
struct TauGrid {
    double spacing = 0.0;
    std::size_t count = 0;

    double lag(std::size_t j) const {
        return (static_cast<double>(j) - 0.5 * static_cast<double>(count - 1)) * spacing;
    }
    double half_span() const { return 0.5 * spacing * static_cast<double>(count - 1); }
    // 1024 lags over +-8/B.
    static TauGrid default_for(const Pulse& pulse);
};

struct TimeCorrelation {
    std::size_t receiver_a = 0;
    std::size_t receiver_b = 0;
    double pulse_time = 0.0;
    TauGrid tau;
    std::vector<double> values;
};

// Raw time-domain traces of every receiver for one pulse.
struct TimeRecord {
    double pulse_time = 0.0;
    std::vector<TimeSeries> traces;  // one per receiver, same order as the scene
};

inline constexpr double kMaxPlausibleSpeed = 1.2e4;  // m/s, above LEO escape speed

// x(t / gamma), evaluated by Whittaker-Shannon interpolation on the output grid
// t'_n = gamma t_0 + n dt (same dt, span scaled by gamma).
TimeSeries rescale_signal(const TimeSeries& x, double gamma, double max_speed = kMaxPlausibleSpeed,
                          double c0 = kSpeedOfLight);

// Value of the band-limited interpolant of x at time t.
double interpolate(const TimeSeries& x, double t);

// C_ab(s, tau) = int ut_a(t + t_a) ut_b(t + t_b + tau) dt where ut_R is the trace
// rescaled by gamma_R at the window center and t_R the window-center travel
// time. Both Doppler factors use the window velocity.
TimeCorrelation cross_correlation_time(const TimeRecord& record, std::size_t receiver_a,
                                       std::size_t receiver_b, const Scene& scene,
                                       const TauGrid& tau);

}  // namespace xcorr
